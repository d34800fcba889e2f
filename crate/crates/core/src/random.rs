//! Seeded random generation of test vectors, matrices and unitaries.
//!
//! Every randomized routine derives its generator from a 64-bit seed and a
//! substream index, so results do not depend on execution order.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::matrix::ComplexMatrix;

/// Independent generator number `k` for `seed`.
pub fn substream(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// Standard complex Gaussian with `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Uniformly random point on the unit circle.
pub fn unimodular<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn positive_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<ComplexMatrix> {
    let g = gaussian_matrix(rng, n, n)?;
    let qr = g.into_dmatrix().qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for x in q.column_mut(j).iter_mut() {
            *x *= phase;
        }
    }
    ComplexMatrix::from_dmatrix(q)
}

/// `‖UᴴU − I‖_F`.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let n = u.ncols();
    (u.adjoint() * u - DMatrix::<Complex64>::identity(n, n)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substreams_are_reproducible_and_distinct() {
        let a: u64 = substream(7, 0).random();
        let b: u64 = substream(7, 0).random();
        let c: u64 = substream(7, 1).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = substream(1, 0);
        let u = random_unitary(&mut rng, 6).unwrap();
        assert!(unitarity_defect(u.as_dmatrix()) < 1e-12);
    }
}
