//! Singular spectra and the Schatten, Lorentz, sequence and mixed quasi-norms.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::matrix::ComplexMatrix;

/// Relative threshold below which singular values count as exact zeros.
pub const RANK_CUTOFF: f64 = 1e-12;

/// Nonincreasing list of nonnegative singular values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::InvalidInput("singular values must be finite and nonnegative".into()));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(SingularSpectrum { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Number of values above the relative rank cutoff.
    pub fn rank(&self) -> usize {
        self.values.iter().filter(|&&s| s > 0.0).count()
    }
}

/// Thin singular value decomposition `M = U diag(s) Vᴴ` with `s` nonincreasing.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: DMatrix<Complex64>,
    pub values: Vec<f64>,
    pub v_adjoint: DMatrix<Complex64>,
}

impl Svd {
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let mut us = self.u.clone();
        for (i, s) in self.values.iter().enumerate() {
            us.column_mut(i).scale_mut(*s);
        }
        us * &self.v_adjoint
    }
}

/// Full thin SVD with the rank cutoff applied to the returned values.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    let dec = m
        .as_dmatrix()
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("singular value decomposition did not converge".into()))?;
    let (u, v_t) = match (dec.u, dec.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::Numerical("singular vectors unavailable".into())),
    };
    let mut order: Vec<usize> = (0..dec.singular_values.len()).collect();
    order.sort_by(|&a, &b| dec.singular_values[b].total_cmp(&dec.singular_values[a]));
    let raw: Vec<f64> = order.iter().map(|&i| dec.singular_values[i]).collect();
    let u = DMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
    let v_adjoint = DMatrix::from_fn(order.len(), v_t.ncols(), |r, c| v_t[(order[r], c)]);
    Ok(Svd { u, values: apply_cutoff(raw), v_adjoint })
}

pub(crate) fn apply_cutoff(mut values: Vec<f64>) -> Vec<f64> {
    let top = values.first().copied().unwrap_or(0.0);
    for s in &mut values {
        if *s <= RANK_CUTOFF * top {
            *s = 0.0;
        }
    }
    values
}

/// All `min(rows, cols)` singular values, nonincreasing.
pub fn singular_values(m: &ComplexMatrix) -> Result<SingularSpectrum> {
    let s = m
        .as_dmatrix()
        .clone()
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("singular value decomposition did not converge".into()))?
        .singular_values;
    let mut values: Vec<f64> = s.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    SingularSpectrum::new(apply_cutoff(values))
}

/// `(Σ s_j^p)^{1/p}`, or `s_0` for `p = ∞`.
pub fn schatten_norm(m: &ComplexMatrix, p: Exponent) -> Result<f64> {
    Ok(lp_norm(singular_values(m)?.values(), p))
}

/// `ℓ^q` quasi-norm of a nonnegative-valued sequence, computed with scaling.
pub fn lp_norm(values: &[f64], q: Exponent) -> f64 {
    let top = values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    match q {
        Exponent::Infinite => top,
        Exponent::Finite(_) if top == 0.0 => 0.0,
        Exponent::Finite(q) => {
            let sum: f64 = values.iter().map(|v| (v.abs() / top).powf(q)).sum();
            top * sum.powf(1.0 / q)
        }
    }
}

/// `Σ |v_j|^q`, the `q`-th power of the `ℓ^q` quasi-norm.
pub fn lp_power_sum(values: &[f64], q: f64) -> f64 {
    values.iter().map(|v| v.abs().powf(q)).sum()
}

pub fn moduli(seq: &[Complex64]) -> Vec<f64> {
    seq.iter().map(|z| z.norm()).collect()
}

/// Lorentz `ℓ^{q,r}` quasi-norm of a sequence after nonincreasing rearrangement.
pub fn lorentz_sequence_norm(values: &[f64], q: Exponent, r: Exponent) -> f64 {
    let s = nonincreasing_rearrangement_real(values);
    let inv_q = q.recip();
    match r {
        Exponent::Infinite => s
            .iter()
            .enumerate()
            .map(|(j, v)| v * (1.0 + j as f64).powf(inv_q))
            .fold(0.0, f64::max),
        Exponent::Finite(r) => {
            let top = s.first().copied().unwrap_or(0.0);
            if top == 0.0 {
                return 0.0;
            }
            let sum: f64 = s
                .iter()
                .enumerate()
                .map(|(j, v)| (v / top).powf(r) * (1.0 + j as f64).powf(r * inv_q - 1.0))
                .sum();
            top * sum.powf(1.0 / r)
        }
    }
}

/// Lorentz `S_{q,r}` quasi-norm; `q = r` gives the Schatten norm.
pub fn lorentz_norm(m: &ComplexMatrix, q: Exponent, r: Exponent) -> Result<f64> {
    if q == r {
        return schatten_norm(m, q);
    }
    Ok(lorentz_sequence_norm(singular_values(m)?.values(), q, r))
}

/// Mixed norm `ℓ^outer(ℓ^inner)`: the inner norm is taken along each row.
pub fn mixed_norm(m: &ComplexMatrix, outer: Exponent, inner: Exponent) -> f64 {
    let row_norms: Vec<f64> = (0..m.rows()).map(|j| lp_norm(&moduli(&m.row(j)), inner)).collect();
    lp_norm(&row_norms, outer)
}

/// Moduli sorted nonincreasing; ties keep their original order.
pub fn nonincreasing_rearrangement(seq: &[Complex64]) -> Vec<f64> {
    nonincreasing_rearrangement_real(&moduli(seq))
}

pub fn nonincreasing_rearrangement_real(seq: &[f64]) -> Vec<f64> {
    let perm = rearrangement_permutation(seq);
    perm.iter().map(|&i| seq[i].abs()).collect()
}

/// Stable permutation `π` with `|seq[π(0)]| ≥ |seq[π(1)]| ≥ …`.
pub fn rearrangement_permutation(seq: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..seq.len()).collect();
    idx.sort_by(|&a, &b| seq[b].abs().total_cmp(&seq[a].abs()));
    idx
}
