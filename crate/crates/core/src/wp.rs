//! Factorizations `W = X Yᵗ` with `X, Y` in the mixed-norm space `Ξ_p = ℓ^{2p♯}(ℓ^{2p})`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{shape_err, Error, Result};
use crate::exponent::{Exponent, PExponent};
use crate::matrix::{ComplexMatrix, ONE, ZERO};
use crate::norms::{lp_norm, mixed_norm, moduli, schatten_norm};
use crate::random::{complex_gaussian, gaussian_vector, substream};
use crate::schur::schur_rank_one;

/// `W = X Yᵗ`; `X` has the target's rows, `Y` the target's columns.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WpFactorization {
    target_shape: (usize, usize),
    #[serde(rename = "X")]
    x: ComplexMatrix,
    #[serde(rename = "Y")]
    y: ComplexMatrix,
}

#[derive(Deserialize)]
struct RawFactorization {
    target_shape: (usize, usize),
    #[serde(rename = "X")]
    x: ComplexMatrix,
    #[serde(rename = "Y")]
    y: ComplexMatrix,
}

impl<'de> Deserialize<'de> for WpFactorization {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawFactorization::deserialize(d)?;
        let f = WpFactorization::new(raw.x, raw.y).map_err(serde::de::Error::custom)?;
        if f.target_shape != raw.target_shape {
            return Err(serde::de::Error::custom("target_shape does not match the factors"));
        }
        Ok(f)
    }
}

impl WpFactorization {
    pub fn new(x: ComplexMatrix, y: ComplexMatrix) -> Result<Self> {
        if x.cols() != y.cols() {
            return shape_err(format!("inner dimensions differ: {} vs {}", x.cols(), y.cols()));
        }
        Ok(WpFactorization { target_shape: (x.rows(), y.rows()), x, y })
    }

    /// The zero factorization of a `rows × cols` target.
    pub fn zero(rows: usize, cols: usize) -> Result<Self> {
        Self::new(ComplexMatrix::zeros(rows, 1)?, ComplexMatrix::zeros(cols, 1)?)
    }

    pub fn x(&self) -> &ComplexMatrix {
        &self.x
    }

    pub fn y(&self) -> &ComplexMatrix {
        &self.y
    }

    pub fn target_shape(&self) -> (usize, usize) {
        self.target_shape
    }

    pub fn inner_dim(&self) -> usize {
        self.x.cols()
    }

    /// `X Yᵗ`.
    pub fn evaluate(&self) -> ComplexMatrix {
        self.x.matmul(&self.y.transpose()).expect("inner dimensions agree")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("factorization serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `‖X‖_{Ξ_p}`; for `p = 1` this is `ℓ^∞(ℓ²)`.
pub fn xi_norm(x: &ComplexMatrix, p: PExponent) -> Result<f64> {
    p.require_at_most_one()?;
    Ok(mixed_norm(x, p.sharp().scaled(2.0), Exponent::Finite(2.0 * p.p())))
}

/// `‖X‖_{Ξ_p} ‖Y‖_{Ξ_p}`, an upper bound for the `𝒲_p` norm of `X Yᵗ`.
pub fn wp_cost(f: &WpFactorization, p: PExponent) -> Result<f64> {
    Ok(xi_norm(&f.x, p)? * xi_norm(&f.y, p)?)
}

fn phase(z: Complex64) -> Complex64 {
    if z == ZERO {
        ONE
    } else {
        z / z.norm()
    }
}

/// `X = diag(√|μ_j| · phase_j)`, `Y = diag(√|μ_j|)`, with cost `‖μ‖_{p♯}`.
pub fn diagonal_wp_witness(mu: &[Complex64], p: PExponent) -> Result<WpFactorization> {
    p.require_at_most_one()?;
    let x: Vec<Complex64> = mu.iter().map(|z| phase(*z) * z.norm().sqrt()).collect();
    let y: Vec<Complex64> = mu.iter().map(|z| Complex64::new(z.norm().sqrt(), 0.0)).collect();
    WpFactorization::new(ComplexMatrix::from_diagonal(&x)?, ComplexMatrix::from_diagonal(&y)?)
}

/// `X = u e₀ᵗ`, `Y = v e₀ᵗ`, with cost `‖u‖_{2p♯} ‖v‖_{2p♯}`.
pub fn rank_one_wp_witness(u: &[Complex64], v: &[Complex64], p: PExponent) -> Result<WpFactorization> {
    p.require_at_most_one()?;
    WpFactorization::new(
        ComplexMatrix::from_row_major(u.len(), 1, u.to_vec())?,
        ComplexMatrix::from_row_major(v.len(), 1, v.to_vec())?,
    )
}

/// Rank-one witness for `1_{S×T}`, with cost `|S×T|^{1/(2p♯)}`.
pub fn block_of_ones_wp_witness(
    rows: usize,
    cols: usize,
    row_set: &[usize],
    col_set: &[usize],
    p: PExponent,
) -> Result<WpFactorization> {
    rank_one_wp_witness(&indicator(rows, row_set)?, &indicator(cols, col_set)?, p)
}

pub(crate) fn indicator(n: usize, set: &[usize]) -> Result<Vec<Complex64>> {
    let mut v = vec![ZERO; n];
    for &i in set {
        if i >= n {
            return shape_err(format!("index {i} out of range for length {n}"));
        }
        v[i] = ONE;
    }
    Ok(v)
}

/// Row norms `α_j = ‖x_j‖_{2p}` and `β_k = ‖y_k‖_{2p}`, so that `|w_jk| ≤ α_j β_k`.
pub fn domination_bounds(f: &WpFactorization, p: PExponent) -> Result<(Vec<f64>, Vec<f64>)> {
    p.require_at_most_one()?;
    let inner = Exponent::Finite(2.0 * p.p());
    let rows = |m: &ComplexMatrix| -> Vec<f64> { (0..m.rows()).map(|j| lp_norm(&moduli(&m.row(j)), inner)).collect() };
    Ok((rows(&f.x), rows(&f.y)))
}

/// `max_t t · |{(j,k) : |w_jk| ≥ t}|^{1/(2p♯)}` over the distinct moduli `t ≥ threshold`.
pub fn wp_lower_bound(w: &ComplexMatrix, p: PExponent, threshold: f64) -> Result<f64> {
    p.require_below_one()?;
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::InvalidInput(format!("threshold must be positive, got {threshold}")));
    }
    let mut mods: Vec<f64> = moduli(&w.row_major());
    mods.retain(|&m| m >= threshold);
    mods.sort_by(|a, b| b.total_cmp(a));
    let exponent = 1.0 / (2.0 * p.sharp().value());
    let mut best = 0.0_f64;
    let mut i = 0;
    while i < mods.len() {
        let t = mods[i];
        while i < mods.len() && mods[i] == t {
            i += 1;
        }
        best = best.max(t * (i as f64).powf(exponent));
    }
    Ok(best)
}

fn balanced(f: &WpFactorization, p: PExponent) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let (nx, ny) = (xi_norm(&f.x, p)?, xi_norm(&f.y, p)?);
    if nx == 0.0 || ny == 0.0 {
        return Ok((ComplexMatrix::zeros(f.x.rows(), f.x.cols())?, ComplexMatrix::zeros(f.y.rows(), f.y.cols())?));
    }
    let c = (ny / nx).sqrt();
    Ok((f.x.scale(Complex64::new(c, 0.0)), f.y.scale(Complex64::new(1.0 / c, 0.0))))
}

/// Combines two factorizations of equal target shape into one of their sum.
///
/// Each input is first balanced to `‖X‖_{Ξ_p} = ‖Y‖_{Ξ_p}`; the inner columns
/// of the first go to even positions and those of the second to odd positions,
/// so the cross terms vanish.
pub fn combine_disjoint(f1: &WpFactorization, f2: &WpFactorization, p: PExponent) -> Result<WpFactorization> {
    p.require_at_most_one()?;
    if f1.target_shape != f2.target_shape {
        return shape_err("factorizations have different target shapes");
    }
    let (x1, y1) = balanced(f1, p)?;
    let (x2, y2) = balanced(f2, p)?;
    let k = 2 * x1.cols().max(x2.cols());
    let interleave = |a: &ComplexMatrix, b: &ComplexMatrix| {
        ComplexMatrix::from_fn(a.rows(), k, |j, s| {
            let l = s / 2;
            match s % 2 {
                0 if l < a.cols() => a.get(j, l),
                1 if l < b.cols() => b.get(j, l),
                _ => ZERO,
            }
        })
    };
    WpFactorization::new(interleave(&x1, &x2)?, interleave(&y1, &y2)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WpInequalityReport {
    pub p: f64,
    pub trials: usize,
    pub cost: f64,
    /// Largest `‖A X Yᵗ B‖_{S_p}` over unit diagonal `A`, `B`.
    pub max_sandwich: f64,
    /// Largest `‖W ⋆ (a bᵗ)‖_{S_p} / (‖a‖₂ ‖b‖₂)`.
    pub max_schur_ratio: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn unit_vector(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let v = gaussian_vector(rng, n);
    let norm = lp_norm(&moduli(&v), Exponent::Finite(2.0));
    v.into_iter().map(|z| z / norm).collect()
}

/// Random spot check of `‖A X Yᵗ B‖_{S_p} ≤ ‖X‖_{Ξ_p} ‖Y‖_{Ξ_p} ‖A‖_{S_2} ‖B‖_{S_2}`
/// for diagonal `A`, `B`, and of the equivalent Schur form `W ⋆ (a bᵗ)`.
pub fn wp_multiplier_inequality_check(
    f: &WpFactorization,
    p: PExponent,
    trials: usize,
    seed: u64,
) -> Result<WpInequalityReport> {
    let cost = wp_cost(f, p)?;
    let w = f.evaluate();
    let sp = p.as_exponent();
    let (r, c) = f.target_shape;
    let mut max_sandwich = 0.0_f64;
    let mut max_schur_ratio = 0.0_f64;
    for t in 0..trials {
        let mut rng = substream(seed, t as u64);
        let a = ComplexMatrix::from_diagonal(&unit_vector(&mut rng, r))?;
        let b = ComplexMatrix::from_diagonal(&unit_vector(&mut rng, c))?;
        let sandwich = a.matmul(&f.x)?.matmul(&f.y.transpose().matmul(&b)?)?;
        max_sandwich = max_sandwich.max(schatten_norm(&sandwich, sp)?);

        let scale = complex_gaussian(&mut rng).norm() + 0.5;
        let av: Vec<Complex64> = gaussian_vector(&mut rng, r).into_iter().map(|z| z * scale).collect();
        let bv = gaussian_vector(&mut rng, c);
        let denom = lp_norm(&moduli(&av), Exponent::Finite(2.0)) * lp_norm(&moduli(&bv), Exponent::Finite(2.0));
        if denom > 0.0 {
            let prod = schur_rank_one(&w, &av, &bv)?;
            max_schur_ratio = max_schur_ratio.max(schatten_norm(&prod, sp)? / denom);
        }
    }
    let tolerance = 1e-9;
    Ok(WpInequalityReport {
        p: p.p(),
        trials,
        cost,
        max_sandwich,
        max_schur_ratio,
        tolerance,
        pass: max_sandwich <= cost + tolerance && max_schur_ratio <= cost + tolerance,
    })
}
