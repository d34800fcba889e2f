//! Decompositions `Σ x_n y_nᵗ` in `ℓ^∞ ⊗_p ℓ^∞` and the certificates built on them.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{shape_err, Error, Result};
use crate::exponent::PExponent;
use crate::matrix::{complex_vec, ComplexMatrix, ONE, ZERO};
use crate::norms::{lp_norm, rearrangement_permutation};

/// A single rank-one term `x yᵗ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorTerm {
    #[serde(with = "complex_vec")]
    pub x: Vec<Complex64>,
    #[serde(with = "complex_vec")]
    pub y: Vec<Complex64>,
}

impl TensorTerm {
    pub fn new(x: Vec<Complex64>, y: Vec<Complex64>) -> Self {
        TensorTerm { x, y }
    }

    /// `‖x‖_∞ ‖y‖_∞`.
    pub fn weight(&self) -> f64 {
        sup_norm(&self.x) * sup_norm(&self.y)
    }
}

pub fn sup_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `Σ x_n y_nᵗ` with ambient dimensions `rows × cols`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorDecomposition {
    rows: usize,
    cols: usize,
    terms: Vec<TensorTerm>,
}

#[derive(Deserialize)]
struct RawDecomposition {
    rows: usize,
    cols: usize,
    terms: Vec<TensorTerm>,
}

impl<'de> Deserialize<'de> for TensorDecomposition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawDecomposition::deserialize(d)?;
        TensorDecomposition::new(raw.rows, raw.cols, raw.terms).map_err(serde::de::Error::custom)
    }
}

impl TensorDecomposition {
    pub fn new(rows: usize, cols: usize, terms: Vec<TensorTerm>) -> Result<Self> {
        for (n, t) in terms.iter().enumerate() {
            if t.x.len() != rows || t.y.len() != cols {
                return shape_err(format!(
                    "term {n} has lengths ({}, {}), expected ({rows}, {cols})",
                    t.x.len(),
                    t.y.len()
                ));
            }
            if t.x.iter().chain(&t.y).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidInput(format!("term {n} has non-finite entries")));
            }
        }
        Ok(TensorDecomposition { rows, cols, terms })
    }

    pub fn empty(rows: usize, cols: usize) -> Self {
        TensorDecomposition { rows, cols, terms: Vec::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn terms(&self) -> &[TensorTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Appends the terms of `other`; the cost adds in the `p`-th power.
    pub fn concat(&self, other: &TensorDecomposition) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return shape_err("decompositions have different ambient dimensions");
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(TensorDecomposition { rows: self.rows, cols: self.cols, terms })
    }

    /// `Σ x_n y_nᵗ`. Zero entries of each term are skipped.
    pub fn evaluate(&self) -> Result<ComplexMatrix> {
        let mut m = ComplexMatrix::zeros(self.rows, self.cols)?.into_dmatrix();
        for t in &self.terms {
            let ys: Vec<(usize, Complex64)> =
                t.y.iter().copied().enumerate().filter(|(_, z)| *z != ZERO).collect();
            for (j, &xj) in t.x.iter().enumerate() {
                if xj == ZERO {
                    continue;
                }
                for &(k, yk) in &ys {
                    m[(j, k)] += xj * yk;
                }
            }
        }
        Ok(ComplexMatrix::wrap(m))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decomposition serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `(Σ_n ‖x_n‖_∞^p ‖y_n‖_∞^p)^{1/p}`.
pub fn tensor_cost(d: &TensorDecomposition, p: PExponent) -> Result<f64> {
    p.require_at_most_one()?;
    let weights: Vec<f64> = d.terms.iter().map(TensorTerm::weight).collect();
    Ok(lp_norm(&weights, p.as_exponent()))
}

/// `e^{2πi m/n}`, exact at multiples of a quarter turn.
pub(crate) fn root_of_unity(m: usize, n: usize) -> Complex64 {
    let r = m % n;
    if (4 * r).is_multiple_of(n) {
        return [ONE, Complex64::i(), -ONE, -Complex64::i()][4 * r / n];
    }
    Complex64::from_polar(1.0, TAU * r as f64 / n as f64)
}

/// The `n` Fourier terms `(n^{-1} x_k, y_k)` of `I_n` placed at `offset` in
/// an ambient space of dimension `dim`, with `x` scaled entrywise by `scale`.
fn dft_block_terms(
    n: usize,
    offset: usize,
    dim: usize,
    scale: impl Fn(usize) -> Complex64,
    place: impl Fn(usize) -> usize,
) -> Vec<TensorTerm> {
    let inv = 1.0 / n as f64;
    (0..n)
        .map(|k| {
            let mut x = vec![ZERO; dim];
            let mut y = vec![ZERO; dim];
            for j in 0..n {
                let w = root_of_unity(k * j, n);
                x[place(offset + j)] = scale(offset + j) * w * inv;
                y[place(offset + j)] = w.conj();
            }
            TensorTerm { x, y }
        })
        .collect()
}

/// Fourier decomposition of `I_n` with cost `n^{1/p♯}`.
pub fn dft_identity_decomposition(n: usize) -> Result<TensorDecomposition> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let terms = dft_block_terms(n, 0, n, |_| ONE, |i| i);
    TensorDecomposition::new(n, n, terms)
}

/// Dyadic decomposition of `diag(μ)` with `cost^p ≤ 2 Σ (μ*_j)^p (1+j)^{-p}`.
///
/// Entries are sorted by modulus; the permutation and the phases are carried
/// by the `x` columns, which leaves every term's sup norms unchanged.
pub fn dyadic_diagonal_decomposition(mu: &[Complex64], p: PExponent) -> Result<TensorDecomposition> {
    p.require_below_one()?;
    let dim = mu.len();
    if dim == 0 {
        return Ok(TensorDecomposition::empty(0, 0));
    }
    let moduli: Vec<f64> = mu.iter().map(|z| z.norm()).collect();
    let perm = rearrangement_permutation(&moduli);
    let scale = |i: usize| mu[perm[i]];
    let place = |i: usize| perm[i];
    let mut terms = Vec::new();
    if moduli[perm[0]] > 0.0 {
        terms.extend(dft_block_terms(1, 0, dim, scale, place));
    }
    let mut start = 1;
    while start < dim {
        let end = (2 * start).min(dim);
        if moduli[perm[start]] == 0.0 {
            break;
        }
        terms.extend(dft_block_terms(end - start, start, dim, scale, place));
        start *= 2;
    }
    TensorDecomposition::new(dim, dim, terms)
}

/// `2 Σ_j (μ*_j)^p (1+j)^{-p}`, the bound on the dyadic cost to the power `p`.
pub fn dyadic_cost_bound(mu: &[Complex64], p: PExponent) -> f64 {
    let s = crate::norms::nonincreasing_rearrangement(mu);
    let p = p.p();
    2.0 * s
        .iter()
        .enumerate()
        .map(|(j, v)| v.powf(p) * (1.0 + j as f64).powf(-p))
        .sum::<f64>()
}

/// Replaces each `x_n` by `A x_n`.
pub fn scale_decomposition(a: &ComplexMatrix, d: &TensorDecomposition) -> Result<TensorDecomposition> {
    if a.cols() != d.rows {
        return shape_err(format!("matrix has {} columns, decomposition has {} rows", a.cols(), d.rows));
    }
    let terms = d
        .terms
        .iter()
        .map(|t| {
            let x = (0..a.rows())
                .map(|j| (0..a.cols()).map(|k| a.get(j, k) * t.x[k]).sum())
                .collect();
            TensorTerm { x, y: t.y.clone() }
        })
        .collect();
    TensorDecomposition::new(a.rows(), d.cols, terms)
}

/// `Σ λ_k u_k v_kᵗ` with `λ` nonincreasing and `‖u_k‖_∞ = ‖v_k‖_∞ = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedDecomposition {
    pub rows: usize,
    pub cols: usize,
    pub lambdas: Vec<f64>,
    pub terms: Vec<TensorTerm>,
}

impl NormalizedDecomposition {
    pub fn evaluate(&self) -> Result<ComplexMatrix> {
        self.as_decomposition()?.evaluate()
    }

    pub fn as_decomposition(&self) -> Result<TensorDecomposition> {
        let terms = self
            .lambdas
            .iter()
            .zip(&self.terms)
            .map(|(l, t)| TensorTerm {
                x: t.x.iter().map(|z| z * l).collect(),
                y: t.y.clone(),
            })
            .collect();
        TensorDecomposition::new(self.rows, self.cols, terms)
    }

    /// `Σ λ_k^p`.
    pub fn power_sum(&self, p: f64) -> f64 {
        self.lambdas.iter().map(|l| l.powf(p)).sum()
    }
}

/// Canonical form with weights sorted nonincreasing (stable); zero terms are dropped.
pub fn normalize(d: &TensorDecomposition) -> NormalizedDecomposition {
    let mut pairs: Vec<(f64, TensorTerm)> = d
        .terms
        .iter()
        .filter_map(|t| {
            let (sx, sy) = (sup_norm(&t.x), sup_norm(&t.y));
            if sx == 0.0 || sy == 0.0 {
                return None;
            }
            let u = t.x.iter().map(|z| z / sx).collect();
            let v = t.y.iter().map(|z| z / sy).collect();
            Some((sx * sy, TensorTerm { x: u, y: v }))
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (lambdas, terms) = pairs.into_iter().unzip();
    NormalizedDecomposition { rows: d.rows, cols: d.cols, lambdas, terms }
}

fn check_block_sizes(block_sizes: &[usize]) -> Result<()> {
    if block_sizes.is_empty() || block_sizes.contains(&0) {
        return Err(Error::InvalidInput("block sizes must be a nonempty list of positive counts".into()));
    }
    Ok(())
}

/// Diagonal weights `n_j^{-1/p♯}` of the blocks of `⊕ n_j^{-1/p♯} I_{n_j}`.
pub fn direct_sum_diagonal(block_sizes: &[usize], p: PExponent) -> Result<Vec<f64>> {
    p.require_below_one()?;
    check_block_sizes(block_sizes)?;
    let inv_sharp = p.sharp().recip();
    Ok(block_sizes
        .iter()
        .flat_map(|&n| std::iter::repeat_n((n as f64).powf(-inv_sharp), n))
        .collect())
}

/// `⊕_j n_j^{-1/p♯} I_{n_j}`, whose multiplier norm is `m^{1/p♯}`.
pub fn direct_sum_multiplier(block_sizes: &[usize], p: PExponent) -> Result<ComplexMatrix> {
    ComplexMatrix::from_real_diagonal(&direct_sum_diagonal(block_sizes, p)?)
}

/// Concatenated scaled Fourier decompositions of the blocks of the direct sum.
pub fn direct_sum_decomposition(block_sizes: &[usize], p: PExponent) -> Result<TensorDecomposition> {
    let diag = direct_sum_diagonal(block_sizes, p)?;
    let dim = diag.len();
    let mut terms = Vec::new();
    let mut offset = 0;
    for &n in block_sizes {
        let c = Complex64::new(diag[offset], 0.0);
        terms.extend(dft_block_terms(n, offset, dim, |_| c, |i| i));
        offset += n;
    }
    TensorDecomposition::new(dim, dim, terms)
}

/// Whether `n_{j+1} ≥ 4 (2m)^{1/(1−p)} n_j` holds for all consecutive blocks.
pub fn spacing_hypothesis(block_sizes: &[usize], p: PExponent) -> bool {
    let m = block_sizes.len() as f64;
    let factor = 4.0 * (2.0 * m).powf(1.0 / (1.0 - p.p()));
    block_sizes.windows(2).all(|w| w[1] as f64 >= factor * w[0] as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowCheck {
    pub block_size: usize,
    /// Window `(a n, b n]` over the 1-indexed weights.
    pub lower: f64,
    pub upper: f64,
    pub window_sum: f64,
    /// `(1 − a) − b^{p−1} ‖λ‖_p^p`.
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub p: f64,
    pub a: f64,
    pub b: f64,
    pub block_sizes: Vec<usize>,
    pub spacing_holds: bool,
    pub windows: Vec<WindowCheck>,
    /// `Σ λ_k^p` of the supplied decomposition.
    pub aggregate: f64,
    /// `m/2`, asserted against `aggregate` when the spacing hypothesis holds.
    pub aggregate_target: f64,
    pub aggregate_pass: bool,
    /// `(m/2)^{1/p}`, valid for every decomposition once the spacing holds.
    pub certified_lower_bound: f64,
    pub evaluation_residual: f64,
    pub pass: bool,
}

/// Checks the window inequalities and the aggregate weight bound for a
/// decomposition of `⊕ n_j^{-1/p♯} I_{n_j}`.
///
/// `a` and `b` default to `1/4` and `(2m)^{1/(1−p)}`.
pub fn lower_bound_certificate(
    d: &NormalizedDecomposition,
    block_sizes: &[usize],
    p: PExponent,
    a: Option<f64>,
    b: Option<f64>,
) -> Result<CertificateReport> {
    p.require_below_one()?;
    check_block_sizes(block_sizes)?;
    let pv = p.p();
    let m = block_sizes.len() as f64;
    let a = a.unwrap_or(0.25);
    let b = b.unwrap_or((2.0 * m).powf(1.0 / (1.0 - pv)));
    if !(a > 0.0 && a < 1.0 && b > 1.0) {
        return Err(Error::InvalidInput(format!("need 0 < a < 1 < b, got a = {a}, b = {b}")));
    }
    let invalid = |msg: String| Err(Error::InvalidCertificate(msg));
    if d.lambdas.len() != d.terms.len() {
        return invalid("weights and terms differ in length".into());
    }
    if d.lambdas.iter().any(|l| !l.is_finite() || *l < 0.0) {
        return invalid("weights must be finite and nonnegative".into());
    }
    if d.lambdas.windows(2).any(|w| w[1] > w[0]) {
        return invalid("weights are not nonincreasing".into());
    }
    if let Some(k) = d.terms.iter().position(|t| sup_norm(&t.x) > 1.0 + 1e-12 || sup_norm(&t.y) > 1.0 + 1e-12) {
        return invalid(format!("term {} has sup norm above 1", k + 1));
    }
    let target = direct_sum_multiplier(block_sizes, p)?;
    if (d.rows, d.cols) != target.shape() {
        return invalid("decomposition dimensions do not match the direct sum".into());
    }
    let residual = d.evaluate()?.max_abs_diff(&target)?;
    let cost = d.power_sum(pv).powf(1.0 / pv);
    if residual > 1e-9 * cost.max(f64::MIN_POSITIVE) {
        return invalid(format!("evaluation residual {residual:e} exceeds tolerance"));
    }

    let aggregate = d.power_sum(pv);
    let rhs = (1.0 - a) - b.powf(pv - 1.0) * aggregate;
    let windows: Vec<WindowCheck> = block_sizes
        .iter()
        .map(|&n| {
            let (lower, upper) = (a * n as f64, b * n as f64);
            let window_sum: f64 = d
                .lambdas
                .iter()
                .enumerate()
                .filter(|(i, _)| (i + 1) as f64 > lower && (i + 1) as f64 <= upper)
                .map(|(_, l)| l.powf(pv))
                .sum();
            WindowCheck { block_size: n, lower, upper, window_sum, rhs, pass: window_sum >= rhs - 1e-12 }
        })
        .collect();
    let spacing_holds = spacing_hypothesis(block_sizes, p);
    let aggregate_target = m / 2.0;
    let aggregate_pass = !spacing_holds || aggregate >= aggregate_target - 1e-9;
    let pass = aggregate_pass && windows.iter().all(|w| w.pass);
    Ok(CertificateReport {
        p: pv,
        a,
        b,
        block_sizes: block_sizes.to_vec(),
        spacing_holds,
        windows,
        aggregate,
        aggregate_target,
        aggregate_pass,
        certified_lower_bound: aggregate_target.powf(1.0 / pv),
        evaluation_residual: residual,
        pass,
    })
}

/// `m^{1/p♯}`, the multiplier norm of the direct sum with `m` blocks.
pub fn direct_sum_multiplier_norm(m: usize, p: PExponent) -> f64 {
    (m as f64).powf(p.sharp().recip())
}

/// Exponent helper used by callers that need `n^{1/p♯}`.
pub fn identity_cost(n: usize, p: PExponent) -> f64 {
    (n as f64).powf(p.sharp().recip())
}
