//! Schur multiplier norms `‖A‖_{𝔐_p} = sup ‖A ⋆ B‖_{S_p} / ‖B‖_{S_p}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{Exponent, PExponent};
use crate::matrix::{ComplexMatrix, ONE, ZERO};
use crate::norms::{apply_cutoff, lp_norm, moduli, schatten_norm, svd};
use crate::ptensor::{
    dyadic_diagonal_decomposition, root_of_unity, tensor_cost, TensorDecomposition, TensorTerm,
};
use crate::random::{gaussian_matrix, gaussian_vector, substream, unitarity_defect};
use crate::schur::{block_schur_product, BlockMatrix};
use crate::wp::{diagonal_wp_witness, rank_one_wp_witness, wp_cost, WpFactorization};
use crate::yq::{combined_cost, yq_solve};

pub const DEFAULT_RESTARTS: usize = 32;
pub const DEFAULT_ITERS: usize = 200;

/// `‖μ‖_{p♯}`, the multiplier norm of `diag(μ)`.
pub fn diagonal_multiplier_norm(mu: &[Complex64], p: PExponent) -> Result<f64> {
    p.require_at_most_one()?;
    Ok(lp_norm(&moduli(mu), p.sharp()))
}

/// Rank-one `B = x xᵗ` attaining `‖diag(μ) ⋆ B‖_{S_p} = ‖μ‖_{p♯} ‖B‖_{S_p}`.
pub fn diagonal_extremal_witness(mu: &[Complex64], p: PExponent) -> Result<ComplexMatrix> {
    ComplexMatrix::outer(&extremal_vector(mu, p)?, &extremal_vector(mu, p)?)
}

/// `x_j = (|μ_j|^{p♯} / Σ |μ_i|^{p♯})^{1/2} e^{−iθ_j/2}`.
fn extremal_vector(mu: &[Complex64], p: PExponent) -> Result<Vec<Complex64>> {
    p.require_below_one()?;
    let top = mu.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if top == 0.0 {
        return Err(Error::Degenerate("sequence is identically zero".into()));
    }
    let sharp = p.sharp().value();
    let weights: Vec<f64> = mu.iter().map(|z| (z.norm() / top).powf(sharp)).collect();
    let total: f64 = weights.iter().sum();
    Ok(mu
        .iter()
        .zip(&weights)
        .map(|(z, w)| Complex64::from_polar((w / total).sqrt(), -z.arg() / 2.0))
        .collect())
}

/// `Z = N^{1/2} U` with `U` the Fourier unitary: `z_jk = e^{2πijk/N}`.
pub fn flat_unitary_multiplier(n: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::from_fn(n, n, |j, k| root_of_unity(j * k, n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    ClosedForm,
    Tensor,
    Wp,
    Yq,
}

/// An upper bound on the multiplier norm together with its provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub label: String,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierEstimate {
    pub lower: f64,
    #[serde(with = "extended_real")]
    pub upper: f64,
    pub lower_witness: Option<ComplexMatrix>,
    pub upper_certificate: Option<Certificate>,
    pub candidates: Vec<Certificate>,
}

/// Serializes `f64::INFINITY` as the string `"inf"`.
mod extended_real {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            Repr::Text("inf".into()).serialize(s)
        } else {
            Repr::Num(*v).serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("expected number or \"inf\", got {t}"))),
        }
    }
}

/// Seeded multi-start ascent of `‖A ⋆ (x yᵗ)‖_{S_p} / (‖x‖₂ ‖y‖₂)`.
struct Ascent {
    /// `A` scaled to unit max modulus, and its transpose.
    a: DMatrix<Complex64>,
    at: DMatrix<Complex64>,
    p: f64,
}

fn power_sum(m: &DMatrix<Complex64>, p: f64) -> f64 {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    apply_cutoff(s).iter().filter(|&&v| v > 0.0).map(|v| v.powf(p)).sum()
}

/// `diag(x) · A · diag(y)`.
fn sandwich(a: &DMatrix<Complex64>, x: &[Complex64], y: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |j, k| x[j] * a[(j, k)] * y[k])
}

fn normalized(v: Vec<Complex64>) -> Vec<Complex64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n == 0.0 {
        return v;
    }
    v.into_iter().map(|z| z / n).collect()
}

impl Ascent {
    fn value(&self, x: &[Complex64], y: &[Complex64]) -> f64 {
        power_sum(&sandwich(&self.a, x, y), self.p)
    }

    /// One projected-gradient step in `x` with `y` fixed, on `M = diag(x) a diag(y)`.
    fn half_step(&self, a: &DMatrix<Complex64>, x: &mut Vec<Complex64>, y: &[Complex64], phi: f64, step: &mut f64) -> f64 {
        let ay = DMatrix::from_fn(a.nrows(), a.ncols(), |j, k| a[(j, k)] * y[k]);
        let m = DMatrix::from_fn(a.nrows(), a.ncols(), |j, k| x[j] * ay[(j, k)]);
        let Ok(dec) = svd(&ComplexMatrix::wrap(m)) else {
            return phi;
        };
        let w = &ay * dec.v_adjoint.adjoint();
        let mut grad = vec![ZERO; x.len()];
        for (i, &s) in dec.values.iter().enumerate() {
            if s <= 0.0 {
                continue;
            }
            let coef = self.p * s.powf(self.p - 1.0);
            for (j, g) in grad.iter_mut().enumerate() {
                *g += (dec.u[(j, i)].conj() * w[(j, i)]).conj() * coef;
            }
        }
        let radial: f64 = x.iter().zip(&grad).map(|(xi, gi)| (xi.conj() * gi).re).sum();
        for (g, xi) in grad.iter_mut().zip(x.iter()) {
            *g -= xi * radial;
        }
        let gnorm = grad.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if gnorm <= 1e-15 * phi.max(1e-300) {
            return phi;
        }
        let mut t = (*step * 2.0).min(1.0);
        while t > 1e-12 {
            let cand = normalized(x.iter().zip(&grad).map(|(xi, gi)| xi + gi * (t / gnorm)).collect());
            let val = power_sum(&DMatrix::from_fn(a.nrows(), a.ncols(), |j, k| cand[j] * ay[(j, k)]), self.p);
            if val >= phi + 1e-4 * t * gnorm {
                *x = cand;
                *step = t;
                return val;
            }
            t *= 0.5;
        }
        *step = t;
        phi
    }

    fn run(&self, mut x: Vec<Complex64>, mut y: Vec<Complex64>, iters: usize) -> (f64, Vec<Complex64>, Vec<Complex64>) {
        x = normalized(x);
        y = normalized(y);
        let mut phi = self.value(&x, &y);
        let (mut sx, mut sy) = (0.5, 0.5);
        let mut stalled = 0;
        for _ in 0..iters {
            let before = phi;
            phi = self.half_step(&self.a, &mut x, &y, phi, &mut sx);
            phi = self.half_step(&self.at, &mut y, &x, phi, &mut sy);
            if phi - before <= 1e-13 * phi {
                stalled += 1;
                if stalled >= 3 {
                    break;
                }
            } else {
                stalled = 0;
            }
        }
        (phi, x, y)
    }
}

/// Lower bound with the default search budget.
pub fn multiplier_lower_bound_default(a: &ComplexMatrix, p: PExponent, seed: u64) -> Result<MultiplierEstimate> {
    multiplier_lower_bound(a, p, DEFAULT_RESTARTS, DEFAULT_ITERS, seed)
}

/// Best ratio over rank-one `B = x yᵗ` found by alternating projected-gradient
/// ascent from deterministic and seeded random starts. `upper` is `∞`.
pub fn multiplier_lower_bound(
    a: &ComplexMatrix,
    p: PExponent,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<MultiplierEstimate> {
    p.require_at_most_one()?;
    let (r, c) = a.shape();
    let amax = a.max_abs();
    let ones_witness = ComplexMatrix::ones(r, c)?;
    if amax == 0.0 {
        return Ok(MultiplierEstimate {
            lower: 0.0,
            upper: f64::INFINITY,
            lower_witness: Some(ones_witness),
            upper_certificate: None,
            candidates: Vec::new(),
        });
    }
    let scaled = a.as_dmatrix() / Complex64::new(amax, 0.0);
    let ascent = Ascent { at: scaled.transpose(), a: scaled, p: p.p() };

    let mut starts: Vec<(Vec<Complex64>, Vec<Complex64>)> = vec![(vec![ONE; r], vec![ONE; c])];
    if a.is_diagonal() {
        let mu = a.diagonal();
        let x = if p.p() < 1.0 {
            extremal_vector(&mu, p)?
        } else {
            let j = (0..mu.len()).fold(0, |b, j| if mu[j].norm() > mu[b].norm() { j } else { b });
            (0..mu.len()).map(|i| if i == j { ONE } else { ZERO }).collect()
        };
        let mut xr = vec![ZERO; r];
        let mut yc = vec![ZERO; c];
        xr[..x.len()].copy_from_slice(&x);
        yc[..x.len()].copy_from_slice(&x);
        starts.push((xr, yc));
    }
    for k in 0..restarts {
        let mut rng = substream(seed, k as u64);
        starts.push((gaussian_vector(&mut rng, r), gaussian_vector(&mut rng, c)));
    }

    let mut best: Option<(f64, Vec<Complex64>, Vec<Complex64>)> = None;
    for (x, y) in starts {
        let (phi, x, y) = ascent.run(x, y, iters);
        if best.as_ref().is_none_or(|b| phi > b.0) {
            best = Some((phi, x, y));
        }
    }
    let (_, x, y) = best.expect("at least one start");
    let witness = ComplexMatrix::outer(&x, &y)?;
    let lower = witness_ratio(a, &witness, p)?;
    Ok(MultiplierEstimate {
        lower,
        upper: f64::INFINITY,
        lower_witness: Some(witness),
        upper_certificate: None,
        candidates: Vec::new(),
    })
}

/// `‖A ⋆ B‖_{S_p} / ‖B‖_{S_p}`.
pub fn witness_ratio(a: &ComplexMatrix, b: &ComplexMatrix, p: PExponent) -> Result<f64> {
    let sp = p.as_exponent();
    let denom = schatten_norm(b, sp)?;
    if denom == 0.0 {
        return Err(Error::Degenerate("witness has zero norm".into()));
    }
    Ok(schatten_norm(&crate::schur::schur_product(a, b)?, sp)? / denom)
}

/// `A = x yᵗ` exactly (to `1e-12` relative), with `x` read from the pivot column.
fn rank_one_factors(a: &ComplexMatrix) -> Option<(Vec<Complex64>, Vec<Complex64>)> {
    let amax = a.max_abs();
    if amax == 0.0 {
        return None;
    }
    let (mut pj, mut pk) = (0, 0);
    'search: for j in 0..a.rows() {
        for k in 0..a.cols() {
            if a.get(j, k).norm() == amax {
                (pj, pk) = (j, k);
                break 'search;
            }
        }
    }
    let pivot = a.get(pj, pk);
    let x: Vec<Complex64> = a.column(pk).iter().map(|z| z / pivot).collect();
    let y = a.row(pj);
    let fit = ComplexMatrix::outer(&x, &y).ok()?;
    (fit.max_abs_diff(a).ok()? <= 1e-12 * amax).then_some((x, y))
}

/// Exact multiplier norm for the shapes with a known closed form: diagonal
/// matrices, scalar multiples of `1_{S×T}`, and scalar multiples of flat unitaries.
pub fn closed_form_multiplier_norm(a: &ComplexMatrix, p: PExponent) -> Result<Option<(String, f64)>> {
    p.require_at_most_one()?;
    if a.is_diagonal() {
        return Ok(Some(("diagonal".into(), diagonal_multiplier_norm(&a.diagonal(), p)?)));
    }
    if let Some(c) = scalar_block_of_ones(a) {
        return Ok(Some(("block-of-ones".into(), c)));
    }
    if a.rows() == a.cols() {
        let n = a.rows();
        let m = a.get(0, 0).norm();
        let flat = a.row_major().iter().all(|z| (z.norm() - m).abs() <= 1e-12 * m);
        if m > 0.0 && flat {
            let u = a.as_dmatrix() / Complex64::new(m * (n as f64).sqrt(), 0.0);
            if unitarity_defect(&u) <= 1e-10 {
                return Ok(Some(("flat-unitary".into(), m * (n as f64).powf(1.0 / p.p() - 0.5))));
            }
        }
    }
    Ok(None)
}

/// `|c|` when `A = c · 1_{S×T}` for some nonempty `S`, `T`.
fn scalar_block_of_ones(a: &ComplexMatrix) -> Option<f64> {
    let entries = a.row_major();
    let c = *entries.iter().find(|z| **z != ZERO)?;
    if entries.iter().any(|z| *z != ZERO && *z != c) {
        return None;
    }
    let rows: Vec<usize> = (0..a.rows()).filter(|&j| a.row(j).iter().any(|z| *z != ZERO)).collect();
    let cols: Vec<usize> = (0..a.cols()).filter(|&k| a.column(k).iter().any(|z| *z != ZERO)).collect();
    rows.iter().all(|&j| cols.iter().all(|&k| a.get(j, k) == c)).then(|| c.norm())
}

fn unit(n: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; n];
    v[i] = ONE;
    v
}

fn tensor_candidates(a: &ComplexMatrix, p: PExponent) -> Result<Vec<(String, TensorDecomposition)>> {
    let (r, c) = a.shape();
    let mut out = Vec::new();
    if let Some((x, y)) = rank_one_factors(a) {
        out.push(("rank-one".into(), TensorDecomposition::new(r, c, vec![TensorTerm::new(x, y)])?));
    }
    let rows = (0..r).map(|j| TensorTerm::new(unit(r, j), a.row(j))).collect();
    out.push(("row-wise".into(), TensorDecomposition::new(r, c, rows)?));
    let cols = (0..c).map(|k| TensorTerm::new(a.column(k), unit(c, k))).collect();
    out.push(("column-wise".into(), TensorDecomposition::new(r, c, cols)?));
    let dec = svd(a)?;
    let terms = (0..dec.values.len())
        .filter(|&i| dec.values[i] > 0.0)
        .map(|i| {
            let x = dec.u.column(i).iter().map(|z| z * dec.values[i]).collect();
            let y = dec.v_adjoint.row(i).iter().copied().collect();
            TensorTerm::new(x, y)
        })
        .collect();
    out.push(("singular-value".into(), TensorDecomposition::new(r, c, terms)?));
    if a.is_diagonal() && r == c && p.p() < 1.0 {
        out.push(("dyadic".into(), dyadic_diagonal_decomposition(&a.diagonal(), p)?));
    }
    Ok(out)
}

fn wp_candidates(a: &ComplexMatrix, p: PExponent) -> Result<Vec<(String, WpFactorization)>> {
    let (r, c) = a.shape();
    let mut out = Vec::new();
    if a.is_diagonal() && r == c {
        out.push(("diagonal".into(), diagonal_wp_witness(&a.diagonal(), p)?));
    }
    if let Some((x, y)) = rank_one_factors(a) {
        out.push(("rank-one".into(), rank_one_wp_witness(&x, &y, p)?));
    }
    let dec = svd(a)?;
    let k = dec.values.len();
    let x = ComplexMatrix::from_fn(r, k, |j, i| dec.u[(j, i)] * dec.values[i].sqrt())?;
    let y = ComplexMatrix::from_fn(c, k, |l, i| dec.v_adjoint[(i, l)] * dec.values[i].sqrt())?;
    out.push(("singular-value-split".into(), WpFactorization::new(x, y)?));
    out.push(("left-identity".into(), WpFactorization::new(a.clone(), ComplexMatrix::identity(c)?)?));
    out.push(("right-identity".into(), WpFactorization::new(ComplexMatrix::identity(r)?, a.transpose())?));
    Ok(out)
}

/// Minimum over closed forms and the tensor, `𝒲_p` and `𝒴` certificates
/// produced for `A`. `upper` is `∞` when nothing applies.
pub fn multiplier_upper_bound(a: &ComplexMatrix, p: PExponent) -> Result<MultiplierEstimate> {
    p.require_at_most_one()?;
    let mut candidates = Vec::new();
    let mut push = |kind, label: String, cost: f64| {
        if cost.is_finite() {
            candidates.push(Certificate { kind, label, cost });
        }
    };
    if let Some((label, v)) = closed_form_multiplier_norm(a, p)? {
        push(CertificateKind::ClosedForm, label, v);
    }
    // ‖A ⋆ B‖_{S_p} ≤ rank^{1/p − 1/2} ‖A ⋆ B‖_{S_2} ≤ min(r, c)^{1/p − 1/2} max|a_jk| ‖B‖_{S_p}.
    let k = a.rows().min(a.cols()) as f64;
    push(CertificateKind::ClosedForm, "hilbert-schmidt".into(), k.powf(1.0 / p.p() - 0.5) * a.max_abs());
    for (label, d) in tensor_candidates(a, p)? {
        push(CertificateKind::Tensor, label, tensor_cost(&d, p)?);
    }
    for (label, f) in wp_candidates(a, p)? {
        push(CertificateKind::Wp, label, wp_cost(&f, p)?);
    }
    let w = yq_solve(a, p.flat(), 4, 0)?;
    if w.is_feasible(a)? {
        push(CertificateKind::Yq, "envelope".into(), combined_cost(&w, p));
    }
    let best = candidates.iter().min_by(|x, y| x.cost.total_cmp(&y.cost)).cloned();
    Ok(MultiplierEstimate {
        lower: 0.0,
        upper: best.as_ref().map_or(f64::INFINITY, |b| b.cost),
        lower_witness: None,
        upper_certificate: best,
        candidates,
    })
}

/// Both bounds together.
pub fn multiplier_estimate(
    a: &ComplexMatrix,
    p: PExponent,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<MultiplierEstimate> {
    let lower = multiplier_lower_bound(a, p, restarts, iters, seed)?;
    let upper = multiplier_upper_bound(a, p)?;
    Ok(MultiplierEstimate { lower: lower.lower, lower_witness: lower.lower_witness, ..upper })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CbReport {
    pub p: f64,
    pub block_dim: usize,
    pub trials: usize,
    pub max_ratio: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Random block input: Gaussian, flattened rank-one, or scalar rank-one ⊗ random block.
fn random_block_input(rng: &mut rand_chacha::ChaCha8Rng, r: usize, c: usize, d: usize, family: usize) -> Result<BlockMatrix> {
    let flat = match family {
        0 => gaussian_matrix(rng, r * d, c * d)?,
        1 => ComplexMatrix::outer(&gaussian_vector(rng, r * d), &gaussian_vector(rng, c * d))?,
        _ => {
            let (u, v) = (gaussian_vector(rng, r), gaussian_vector(rng, c));
            let t = gaussian_matrix(rng, d, d)?;
            ComplexMatrix::from_fn(r * d, c * d, |i, l| u[i / d] * v[l / d] * t.get(i % d, l % d))?
        }
    };
    BlockMatrix::from_flat(&flat, d)
}

/// Largest `‖A ⋆ B‖_{S_p} / ‖B‖_{S_p}` over random operator-block inputs,
/// compared with the scalar multiplier norm (closed form unless supplied).
pub fn cb_multiplier_check(
    a: &ComplexMatrix,
    p: PExponent,
    block_dim: usize,
    trials: usize,
    seed: u64,
    reference: Option<f64>,
) -> Result<CbReport> {
    p.require_at_most_one()?;
    if block_dim == 0 {
        return Err(Error::InvalidInput("block dimension must be positive".into()));
    }
    let reference = match reference {
        Some(v) => v,
        None => closed_form_multiplier_norm(a, p)?
            .map(|(_, v)| v)
            .ok_or_else(|| Error::InvalidInput("no closed-form reference for this matrix; supply one".into()))?,
    };
    let sp: Exponent = p.as_exponent();
    let mut max_ratio = 0.0_f64;
    for t in 0..trials {
        let mut rng = substream(seed, t as u64);
        let b = random_block_input(&mut rng, a.rows(), a.cols(), block_dim, t % 3)?;
        let denom = schatten_norm(&b.flatten(), sp)?;
        if denom == 0.0 {
            continue;
        }
        let num = schatten_norm(&block_schur_product(a, &b)?.flatten(), sp)?;
        max_ratio = max_ratio.max(num / denom);
    }
    let tolerance = 1e-6;
    Ok(CbReport {
        p: p.p(),
        block_dim,
        trials,
        max_ratio,
        reference,
        tolerance,
        pass: max_ratio <= reference + tolerance,
    })
}
