//! The spaces `𝒴_q`: matrices with `|z_jk| ≤ α_j + β_k` for `α, β ∈ ℓ^q`.

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{shape_err, Error, Result};
use crate::exponent::{Exponent, PExponent};
use crate::matrix::ComplexMatrix;
use crate::multiplier::flat_unitary_multiplier;
use crate::norms::{lp_norm, schatten_norm};
use crate::random::substream;
use crate::schur::schur_product;

/// Tolerance on `α_j + β_k − |z_jk|` when checking feasibility.
pub const FEASIBILITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct YqWitness {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

#[derive(Deserialize)]
struct RawWitness {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl<'de> Deserialize<'de> for YqWitness {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawWitness::deserialize(d)?;
        YqWitness::new(raw.alpha, raw.beta).map_err(serde::de::Error::custom)
    }
}

impl YqWitness {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if alpha.iter().chain(&beta).any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidWitness("entries must be finite and nonnegative".into()));
        }
        Ok(YqWitness { alpha, beta })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// `min_{j,k} (α_j + β_k − |z_jk|)`.
    pub fn feasibility_gap(&self, z: &ComplexMatrix) -> Result<f64> {
        if self.alpha.len() != z.rows() || self.beta.len() != z.cols() {
            return shape_err(format!(
                "witness lengths ({}, {}) do not match a {}x{} target",
                self.alpha.len(),
                self.beta.len(),
                z.rows(),
                z.cols()
            ));
        }
        let mut gap = f64::INFINITY;
        for j in 0..z.rows() {
            for k in 0..z.cols() {
                gap = gap.min(self.alpha[j] + self.beta[k] - z.get(j, k).norm());
            }
        }
        Ok(gap)
    }

    pub fn is_feasible(&self, z: &ComplexMatrix) -> Result<bool> {
        Ok(self.feasibility_gap(z)? >= -FEASIBILITY_TOL)
    }

    pub fn check_feasible(&self, z: &ComplexMatrix) -> Result<()> {
        let gap = self.feasibility_gap(z)?;
        if gap < -FEASIBILITY_TOL {
            return Err(Error::InvalidWitness(format!("constraint violated by {:e}", -gap)));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `‖α‖_q + ‖β‖_q` for `q ≥ 1` (including `∞`), `(‖α‖_q^q + ‖β‖_q^q)^{1/q}` for `q < 1`.
pub fn yq_cost(w: &YqWitness, q: Exponent) -> f64 {
    pair_cost(&w.alpha, &w.beta, q)
}

fn pair_cost(alpha: &[f64], beta: &[f64], q: Exponent) -> f64 {
    match q {
        Exponent::Finite(q) if q < 1.0 => {
            let (a, b) = (lp_norm(alpha, Exponent::Finite(q)), lp_norm(beta, Exponent::Finite(q)));
            let top = a.max(b);
            if top == 0.0 {
                return 0.0;
            }
            top * ((a / top).powf(q) + (b / top).powf(q)).powf(1.0 / q)
        }
        _ => lp_norm(alpha, q) + lp_norm(beta, q),
    }
}

fn moduli_matrix(z: &ComplexMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(z.rows(), z.cols(), |j, k| z.get(j, k).norm())
}

/// `α_j = max_k (c_jk − β_k)₊`, the smallest feasible `α` for a given `β`.
fn row_envelope(c: &DMatrix<f64>, beta: &[f64]) -> Vec<f64> {
    (0..c.nrows())
        .map(|j| (0..c.ncols()).map(|k| c[(j, k)] - beta[k]).fold(0.0, f64::max))
        .collect()
}

fn col_envelope(c: &DMatrix<f64>, alpha: &[f64]) -> Vec<f64> {
    (0..c.ncols())
        .map(|k| (0..c.nrows()).map(|j| c[(j, k)] - alpha[j]).fold(0.0, f64::max))
        .collect()
}

/// Alternates envelope updates until the cost stops decreasing.
fn envelope_polish(c: &DMatrix<f64>, mut beta: Vec<f64>, q: Exponent) -> (Vec<f64>, Vec<f64>) {
    let mut alpha = row_envelope(c, &beta);
    let mut cost = pair_cost(&alpha, &beta, q);
    for _ in 0..200 {
        let nb = col_envelope(c, &alpha);
        let na = row_envelope(c, &nb);
        let nc = pair_cost(&na, &nb, q);
        if nc < cost {
            (alpha, beta, cost) = (na, nb, nc);
        } else {
            break;
        }
    }
    (alpha, beta)
}

/// Minimizes the `𝒴_q` cost of a witness for `Z`.
///
/// `q = ∞` uses the closed form, `q = 1` the linear program, `q ∈ (1, ∞)` the
/// convex solver, and `q < 1` a multi-start envelope heuristic whose result is
/// only an upper bound.
pub fn yq_solve(z: &ComplexMatrix, q: Exponent, restarts: usize, seed: u64) -> Result<YqWitness> {
    match q {
        Exponent::Infinite => {
            let c = moduli_matrix(z);
            YqWitness::new(row_envelope(&c, &vec![0.0; z.cols()]), vec![0.0; z.cols()])
        }
        Exponent::Finite(qv) if qv == 1.0 => yq_solve_lp(z),
        Exponent::Finite(qv) if qv > 1.0 => yq_solve_convex(z, q, restarts, seed),
        Exponent::Finite(_) => yq_solve_heuristic(z, q, restarts, seed),
    }
}

/// Exact `q = 1` solution: minimize `Σα + Σβ` subject to `α_j + β_k ≥ |z_jk|`.
pub fn yq_solve_lp(z: &ComplexMatrix) -> Result<YqWitness> {
    let c = moduli_matrix(z);
    let cmax = c.max();
    if cmax == 0.0 {
        return YqWitness::new(vec![0.0; z.rows()], vec![0.0; z.cols()]);
    }
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let a: Vec<_> = (0..z.rows()).map(|_| lp.add_var(1.0, (0.0, f64::INFINITY))).collect();
    let b: Vec<_> = (0..z.cols()).map(|_| lp.add_var(1.0, (0.0, f64::INFINITY))).collect();
    for j in 0..z.rows() {
        for k in 0..z.cols() {
            if c[(j, k)] > 0.0 {
                lp.add_constraint([(a[j], 1.0), (b[k], 1.0)], ComparisonOp::Ge, c[(j, k)] / cmax);
            }
        }
    }
    let sol = lp.solve().map_err(|e| Error::Numerical(format!("linear program failed: {e}")))?;
    let c = c / cmax;
    let beta: Vec<f64> = b.iter().map(|&v| sol.var_value(v).max(0.0)).collect();
    let (alpha, beta) = envelope_polish(&c, beta, Exponent::Finite(1.0));
    scaled_witness(alpha, beta, cmax)
}

fn scaled_witness(alpha: Vec<f64>, beta: Vec<f64>, scale: f64) -> Result<YqWitness> {
    YqWitness::new(alpha.into_iter().map(|v| v * scale).collect(), beta.into_iter().map(|v| v * scale).collect())
}

/// Gradient and Hessian of `a ↦ ‖a‖_q` at a strictly positive point.
fn lq_derivatives(a: &[f64], q: f64) -> (f64, DVector<f64>, DMatrix<f64>) {
    let n = a.len();
    if q == 1.0 {
        return (a.iter().sum(), DVector::from_element(n, 1.0), DMatrix::zeros(n, n));
    }
    let f = lp_norm(a, Exponent::Finite(q));
    let g = DVector::from_iterator(n, a.iter().map(|x| (x / f).powf(q - 1.0)));
    let mut h = -(&g * g.transpose());
    for j in 0..n {
        h[(j, j)] += (a[j] / f).powf(q - 2.0);
    }
    (f, g, h * ((q - 1.0) / f))
}

struct Barrier<'a> {
    c: &'a DMatrix<f64>,
    q: f64,
}

impl Barrier<'_> {
    fn split<'v>(&self, v: &'v [f64]) -> (&'v [f64], &'v [f64]) {
        v.split_at(self.c.nrows())
    }

    fn feasible(&self, v: &[f64]) -> bool {
        let (a, b) = self.split(v);
        v.iter().all(|&x| x > 0.0)
            && (0..a.len()).all(|j| (0..b.len()).all(|k| a[j] + b[k] - self.c[(j, k)] > 0.0))
    }

    fn value(&self, v: &[f64], mu: f64) -> f64 {
        let (a, b) = self.split(v);
        let mut logs: f64 = v.iter().map(|x| x.ln()).sum();
        for j in 0..a.len() {
            for k in 0..b.len() {
                logs += (a[j] + b[k] - self.c[(j, k)]).ln();
            }
        }
        let f = lp_norm(a, Exponent::Finite(self.q)) + lp_norm(b, Exponent::Finite(self.q));
        f - mu * logs
    }

    fn derivatives(&self, v: &[f64], mu: f64) -> (DVector<f64>, DMatrix<f64>) {
        let (a, b) = self.split(v);
        let (r, n) = (a.len(), v.len());
        let mut g = DVector::zeros(n);
        let mut h = DMatrix::zeros(n, n);
        let (_, ga, ha) = lq_derivatives(a, self.q);
        let (_, gb, hb) = lq_derivatives(b, self.q);
        g.rows_mut(0, r).copy_from(&ga);
        g.rows_mut(r, n - r).copy_from(&gb);
        h.view_mut((0, 0), (r, r)).copy_from(&ha);
        h.view_mut((r, r), (n - r, n - r)).copy_from(&hb);
        for (i, x) in v.iter().enumerate() {
            g[i] -= mu / x;
            h[(i, i)] += mu / (x * x);
        }
        for j in 0..r {
            for k in 0..b.len() {
                let s = a[j] + b[k] - self.c[(j, k)];
                let (i1, i2) = (j, r + k);
                g[i1] -= mu / s;
                g[i2] -= mu / s;
                let w = mu / (s * s);
                h[(i1, i1)] += w;
                h[(i2, i2)] += w;
                h[(i1, i2)] += w;
                h[(i2, i1)] += w;
            }
        }
        (g, h)
    }

    /// Damped Newton iterations on the barrier problem for fixed `mu`.
    fn center(&self, v: &mut Vec<f64>, mu: f64) -> Result<()> {
        for _ in 0..100 {
            let (g, h) = self.derivatives(v, mu);
            let Some(chol) = regularized_cholesky(h) else {
                return Ok(());
            };
            let step = chol.solve(&(-&g));
            let decrement = -g.dot(&step);
            if decrement / 2.0 <= 1e-12 {
                return Ok(());
            }
            let f0 = self.value(v, mu);
            let mut t = 1.0;
            loop {
                let cand: Vec<f64> = v.iter().zip(step.iter()).map(|(x, d)| x + t * d).collect();
                if self.feasible(&cand) && self.value(&cand, mu) <= f0 - 0.25 * t * decrement {
                    *v = cand;
                    break;
                }
                t *= 0.5;
                if t < 1e-14 {
                    return Ok(());
                }
            }
        }
        Ok(())
    }
}

/// Cholesky factor of `h`, adding a growing diagonal shift when `h` is
/// numerically singular.
fn regularized_cholesky(h: DMatrix<f64>) -> Option<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
    let scale = h.diagonal().max().max(f64::MIN_POSITIVE);
    let mut shift = 0.0;
    for _ in 0..8 {
        let mut m = h.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += shift;
        }
        if let Some(chol) = m.cholesky() {
            return Some(chol);
        }
        shift = if shift == 0.0 { 1e-14 * scale } else { shift * 100.0 };
    }
    None
}

/// Convex route for `q ∈ [1, ∞)`: log-barrier Newton from seeded interior
/// starts, finished with envelope updates.
pub fn yq_solve_convex(z: &ComplexMatrix, q: Exponent, restarts: usize, seed: u64) -> Result<YqWitness> {
    let qv = match q {
        Exponent::Finite(qv) if qv >= 1.0 => qv,
        _ => return Err(Error::UnsupportedExponent(format!("convex solver needs 1 <= q < inf, got {q}"))),
    };
    let c = moduli_matrix(z);
    let cmax = c.max();
    if cmax == 0.0 {
        return YqWitness::new(vec![0.0; z.rows()], vec![0.0; z.cols()]);
    }
    let c = c / cmax;
    let (r, n) = (z.rows(), z.rows() + z.cols());
    let constraints = (r * z.cols() + n) as f64;
    let barrier = Barrier { c: &c, q: qv };
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    for s in 0..restarts.max(1) {
        let mut rng = substream(seed, s as u64);
        let mut v: Vec<f64> = (0..n).map(|_| 0.5 + rng.random::<f64>()).collect();
        let mut mu = 1.0;
        while mu * constraints > 1e-11 {
            barrier.center(&mut v, mu)?;
            mu /= 8.0;
        }
        let (alpha, beta) = envelope_polish(&c, v[r..].to_vec(), q);
        let cost = pair_cost(&alpha, &beta, q);
        if best.as_ref().is_none_or(|b| cost < b.0) {
            best = Some((cost, alpha, beta));
        }
    }
    let (_, alpha, beta) = best.expect("at least one start");
    scaled_witness(alpha, beta, cmax)
}

/// Heuristic for `q < 1`: envelope alternation from `β = 0`, `α = 0` and random `β`.
fn yq_solve_heuristic(z: &ComplexMatrix, q: Exponent, restarts: usize, seed: u64) -> Result<YqWitness> {
    let c = moduli_matrix(z);
    let cmax = c.max();
    if cmax == 0.0 {
        return YqWitness::new(vec![0.0; z.rows()], vec![0.0; z.cols()]);
    }
    let c = c / cmax;
    let col_max: Vec<f64> = (0..c.ncols()).map(|k| c.column(k).max()).collect();
    let mut starts = vec![vec![0.0; c.ncols()], col_max.clone()];
    for s in 0..restarts {
        let mut rng = substream(seed, s as u64);
        starts.push(col_max.iter().map(|m| m * rng.random::<f64>()).collect());
    }
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    for beta in starts {
        let (alpha, beta) = envelope_polish(&c, beta, q);
        let cost = pair_cost(&alpha, &beta, q);
        if best.as_ref().is_none_or(|b| cost < b.0) {
            best = Some((cost, alpha, beta));
        }
    }
    let (_, alpha, beta) = best.expect("at least one start");
    scaled_witness(alpha, beta, cmax)
}

/// `α = β = |u|²/2`, feasible for `u u*`.
pub fn rank_one_selfadjoint_witness(u: &[num_complex::Complex64]) -> Result<YqWitness> {
    let half: Vec<f64> = u.iter().map(|z| z.norm_sqr() / 2.0).collect();
    YqWitness::new(half.clone(), half)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PisierCheck {
    pub p: f64,
    /// Combined witness cost at exponent `p♭`.
    pub combined_cost: f64,
    pub bound: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Cost of a witness as an `S_2 → S_p` multiplier bound: the `ℓ^{p♭}` norms of
/// `α` and `β` combined by the triangle inequality (`p ≥ 1`) or the
/// `p`-triangle inequality (`p < 1`).
pub fn combined_cost(w: &YqWitness, p: PExponent) -> f64 {
    let (a, b) = (lp_norm(&w.alpha, p.flat()), lp_norm(&w.beta, p.flat()));
    if p.p() >= 1.0 {
        return a + b;
    }
    let top = a.max(b);
    if top == 0.0 {
        return 0.0;
    }
    top * ((a / top).powf(p.p()) + (b / top).powf(p.p())).powf(1.0 / p.p())
}

/// Compares `‖Z ⋆ B‖_{S_p}` with `combined_cost · ‖B‖_{S_2}`.
pub fn pisier_bound(w: &YqWitness, z: &ComplexMatrix, p: PExponent, b: &ComplexMatrix) -> Result<PisierCheck> {
    w.check_feasible(z)?;
    let combined = combined_cost(w, p);
    let bound = combined * schatten_norm(b, Exponent::Finite(2.0))?;
    let observed = schatten_norm(&schur_product(z, b)?, p.as_exponent())?;
    let tolerance = 1e-9;
    Ok(PisierCheck { p: p.p(), combined_cost: combined, bound, observed, tolerance, pass: observed <= bound + tolerance })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessRow {
    pub n: usize,
    /// `‖Z‖_{S_p} / ‖𝐈_N‖_{S_p}` for the flat unitary `Z`.
    pub mult_lower: f64,
    /// `N^{1/p − 1/2}`.
    pub mult_formula: f64,
    /// Cost of the witness `α ≡ 1`, `β ≡ 0`.
    pub yq_upper: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessTable {
    pub p: f64,
    pub q: Exponent,
    pub rows: Vec<SharpnessRow>,
    /// Least-squares slope of `log ratio` against `log N`.
    pub slope: f64,
    /// `1/p − 1/2 − 1/q`.
    pub expected_slope: f64,
}

/// Growth of the flat-unitary multiplier norm against its `𝒴_q` cost.
pub fn sharpness_experiment(p: PExponent, q: Exponent, sizes: &[usize]) -> Result<SharpnessTable> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidInput("sizes must be a nonempty list of positive counts".into()));
    }
    let sp = p.as_exponent();
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let z = flat_unitary_multiplier(n)?;
        let ones = ComplexMatrix::ones(n, n)?;
        let mult_lower = schatten_norm(&z, sp)? / schatten_norm(&ones, sp)?;
        let witness = YqWitness::new(vec![1.0; n], vec![0.0; n])?;
        witness.check_feasible(&z)?;
        let yq_upper = yq_cost(&witness, q);
        rows.push(SharpnessRow {
            n,
            mult_lower,
            mult_formula: (n as f64).powf(1.0 / p.p() - 0.5),
            yq_upper,
            ratio: mult_lower / yq_upper,
        });
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| ((r.n as f64).ln(), r.ratio.ln())).collect();
    Ok(SharpnessTable {
        p: p.p(),
        q,
        slope: least_squares_slope(&pts),
        expected_slope: 1.0 / p.p() - 0.5 - q.recip(),
        rows,
    })
}

/// Slope of the least-squares line through `pts`; `0` when fewer than two
/// distinct abscissae are present.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn fin(q: f64) -> Exponent {
        Exponent::Finite(q)
    }

    #[test]
    fn cost_examples() {
        let w = YqWitness::new(vec![1.0, 1.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(yq_cost(&w, fin(1.0)), 2.0);
        let w = YqWitness::new(vec![0.5, 0.5], vec![0.5, 0.5]).unwrap();
        assert_eq!(yq_cost(&w, fin(1.0)), 2.0);
        let w = YqWitness::new(vec![1.0], vec![1.0]).unwrap();
        assert_relative_eq!(yq_cost(&w, fin(0.5)), 4.0, max_relative = 1e-15);
        assert!(YqWitness::new(vec![-1.0], vec![0.0]).is_err());
    }

    #[test]
    fn stalled_alternation_instance() {
        // Envelope alternation alone stops at 1.9 here.
        let z = ComplexMatrix::from_real_row_major(2, 2, &[1.0, 0.9, 0.9, 0.0]).unwrap();
        let lp = yq_solve_lp(&z).unwrap();
        assert_relative_eq!(yq_cost(&lp, fin(1.0)), 1.8, max_relative = 1e-9);
        let cv = yq_solve_convex(&z, fin(1.0), 2, 0).unwrap();
        assert_relative_eq!(yq_cost(&cv, fin(1.0)), 1.8, max_relative = 1e-9);
    }

    #[test]
    fn solve_examples() {
        let ones = ComplexMatrix::ones(2, 2).unwrap();
        let w = yq_solve(&ones, fin(1.0), 4, 0).unwrap();
        assert!(w.is_feasible(&ones).unwrap());
        assert_relative_eq!(yq_cost(&w, fin(1.0)), 2.0, max_relative = 1e-9);

        let mu = [3.0, -1.0, 0.5];
        let d = ComplexMatrix::from_real_diagonal(&mu).unwrap();
        for q in [fin(0.5), fin(1.0), fin(2.0), fin(3.5), Exponent::INF] {
            let w = yq_solve(&d, q, 4, 1).unwrap();
            assert!(w.is_feasible(&d).unwrap());
            assert_relative_eq!(yq_cost(&w, q), lp_norm(&[3.0, 1.0, 0.5], q), max_relative = 1e-9);
        }

        let z = ComplexMatrix::from_row_major(1, 3, vec![Complex64::new(0.0, 2.0), Complex64::new(-5.0, 0.0), Complex64::new(1.0, 1.0)])
            .unwrap();
        assert_eq!(yq_cost(&yq_solve(&z, Exponent::INF, 0, 0).unwrap(), Exponent::INF), 5.0);
    }

    #[test]
    fn selfadjoint_witness() {
        let c = |re: f64| Complex64::new(re, 0.0);
        let w = rank_one_selfadjoint_witness(&[c(1.0)]).unwrap();
        assert_eq!(w.alpha(), &[0.5]);
        assert!(w.is_feasible(&ComplexMatrix::ones(1, 1).unwrap()).unwrap());
        let w = rank_one_selfadjoint_witness(&[c(1.0), c(1.0)]).unwrap();
        assert_eq!(yq_cost(&w, fin(1.0)), 2.0);
        let u = [c(2.0), c(0.0)];
        let w = rank_one_selfadjoint_witness(&u).unwrap();
        let z = ComplexMatrix::outer(&u, &[c(2.0), c(0.0)]).unwrap();
        assert_eq!(w.alpha(), &[2.0, 0.0]);
        assert_eq!(w.feasibility_gap(&z).unwrap(), 0.0);
    }

    #[test]
    fn pisier_examples() {
        let p = PExponent::new(1.0).unwrap();
        let ones = ComplexMatrix::ones(3, 3).unwrap();
        let w = YqWitness::new(vec![1.0; 3], vec![0.0; 3]).unwrap();
        let b = ComplexMatrix::identity(3).unwrap();
        let r = pisier_bound(&w, &ones, p, &b).unwrap();
        assert_relative_eq!(r.bound, 3.0, max_relative = 1e-14);
        assert!(r.pass);
        let r = pisier_bound(&w, &ones, p, &ComplexMatrix::zeros(3, 3).unwrap()).unwrap();
        assert_eq!(r.observed, 0.0);
        let bad = YqWitness::new(vec![0.5; 3], vec![0.0; 3]).unwrap();
        assert!(matches!(pisier_bound(&bad, &ones, p, &b), Err(Error::InvalidWitness(_))));
    }

    #[test]
    fn sharpness_examples() {
        let p = PExponent::new(0.5).unwrap();
        let t = sharpness_experiment(p, p.flat(), &[1, 2, 4, 8, 16]).unwrap();
        assert_relative_eq!(t.rows[0].ratio, 1.0, max_relative = 1e-12);
        assert!(t.slope.abs() < 1e-9);
        let t = sharpness_experiment(p, fin(2.0), &[2, 4, 8, 16]).unwrap();
        assert!((t.slope - 1.0).abs() < 0.05);
    }
}
