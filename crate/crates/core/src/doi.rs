//! Double operator integrals over finite atomic spectral measures.
//!
//! A spectral measure on `ℂ^dim` is stored diagonalized: a partition of the
//! coordinate indices into atoms plus an optional unitary basis. Atom `i`
//! projects onto the span of the basis columns listed in `atoms[i]`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{shape_err, Error, Result};
use crate::exponent::{Exponent, PExponent};
use crate::matrix::ComplexMatrix;
use crate::multiplier::{multiplier_lower_bound, witness_ratio, CbReport, DEFAULT_ITERS, DEFAULT_RESTARTS};
use crate::norms::schatten_norm;
use crate::random::{complex_gaussian, gaussian_matrix, gaussian_vector, random_unitary, substream, unitarity_defect};

/// Largest admissible `‖UᴴU − I‖` for a supplied basis.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralPartition {
    dim: usize,
    atoms: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<ComplexMatrix>,
}

#[derive(Deserialize)]
struct RawPartition {
    dim: usize,
    atoms: Vec<Vec<usize>>,
    #[serde(default)]
    basis: Option<ComplexMatrix>,
}

impl<'de> Deserialize<'de> for SpectralPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPartition::deserialize(d)?;
        SpectralPartition::new(raw.dim, raw.atoms, raw.basis).map_err(serde::de::Error::custom)
    }
}

impl SpectralPartition {
    pub fn new(dim: usize, atoms: Vec<Vec<usize>>, basis: Option<ComplexMatrix>) -> Result<Self> {
        let mut seen = vec![false; dim];
        for atom in &atoms {
            if atom.is_empty() {
                return Err(Error::InvalidInput("atoms must be nonempty".into()));
            }
            for &i in atom {
                if i >= dim {
                    return Err(Error::InvalidInput(format!("atom index {i} out of range for dimension {dim}")));
                }
                if seen[i] {
                    return Err(Error::InvalidInput(format!("index {i} appears in more than one atom")));
                }
                seen[i] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInput(format!("index {i} is not covered by any atom")));
        }
        if let Some(u) = &basis {
            if u.shape() != (dim, dim) {
                return shape_err(format!("basis must be {dim}x{dim}, got {}x{}", u.rows(), u.cols()));
            }
            let defect = unitarity_defect(u.as_dmatrix());
            if defect > UNITARY_TOL {
                return Err(Error::InvalidInput(format!("basis is not unitary (defect {defect:.3e})")));
            }
        }
        Ok(SpectralPartition { dim, atoms, basis })
    }

    /// One atom per coordinate, standard basis.
    pub fn singletons(dim: usize) -> Self {
        SpectralPartition { dim, atoms: (0..dim).map(|i| vec![i]).collect(), basis: None }
    }

    /// Consecutive atoms of size `block_dim`, the measure `E(Δ){u_n} = {1_Δ(n) u_n}`
    /// on `ℓ²` with values in `ℂ^block_dim`.
    pub fn blocks(count: usize, block_dim: usize) -> Result<Self> {
        if block_dim == 0 {
            return Err(Error::InvalidInput("block dimension must be positive".into()));
        }
        let atoms = (0..count).map(|n| (n * block_dim..(n + 1) * block_dim).collect()).collect();
        SpectralPartition::new(count * block_dim, atoms, None)
    }

    /// Same atoms, rotated into the basis `u`.
    pub fn with_basis(&self, u: ComplexMatrix) -> Result<Self> {
        SpectralPartition::new(self.dim, self.atoms.clone(), Some(u))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Vec<usize>] {
        &self.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn basis(&self) -> Option<&ComplexMatrix> {
        self.basis.as_ref()
    }

    /// `labels[i]` is the atom containing coordinate `i`.
    fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.dim];
        for (a, atom) in self.atoms.iter().enumerate() {
            for &i in atom {
                labels[i] = a;
            }
        }
        labels
    }

    /// Orthogonal projection onto atom `i`.
    pub fn projection(&self, i: usize) -> Result<ComplexMatrix> {
        let atom = self
            .atoms
            .get(i)
            .ok_or_else(|| Error::InvalidInput(format!("atom {i} does not exist")))?;
        let d: Vec<f64> = (0..self.dim).map(|j| if atom.contains(&j) { 1.0 } else { 0.0 }).collect();
        let e = ComplexMatrix::from_real_diagonal(&d)?;
        match &self.basis {
            None => Ok(e),
            Some(u) => u.matmul(&e)?.matmul(&u.adjoint()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("partition serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Random partition of `0..dim` into between one and `dim` atoms, rotated by
/// a Haar unitary.
pub fn random_measure<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<SpectralPartition> {
    if dim == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let count = rng.random_range(1..=dim);
    let mut atoms: Vec<Vec<usize>> = (0..count).map(|a| vec![a]).collect();
    for i in count..dim {
        atoms[rng.random_range(0..count)].push(i);
    }
    SpectralPartition::new(dim, atoms, Some(random_unitary(rng, dim)?))
}

/// Values `φ(i, j)` indexed by (atom of `E₁`) × (atom of `E₂`).
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SymbolGrid {
    values: ComplexMatrix,
}

impl<'de> Deserialize<'de> for SymbolGrid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SymbolGrid::new(ComplexMatrix::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl SymbolGrid {
    pub fn new(values: ComplexMatrix) -> Result<Self> {
        if values.as_dmatrix().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("symbol values must be finite".into()));
        }
        Ok(SymbolGrid { values })
    }

    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        SymbolGrid::new(ComplexMatrix::ones(rows, cols)?)
    }

    pub fn values(&self) -> &ComplexMatrix {
        &self.values
    }

    pub fn shape(&self) -> (usize, usize) {
        self.values.shape()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.max_abs()
    }

    /// Pointwise product `φ₁ φ₂`.
    pub fn pointwise(&self, other: &SymbolGrid) -> Result<SymbolGrid> {
        SymbolGrid::new(crate::schur::schur_product(&self.values, &other.values)?)
    }
}

/// `Σ_{i,j} φ(i, j) P_i Q R_j` with `P_i`, `R_j` the atom projections of `E₁`, `E₂`.
pub fn doi_apply(phi: &SymbolGrid, e1: &SpectralPartition, e2: &SpectralPartition, q: &ComplexMatrix) -> Result<ComplexMatrix> {
    if q.shape() != (e1.dim, e2.dim) {
        return shape_err(format!(
            "operand is {}x{} but the measures act on dimensions {} and {}",
            q.rows(),
            q.cols(),
            e1.dim,
            e2.dim
        ));
    }
    if phi.shape() != (e1.atom_count(), e2.atom_count()) {
        return shape_err(format!(
            "symbol is {}x{} but the measures have {} and {} atoms",
            phi.shape().0,
            phi.shape().1,
            e1.atom_count(),
            e2.atom_count()
        ));
    }
    let mut m: DMatrix<Complex64> = q.as_dmatrix().clone();
    if let Some(u) = &e1.basis {
        m = u.as_dmatrix().adjoint() * m;
    }
    if let Some(v) = &e2.basis {
        m *= v.as_dmatrix();
    }
    let (l1, l2) = (e1.labels(), e2.labels());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            m[(r, c)] *= phi.values.get(l1[r], l2[c]);
        }
    }
    if let Some(u) = &e1.basis {
        m = u.as_dmatrix() * m;
    }
    if let Some(v) = &e2.basis {
        m *= v.as_dmatrix().adjoint();
    }
    ComplexMatrix::from_dmatrix(m)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub trials: usize,
    pub sup_phi: f64,
    /// Extremes of `‖doi_apply(φ, Q)‖_{S₂}` over random `Q` with `‖Q‖_{S₂} = 1`.
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks `‖doi_apply(φ, Q)‖_{S₂} ≤ ‖Q‖_{S₂}` on seeded Gaussian `Q`.
pub fn doi_s2_contraction_check(
    phi: &SymbolGrid,
    e1: &SpectralPartition,
    e2: &SpectralPartition,
    trials: usize,
    seed: u64,
) -> Result<ContractionReport> {
    let sup_phi = phi.sup_norm();
    if sup_phi > 1.0 + 1e-12 {
        return Err(Error::InvalidInput(format!("symbol must satisfy sup |phi| <= 1, got {sup_phi}")));
    }
    let two = Exponent::Finite(2.0);
    let (mut max_ratio, mut min_ratio) = (0.0_f64, f64::INFINITY);
    for t in 0..trials {
        let mut rng = substream(seed, t as u64);
        let q = gaussian_matrix(&mut rng, e1.dim, e2.dim)?;
        let norm = schatten_norm(&q, two)?;
        if norm == 0.0 {
            continue;
        }
        let q = q.scale(Complex64::new(1.0 / norm, 0.0));
        let ratio = schatten_norm(&doi_apply(phi, e1, e2, &q)?, two)?;
        max_ratio = max_ratio.max(ratio);
        min_ratio = min_ratio.min(ratio);
    }
    let tolerance = 1e-10;
    Ok(ContractionReport {
        trials,
        sup_phi,
        max_ratio,
        min_ratio,
        tolerance,
        pass: max_ratio <= 1.0 + tolerance,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightInvarianceReport {
    pub p: f64,
    pub trials: usize,
    /// Best unweighted ratio: the seeded search plus every unweighted trial.
    pub best_unweighted: f64,
    /// Largest ratio seen on weighted inputs `D₁ B D₂`.
    pub max_weighted: f64,
    /// Ratio at `D₁ (D₁⁻¹ W D₂⁻¹) D₂` for the best unweighted witness `W`.
    pub preimage_ratio: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn sqrt_weights(w: &[f64], n: usize, name: &str) -> Result<Vec<f64>> {
    if w.len() != n {
        return shape_err(format!("{name} has length {} but {n} is required", w.len()));
    }
    if w.iter().any(|x| !x.is_finite() || *x <= 0.0) {
        return Err(Error::InvalidInput(format!("{name} must be strictly positive")));
    }
    Ok(w.iter().map(|x| x.sqrt()).collect())
}

fn rescale(b: &ComplexMatrix, d1: &[f64], d2: &[f64]) -> Result<ComplexMatrix> {
    ComplexMatrix::from_fn(b.rows(), b.cols(), |j, k| b.get(j, k) * (d1[j] * d2[k]))
}

/// Compares `‖A ⋆ (D₁ B D₂)‖_{S_p} / ‖D₁ B D₂‖_{S_p}` with the best ratio found
/// for unweighted `B`, where `D_i = diag(weights_i^{1/2})`.
pub fn weight_rescaling_invariance_check(
    a: &ComplexMatrix,
    p: PExponent,
    weights1: &[f64],
    weights2: &[f64],
    trials: usize,
    seed: u64,
) -> Result<WeightInvarianceReport> {
    p.require_at_most_one()?;
    let d1 = sqrt_weights(weights1, a.rows(), "weights1")?;
    let d2 = sqrt_weights(weights2, a.cols(), "weights2")?;
    let search = multiplier_lower_bound(a, p, DEFAULT_RESTARTS, DEFAULT_ITERS, seed)?;
    let witness = search.lower_witness.expect("search returns a witness");
    let mut best_unweighted = search.lower;

    let inv1: Vec<f64> = d1.iter().map(|x| 1.0 / x).collect();
    let inv2: Vec<f64> = d2.iter().map(|x| 1.0 / x).collect();
    let preimage = rescale(&witness, &inv1, &inv2)?;
    let preimage_ratio = witness_ratio(a, &rescale(&preimage, &d1, &d2)?, p)?;
    let mut max_weighted = preimage_ratio;

    let (r, c) = a.shape();
    for t in 0..trials {
        let mut rng = substream(seed, (1 << 32) + t as u64);
        let b = match t % 3 {
            0 => gaussian_matrix(&mut rng, r, c)?,
            1 => ComplexMatrix::outer(&gaussian_vector(&mut rng, r), &gaussian_vector(&mut rng, c))?,
            _ => {
                let eps = 1e-2;
                ComplexMatrix::from_fn(r, c, |j, k| witness.get(j, k) + complex_gaussian(&mut rng) * eps)?
            }
        };
        if b.max_abs() == 0.0 {
            continue;
        }
        best_unweighted = best_unweighted.max(witness_ratio(a, &b, p)?);
        max_weighted = max_weighted.max(witness_ratio(a, &rescale(&b, &d1, &d2)?, p)?);
    }
    let tolerance = 1e-6;
    Ok(WeightInvarianceReport {
        p: p.p(),
        trials,
        best_unweighted,
        max_weighted,
        preimage_ratio,
        tolerance,
        pass: max_weighted <= best_unweighted + tolerance,
    })
}

/// Operator-valued form of the multiplier check: the transformer of the block
/// measures `E(Δ){u_n} = {1_Δ(n) u_n}` applied to random `Q`, compared with
/// the scalar multiplier norm `reference`.
pub fn doi_block_coherence_check(
    a: &ComplexMatrix,
    p: PExponent,
    block_dim: usize,
    trials: usize,
    seed: u64,
    reference: f64,
) -> Result<CbReport> {
    p.require_at_most_one()?;
    let e1 = SpectralPartition::blocks(a.rows(), block_dim)?;
    let e2 = SpectralPartition::blocks(a.cols(), block_dim)?;
    let phi = SymbolGrid::new(a.clone())?;
    let sp = p.as_exponent();
    let mut max_ratio = 0.0_f64;
    for t in 0..trials {
        let mut rng = substream(seed, t as u64);
        let q = match t % 3 {
            0 => gaussian_matrix(&mut rng, e1.dim, e2.dim)?,
            1 => ComplexMatrix::outer(&gaussian_vector(&mut rng, e1.dim), &gaussian_vector(&mut rng, e2.dim))?,
            _ => {
                let u = random_unitary(&mut rng, e1.dim)?;
                let g = gaussian_matrix(&mut rng, e1.dim, e2.dim)?;
                u.matmul(&ComplexMatrix::from_fn(e1.dim, e2.dim, |j, k| if j == k { g.get(j, k) } else { crate::matrix::ZERO })?)?
            }
        };
        let denom = schatten_norm(&q, sp)?;
        if denom == 0.0 {
            continue;
        }
        max_ratio = max_ratio.max(schatten_norm(&doi_apply(&phi, &e1, &e2, &q)?, sp)? / denom);
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur::{block_schur_product, inflate, schur_product, BlockMatrix};

    fn rng(k: u64) -> rand_chacha::ChaCha8Rng {
        substream(7, k)
    }

    #[test]
    fn partition_validation() {
        assert!(SpectralPartition::new(3, vec![vec![0, 2], vec![1]], None).is_ok());
        assert!(SpectralPartition::new(3, vec![vec![0, 1], vec![1, 2]], None).is_err());
        assert!(SpectralPartition::new(3, vec![vec![0], vec![1]], None).is_err());
        assert!(SpectralPartition::new(2, vec![vec![0], vec![], vec![1]], None).is_err());
        assert!(SpectralPartition::new(2, vec![vec![0, 3]], None).is_err());
        let bad = ComplexMatrix::from_real_row_major(2, 2, &[1.0, 0.0, 0.0, 2.0]).unwrap();
        assert!(SpectralPartition::new(2, vec![vec![0, 1]], Some(bad)).is_err());
    }

    #[test]
    fn partition_json_round_trip() {
        let u = random_unitary(&mut rng(0), 3).unwrap();
        let e = SpectralPartition::new(3, vec![vec![1], vec![0, 2]], Some(u)).unwrap();
        let back = SpectralPartition::from_json(&e.to_json()).unwrap();
        assert_eq!(back.atoms(), e.atoms());
        assert!(back.basis().unwrap().max_abs_diff(e.basis().unwrap()).unwrap() < 1e-15);
        let plain = SpectralPartition::from_json(r#"{"dim":2,"atoms":[[1],[0]]}"#).unwrap();
        assert!(plain.basis().is_none());
        assert!(SpectralPartition::from_json(r#"{"dim":2,"atoms":[[0]]}"#).is_err());
    }

    #[test]
    fn constant_symbol_is_identity() {
        let mut g = rng(1);
        let u = random_unitary(&mut g, 4).unwrap();
        let e1 = SpectralPartition::new(4, vec![vec![0, 3], vec![1], vec![2]], Some(u)).unwrap();
        let e2 = SpectralPartition::singletons(5);
        let q = gaussian_matrix(&mut g, 4, 5).unwrap();
        let out = doi_apply(&SymbolGrid::ones(3, 5).unwrap(), &e1, &e2, &q).unwrap();
        assert!(out.max_abs_diff(&q).unwrap() < 1e-13);
    }

    #[test]
    fn singletons_give_schur_product() {
        let mut g = rng(2);
        let phi = gaussian_matrix(&mut g, 3, 4).unwrap();
        let q = gaussian_matrix(&mut g, 3, 4).unwrap();
        let out = doi_apply(
            &SymbolGrid::new(phi.clone()).unwrap(),
            &SpectralPartition::singletons(3),
            &SpectralPartition::singletons(4),
            &q,
        )
        .unwrap();
        assert_eq!(out, schur_product(&phi, &q).unwrap());
    }

    #[test]
    fn matches_projection_sum() {
        let mut g = rng(3);
        let u = random_unitary(&mut g, 4).unwrap();
        let v = random_unitary(&mut g, 3).unwrap();
        let e1 = SpectralPartition::new(4, vec![vec![2], vec![0, 1, 3]], Some(u)).unwrap();
        let e2 = SpectralPartition::new(3, vec![vec![0, 2], vec![1]], Some(v)).unwrap();
        let phi = SymbolGrid::new(gaussian_matrix(&mut g, 2, 2).unwrap()).unwrap();
        let q = gaussian_matrix(&mut g, 4, 3).unwrap();
        let mut expected = ComplexMatrix::zeros(4, 3).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let term = e1.projection(i).unwrap().matmul(&q).unwrap().matmul(&e2.projection(j).unwrap()).unwrap();
                expected = expected.add(&term.scale(phi.values().get(i, j))).unwrap();
            }
        }
        let out = doi_apply(&phi, &e1, &e2, &q).unwrap();
        assert!(out.max_abs_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn change_of_basis() {
        let mut g = rng(4);
        let u = random_unitary(&mut g, 5).unwrap();
        let atoms = vec![vec![0, 4], vec![1, 2], vec![3]];
        let plain = SpectralPartition::new(5, atoms.clone(), None).unwrap();
        let rotated = plain.with_basis(u.clone()).unwrap();
        let phi = SymbolGrid::new(gaussian_matrix(&mut g, 3, 3).unwrap()).unwrap();
        let q = gaussian_matrix(&mut g, 5, 5).unwrap();
        let inner = u.adjoint().matmul(&q).unwrap().matmul(&u).unwrap();
        let expected = u.matmul(&doi_apply(&phi, &plain, &plain, &inner).unwrap()).unwrap().matmul(&u.adjoint()).unwrap();
        let out = doi_apply(&phi, &rotated, &rotated, &q).unwrap();
        assert!(out.max_abs_diff(&expected).unwrap() < 1e-10);
    }

    #[test]
    fn shape_errors() {
        let e = SpectralPartition::singletons(2);
        let q = ComplexMatrix::zeros(2, 3).unwrap();
        assert!(doi_apply(&SymbolGrid::ones(2, 2).unwrap(), &e, &e, &q).is_err());
        let q = ComplexMatrix::zeros(2, 2).unwrap();
        assert!(doi_apply(&SymbolGrid::ones(2, 3).unwrap(), &e, &e, &q).is_err());
    }

    #[test]
    fn contraction_examples() {
        let e = SpectralPartition::singletons(4);
        let r = doi_s2_contraction_check(&SymbolGrid::ones(4, 4).unwrap(), &e, &e, 10, 0).unwrap();
        assert!(r.pass && (r.max_ratio - 1.0).abs() < 1e-12 && (r.min_ratio - 1.0).abs() < 1e-12);

        let mut g = rng(5);
        let phi = ComplexMatrix::from_fn(4, 4, |_, _| crate::random::unimodular(&mut g)).unwrap();
        let r = doi_s2_contraction_check(&SymbolGrid::new(phi).unwrap(), &e, &e, 10, 0).unwrap();
        assert!(r.pass);

        let mut vals = vec![1.0; 16];
        vals[5] = 0.0;
        let phi = SymbolGrid::new(ComplexMatrix::from_real_row_major(4, 4, &vals).unwrap()).unwrap();
        let r = doi_s2_contraction_check(&phi, &e, &e, 10, 0).unwrap();
        assert!(r.pass && r.max_ratio < 1.0);

        let big = SymbolGrid::new(ComplexMatrix::from_real_row_major(1, 1, &[2.0]).unwrap()).unwrap();
        let e1 = SpectralPartition::singletons(1);
        assert!(doi_s2_contraction_check(&big, &e1, &e1, 1, 0).is_err());
    }

    #[test]
    fn weight_invariance_examples() {
        let p = PExponent::new(0.5).unwrap();
        let a = ComplexMatrix::from_real_diagonal(&[2.0, 1.0, 1.0]).unwrap();
        let r = weight_rescaling_invariance_check(&a, p, &[1.0; 3], &[1.0; 3], 6, 3).unwrap();
        assert!(r.pass);
        assert!((r.preimage_ratio - r.best_unweighted).abs() < 1e-9);

        let r = weight_rescaling_invariance_check(&a, p, &[0.1, 5.0, 2.0], &[3.0, 0.2, 1.0], 6, 3).unwrap();
        let target = 4.0;
        assert!(r.pass);
        assert!((r.best_unweighted - target).abs() < 1e-6);

        assert!(weight_rescaling_invariance_check(&a, p, &[1.0, 0.0, 1.0], &[1.0; 3], 1, 0).is_err());
        assert!(weight_rescaling_invariance_check(&a, p, &[1.0; 2], &[1.0; 3], 1, 0).is_err());
    }

    #[test]
    fn block_measures_match_block_schur() {
        let mut g = rng(6);
        let a = gaussian_matrix(&mut g, 2, 3).unwrap();
        let q = gaussian_matrix(&mut g, 4, 6).unwrap();
        let e1 = SpectralPartition::blocks(2, 2).unwrap();
        let e2 = SpectralPartition::blocks(3, 2).unwrap();
        let out = doi_apply(&SymbolGrid::new(a.clone()).unwrap(), &e1, &e2, &q).unwrap();
        let expected = block_schur_product(&a, &BlockMatrix::from_flat(&q, 2).unwrap()).unwrap().flatten();
        assert!(out.max_abs_diff(&expected).unwrap() < 1e-15);
        assert!(out.max_abs_diff(&schur_product(&inflate(&a, 2).unwrap(), &q).unwrap()).unwrap() < 1e-15);

        let p = PExponent::new(0.5).unwrap();
        let d = ComplexMatrix::from_real_diagonal(&[1.0, 1.0]).unwrap();
        let r = doi_block_coherence_check(&d, p, 2, 30, 1, 2.0).unwrap();
        assert!(r.pass);
    }
}
