//! Scripted experiments. Each one evaluates module-level checks and records
//! them as report rows; nothing here adds mathematics of its own.

use std::collections::BTreeMap;

use schurmult::doi::{
    doi_apply, doi_block_coherence_check, doi_s2_contraction_check, random_measure,
    weight_rescaling_invariance_check, SpectralPartition, SymbolGrid,
};
use schurmult::exponent::parse_real;
use schurmult::multiplier::{
    cb_multiplier_check, diagonal_extremal_witness, diagonal_multiplier_norm, multiplier_lower_bound, witness_ratio,
};
use schurmult::norms::{lp_norm, moduli};
use schurmult::ptensor::{
    direct_sum_decomposition, direct_sum_diagonal, direct_sum_multiplier, direct_sum_multiplier_norm,
    lower_bound_certificate, normalize, tensor_cost, TensorDecomposition, TensorTerm,
};
use schurmult::random::{complex_gaussian, gaussian_matrix, gaussian_vector, positive_vector, substream, unimodular};
use schurmult::schur::schur_product;
use schurmult::wp::{diagonal_wp_witness, wp_cost, wp_lower_bound, wp_multiplier_inequality_check};
use schurmult::yq::sharpness_experiment;
use schurmult::{Complex64, ComplexMatrix, Exponent, PExponent};

use crate::report::{ExperimentReport, Relation, ReportRow};
use crate::{parse_counts, parse_p, CliError};

pub const EXPERIMENTS: [&str; 5] = ["tensor-separation", "wp-separation", "yq-sharpness", "cb-check", "doi-reduction"];

/// Largest direct-sum dimension evaluated densely.
pub const MAX_DENSE_DIM: usize = 4096;

/// `key=value` parameters with defaults; every value actually used is recorded.
struct Params {
    given: BTreeMap<String, String>,
    used: BTreeMap<String, String>,
}

impl Params {
    fn parse(args: &[String]) -> Result<Self, CliError> {
        let mut given = BTreeMap::new();
        for a in args {
            let (k, v) = a
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("parameter '{a}' must look like key=value")))?;
            if given.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(CliError::Usage(format!("parameter '{k}' given twice")));
            }
        }
        Ok(Params { given, used: BTreeMap::new() })
    }

    fn raw(&mut self, key: &str, default: &str) -> String {
        let v = self.given.get(key).cloned().unwrap_or_else(|| default.to_string());
        self.used.insert(key.to_string(), v.clone());
        v
    }

    fn p(&mut self, default: &str) -> Result<PExponent, CliError> {
        parse_p(&self.raw("p", default))
    }

    fn count(&mut self, key: &str, default: usize) -> Result<usize, CliError> {
        let v = self.raw(key, &default.to_string());
        match v.parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Usage(format!("{key} must be a positive integer, got '{v}'"))),
        }
    }

    fn counts(&mut self, key: &str, default: &str) -> Result<Vec<usize>, CliError> {
        parse_counts(&self.raw(key, default), key)
    }

    fn reals(&mut self, key: &str, default: &str) -> Result<Vec<f64>, CliError> {
        self.raw(key, default)
            .split(',')
            .map(|t| parse_real(t).map_err(|e| CliError::Usage(format!("{key}: {e}"))))
            .collect()
    }

    fn exponent(&mut self, key: &str, default: &str) -> Result<Exponent, CliError> {
        self.raw(key, default).parse().map_err(|e: schurmult::Error| CliError::Usage(format!("{key}: {e}")))
    }

    /// Rejects keys the experiment never read.
    fn finish(self) -> Result<BTreeMap<String, String>, CliError> {
        if let Some(k) = self.given.keys().find(|k| !self.used.contains_key(*k)) {
            return Err(CliError::Usage(format!("unknown parameter '{k}'")));
        }
        Ok(self.used)
    }
}

pub fn run_experiment(name: &str, args: &[String], seed: u64) -> Result<ExperimentReport, CliError> {
    let mut params = Params::parse(args)?;
    let rows = match name {
        "tensor-separation" => tensor_separation(&mut params)?,
        "wp-separation" => wp_separation(&mut params, seed)?,
        "yq-sharpness" => yq_sharpness(&mut params)?,
        "cb-check" => cb_check(&mut params, seed)?,
        "doi-reduction" => doi_reduction(&mut params, seed)?,
        _ => {
            return Err(CliError::Usage(format!(
                "unknown experiment '{name}'; expected one of {}",
                EXPERIMENTS.join(", ")
            )))
        }
    };
    Ok(ExperimentReport::new(name, seed, params.finish()?, rows))
}

/// `n₁ = 1`, `n_{j+1} = ⌈4 (2m)^{1/(1−p)} n_j⌉`.
pub fn spaced_blocks(m: usize, p: PExponent) -> Vec<usize> {
    let factor = 4.0 * (2.0 * m as f64).powf(1.0 / (1.0 - p.p()));
    let mut blocks = vec![1usize];
    while blocks.len() < m {
        let next = (factor * *blocks.last().unwrap() as f64 - 1e-9).ceil();
        blocks.push(if next.is_finite() && next < 1e15 { next as usize } else { usize::MAX });
    }
    blocks
}

fn blocks_param(params: &mut Params, p: PExponent) -> Result<Vec<usize>, CliError> {
    p.require_below_one().map_err(|e| CliError::Usage(e.to_string()))?;
    let m = params.count("m", 2)?;
    let blocks = match params.given.contains_key("blocks") {
        true => params.counts("blocks", "")?,
        false => spaced_blocks(m, p),
    };
    if blocks.len() != m {
        return Err(CliError::Usage(format!("blocks lists {} sizes but m = {m}", blocks.len())));
    }
    let dim = blocks.iter().try_fold(0usize, |a, &n| a.checked_add(n)).unwrap_or(usize::MAX);
    if dim > MAX_DENSE_DIM {
        return Err(CliError::Usage(format!(
            "blocks {blocks:?} give dimension {dim}, above the dense limit {MAX_DENSE_DIM}"
        )));
    }
    params.used.insert("blocks".into(), blocks.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","));
    Ok(blocks)
}

fn spacing_rows(blocks: &[usize], p: PExponent) -> Vec<ReportRow> {
    let factor = 4.0 * (2.0 * blocks.len() as f64).powf(1.0 / (1.0 - p.p()));
    blocks
        .windows(2)
        .enumerate()
        .map(|(j, w)| ReportRow::new(format!("spacing-{}", j + 1), Relation::AtLeast, w[1] as f64 / w[0] as f64, factor, 0.0))
        .collect()
}

/// Certified `⊗_p` lower bound of the direct sum against its multiplier norm.
fn tensor_separation(params: &mut Params) -> Result<Vec<ReportRow>, CliError> {
    let p = params.p("1/2")?;
    let blocks = blocks_param(params, p)?;
    let m = blocks.len() as f64;
    let pv = p.p();
    let inv_sharp = p.sharp().recip();

    let d = direct_sum_decomposition(&blocks, p)?;
    let cert = lower_bound_certificate(&normalize(&d), &blocks, p, None, None)?;
    let mut rows = vec![ReportRow::new("reconstruction", Relation::AtMost, cert.evaluation_residual, 0.0, 1e-12)];
    rows.extend(spacing_rows(&blocks, p));
    for w in &cert.windows {
        rows.push(ReportRow::new(format!("window-n{}", w.block_size), Relation::AtLeast, w.window_sum, w.rhs, 1e-12));
    }
    rows.push(ReportRow::new("aggregate", Relation::AtLeast, cert.aggregate, cert.aggregate_target, 1e-9));
    let formula = 2f64.powf(-1.0 / pv) * m.powf(1.0 / pv);
    rows.push(ReportRow::new("tensor-lower-bound", Relation::RelEqual, cert.certified_lower_bound, formula, 1e-12));
    rows.push(ReportRow::new("decomposition-cost", Relation::AtLeast, tensor_cost(&d, p)?, cert.certified_lower_bound, 1e-9));

    let a = direct_sum_multiplier(&blocks, p)?;
    let mu = a.diagonal();
    let mult = m.powf(inv_sharp);
    rows.push(ReportRow::new("multiplier-norm", Relation::RelEqual, diagonal_multiplier_norm(&mu, p)?, mult, 1e-12));
    let witness = diagonal_extremal_witness(&mu, p)?;
    rows.push(ReportRow::new("multiplier-witness", Relation::RelEqual, witness_ratio(&a, &witness, p)?, mult, 1e-9));
    rows.push(ReportRow::new(
        "lower-over-multiplier",
        Relation::RelEqual,
        cert.certified_lower_bound / direct_sum_multiplier_norm(blocks.len(), p),
        2f64.powf(-1.0 / pv) * m.powf(1.0 / pv - inv_sharp),
        1e-12,
    ));
    Ok(rows)
}

/// Diagonal `𝒲_p` cost of the direct sum against the certified `⊗_p` bound,
/// plus the column-of-ones probe.
fn wp_separation(params: &mut Params, seed: u64) -> Result<Vec<ReportRow>, CliError> {
    let p = params.p("1/2")?;
    let blocks = blocks_param(params, p)?;
    let n = params.count("n", 8)?;
    let trials = params.count("trials", 50)?;
    let m = blocks.len() as f64;
    let pv = p.p();
    let sharp = p.sharp();

    let mu: Vec<Complex64> = direct_sum_diagonal(&blocks, p)?.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    let f = diagonal_wp_witness(&mu, p)?;
    let cost = wp_cost(&f, p)?;
    let mut rows = vec![ReportRow::new("wp-diagonal-cost", Relation::RelEqual, cost, m.powf(sharp.recip()), 1e-12)];
    rows.extend(spacing_rows(&blocks, p));

    let cert = lower_bound_certificate(&normalize(&direct_sum_decomposition(&blocks, p)?), &blocks, p, None, None)?;
    rows.push(ReportRow::new("aggregate", Relation::AtLeast, cert.aggregate, cert.aggregate_target, 1e-9));
    let lower = cert.certified_lower_bound;
    rows.push(ReportRow::new("tensor-lower-bound", Relation::RelEqual, lower, 2f64.powf(-1.0 / pv) * m.powf(1.0 / pv), 1e-12));
    if m > 2f64.powf(1.0 / pv) {
        rows.push(ReportRow::new("wp-below-tensor-lower", Relation::Below, cost, lower, 0.0));
    } else {
        rows.push(ReportRow::new("wp-not-below-tensor-lower", Relation::AtLeast, cost, lower, 0.0));
    }

    let w = f.evaluate();
    let entry_norm = lp_norm(&moduli(&w.row_major()), sharp.scaled(2.0));
    rows.push(ReportRow::new("entrywise-domination", Relation::AtMost, entry_norm, cost, 1e-9));
    rows.push(ReportRow::new("wp-lower-bound", Relation::AtMost, wp_lower_bound(&w, p, 1e-12)?, cost, 1e-12));
    let check = wp_multiplier_inequality_check(&f, p, trials, seed)?;
    rows.push(ReportRow::new("sandwich", Relation::AtMost, check.max_sandwich, cost, check.tolerance));
    rows.push(ReportRow::new("schur-action", Relation::AtMost, check.max_schur_ratio, cost, check.tolerance));

    let ones = ComplexMatrix::ones(n, 1)?;
    let probe = TensorDecomposition::new(n, 1, vec![TensorTerm::new(ones.column(0), vec![Complex64::new(1.0, 0.0)])])?;
    rows.push(ReportRow::new("column-of-ones-tensor-cost", Relation::Equal, tensor_cost(&probe, p)?, 1.0, 0.0));
    rows.push(ReportRow::new(
        "column-of-ones-wp-lower-bound",
        Relation::RelEqual,
        wp_lower_bound(&ones, p, 1e-12)?,
        (n as f64).powf(1.0 / (2.0 * sharp.value())),
        1e-12,
    ));
    Ok(rows)
}

/// Flat-unitary multiplier growth against its `𝒴_q` witness cost.
fn yq_sharpness(params: &mut Params) -> Result<Vec<ReportRow>, CliError> {
    let p = params.p("1/2")?;
    let q = params.exponent("q", "2")?;
    let sizes = params.counts("sizes", "2,4,8,16")?;
    let table = sharpness_experiment(p, q, &sizes)?;
    let mut rows: Vec<ReportRow> = table
        .rows
        .iter()
        .map(|r| ReportRow::new(format!("multiplier-ratio-n{}", r.n), Relation::RelEqual, r.mult_lower, r.mult_formula, 1e-9))
        .collect();
    if sizes.len() >= 2 {
        rows.push(ReportRow::new("slope", Relation::Equal, table.slope, table.expected_slope, 0.05));
    }
    Ok(rows)
}

/// Operator-block inputs against the scalar multiplier norm of a diagonal.
fn cb_check(params: &mut Params, seed: u64) -> Result<Vec<ReportRow>, CliError> {
    let p = params.p("1/2")?;
    p.require_at_most_one().map_err(|e| CliError::Usage(e.to_string()))?;
    let mu: Vec<Complex64> = params.reals("diag", "3,1,1")?.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    let block_dim = params.count("block_dim", 2)?;
    let trials = params.count("trials", 500)?;
    let a = ComplexMatrix::from_diagonal(&mu)?;
    let reference = diagonal_multiplier_norm(&mu, p)?;
    let search = multiplier_lower_bound(&a, p, 8, 200, seed)?;
    let mut rows = vec![ReportRow::new("scalar-reference", Relation::RelEqual, search.lower, reference, 1e-9)];
    let r = cb_multiplier_check(&a, p, block_dim, trials, seed, Some(reference))?;
    rows.push(ReportRow::new("block-ratio", Relation::AtMost, r.max_ratio, reference, r.tolerance));
    let r = doi_block_coherence_check(&a, p, block_dim, trials, seed, reference)?;
    rows.push(ReportRow::new("transformer-block-ratio", Relation::AtMost, r.max_ratio, reference, r.tolerance));
    Ok(rows)
}

/// Atomic transformers against Schur products and their algebraic identities.
fn doi_reduction(params: &mut Params, seed: u64) -> Result<Vec<ReportRow>, CliError> {
    let dim = params.count("dim", 5)?;
    let trials = params.count("trials", 100)?;
    let p = params.p("1/2")?;
    p.require_at_most_one().map_err(|e| CliError::Usage(e.to_string()))?;
    let single = SpectralPartition::singletons(dim);
    let (mut schur_dev, mut lin_dev, mut mult_dev, mut basis_dev) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for t in 0..trials {
        let mut rng = substream(seed, t as u64);
        let phi = gaussian_matrix(&mut rng, dim, dim)?;
        let q = gaussian_matrix(&mut rng, dim, dim)?;
        let grid = SymbolGrid::new(phi.clone())?;
        let out = doi_apply(&grid, &single, &single, &q)?;
        schur_dev = schur_dev.max(out.max_abs_diff(&schur_product(&phi, &q)?)?);

        let e1 = random_measure(&mut rng, dim)?;
        let e2 = random_measure(&mut rng, dim)?;
        let (n1, n2) = (e1.atom_count(), e2.atom_count());
        let phi1 = SymbolGrid::new(gaussian_matrix(&mut rng, n1, n2)?)?;
        let phi2 = SymbolGrid::new(gaussian_matrix(&mut rng, n1, n2)?)?;
        let q2 = gaussian_matrix(&mut rng, dim, dim)?;
        let (a, b) = (complex_gaussian(&mut rng), complex_gaussian(&mut rng));
        let lhs = doi_apply(&phi1, &e1, &e2, &q.scale(a).add(&q2.scale(b))?)?;
        let rhs = doi_apply(&phi1, &e1, &e2, &q)?.scale(a).add(&doi_apply(&phi1, &e1, &e2, &q2)?.scale(b))?;
        lin_dev = lin_dev.max(lhs.max_abs_diff(&rhs)?);
        let lhs = doi_apply(&phi1.pointwise(&phi2)?, &e1, &e2, &q)?;
        let rhs = doi_apply(&phi1, &e1, &e2, &doi_apply(&phi2, &e1, &e2, &q)?)?;
        mult_dev = mult_dev.max(lhs.max_abs_diff(&rhs)?);

        let u = e1.basis().expect("basis present").clone();
        let plain = SpectralPartition::new(dim, e1.atoms().to_vec(), None)?;
        let phi_sq = SymbolGrid::new(gaussian_matrix(&mut rng, n1, n1)?)?;
        let inner = u.adjoint().matmul(&q)?.matmul(&u)?;
        let expected = u.matmul(&doi_apply(&phi_sq, &plain, &plain, &inner)?)?.matmul(&u.adjoint())?;
        basis_dev = basis_dev.max(doi_apply(&phi_sq, &e1, &e1, &q)?.max_abs_diff(&expected)?);
    }
    let mut rows = vec![
        ReportRow::new("schur-reduction", Relation::AtMost, schur_dev, 0.0, 1e-14),
        ReportRow::new("linearity", Relation::AtMost, lin_dev, 0.0, 1e-12),
        ReportRow::new("multiplicativity", Relation::AtMost, mult_dev, 0.0, 1e-12),
        ReportRow::new("change-of-basis", Relation::AtMost, basis_dev, 0.0, 1e-10),
    ];

    let mut rng = substream(seed, trials as u64);
    let e1 = random_measure(&mut rng, dim)?;
    let phi = ComplexMatrix::from_fn(e1.atom_count(), dim, |_, _| unimodular(&mut rng))?;
    let r = doi_s2_contraction_check(&SymbolGrid::new(phi)?, &e1, &single, trials, seed)?;
    rows.push(ReportRow::new("s2-contraction", Relation::AtMost, r.max_ratio, 1.0, r.tolerance));

    let a = ComplexMatrix::from_diagonal(&gaussian_vector(&mut rng, dim))?;
    let (w1, w2) = (positive_vector(&mut rng, dim, 0.1, 10.0), positive_vector(&mut rng, dim, 0.1, 10.0));
    let r = weight_rescaling_invariance_check(&a, p, &w1, &w2, trials.min(30), seed)?;
    rows.push(ReportRow::new("weight-invariance", Relation::AtMost, r.max_weighted, r.best_unweighted, r.tolerance));
    Ok(rows)
}
