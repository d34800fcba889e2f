use proptest::prelude::*;
use schurmult::multiplier::{
    diagonal_extremal_witness, diagonal_multiplier_norm, flat_unitary_multiplier, multiplier_estimate,
    multiplier_lower_bound, witness_ratio,
};
use schurmult::norms::schatten_norm;
use schurmult::random::{gaussian_matrix, gaussian_vector, substream};
use schurmult::schur::schur_product;
use schurmult::{Complex64, ComplexMatrix, PExponent};

fn pe(p: f64) -> PExponent {
    PExponent::new(p).unwrap()
}

#[test]
fn lower_never_exceeds_upper() {
    for t in 0..12 {
        let mut rng = substream(21, t);
        let n = 2 + t as usize % 3;
        let a = gaussian_matrix(&mut rng, n, n + t as usize % 2).unwrap();
        for p in [0.5, 1.0] {
            let e = multiplier_estimate(&a, pe(p), 8, 100, t).unwrap();
            assert!(e.lower <= e.upper + 1e-9, "trial {t}, p = {p}: {} > {}", e.lower, e.upper);
            assert!(e.upper_certificate.is_some());
        }
    }
}

#[test]
fn diagonal_search_matches_closed_form() {
    for t in 0..20 {
        let mut rng = substream(22, t);
        let mu = gaussian_vector(&mut rng, 1 + t as usize % 6);
        let a = ComplexMatrix::from_diagonal(&mu).unwrap();
        for p in [0.3, 0.5, 0.8, 1.0] {
            let exact = diagonal_multiplier_norm(&mu, pe(p)).unwrap();
            let found = multiplier_lower_bound(&a, pe(p), 4, 100, t).unwrap().lower;
            assert!((found - exact).abs() <= 1e-9 * exact, "p = {p}: {found} vs {exact}");
        }
    }
}

#[test]
fn extremal_witness_attains_diagonal_norm() {
    for t in 0..20 {
        let mut rng = substream(23, t);
        let mu = gaussian_vector(&mut rng, 1 + t as usize % 8);
        let a = ComplexMatrix::from_diagonal(&mu).unwrap();
        for p in [0.3, 0.5, 0.8] {
            let b = diagonal_extremal_witness(&mu, pe(p)).unwrap();
            let exact = diagonal_multiplier_norm(&mu, pe(p)).unwrap();
            let ratio = witness_ratio(&a, &b, pe(p)).unwrap();
            assert!((ratio - exact).abs() <= 1e-9 * exact);
        }
    }
}

#[test]
fn estimates_are_homogeneous() {
    let mut rng = substream(24, 0);
    let a = gaussian_matrix(&mut rng, 3, 3).unwrap();
    let p = pe(0.5);
    let base = multiplier_estimate(&a, p, 8, 100, 1).unwrap();
    for c in [Complex64::new(2.5, 0.0), Complex64::new(0.0, -0.3), Complex64::new(1.0, 1.0)] {
        let scaled = multiplier_estimate(&a.scale(c), p, 8, 100, 1).unwrap();
        let m = c.norm();
        assert!((scaled.lower - m * base.lower).abs() <= 1e-12 * m * base.lower, "lower at c = {c}");
        assert!((scaled.upper - m * base.upper).abs() <= 1e-12 * m * base.upper, "upper at c = {c}");
    }
}

#[test]
fn estimates_are_permutation_invariant() {
    let perms = [[2, 0, 1], [1, 2, 0], [0, 2, 1]];
    let p = pe(0.5);
    for t in 0..4 {
        let mut rng = substream(25, t);
        let a = if t % 2 == 0 {
            gaussian_matrix(&mut rng, 3, 3).unwrap()
        } else {
            ComplexMatrix::from_diagonal(&gaussian_vector(&mut rng, 3)).unwrap()
        };
        let base = multiplier_estimate(&a, p, 8, 100, 2).unwrap();
        for perm in perms {
            let b = a.permuted(&perm, &perm).unwrap();
            let e = multiplier_estimate(&b, p, 8, 100, 2).unwrap();
            assert!((e.lower - base.lower).abs() <= 1e-9 * base.lower, "lower, trial {t}");
            assert!((e.upper - base.upper).abs() <= 1e-9 * base.upper, "upper, trial {t}");
        }
    }
}

#[test]
fn flat_unitary_chain() {
    for n in [2usize, 3, 4, 8] {
        let z = flat_unitary_multiplier(n).unwrap();
        for p in [0.5, 1.0] {
            let c = (n as f64).powf(1.0 / p - 0.5);
            for t in 0..25 {
                let mut rng = substream(26, t);
                let a = gaussian_matrix(&mut rng, n, n).unwrap();
                let lhs = schatten_norm(&schur_product(&z, &a).unwrap(), pe(p).as_exponent()).unwrap();
                assert!(lhs <= c * schatten_norm(&a, pe(p).as_exponent()).unwrap() + 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rank_one_probes_stay_below_diagonal_norm(
        mu in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 1..6),
        seed in any::<u64>(),
        p in prop::sample::select(vec![0.3, 0.5, 0.8]),
    ) {
        let mu: Vec<Complex64> = mu.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let a = ComplexMatrix::from_diagonal(&mu).unwrap();
        let bound = diagonal_multiplier_norm(&mu, pe(p)).unwrap();
        let mut rng = substream(seed, 0);
        for _ in 0..20 {
            let b = ComplexMatrix::outer(&gaussian_vector(&mut rng, mu.len()), &gaussian_vector(&mut rng, mu.len())).unwrap();
            if b.max_abs() > 0.0 {
                prop_assert!(witness_ratio(&a, &b, pe(p)).unwrap() <= bound + 1e-6);
            }
        }
    }
}
