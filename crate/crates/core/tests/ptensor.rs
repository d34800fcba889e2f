use proptest::prelude::*;
use schurmult::multiplier::multiplier_lower_bound;
use schurmult::ptensor::{
    direct_sum_decomposition, direct_sum_multiplier, direct_sum_multiplier_norm, dft_identity_decomposition,
    dyadic_cost_bound, dyadic_diagonal_decomposition, lower_bound_certificate, normalize, spacing_hypothesis,
    tensor_cost, TensorDecomposition, TensorTerm,
};
use schurmult::random::{gaussian_vector, substream};
use schurmult::{Complex64, ComplexMatrix, PExponent};

fn pe(p: f64) -> PExponent {
    PExponent::new(p).unwrap()
}

fn random_decomposition(seed: u64, rows: usize, cols: usize, terms: usize) -> TensorDecomposition {
    let mut rng = substream(seed, 0);
    let t = (0..terms)
        .map(|_| TensorTerm::new(gaussian_vector(&mut rng, rows), gaussian_vector(&mut rng, cols)))
        .collect();
    TensorDecomposition::new(rows, cols, t).unwrap()
}

#[test]
fn fourier_identity_reconstructs() {
    for n in 1..=32 {
        let d = dft_identity_decomposition(n).unwrap();
        let err = d.evaluate().unwrap().max_abs_diff(&ComplexMatrix::identity(n).unwrap()).unwrap();
        assert!(err <= 1e-12, "n = {n}: {err}");
        for p in [0.3, 0.5, 0.8] {
            let expected = (n as f64).powf(1.0 / pe(p).sharp().finite().unwrap());
            let cost = tensor_cost(&d, pe(p)).unwrap();
            assert!((cost - expected).abs() <= 1e-12 * expected, "n = {n}, p = {p}");
        }
    }
}

#[test]
fn dyadic_bound_on_random_sequences() {
    for t in 0..100 {
        let mut rng = substream(31, t);
        let len = 1 + (t as usize * 7) % 64;
        let mu = gaussian_vector(&mut rng, len);
        let target = ComplexMatrix::from_diagonal(&mu).unwrap();
        for p in [0.3, 0.5, 0.8] {
            let d = dyadic_diagonal_decomposition(&mu, pe(p)).unwrap();
            assert!(d.evaluate().unwrap().max_abs_diff(&target).unwrap() <= 1e-12);
            let cost = tensor_cost(&d, pe(p)).unwrap().powf(p);
            assert!(cost <= dyadic_cost_bound(&mu, pe(p)) + 1e-9, "trial {t}, p = {p}");
        }
    }
}

#[test]
fn constructed_decompositions_dominate_search() {
    let p = pe(0.5);
    let mut rng = substream(32, 0);
    let mu = gaussian_vector(&mut rng, 5);
    let cases = vec![
        dft_identity_decomposition(4).unwrap(),
        dyadic_diagonal_decomposition(&mu, p).unwrap(),
        direct_sum_decomposition(&[1, 3], p).unwrap(),
        random_decomposition(33, 3, 4, 3),
    ];
    for d in cases {
        let w = d.evaluate().unwrap();
        let lower = multiplier_lower_bound(&w, p, 8, 100, 0).unwrap().lower;
        assert!(lower <= tensor_cost(&d, p).unwrap() + 1e-6);
    }
}

#[test]
fn certificates_for_spaced_blocks() {
    let p = pe(0.5);
    for blocks in [vec![1], vec![64], vec![1, 64]] {
        assert!(spacing_hypothesis(&blocks, p));
        let d = normalize(&direct_sum_decomposition(&blocks, p).unwrap());
        let r = lower_bound_certificate(&d, &blocks, p, None, None).unwrap();
        assert!(r.pass, "{blocks:?}: {r:?}");
        let m = blocks.len() as f64;
        assert!(r.aggregate >= m / 2.0 - 1e-9);
        assert!((r.certified_lower_bound - 0.5f64.powf(2.0) * m * m).abs() <= 1e-12);
        assert!((direct_sum_multiplier_norm(blocks.len(), p) - m).abs() <= 1e-12);
        let target = direct_sum_multiplier(&blocks, p).unwrap();
        assert!(d.evaluate().unwrap().max_abs_diff(&target).unwrap() <= 1e-12);
    }
}

#[test]
fn certificate_rejects_bad_input() {
    let p = pe(0.5);
    let d = normalize(&direct_sum_decomposition(&[1, 64], p).unwrap());
    assert!(lower_bound_certificate(&d, &[1, 63], p, None, None).is_err());
    assert!(lower_bound_certificate(&d, &[1, 64], p, Some(1.5), None).is_err());
    assert!(lower_bound_certificate(&d, &[1, 64], pe(1.0), None, None).is_err());
}

#[test]
fn json_round_trip() {
    let d = random_decomposition(34, 2, 3, 4);
    assert_eq!(TensorDecomposition::from_json(&d.to_json()).unwrap(), d);
    assert!(TensorDecomposition::from_json(r#"{"rows":2,"cols":1,"terms":[{"x":[[1,0]],"y":[[1,0]]}]}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn concatenation_is_p_subadditive(s1 in any::<u64>(), s2 in any::<u64>(), k1 in 0usize..5, k2 in 0usize..5, p in 0.1..=1.0f64) {
        let d1 = random_decomposition(s1, 3, 2, k1);
        let d2 = random_decomposition(s2, 3, 2, k2);
        let both = d1.concat(&d2).unwrap();
        let p = pe(p);
        let lhs = tensor_cost(&both, p).unwrap().powf(p.p());
        let rhs = tensor_cost(&d1, p).unwrap().powf(p.p()) + tensor_cost(&d2, p).unwrap().powf(p.p());
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
        let sum = d1.evaluate().unwrap().add(&d2.evaluate().unwrap()).unwrap();
        prop_assert!(both.evaluate().unwrap().max_abs_diff(&sum).unwrap() <= 1e-12);
    }

    #[test]
    fn normalization_preserves_matrix(s in any::<u64>(), k in 1usize..6) {
        let d = random_decomposition(s, 3, 3, k);
        let n = normalize(&d);
        prop_assert!(n.lambdas.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(n.evaluate().unwrap().max_abs_diff(&d.evaluate().unwrap()).unwrap() <= 1e-12);
        let p = 0.5;
        prop_assert!((n.power_sum(p) - tensor_cost(&d, pe(p)).unwrap().powf(p)).abs() <= 1e-12 * n.power_sum(p).max(1.0));
    }

    #[test]
    fn dyadic_handles_zeros(v in prop::collection::vec(prop::option::of(-2.0..2.0f64), 1..20)) {
        let mu: Vec<Complex64> = v.iter().map(|x| Complex64::new(x.unwrap_or(0.0), 0.0)).collect();
        let d = dyadic_diagonal_decomposition(&mu, pe(0.5)).unwrap();
        let err = d.evaluate().unwrap().max_abs_diff(&ComplexMatrix::from_diagonal(&mu).unwrap()).unwrap();
        prop_assert!(err <= 1e-12);
    }
}
