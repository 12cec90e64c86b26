//! Property tests for the invariants of the Hermitian core, the log-sum-exp calculus,
//! the spectral lift, and the campaign runner.

use gt_davis::campaign::{random_vector, trial_seed};
use gt_davis::check::log_trace_exp_excess;
use gt_davis::logsumexp::{lse_gradient_fd, psd_certify_default, GRADIENT_FD_STEP};
use gt_davis::spectral::check_symmetry_seeded;
use gt_davis::{
    conjugate, dkd_factorization, eigh, eigvalsh, gt_weak_check, lift_eval, load_matrix,
    log_trace_exp, lse, lse_hessian_analytic, matrix_exp, midpoint_convexity_residual,
    random_hermitian, random_unitary, run_campaign, save_matrix, softmax, trace_re,
    weighted_laplacian, CampaignConfig, CheckKind, EnsembleKind, EnsembleSpec, HermitianMatrix,
    SpectralFunction, SymmetricScalarFunction,
};
use proptest::prelude::*;

fn ensemble() -> impl Strategy<Value = EnsembleKind> {
    prop_oneof![
        Just(EnsembleKind::Gue),
        Just(EnsembleKind::Goe),
        Just(EnsembleKind::DiagonalUniform)
    ]
}

/// A sampled Hermitian matrix of dimension 1..=max_n with entry scale in [0.1, 10].
fn hermitian(max_n: usize) -> impl Strategy<Value = HermitianMatrix> {
    (ensemble(), 1..=max_n, 0.1f64..10.0, any::<u64>())
        .prop_map(|(kind, n, scale, seed)| random_hermitian(&EnsembleSpec::new(kind, n, scale, seed).unwrap()).unwrap())
}

fn pair(max_n: usize) -> impl Strategy<Value = (HermitianMatrix, HermitianMatrix)> {
    (ensemble(), 1..=max_n, 0.1f64..5.0, any::<u64>()).prop_map(|(kind, n, scale, seed)| {
        let spec = EnsembleSpec::new(kind, n, scale, seed).unwrap();
        (
            random_hermitian(&spec.with_seed(trial_seed(seed, 0))).unwrap(),
            random_hermitian(&spec.with_seed(trial_seed(seed, 1))).unwrap(),
        )
    })
}

fn vector(min_n: usize, max_n: usize, radius: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-radius..radius, min_n..=max_n)
}

fn max_abs_diff(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    (a.as_matrix() - b.as_matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn eigendecomposition_reconstructs(a in hermitian(32)) {
        let eig = eigh(&a).unwrap();
        let tol = 1e-10 * a.max_abs().max(1.0);
        prop_assert!(max_abs_diff(&eig.reconstruct(), &a) <= tol);
        prop_assert!(eig.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(eig.eigenvectors().deviation() <= 1e-10);
    }

    #[test]
    fn exponential_maps_spectrum(a in hermitian(12)) {
        let spectrum = eigvalsh(&a).unwrap();
        let exp_spectrum = eigvalsh(&matrix_exp(&a).unwrap()).unwrap();
        let top = spectrum.last().unwrap().exp();
        for (l, e) in spectrum.iter().zip(&exp_spectrum) {
            prop_assert!((l.exp() - e).abs() <= 1e-10 * top.max(1.0));
        }
    }

    #[test]
    fn conjugation_preserves_trace_and_spectrum(a in hermitian(16), seed in any::<u64>()) {
        let u = random_unitary(a.n(), seed).unwrap();
        let b = conjugate(&a, &u).unwrap();
        let scale = a.max_abs().max(1.0);
        prop_assert!((trace_re(&a) - trace_re(&b)).abs() <= 1e-12 * scale * a.n() as f64);
        for (x, y) in eigvalsh(&a).unwrap().iter().zip(eigvalsh(&b).unwrap()) {
            prop_assert!((x - y).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn lse_lies_between_max_and_max_plus_log_n(x in vector(1, 20, 500.0)) {
        let m = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let v = lse(&x).unwrap();
        prop_assert!(v >= m && v <= m + (x.len() as f64).ln() + 1e-12 * m.abs().max(1.0));
    }

    #[test]
    fn translation_invariance(x in vector(1, 12, 10.0), c in -10.0f64..10.0) {
        let shifted: Vec<f64> = x.iter().map(|v| v + c).collect();
        prop_assert!((lse(&shifted).unwrap() - lse(&x).unwrap() - c).abs() <= 1e-12);
        let (p, q) = (softmax(&x).unwrap(), softmax(&shifted).unwrap());
        for (a, b) in p.as_slice().iter().zip(q.as_slice()) {
            prop_assert!((a - b).abs() <= 1e-14);
        }
        let d = lse_hessian_analytic(&x).unwrap().max_abs_diff(&lse_hessian_analytic(&shifted).unwrap()).unwrap();
        prop_assert!(d <= 1e-14);
    }

    #[test]
    fn softmax_is_a_distribution_and_the_gradient(x in vector(1, 12, 20.0)) {
        let p = softmax(&x).unwrap();
        prop_assert!(p.as_slice().iter().all(|v| *v > 0.0));
        prop_assert!((p.as_slice().iter().sum::<f64>() - 1.0).abs() <= 1e-14);
        let g = lse_gradient_fd(&x, GRADIENT_FD_STEP).unwrap();
        for (a, b) in p.as_slice().iter().zip(&g) {
            prop_assert!((a - b).abs() <= 1e-7);
        }
    }

    #[test]
    fn hessian_is_weighted_laplacian(x in vector(1, 16, 20.0)) {
        let h = lse_hessian_analytic(&x).unwrap();
        prop_assert!(h.row_sums().iter().all(|s| s.abs() <= 1e-14));
        let l = weighted_laplacian(&softmax(&x).unwrap());
        prop_assert!(h.max_abs_diff(&l).unwrap() <= 1e-14);
    }

    #[test]
    fn dkd_matches_off_diagonal_only(x in vector(2, 10, 10.0)) {
        let h = lse_hessian_analytic(&x).unwrap();
        let (diag, off) = dkd_factorization(&x).unwrap().max_abs_diff_split(&h).unwrap();
        prop_assert!(off <= 1e-14);
        if !softmax(&x).unwrap().is_uniform() {
            prop_assert!(diag > 0.0);
        }
    }

    #[test]
    fn hessian_is_psd(x in vector(2, 16, 10.0)) {
        let cert = psd_certify_default(&lse_hessian_analytic(&x).unwrap()).unwrap();
        prop_assert!(cert.min_eigenvalue >= -1e-12);
        prop_assert_eq!(cert.nullspace_dim, 1);
    }

    #[test]
    fn log_trace_exp_excess_is_bounded(a in hermitian(16)) {
        let e = log_trace_exp_excess(&a).unwrap();
        let slop = 1e-12 * a.max_abs().max(1.0);
        prop_assert!(e >= -slop && e <= (a.n() as f64).ln() + slop);
    }

    #[test]
    fn scalar_identities_give_slack_log_n(n in 1usize..20, a in -50.0f64..50.0, b in -50.0f64..50.0) {
        let r = gt_weak_check(
            &HermitianMatrix::scalar(n, a).unwrap(),
            &HermitianMatrix::scalar(n, b).unwrap(),
            1e-10,
        ).unwrap();
        prop_assert!((r.slack - (n as f64).ln()).abs() <= 1e-12 * (a.abs() + b.abs()).max(1.0));
    }

    #[test]
    fn golden_thompson_holds((a, b) in pair(10)) {
        prop_assert!(gt_weak_check(&a, &b, 1e-10).unwrap().pass);
    }

    #[test]
    fn lifted_convex_functions_are_convex((a, b) in pair(8), name in prop::sample::select(vec!["lse", "max", "sum", "pnorm:2", "pnorm:3"])) {
        let f = SpectralFunction::lift(SymmetricScalarFunction::builtin(name).unwrap());
        let chord_scale = lift_eval(&f, &a).unwrap().abs().max(lift_eval(&f, &b).unwrap().abs()).max(1.0);
        prop_assert!(midpoint_convexity_residual(&f, &a, &b).unwrap() >= -1e-10 * chord_scale);
    }

    #[test]
    fn builtins_are_symmetric(x in vector(1, 12, 50.0), seed in any::<u64>(), name in prop::sample::select(vec!["lse", "max", "min", "sum", "pnorm:1", "pnorm:2"])) {
        let f = SymmetricScalarFunction::builtin(name).unwrap();
        prop_assert!(check_symmetry_seeded(&f, &x, 100, 1e-12, seed).unwrap().pass);
    }

    #[test]
    fn matrix_files_round_trip_bit_exactly(a in hermitian(10)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.json");
        save_matrix(&path, &a).unwrap();
        let back = load_matrix(&path).unwrap();
        prop_assert_eq!(back.n(), a.n());
        for i in 0..a.n() {
            for j in 0..a.n() {
                let (x, y) = (a.get(i, j), back.get(i, j));
                prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
                prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn campaigns_are_deterministic(kind in prop::sample::select(vec![CheckKind::GtWeak, CheckKind::MidpointConvexity, CheckKind::HessianPsd, CheckKind::UnitaryInvariance]), n in 1usize..8, seed in any::<u64>()) {
        let spec = EnsembleSpec::new(EnsembleKind::Gue, n, 1.0, seed).unwrap();
        let config = CampaignConfig::new(kind, spec, 50, 1e-10);
        let serial = run_campaign(&config).unwrap();
        let parallel = run_campaign(&config.clone().parallel(true)).unwrap();
        prop_assert_eq!(serial.to_json_without_wall_time(), parallel.to_json_without_wall_time());
        prop_assert_eq!(serial.violations, 0);
    }
}

/// Forward direction of the lift on sampled data: f convex on R^n (midpoint residual
/// never negative) goes with F convex on Hermitian matrices.
#[test]
fn convexity_transfers_through_the_lift() {
    for name in ["lse", "max", "sum", "pnorm:2"] {
        let f = SymmetricScalarFunction::builtin(name).unwrap();
        let lifted = SpectralFunction::lift(f.clone());
        for i in 0..10_000u64 {
            let n = 2 + (i % 7) as usize;
            let seed = trial_seed(0xC0FFEE, i);
            let spec = EnsembleSpec::new(EnsembleKind::Gue, n, 1.0, seed).unwrap();
            let x = random_vector(&spec.with_seed(trial_seed(seed, 0))).unwrap();
            let y = random_vector(&spec.with_seed(trial_seed(seed, 1))).unwrap();
            let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
            let scalar = 0.5 * (f.evaluate(&x).unwrap() + f.evaluate(&y).unwrap()) - f.evaluate(&mid).unwrap();
            assert!(scalar >= -1e-12, "{name}: scalar residual {scalar}");

            let a = random_hermitian(&spec.with_seed(trial_seed(seed, 2))).unwrap();
            let b = random_hermitian(&spec.with_seed(trial_seed(seed, 3))).unwrap();
            let residual = midpoint_convexity_residual(&lifted, &a, &b).unwrap();
            assert!(residual >= -1e-10, "{name}: lifted residual {residual} at trial {i}");
        }
    }
}

#[test]
fn log_trace_exp_of_zero_is_log_n() {
    for n in 1..=64 {
        let z = HermitianMatrix::zeros(n).unwrap();
        assert!((log_trace_exp(&z).unwrap() - (n as f64).ln()).abs() <= 1e-15);
    }
}
