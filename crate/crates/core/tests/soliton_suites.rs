//! Soliton-level suites: the R^3 fixture end to end, refit idempotence,
//! the two assemblies of the fundamental equation, and the pure-arithmetic
//! theorem batteries.

mod common;

use geoverify_core::expr::parse;
use geoverify_core::fixtures::load_bundled;
use geoverify_core::sampling::{sample_points, Sampling};
use geoverify_core::solitons::{
    classify_lambda_values, classify_soliton, codazzi_q_pairs, norm_bounds_check,
    potential_laplacian_identity, solve_soliton, soliton_residual, SolitonClass,
};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn example2_fit_recovers_declared_functions_on_50_points() {
    let spec = load_bundled("example2-r3").unwrap();
    let s = spec.structure.as_ref().unwrap();
    let points: Vec<Vec<f64>> = sample_points(&spec.chart, &spec.sampling);
    assert_eq!(points.len(), 50);
    let mut fits = Vec::new();
    for p in &points {
        let fit = solve_soliton(&spec.metric, &s.xi, &s.eta, p).unwrap();
        let e2z = (2.0 * p[2]).exp();
        assert!(
            (fit.lambda - (e2z - 1.0)).abs() <= 1e-8,
            "lambda at {p:?}: {} vs {}",
            fit.lambda,
            e2z - 1.0
        );
        let mu = fit.mu.unwrap();
        assert!((mu - (e2z + 1.0)).abs() <= 1e-8, "mu at {p:?}");
        assert!(fit.residual <= 1e-9, "fit residual {:e}", fit.residual);
        // constraint eps*lambda + mu = n - 1 with eps = -1, n = 3
        assert!((-fit.lambda + mu - 2.0).abs() <= 1e-10);
        assert!(fit.condition.is_finite());
        fits.push(fit);
    }
    assert_eq!(classify_soliton(&fits, 1e-9).unwrap(), SolitonClass::Mixed);
}

#[test]
fn example2_classification_by_sampling_window() {
    let spec = load_bundled("example2-r3").unwrap();
    let s = spec.structure.as_ref().unwrap();
    let mut chart = spec.chart.clone();
    // restrict z to [0.1, 1]: lambda = e^{2z} - 1 > 0 everywhere
    chart.set_interval(2, 0.1, 1.0).unwrap();
    let points: Vec<Vec<f64>> = sample_points(&chart, &Sampling::default());
    let mut fits = Vec::new();
    for p in &points {
        fits.push(solve_soliton(&spec.metric, &s.xi, &s.eta, p).unwrap());
    }
    assert_eq!(classify_soliton(&fits, 1e-9).unwrap(), SolitonClass::Expanding);
}

#[test]
fn refit_is_idempotent() {
    let spec = load_bundled("example2-r3").unwrap();
    let s = spec.structure.as_ref().unwrap();
    for p in sample_points::<f64>(&spec.chart, &Sampling { count: 20, ..spec.sampling }) {
        let fit = solve_soliton(&spec.metric, &s.xi, &s.eta, &p).unwrap();
        let again = soliton_residual(
            &spec.metric,
            &s.xi,
            &s.eta,
            fit.lambda,
            fit.mu.unwrap(),
            &p,
        )
        .unwrap();
        assert!(
            (again.max_abs - fit.residual).abs() <= 1e-12,
            "re-evaluating the fitted pair reproduces the optimum"
        );
    }
}

#[test]
fn equation_assemblies_agree_on_all_soliton_fixtures() {
    for name in ["example2-r3", "trivial-ps-r1"] {
        let spec = load_bundled(name).unwrap();
        let s = spec.structure.as_ref().unwrap();
        let sol = spec.soliton.as_ref().unwrap();
        let lam = match &sol.lambda {
            geoverify_core::specfile::SolveOrExpr::Given(e) => e.clone(),
            _ => panic!("fixture declares lambda"),
        };
        let mu = match &sol.mu {
            geoverify_core::specfile::SolveOrExpr::Given(e) => e.clone(),
            _ => panic!("fixture declares mu"),
        };
        for p in sample_points::<f64>(&spec.chart, &spec.sampling) {
            let r = soliton_residual(
                &spec.metric,
                &s.xi,
                &s.eta,
                lam.eval(&p).unwrap(),
                mu.eval(&p).unwrap(),
                &p,
            )
            .unwrap();
            assert!(
                r.route_disagreement <= 1e-12 * r.route_scale,
                "{name}: assemblies disagree by {:e}",
                r.route_disagreement
            );
            assert!(r.max_abs <= 1e-10 * r.scale, "{name}: residual {:e}", r.max_abs);
        }
    }
}

#[test]
fn scal_formula_consistency_over_10k_tuples() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..10_000 {
        let n = 3 + (rng.gen::<u64>() % 6) as usize;
        let eps = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let lambda = rng.gen_range(-5.0..5.0);
        let mu = rng.gen_range(-5.0..5.0);
        let xi_lam = rng.gen_range(-5.0..5.0);
        let xi_mu = rng.gen_range(-5.0..5.0);
        let id = potential_laplacian_identity(
            n, eps, lambda, mu, xi_lam, xi_mu, 0.0, 0.0, 0.0, 1e-9,
        )
        .unwrap();
        assert!(
            id.consistency_residual <= 1e-12,
            "composition identity broke: {:e}",
            id.consistency_residual
        );
    }
}

#[test]
fn codazzi_pairs_and_bound_ordering() {
    for n in 3..=8usize {
        for eps in [1.0f64, -1.0] {
            let (pairs, class) = codazzi_q_pairs(n, eps);
            for (lam, mu) in pairs {
                assert_eq!(eps * lam + mu, (n - 1) as f64);
            }
            assert_eq!(
                class,
                if eps > 0.0 { SolitonClass::Expanding } else { SolitonClass::Shrinking }
            );
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2000 {
        let n = 3 + (rng.gen::<u64>() % 6) as usize;
        let eps = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let mu = rng.gen_range(-5.0..5.0);
        let delta_f = rng.gen_range(-5.0..5.0);
        let scal = rng.gen_range(-5.0..5.0);
        let b = norm_bounds_check(n, eps, mu, delta_f, scal, 0.0, 1e-12).unwrap();
        assert!(b.lower <= b.upper, "bounds must be ordered");
    }
}

#[test]
fn steady_window_on_a_shifted_fixture() {
    // lambda = e^{2z} - 1 vanishes identically only at z = 0; a tiny window
    // around it classifies as steady at a loose tolerance
    let spec = load_bundled("example2-r3").unwrap();
    let s = spec.structure.as_ref().unwrap();
    let mut chart = spec.chart.clone();
    chart.set_interval(2, -1e-7, 1e-7).unwrap();
    let points: Vec<Vec<f64>> = sample_points(&chart, &Sampling { count: 20, ..spec.sampling });
    let lambdas: Vec<f64> = points
        .iter()
        .map(|p| solve_soliton(&spec.metric, &s.xi, &s.eta, p).unwrap().lambda)
        .collect();
    assert_eq!(
        classify_lambda_values(&lambdas, 1e-5).unwrap(),
        SolitonClass::Steady
    );
}

#[test]
fn worked_scalar_example_from_the_laplacian_identity() {
    // n = 3, eps = -1, lambda = 1, mu = 3 with constant functions:
    // Delta f = -2, scal = 2, and the divergence route gives 2 as well
    let chart = geoverify_core::Chart::with_default_domain(vec!["u".into()]).unwrap();
    let _ = parse("0", &chart).unwrap();
    let id =
        potential_laplacian_identity(3, -1.0, 1.0, 3.0, 0.0, 0.0, -2.0, 2.0, -2.0, 1e-12).unwrap();
    assert_eq!(id.laplacian_residual, 0.0);
    assert_eq!(id.scal_residual, 0.0);
    assert_eq!(id.consistency_residual, 0.0);
}
