//! Curvature pipeline against the fixture tables: frame covariant
//! derivatives, frame curvature values, flat baselines, the sphere, and
//! the finite-difference oracle for the covariant derivative of Ricci.

mod common;

use common::fd_nabla_ricci;
use geoverify_core::expr::{parse, Expr};
use geoverify_core::fixtures::load_bundled;
use geoverify_core::linalg::max_abs;
use geoverify_core::sampling::{sample_points, Sampling};
use geoverify_core::tensor::{
    christoffel, covariant_derivative_vector, curvature, curvature_invariant_residuals,
    divergence, gradient, hessian, lie_derivative_metric, metric_at, nabla_ricci, MetricField,
};
use geoverify_core::Chart;

fn example2() -> (Chart, MetricField) {
    let spec = load_bundled("example2-r3").unwrap();
    (spec.chart.clone(), spec.metric.clone())
}

fn example2_points(count: usize) -> Vec<Vec<f64>> {
    let spec = load_bundled("example2-r3").unwrap();
    sample_points(&spec.chart, &Sampling { count, ..Sampling::default() })
}

/// Orthonormal frame of the example2 fixture as expression fields.
fn frame(chart: &Chart) -> [Vec<Expr>; 3] {
    [
        vec![parse("exp(z)", chart).unwrap(), Expr::zero(), Expr::zero()],
        vec![Expr::zero(), parse("exp(z - x)", chart).unwrap(), Expr::zero()],
        vec![Expr::zero(), Expr::zero(), Expr::constant(1.0)],
    ]
}

/// Frame values at a point.
fn frame_at(p: &[f64]) -> [[f64; 3]; 3] {
    let (x, z) = (p[0], p[2]);
    [
        [z.exp(), 0.0, 0.0],
        [0.0, (z - x).exp(), 0.0],
        [0.0, 0.0, 1.0],
    ]
}

#[test]
fn example2_connection_table_at_50_seeded_points() {
    let (chart, metric) = example2();
    let e = frame(&chart);
    let mut worst = 0.0f64;
    for p in example2_points(50) {
        let ef = frame_at(&p);
        let z = p[2];
        let combo = |c1: f64, c2: f64, c3: f64| {
            [
                c1 * ef[0][0],
                c2 * ef[1][1],
                c3 * ef[2][2],
            ]
        };
        // (a, b, expected frame coefficients of nabla_{E_a} E_b)
        let table: [(usize, usize, [f64; 3]); 9] = [
            (0, 0, [0.0, 0.0, -1.0]),
            (0, 1, [0.0, 0.0, 0.0]),
            (0, 2, [-1.0, 0.0, 0.0]),
            (1, 0, [0.0, z.exp(), 0.0]),
            (1, 1, [-z.exp(), 0.0, -1.0]),
            (1, 2, [0.0, -1.0, 0.0]),
            (2, 0, [0.0, 0.0, 0.0]),
            (2, 1, [0.0, 0.0, 0.0]),
            (2, 2, [0.0, 0.0, 0.0]),
        ];
        for (a, b, coeff) in table {
            let got = covariant_derivative_vector(&metric, &e[a], &e[b], &p).unwrap();
            let want = combo(coeff[0], coeff[1], coeff[2]);
            for k in 0..3 {
                worst = worst.max((got[k] - want[k]).abs());
            }
        }
    }
    assert!(worst <= 1e-9, "connection table max residual {worst:e}");
}

#[test]
fn example2_curvature_and_ricci_table_at_50_seeded_points() {
    let (_, metric) = example2();
    let mut worst = 0.0f64;
    for p in example2_points(50) {
        let ev = curvature(&metric, &p).unwrap();
        let ef = frame_at(&p);
        let e2z = (2.0 * p[2]).exp();
        // R(E_a, E_b) E_c contracted into coordinates
        let r_frame = |a: usize, b: usize, c: usize| -> [f64; 3] {
            let mut out = [0.0f64; 3];
            for (l, slot) in out.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (i, eai) in ef[a].iter().enumerate() {
                    for (j, ebj) in ef[b].iter().enumerate() {
                        for (k, eck) in ef[c].iter().enumerate() {
                            acc += eai * ebj * eck * ev.riemann[l][k][i][j];
                        }
                    }
                }
                *slot = acc;
            }
            out
        };
        let scaled = |a: usize, c: f64| [c * ef[a][0], c * ef[a][1], c * ef[a][2]];
        let table: [(usize, usize, usize, [f64; 3]); 6] = [
            (0, 1, 1, scaled(0, 1.0 - e2z)),
            (0, 2, 2, scaled(0, -1.0)),
            (1, 0, 0, scaled(1, 1.0 - e2z)),
            (1, 2, 2, scaled(1, -1.0)),
            (2, 0, 0, scaled(2, 1.0)),
            (2, 1, 1, scaled(2, 1.0)),
        ];
        for (a, b, c, want) in table {
            let got = r_frame(a, b, c);
            for k in 0..3 {
                worst = worst.max((got[k] - want[k]).abs());
            }
        }
        // Ricci frame values
        let s_frame = |a: usize| -> f64 {
            let mut acc = 0.0;
            for (i, eai) in ef[a].iter().enumerate() {
                for (j, eaj) in ef[a].iter().enumerate() {
                    acc += eai * eaj * ev.ricci[i][j];
                }
            }
            acc
        };
        worst = worst.max((s_frame(0) - (2.0 - e2z)).abs());
        worst = worst.max((s_frame(1) - (2.0 - e2z)).abs());
        worst = worst.max((s_frame(2) + 2.0).abs());
    }
    assert!(worst <= 1e-8, "curvature table max residual {worst:e}");
}

#[test]
fn euclidean_baselines_vanish_to_machine_zero() {
    for n in [2usize, 3, 4] {
        let metric = MetricField::euclidean(n);
        let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let chart = Chart::with_default_domain(names).unwrap();
        for p in sample_points::<f64>(&chart, &Sampling { count: 20, ..Sampling::default() }) {
            let ev = curvature(&metric, &p).unwrap();
            assert!(max_abs(ev.gamma.iter().flatten().flatten().copied()) <= 1e-12);
            assert!(
                max_abs(ev.riemann.iter().flatten().flatten().flatten().copied()) <= 1e-12
            );
            assert!(max_abs(ev.ricci.iter().flatten().copied()) <= 1e-12);
            assert!(ev.scal.abs() <= 1e-12);
            let ns = nabla_ricci(&metric, &p).unwrap();
            assert!(max_abs(ns.iter().flatten().flatten().copied()) <= 1e-12);
        }
    }
}

fn sphere() -> (Chart, MetricField) {
    let chart = Chart::new(
        vec!["theta".into(), "phi".into()],
        vec![(0.4, 2.7), (0.0, 6.0)],
    )
    .unwrap();
    let metric = MetricField::parse_rows(
        &[vec!["1", "0"], vec!["0", "sin(theta)^2"]],
        &chart,
    )
    .unwrap();
    (chart, metric)
}

#[test]
fn sphere_curvature_and_hessian() {
    let (chart, metric) = sphere();
    let p = [std::f64::consts::FRAC_PI_3, 1.0];
    let ev = curvature(&metric, &p).unwrap();
    assert!((ev.scal - 2.0).abs() <= 1e-12, "unit sphere scal = 2");

    // Hess(cos theta)_{theta,theta} = -cos(theta)
    let f = parse("cos(theta)", &chart).unwrap();
    let (hess, _) = hessian(&metric, &f, &p).unwrap();
    assert!((hess[0][0] + p[0].cos()).abs() <= 1e-12);
}

#[test]
fn sphere_has_parallel_ricci() {
    let (chart, metric) = sphere();
    for p in sample_points::<f64>(&chart, &Sampling { count: 30, ..Sampling::default() }) {
        let ns = nabla_ricci(&metric, &p).unwrap();
        assert!(
            max_abs(ns.iter().flatten().flatten().copied()) <= 1e-9,
            "Einstein surface has parallel Ricci"
        );
    }
}

#[test]
fn nabla_ricci_matches_fd_oracle_on_both_fixtures() {
    let (_, metric) = example2();
    for p in example2_points(100) {
        let ad = nabla_ricci(&metric, &p).unwrap();
        let fd = fd_nabla_ricci(&metric, &p, 1e-5);
        let scale = 1.0 + max_abs(ad.iter().flatten().flatten().copied());
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert!(
                        (ad[k][i][j] - fd[k][i][j]).abs() <= 1e-6 * scale,
                        "nabla_S[{k}][{i}][{j}]: ad = {}, fd = {}",
                        ad[k][i][j],
                        fd[k][i][j]
                    );
                }
            }
        }
        // z-dependence of S_xx makes nabla S genuinely nonzero here
        assert!(max_abs(ad.iter().flatten().flatten().copied()) > 1e-3);
    }

    let (chart, metric) = sphere();
    for p in sample_points::<f64>(&chart, &Sampling { count: 100, ..Sampling::default() }) {
        let ad = nabla_ricci(&metric, &p).unwrap();
        let fd = fd_nabla_ricci(&metric, &p, 1e-5);
        let scale = 1.0 + max_abs(ad.iter().flatten().flatten().copied());
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    assert!((ad[k][i][j] - fd[k][i][j]).abs() <= 1e-6 * scale);
                }
            }
        }
    }
}

#[test]
fn tensor_invariants_on_all_bundled_fixtures() {
    for name in [
        "euclidean-r3",
        "example1-r5-g1",
        "example1-r5-g2",
        "example2-r3",
        "trivial-ps-r1",
    ] {
        let spec = load_bundled(name).unwrap();
        let points: Vec<Vec<f64>> = sample_points(&spec.chart, &spec.sampling);
        for p in &points {
            for (check, raw, scale) in curvature_invariant_residuals(&spec.metric, p).unwrap() {
                assert!(
                    raw <= 1e-9 * scale,
                    "{name}: {check} residual {raw:e} exceeds scaled 1e-9"
                );
            }
        }
    }
}

#[test]
fn example2_pointwise_metric_and_operators() {
    let (chart, metric) = example2();
    let at = metric_at(&metric, &[0.0f64, 0.0, 0.0]).unwrap();
    assert_eq!(at.signature, (2, 1));

    // lie derivative along xi = d/dz in the orthonormal frame
    let xi = vec![Expr::zero(), Expr::zero(), Expr::constant(1.0)];
    for p in example2_points(10) {
        let lie = lie_derivative_metric(&metric, &xi, &p).unwrap();
        let ef = frame_at(&p);
        let e1e1: f64 = (0..3)
            .map(|i| (0..3).map(|j| ef[0][i] * ef[0][j] * lie[i][j]).sum::<f64>())
            .sum();
        assert!((e1e1 + 2.0).abs() <= 1e-12, "(L_xi g)(E1,E1) = -2");
        let e3e3 = lie[2][2];
        assert!(e3e3.abs() <= 1e-12, "(L_xi g)(E3,E3) = 0");

        let div = divergence(&metric, &xi, &p).unwrap();
        assert!((div + 2.0).abs() <= 1e-12, "div xi = -2");
    }

    // grad z = -d/dz under the Lorentzian metric
    let f = parse("z", &chart).unwrap();
    let grad = gradient(&metric, &f, &[0.3f64, -0.2, 0.6]).unwrap();
    assert!(grad[0].abs() <= 1e-15 && grad[1].abs() <= 1e-15);
    assert!((grad[2] + 1.0).abs() <= 1e-15);

    // Gamma symmetry spot check away from the origin
    let gamma = christoffel(&metric, &[0.4f64, 0.1, -0.3]).unwrap();
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(gamma[k][i][j], gamma[k][j][i]);
            }
        }
    }
}
