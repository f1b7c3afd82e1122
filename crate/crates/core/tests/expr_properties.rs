//! Differentiation oracle tests: jets against central finite differences,
//! exactness of the arithmetic rules, and symmetry of stored partials.

mod common;

use common::{fd_first, fd_second, ExprGen};
use geoverify_core::expr::{parse, BinOp, Expr};
use geoverify_core::jet::{Jet, Order};
use geoverify_core::Chart;

use proptest::prelude::*;

const PAIRS: usize = 1000;

#[test]
fn jets_match_central_differences_over_1000_seeded_pairs() {
    let mut gen = ExprGen::new(7, &["x", "y", "z"]);
    let n = 3;
    let mut checked = 0usize;
    for _ in 0..PAIRS {
        let e = gen.expr(4);
        let p = gen.point();
        let jet = e.eval_jet(&p, Order::Two).expect("closed grammar stays in-domain");
        let scale = 1.0 + jet.value().abs();
        for i in 0..n {
            let fd = fd_first(&e, &p, i, 1e-5);
            let ad = jet.d1(i);
            assert!(
                (ad - fd).abs() <= 1e-5 * scale,
                "first partial d{i} mismatch: ad = {ad}, fd = {fd}, |f| = {}",
                jet.value().abs()
            );
            for j in i..n {
                let fd = fd_second(&e, &p, i, j, 1e-4);
                let ad = jet.d2(i, j);
                assert!(
                    (ad - fd).abs() <= 1e-5 * scale.max(1.0 + ad.abs()),
                    "second partial d{i}d{j} mismatch: ad = {ad}, fd = {fd}"
                );
            }
        }
        checked += 1;
    }
    assert_eq!(checked, PAIRS);
}

#[test]
fn worked_jet_values() {
    let chart = Chart::with_default_domain(vec!["x".into(), "y".into(), "z".into()]).unwrap();
    // value 1, d_z = 2; frozen from the central-difference oracle
    let e = parse("exp(2*z)", &chart).unwrap();
    let jet = e.eval_jet(&[0.0f64, 0.0, 0.0], Order::One).unwrap();
    assert_eq!(jet.value(), 1.0);
    assert!((jet.d1(2) - 2.0).abs() < 1e-15);
    let fd = fd_first(&e, &[0.0, 0.0, 0.0], 2, 1e-5);
    assert!((jet.d1(2) - fd).abs() <= 1e-5 * (1.0 + jet.value().abs()));

    let chart1 = Chart::with_default_domain(vec!["x".into()]).unwrap();
    let e = parse("x*x", &chart1).unwrap();
    let jet = e.eval_jet(&[3.0f64], Order::Two).unwrap();
    assert_eq!(jet.value(), 9.0);
    assert_eq!(jet.d1(0), 6.0);
    assert_eq!(jet.d2(0, 0), 2.0);

    let e = parse("ln(x)", &chart1).unwrap();
    assert!(matches!(
        e.eval_jet::<f64>(&[0.0], Order::Zero),
        Err(geoverify_core::Error::Domain { function: "ln", .. })
    ));
}

#[test]
fn product_rule_is_exact_at_jet_level() {
    let mut gen = ExprGen::new(21, &["x", "y"]);
    for _ in 0..200 {
        let a = gen.expr(3);
        let b = gen.expr(3);
        let p = gen.point();
        let product = Expr::Bin(BinOp::Mul, Box::new(a.clone()), Box::new(b.clone()));
        let via_ast = product.eval_jet(&p, Order::Three).unwrap();
        let via_mul = a
            .eval_jet(&p, Order::Three)
            .unwrap()
            .mul(&b.eval_jet(&p, Order::Three).unwrap());
        assert_eq!(via_ast, via_mul, "product rule must be bit-exact");

        let sum = Expr::Bin(BinOp::Add, Box::new(a.clone()), Box::new(b.clone()));
        let via_ast = sum.eval_jet(&p, Order::Three).unwrap();
        let via_add = a
            .eval_jet(&p, Order::Three)
            .unwrap()
            .add(&b.eval_jet(&p, Order::Three).unwrap());
        assert_eq!(via_ast, via_add, "sum rule must be bit-exact");
    }
}

#[test]
fn order_zero_agrees_with_plain_evaluation_exactly() {
    let mut gen = ExprGen::new(33, &["x", "y", "z"]);
    for _ in 0..300 {
        let e = gen.expr(4);
        let p = gen.point();
        let j3 = e.eval_jet(&p, Order::Three).unwrap();
        let j0 = e.eval_jet(&p, Order::Zero).unwrap();
        assert_eq!(j3.value(), j0.value(), "value must not depend on order");
        assert_eq!(j0.value(), e.eval::<f64>(&p).unwrap());
    }
}

#[test]
fn mixed_partials_are_symmetric_by_storage() {
    let mut gen = ExprGen::new(55, &["x", "y", "z"]);
    for _ in 0..100 {
        let e = gen.expr(4);
        let p = gen.point();
        let j = e.eval_jet(&p, Order::Three).unwrap();
        for i in 0..3 {
            for k in 0..3 {
                assert_eq!(j.d2(i, k), j.d2(k, i));
                for l in 0..3 {
                    let base = j.d3(i, k, l);
                    assert_eq!(j.d3(k, i, l), base);
                    assert_eq!(j.d3(l, k, i), base);
                    assert_eq!(j.d3(i, l, k), base);
                }
            }
        }
    }
}

proptest! {
    /// Jet arithmetic distributes: (a + b) * c = a*c + b*c up to roundoff.
    #[test]
    fn jet_distributivity(
        av in -2.0f64..2.0, bv in -2.0f64..2.0, cv in -2.0f64..2.0,
        da in -1.0f64..1.0, db in -1.0f64..1.0, dc in -1.0f64..1.0,
    ) {
        let n = 2;
        let mut a = Jet::variable(av, 0, n, Order::Three);
        let b = Jet::variable(bv, 1, n, Order::Three);
        let mut c = Jet::variable(cv, 0, n, Order::Three);
        // mix in nontrivial curvature through a few operations
        a = a.mul(&Jet::constant(da, n, Order::Three).add(&b));
        c = c.sin().add(&Jet::constant(dc, n, Order::Three));
        let b = b.mul(&Jet::constant(db, n, Order::Three)).cos();

        let lhs = a.add(&b).mul(&c);
        let rhs = a.mul(&c).add(&b.mul(&c));
        prop_assert!((lhs.value() - rhs.value()).abs() <= 1e-12);
        for i in 0..n {
            prop_assert!((lhs.d1(i) - rhs.d1(i)).abs() <= 1e-11);
            for j in i..n {
                prop_assert!((lhs.d2(i, j) - rhs.d2(i, j)).abs() <= 1e-10);
                for k in j..n {
                    prop_assert!((lhs.d3(i, j, k) - rhs.d3(i, j, k)).abs() <= 1e-9);
                }
            }
        }
    }

    /// Division is the inverse of multiplication wherever it is defined.
    #[test]
    fn jet_div_inverts_mul(v in -2.0f64..2.0, w in 0.5f64..3.0) {
        let a = Jet::variable(v, 0, 2, Order::Three).sin();
        let b = Jet::variable(w, 1, 2, Order::Three).exp();
        let round = a.mul(&b).div(&b).unwrap();
        prop_assert!((round.value() - a.value()).abs() <= 1e-12);
        for i in 0..2 {
            prop_assert!((round.d1(i) - a.d1(i)).abs() <= 1e-11);
            for j in i..2 {
                prop_assert!((round.d2(i, j) - a.d2(i, j)).abs() <= 1e-10);
            }
        }
    }
}
