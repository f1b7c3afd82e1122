//! Shared test oracles: central finite differences and a closed random
//! expression generator.
//!
//! The finite-difference routines only use order-0 evaluation, so they are
//! independent of the jet derivative propagation they are used to check.

#![allow(dead_code)]

use geoverify_core::chart::Chart;
use geoverify_core::expr::{BinOp, Expr, Func};
use geoverify_core::jet::Order;
use geoverify_core::tensor::MetricField;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn eval0(e: &Expr, p: &[f64]) -> f64 {
    e.eval_jet(p, Order::Zero).expect("in-domain").value()
}

/// Central difference for a first partial, step `h`.
pub fn fd_first(e: &Expr, p: &[f64], i: usize, h: f64) -> f64 {
    let mut plus = p.to_vec();
    plus[i] += h;
    let mut minus = p.to_vec();
    minus[i] -= h;
    (eval0(e, &plus) - eval0(e, &minus)) / (2.0 * h)
}

/// Central difference for a second partial, step `h`.
pub fn fd_second(e: &Expr, p: &[f64], i: usize, j: usize, h: f64) -> f64 {
    if i == j {
        let mut plus = p.to_vec();
        plus[i] += h;
        let mut minus = p.to_vec();
        minus[i] -= h;
        (eval0(e, &plus) - 2.0 * eval0(e, p) + eval0(e, &minus)) / (h * h)
    } else {
        let mut pp = p.to_vec();
        pp[i] += h;
        pp[j] += h;
        let mut pm = p.to_vec();
        pm[i] += h;
        pm[j] -= h;
        let mut mp = p.to_vec();
        mp[i] -= h;
        mp[j] += h;
        let mut mm = p.to_vec();
        mm[i] -= h;
        mm[j] -= h;
        (eval0(e, &pp) - eval0(e, &pm) - eval0(e, &mp) + eval0(e, &mm)) / (4.0 * h * h)
    }
}

/// Central difference of a metric's Ricci tensor in direction `k`,
/// differentiating through the full curvature pipeline.
pub fn fd_nabla_ricci(
    metric: &MetricField,
    p: &[f64],
    h: f64,
) -> Vec<Vec<Vec<f64>>> {
    let n = metric.dimension();
    let gamma = geoverify_core::tensor::christoffel(metric, p).expect("nondegenerate");
    let s_at = |q: &[f64]| {
        geoverify_core::tensor::curvature(metric, q)
            .expect("nondegenerate")
            .ricci
    };
    let s0 = s_at(p);
    (0..n)
        .map(|k| {
            let mut plus = p.to_vec();
            plus[k] += h;
            let mut minus = p.to_vec();
            minus[k] -= h;
            let sp = s_at(&plus);
            let sm = s_at(&minus);
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let ds = (sp[i][j] - sm[i][j]) / (2.0 * h);
                            let corr: f64 = (0..n)
                                .map(|m| {
                                    gamma[m][k][i] * s0[m][j] + gamma[m][k][j] * s0[i][m]
                                })
                                .sum();
                            ds - corr
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// A closed generator grammar: every production keeps all function
/// arguments inside their domains on the sampling box `[-1, 1]^n`, so any
/// generated expression evaluates (and differentiates) everywhere.
pub struct ExprGen {
    rng: ChaCha8Rng,
    pub chart: Chart,
}

impl ExprGen {
    pub fn new(seed: u64, coords: &[&str]) -> Self {
        let chart =
            Chart::with_default_domain(coords.iter().map(|s| s.to_string()).collect()).unwrap();
        ExprGen { rng: ChaCha8Rng::seed_from_u64(seed), chart }
    }

    pub fn point(&mut self) -> Vec<f64> {
        (0..self.chart.dimension())
            .map(|_| self.rng.gen_range(-1.0..1.0))
            .collect()
    }

    fn leaf(&mut self) -> Expr {
        if self.rng.gen_bool(0.6) {
            Expr::Coord(self.rng.gen_range(0..self.chart.dimension()))
        } else if self.rng.gen_bool(0.1) {
            Expr::Pi
        } else {
            Expr::constant(self.rng.gen_range(-2.0..2.0))
        }
    }

    pub fn expr(&mut self, depth: usize) -> Expr {
        if depth == 0 {
            return self.leaf();
        }
        let b = |e: Expr| Box::new(e);
        match self.rng.gen_range(0..14u32) {
            0 => Expr::Bin(BinOp::Add, b(self.expr(depth - 1)), b(self.expr(depth - 1))),
            1 => Expr::Bin(BinOp::Sub, b(self.expr(depth - 1)), b(self.expr(depth - 1))),
            2 => Expr::Bin(BinOp::Mul, b(self.expr(depth - 1)), b(self.expr(depth - 1))),
            // denominator 2.5 + sin(..) stays in [1.5, 3.5]
            3 => Expr::Bin(
                BinOp::Div,
                b(self.expr(depth - 1)),
                b(Expr::Bin(
                    BinOp::Add,
                    b(Expr::Literal(2.5)),
                    b(Expr::Call(Func::Sin, b(self.expr(depth - 1)))),
                )),
            ),
            4 => Expr::Neg(b(self.expr(depth - 1))),
            5 => Expr::Call(Func::Sin, b(self.expr(depth - 1))),
            6 => Expr::Call(Func::Cos, b(self.expr(depth - 1))),
            7 => Expr::Call(Func::Tanh, b(self.expr(depth - 1))),
            // exp of a bounded argument
            8 => Expr::Call(Func::Exp, b(Expr::Call(Func::Tanh, b(self.expr(depth - 1))))),
            // ln of 2.5 + sin(..) in [1.5, 3.5]
            9 => Expr::Call(
                Func::Ln,
                b(Expr::Bin(
                    BinOp::Add,
                    b(Expr::Literal(2.5)),
                    b(Expr::Call(Func::Sin, b(self.expr(depth - 1)))),
                )),
            ),
            // sqrt of 2.5 + cos(..) in [1.5, 3.5]
            10 => Expr::Call(
                Func::Sqrt,
                b(Expr::Bin(
                    BinOp::Add,
                    b(Expr::Literal(2.5)),
                    b(Expr::Call(Func::Cos, b(self.expr(depth - 1)))),
                )),
            ),
            // tan of tanh(..) in (-1, 1), inside the principal branch
            11 => Expr::Call(Func::Tan, b(Expr::Call(Func::Tanh, b(self.expr(depth - 1))))),
            // sinh/cosh of a bounded argument
            12 => {
                let f = if self.rng.gen_bool(0.5) { Func::Sinh } else { Func::Cosh };
                Expr::Call(f, b(Expr::Call(Func::Tanh, b(self.expr(depth - 1)))))
            }
            // integer power, or a fractional power of a positive base
            _ => {
                if self.rng.gen_bool(0.7) {
                    let k = self.rng.gen_range(2..=3);
                    Expr::Bin(
                        BinOp::Pow,
                        b(self.expr(depth - 1)),
                        b(Expr::Literal(k as f64)),
                    )
                } else {
                    Expr::Bin(
                        BinOp::Pow,
                        b(Expr::Bin(
                            BinOp::Add,
                            b(Expr::Literal(2.5)),
                            b(Expr::Call(Func::Cos, b(self.expr(depth - 1)))),
                        )),
                        b(Expr::Literal(1.5)),
                    )
                }
            }
        }
    }
}
