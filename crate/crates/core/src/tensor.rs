//! Metric, Levi-Civita connection, curvature, and first-order operators at
//! chart points.
//!
//! Index conventions, pinned once for every suite:
//!
//! * curvature `R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z`,
//! * component layout `R(d_i, d_j) d_k = R^l_{kij} d_l`, stored `[l][k][i][j]`,
//! * Ricci `S(X,Y) = trace of Z -> R(Z,X)Y`, i.e. `S_ij = R^k_{jki}`,
//! * `scal = g^{ij} S_ij`, `|S|^2 = g^{ik} g^{jl} S_ij S_kl` (the plain
//!   contraction, indefinite in Lorentzian signature).
//!
//! All tensor assembly runs in the jet ring, so `g^{-1}`, `Gamma`, `R`, and
//! `S` carry the partial derivatives their order admits; the covariant
//! derivative of the Ricci tensor falls out of order-3 metric jets with no
//! finite differencing.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::jet::{Jet, Order};
use crate::linalg::{invert_jet_matrix, max_abs, sum1, symmetric_eigenvalues, tensor2, tensor3, tensor4};
use crate::scalar::Scalar;

/// Symmetric matrix of metric entry expressions; upper triangle stored.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    n: usize,
    upper: Vec<Expr>, // packed i <= j, row-major
}

impl MetricField {
    /// Build from full rows; the two triangles must agree structurally.
    pub fn from_rows(rows: Vec<Vec<Expr>>) -> Result<MetricField> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::spec("metric matrix must be square and nonempty"));
        }
        for i in 0..n {
            for j in i + 1..n {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::spec(format!(
                        "metric entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        let mut upper = Vec::with_capacity(n * (n + 1) / 2);
        for (i, row) in rows.iter().enumerate() {
            for e in row.iter().skip(i) {
                upper.push(e.clone());
            }
        }
        Ok(MetricField { n, upper })
    }

    /// Parse a full matrix of entry sources against a chart.
    pub fn parse_rows(rows: &[Vec<&str>], chart: &Chart) -> Result<MetricField> {
        let parsed: Result<Vec<Vec<Expr>>> = rows
            .iter()
            .map(|row| row.iter().map(|s| parse(s, chart)).collect())
            .collect();
        MetricField::from_rows(parsed?)
    }

    /// Identity metric on `n` coordinates.
    pub fn euclidean(n: usize) -> MetricField {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Expr::Literal(if i == j { 1.0 } else { 0.0 }))
                    .collect()
            })
            .collect();
        MetricField::from_rows(rows).expect("identity is symmetric")
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Expr {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        &self.upper[crate::jet::pair_index(self.n, i, j)]
    }

    /// Evaluate all entries as jets of the requested order.
    pub fn eval_jets<T: Scalar>(&self, point: &[T], order: Order) -> Result<Vec<Vec<Jet<T>>>> {
        let n = self.n;
        if point.len() != n {
            return Err(Error::spec(format!(
                "point has {} coordinates, metric expects {n}",
                point.len()
            )));
        }
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                row.push(self.entry(i, j).eval_jet(point, order)?);
            }
            rows.push(row);
        }
        Ok(rows)
    }
}

/// Relative degeneracy guard: |det g| <= 1e-12 * (max |g_ij|)^n.
fn degeneracy_threshold<T: Scalar>(g: &[Vec<T>]) -> T {
    let n = g.len();
    let scale = max_abs(g.iter().flatten().copied()).max(T::one());
    T::from_f64_lossy(1e-12) * scale.powi(n as i32)
}

/// Metric data at one point.
#[derive(Debug, Clone)]
pub struct MetricAt<T> {
    pub g: Vec<Vec<T>>,
    pub g_inv: Vec<Vec<T>>,
    /// (positive, negative) eigenvalue counts.
    pub signature: (usize, usize),
    pub det: T,
    /// Ratio of extreme absolute eigenvalues; reported, never fatal.
    pub condition: T,
}

/// Full curvature data at one point.
#[derive(Debug, Clone)]
pub struct PointEvaluation<T> {
    pub point: Vec<T>,
    pub g: Vec<Vec<T>>,
    pub g_inv: Vec<Vec<T>>,
    pub signature: (usize, usize),
    pub det: T,
    pub condition: T,
    /// Christoffel symbols `Gamma^k_{ij}`, stored `[k][i][j]`.
    pub gamma: Vec<Vec<Vec<T>>>,
    /// `R^l_{kij}`, stored `[l][k][i][j]`.
    pub riemann: Vec<Vec<Vec<Vec<T>>>>,
    /// `R_{lkij} = g_{lm} R^m_{kij}`, same layout.
    pub riemann_low: Vec<Vec<Vec<Vec<T>>>>,
    /// Ricci tensor `S_ij`.
    pub ricci: Vec<Vec<T>>,
    pub scal: T,
    /// `g^{ik} g^{jl} S_ij S_kl`; indefinite in mixed signature.
    pub ricci_sq_norm: T,
}

/// Jet-level evaluation context shared by the differential operators.
pub(crate) struct JetContext<T> {
    pub n: usize,
    pub g: Vec<Vec<Jet<T>>>,
    pub g_inv: Vec<Vec<Jet<T>>>,
    pub det: T,
    /// `[k][i][j]`, order one below the metric jets.
    pub gamma: Vec<Vec<Vec<Jet<T>>>>,
}

impl<T: Scalar> JetContext<T> {
    pub fn new(metric: &MetricField, point: &[T], order: Order) -> Result<JetContext<T>> {
        let n = metric.dimension();
        let g = metric.eval_jets(point, order)?;
        let g_vals = tensor2(n, |i, j| g[i][j].value());
        let threshold = degeneracy_threshold(&g_vals);
        let (g_inv, det) = invert_jet_matrix(&g)?;
        if det.abs() <= threshold {
            return Err(Error::DegenerateMetric {
                det: det.to_f64_lossy(),
                threshold: threshold.to_f64_lossy(),
            });
        }
        let gamma = if order >= Order::One {
            let half = T::from_f64_lossy(0.5);
            tensor3(n, |k, i, j| {
                let mut acc = Jet::constant(T::zero(), point.len(), order.min(Order::Three));
                for l in 0..n {
                    let term = g[l][j]
                        .partial(i)
                        .add(&g[l][i].partial(j))
                        .sub(&g[i][j].partial(l));
                    acc = acc.add(&g_inv[k][l].mul(&term));
                }
                acc.scale(half)
            })
        } else {
            Vec::new()
        };
        Ok(JetContext { n, g, g_inv, det, gamma })
    }

    /// `R^l_{kij}` as jets (one order below Gamma).
    pub fn riemann_jets(&self) -> Vec<Vec<Vec<Vec<Jet<T>>>>> {
        let n = self.n;
        tensor4(n, |l, k, i, j| {
            let mut acc = self.gamma[l][j][k].partial(i).sub(&self.gamma[l][i][k].partial(j));
            for m in 0..n {
                acc = acc
                    .add(&self.gamma[l][i][m].mul(&self.gamma[m][j][k]))
                    .sub(&self.gamma[l][j][m].mul(&self.gamma[m][i][k]));
            }
            acc
        })
    }

    /// Ricci jets `S_ij = R^k_{jki}`.
    pub fn ricci_jets(&self, riemann: &[Vec<Vec<Vec<Jet<T>>>>]) -> Vec<Vec<Jet<T>>> {
        let n = self.n;
        tensor2(n, |i, j| {
            let mut acc = riemann[0][j][0][i].clone();
            for k in 1..n {
                acc = acc.add(&riemann[k][j][k][i]);
            }
            acc
        })
    }

    pub fn gamma_values(&self) -> Vec<Vec<Vec<T>>> {
        let n = self.n;
        tensor3(n, |k, i, j| self.gamma[k][i][j].value())
    }
}

/// Evaluate the metric, its inverse, and its signature at a point.
pub fn metric_at<T: Scalar>(metric: &MetricField, point: &[T]) -> Result<MetricAt<T>> {
    let ctx = JetContext::new(metric, point, Order::Zero)?;
    let n = ctx.n;
    let g = tensor2(n, |i, j| ctx.g[i][j].value());
    let g_inv = tensor2(n, |i, j| ctx.g_inv[i][j].value());
    let eigen = symmetric_eigenvalues(&g);
    let pos = eigen.iter().filter(|&&e| e > T::zero()).count();
    let neg = eigen.iter().filter(|&&e| e < T::zero()).count();
    let min_abs = eigen.iter().fold(T::infinity(), |m, e| m.min(e.abs()));
    let max_abs_e = eigen.iter().fold(T::zero(), |m, e| m.max(e.abs()));
    let condition = if min_abs > T::zero() { max_abs_e / min_abs } else { T::infinity() };
    Ok(MetricAt { g, g_inv, signature: (pos, neg), det: ctx.det, condition })
}

/// Christoffel symbols `Gamma^k_{ij}` at a point, stored `[k][i][j]`.
pub fn christoffel<T: Scalar>(metric: &MetricField, point: &[T]) -> Result<Vec<Vec<Vec<T>>>> {
    let ctx = JetContext::new(metric, point, Order::One)?;
    Ok(ctx.gamma_values())
}

/// Full curvature evaluation at a point.
pub fn curvature<T: Scalar>(metric: &MetricField, point: &[T]) -> Result<PointEvaluation<T>> {
    let ctx = JetContext::new(metric, point, Order::Two)?;
    point_evaluation_from(&ctx, point)
}

pub(crate) fn point_evaluation_from<T: Scalar>(
    ctx: &JetContext<T>,
    point: &[T],
) -> Result<PointEvaluation<T>> {
    let n = ctx.n;
    let g = tensor2(n, |i, j| ctx.g[i][j].value());
    let g_inv = tensor2(n, |i, j| ctx.g_inv[i][j].value());
    let eigen = symmetric_eigenvalues(&g);
    let pos = eigen.iter().filter(|&&e| e > T::zero()).count();
    let neg = eigen.iter().filter(|&&e| e < T::zero()).count();
    let min_abs = eigen.iter().fold(T::infinity(), |m, e| m.min(e.abs()));
    let max_abs_e = eigen.iter().fold(T::zero(), |m, e| m.max(e.abs()));
    let condition = if min_abs > T::zero() { max_abs_e / min_abs } else { T::infinity() };

    let riemann_jets = ctx.riemann_jets();
    let ricci_jets = ctx.ricci_jets(&riemann_jets);
    let gamma = ctx.gamma_values();
    let riemann = tensor4(n, |l, k, i, j| riemann_jets[l][k][i][j].value());
    let riemann_low = tensor4(n, |l, k, i, j| {
        sum1(n, |m| g[l][m] * riemann[m][k][i][j])
    });
    let ricci = tensor2(n, |i, j| ricci_jets[i][j].value());
    // symmetrize: S is symmetric by theory; make it exact in storage
    let ricci = tensor2(n, |i, j| {
        (ricci[i][j] + ricci[j][i]) * T::from_f64_lossy(0.5)
    });
    let scal = sum1(n, |i| sum1(n, |j| g_inv[i][j] * ricci[i][j]));
    let ricci_sq_norm = sum1(n, |i| {
        sum1(n, |j| {
            sum1(n, |k| {
                sum1(n, |l| g_inv[i][k] * g_inv[j][l] * ricci[i][j] * ricci[k][l])
            })
        })
    });
    Ok(PointEvaluation {
        point: point.to_vec(),
        g,
        g_inv,
        signature: (pos, neg),
        det: ctx.det,
        condition,
        gamma,
        riemann,
        riemann_low,
        ricci,
        scal,
        ricci_sq_norm,
    })
}

/// Components of `nabla_X Y` at a point for vector fields of expressions.
pub fn covariant_derivative_vector<T: Scalar>(
    metric: &MetricField,
    x: &[Expr],
    y: &[Expr],
    point: &[T],
) -> Result<Vec<T>> {
    let ctx = JetContext::new(metric, point, Order::One)?;
    let n = ctx.n;
    let xv: Result<Vec<T>> = x.iter().map(|e| e.eval(point)).collect();
    let xv = xv?;
    let yj: Result<Vec<Jet<T>>> = y.iter().map(|e| e.eval_jet(point, Order::One)).collect();
    let yj = yj?;
    let gamma = ctx.gamma_values();
    Ok((0..n)
        .map(|k| {
            sum1(n, |i| xv[i] * yj[k].d1(i))
                + sum1(n, |i| sum1(n, |j| xv[i] * yj[j].value() * gamma[k][i][j]))
        })
        .collect())
}

/// `(L_xi g)_ij` assembled from the Levi-Civita connection:
/// `g(nabla_i xi, d_j) + g(d_i, nabla_j xi)`.
pub fn lie_derivative_metric<T: Scalar>(
    metric: &MetricField,
    xi: &[Expr],
    point: &[T],
) -> Result<Vec<Vec<T>>> {
    let ctx = JetContext::new(metric, point, Order::One)?;
    let n = ctx.n;
    let xj: Result<Vec<Jet<T>>> = xi.iter().map(|e| e.eval_jet(point, Order::One)).collect();
    let xj = xj?;
    let gamma = ctx.gamma_values();
    let g = tensor2(n, |i, j| ctx.g[i][j].value());
    // (nabla xi)^k_i = d_i xi^k + Gamma^k_{im} xi^m
    let nabla_xi = tensor2(n, |k, i| {
        xj[k].d1(i) + sum1(n, |m| gamma[k][i][m] * xj[m].value())
    });
    Ok(tensor2(n, |i, j| {
        sum1(n, |k| g[k][j] * nabla_xi[k][i]) + sum1(n, |k| g[i][k] * nabla_xi[k][j])
    }))
}

/// `(L_V g)_ij` assembled from partial derivatives only:
/// `V^k d_k g_ij + g_kj d_i V^k + g_ik d_j V^k`.
///
/// Algebraically equal to [`lie_derivative_metric`]; kept as an independent
/// numerical route for consistency checks.
pub fn lie_derivative_metric_partials<T: Scalar>(
    metric: &MetricField,
    v: &[Expr],
    point: &[T],
) -> Result<Vec<Vec<T>>> {
    let n = metric.dimension();
    let gj = metric.eval_jets(point, Order::One)?;
    let vj: Result<Vec<Jet<T>>> = v.iter().map(|e| e.eval_jet(point, Order::One)).collect();
    let vj = vj?;
    Ok(tensor2(n, |i, j| {
        sum1(n, |k| vj[k].value() * gj[i][j].d1(k))
            + sum1(n, |k| gj[k][j].value() * vj[k].d1(i))
            + sum1(n, |k| gj[i][k].value() * vj[k].d1(j))
    }))
}

/// Contravariant gradient components `(grad f)^i = g^{ij} d_j f`.
pub fn gradient<T: Scalar>(metric: &MetricField, f: &Expr, point: &[T]) -> Result<Vec<T>> {
    let at = metric_at(metric, point)?;
    let n = metric.dimension();
    let fj = f.eval_jet(point, Order::One)?;
    Ok((0..n)
        .map(|i| sum1(n, |j| at.g_inv[i][j] * fj.d1(j)))
        .collect())
}

/// Hessian `Hess(f)_ij = d_i d_j f - Gamma^k_{ij} d_k f` and Laplacian
/// `Delta f = g^{ij} Hess(f)_ij`.
pub fn hessian<T: Scalar>(
    metric: &MetricField,
    f: &Expr,
    point: &[T],
) -> Result<(Vec<Vec<T>>, T)> {
    let ctx = JetContext::new(metric, point, Order::One)?;
    let n = ctx.n;
    let fj = f.eval_jet(point, Order::Two)?;
    let gamma = ctx.gamma_values();
    let hess = tensor2(n, |i, j| {
        fj.d2(i, j) - sum1(n, |k| gamma[k][i][j] * fj.d1(k))
    });
    let laplacian = sum1(n, |i| sum1(n, |j| ctx.g_inv[i][j].value() * hess[i][j]));
    Ok((hess, laplacian))
}

/// Divergence `div xi = d_i xi^i + Gamma^i_{ik} xi^k`.
pub fn divergence<T: Scalar>(metric: &MetricField, xi: &[Expr], point: &[T]) -> Result<T> {
    let ctx = JetContext::new(metric, point, Order::One)?;
    let n = ctx.n;
    let xj: Result<Vec<Jet<T>>> = xi.iter().map(|e| e.eval_jet(point, Order::One)).collect();
    let xj = xj?;
    let gamma = ctx.gamma_values();
    Ok(sum1(n, |i| xj[i].d1(i))
        + sum1(n, |i| sum1(n, |k| gamma[i][i][k] * xj[k].value())))
}

/// Covariant derivative of the Ricci tensor,
/// `(nabla_k S)_ij = d_k S_ij - Gamma^m_{ki} S_mj - Gamma^m_{kj} S_im`,
/// stored `[k][i][j]`. Needs order-3 metric jets.
pub fn nabla_ricci<T: Scalar>(metric: &MetricField, point: &[T]) -> Result<Vec<Vec<Vec<T>>>> {
    let ctx = JetContext::new(metric, point, Order::Three)?;
    Ok(nabla_ricci_from(&ctx))
}

pub(crate) fn nabla_ricci_from<T: Scalar>(ctx: &JetContext<T>) -> Vec<Vec<Vec<T>>> {
    let n = ctx.n;
    let riemann = ctx.riemann_jets();
    let ricci = ctx.ricci_jets(&riemann);
    let gamma = ctx.gamma_values();
    let s = tensor2(n, |i, j| ricci[i][j].value());
    tensor3(n, |k, i, j| {
        ricci[i][j].d1(k)
            - sum1(n, |m| gamma[m][k][i] * s[m][j])
            - sum1(n, |m| gamma[m][k][j] * s[i][m])
    })
}

/// Residuals of the structural curvature invariants at one point, as
/// (name, raw max-abs residual, scale) triples:
/// Gamma symmetry, metric compatibility, first Bianchi, antisymmetries,
/// pair symmetry, Ricci symmetry.
pub fn curvature_invariant_residuals<T: Scalar>(
    metric: &MetricField,
    point: &[T],
) -> Result<Vec<(&'static str, T, T)>> {
    let ctx = JetContext::new(metric, point, Order::Two)?;
    let n = ctx.n;
    let ev = point_evaluation_from(&ctx, point)?;
    let one = T::one();

    let gamma_scale = one + max_abs(ev.gamma.iter().flatten().flatten().copied());
    let gamma_sym = max_abs((0..n).flat_map(|k| {
        let gamma = &ev.gamma;
        (0..n).flat_map(move |i| {
            (0..n).map(move |j| gamma[k][i][j] - gamma[k][j][i])
        })
    }));

    // (nabla_k g)_ij = d_k g_ij - Gamma^m_{ki} g_mj - Gamma^m_{kj} g_im
    let mut compat = T::zero();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let v = ctx.g[i][j].d1(k)
                    - sum1(n, |m| ev.gamma[m][k][i] * ev.g[m][j])
                    - sum1(n, |m| ev.gamma[m][k][j] * ev.g[i][m]);
                compat = compat.max(v.abs());
            }
        }
    }
    let g_scale = one + max_abs(ev.g.iter().flatten().copied());

    let r_scale = one + max_abs(ev.riemann.iter().flatten().flatten().flatten().copied());
    let bianchi = max_abs((0..n).flat_map(|l| {
        let r = &ev.riemann;
        (0..n).flat_map(move |k| {
            (0..n).flat_map(move |i| {
                (0..n).map(move |j| r[l][k][i][j] + r[l][i][j][k] + r[l][j][k][i])
            })
        })
    }));
    let antisym_planes = max_abs((0..n).flat_map(|l| {
        let r = &ev.riemann;
        (0..n).flat_map(move |k| {
            (0..n).flat_map(move |i| (0..n).map(move |j| r[l][k][i][j] + r[l][k][j][i]))
        })
    }));
    let rl_scale = one + max_abs(ev.riemann_low.iter().flatten().flatten().flatten().copied());
    let antisym_first = max_abs((0..n).flat_map(|l| {
        let r = &ev.riemann_low;
        (0..n).flat_map(move |k| {
            (0..n).flat_map(move |i| (0..n).map(move |j| r[l][k][i][j] + r[k][l][i][j]))
        })
    }));
    let pair_sym = max_abs((0..n).flat_map(|l| {
        let r = &ev.riemann_low;
        (0..n).flat_map(move |k| {
            (0..n).flat_map(move |i| (0..n).map(move |j| r[l][k][i][j] - r[i][j][l][k]))
        })
    }));
    let ricci_sym = max_abs((0..n).flat_map(|i| {
        let s = &ev.ricci;
        (0..n).map(move |j| s[i][j] - s[j][i])
    }));
    let s_scale = one + max_abs(ev.ricci.iter().flatten().copied());

    Ok(vec![
        ("gamma-lower-symmetry", gamma_sym, gamma_scale),
        ("metric-compatibility", compat, g_scale * gamma_scale),
        ("bianchi-first", bianchi, r_scale),
        ("riemann-antisym-plane", antisym_planes, r_scale),
        ("riemann-antisym-first-pair", antisym_first, rl_scale),
        ("riemann-pair-symmetry", pair_sym, rl_scale),
        ("ricci-symmetry", ricci_sym, s_scale),
    ])
}
