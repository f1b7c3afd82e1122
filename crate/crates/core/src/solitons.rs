//! Soliton equations on (pseudo-)Riemannian manifolds with paracontact
//! structure: residual evaluation, pointwise recovery of the soliton
//! functions, classification, and the scalar theorem checks.
//!
//! The fundamental equation is
//!
//! ```text
//! L_V g + 2 S + 2 lambda g + 2 mu eta (x) eta = 0
//! ```
//!
//! with `lambda`, `mu` smooth functions. Both assemblies of the equation
//! (Lie derivative by partials, Lie derivative through the connection) are
//! computed and cross-checked; `(lambda, mu)` recovery is a linear least
//! squares over the independent symmetric tensor slots.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{Jet, Order};
use crate::linalg::{least_squares_two_columns, max_abs, sum1, tensor2, tensor3};
use crate::report::{residual_pair, CheckReport, HypothesisStatus, ResidualSet};
use crate::scalar::Scalar;
use crate::structures::{para_sasakian_holds, ParacontactStructure};
use crate::tensor::{
    curvature, divergence, hessian, lie_derivative_metric, lie_derivative_metric_partials,
    nabla_ricci, JetContext, MetricField,
};

/// Sign classification of the soliton by `lambda` over sampled points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolitonClass {
    Steady,
    Shrinking,
    Expanding,
    Mixed,
}

impl SolitonClass {
    pub fn label(self) -> &'static str {
        match self {
            SolitonClass::Steady => "steady",
            SolitonClass::Shrinking => "shrinking",
            SolitonClass::Expanding => "expanding",
            SolitonClass::Mixed => "mixed",
        }
    }
}

/// Pointwise residual of the soliton equation with given `(lambda, mu)`.
#[derive(Debug, Clone)]
pub struct SolitonResidual<T> {
    /// Residual tensor of the fundamental form.
    pub tensor: Vec<Vec<T>>,
    /// Raw max-abs of the residual tensor.
    pub max_abs: T,
    /// `1 + max(|lhs|, |rhs|)` over the two sides of the equation.
    pub scale: T,
    /// Max-abs disagreement between the two assemblies of the equation.
    pub route_disagreement: T,
    /// Scale for the route comparison.
    pub route_scale: T,
}

/// Evaluate the soliton equation residual at a point.
///
/// `lambda` and `mu` are values at the point (from declared expressions or
/// a fit). The Lie derivative enters once via plain partial derivatives and
/// once through the Levi-Civita connection; `route_disagreement` reports
/// how far the two assemblies drift (machine-level for analytic data).
pub fn soliton_residual<T: Scalar>(
    metric: &MetricField,
    v: &[Expr],
    eta: &[Expr],
    lambda: T,
    mu: T,
    point: &[T],
) -> Result<SolitonResidual<T>> {
    let n = metric.dimension();
    let two = T::from_f64_lossy(2.0);
    let lie_partials = lie_derivative_metric_partials(metric, v, point)?;
    let lie_covariant = lie_derivative_metric(metric, v, point)?;
    let ev = curvature(metric, point)?;
    let eta_vals: Result<Vec<T>> = eta.iter().map(|e| e.eval(point)).collect();
    let eta_vals = eta_vals?;

    // lhs = L_V g + 2S, rhs = -2 lambda g - 2 mu eta(x)eta
    let lhs = tensor2(n, |i, j| lie_partials[i][j] + two * ev.ricci[i][j]);
    let rhs = tensor2(n, |i, j| {
        -two * lambda * ev.g[i][j] - two * mu * eta_vals[i] * eta_vals[j]
    });
    let tensor = tensor2(n, |i, j| lhs[i][j] - rhs[i][j]);
    let (raw, scale) = residual_pair(
        lhs.iter().flatten().copied(),
        rhs.iter().flatten().copied(),
    );

    // second route: S = -1/2 [g(nabla_X xi, Y) + g(X, nabla_Y xi)] - lambda g - mu eta eta
    let half = T::from_f64_lossy(0.5);
    let route2 = tensor2(n, |i, j| {
        ev.ricci[i][j] + half * lie_covariant[i][j] + lambda * ev.g[i][j]
            + mu * eta_vals[i] * eta_vals[j]
    });
    let (route_disagreement, route_scale) = residual_pair(
        tensor.iter().flatten().copied(),
        route2.iter().flatten().map(|&x| x * two),
    );

    Ok(SolitonResidual {
        max_abs: raw,
        scale,
        tensor,
        route_disagreement,
        route_scale,
    })
}

/// Result of the pointwise `(lambda, mu)` fit.
#[derive(Debug, Clone)]
pub struct SolitonFit<T> {
    pub point: Vec<T>,
    pub lambda: T,
    /// `None` when the `eta (x) eta` design column is numerically absent.
    pub mu: Option<T>,
    /// Max-abs of the soliton equation re-evaluated with the fitted pair.
    pub residual: T,
    /// Condition indicator of the 2x2 normal system.
    pub condition: T,
}

/// Recover `(lambda, mu)` at a point by least squares over the
/// `n(n+1)/2` independent symmetric slots of the soliton equation.
pub fn solve_soliton<T: Scalar>(
    metric: &MetricField,
    v: &[Expr],
    eta: &[Expr],
    point: &[T],
) -> Result<SolitonFit<T>> {
    let n = metric.dimension();
    let two = T::from_f64_lossy(2.0);
    let lie = lie_derivative_metric_partials(metric, v, point)?;
    let ev = curvature(metric, point)?;
    let eta_vals: Result<Vec<T>> = eta.iter().map(|e| e.eval(point)).collect();
    let eta_vals = eta_vals?;

    let mut r = Vec::with_capacity(n * (n + 1) / 2);
    let mut u = Vec::with_capacity(r.capacity());
    let mut w = Vec::with_capacity(r.capacity());
    for i in 0..n {
        for j in i..n {
            r.push(lie[i][j] + two * ev.ricci[i][j]);
            u.push(two * ev.g[i][j]);
            w.push(two * eta_vals[i] * eta_vals[j]);
        }
    }
    let fit = least_squares_two_columns(&r, &u, &w, T::from_f64_lossy(1e-12))?;
    let mu_for_residual = fit.mu.unwrap_or(T::zero());
    let check = soliton_residual(metric, v, eta, fit.lambda, mu_for_residual, point)?;
    Ok(SolitonFit {
        point: point.to_vec(),
        lambda: fit.lambda,
        mu: fit.mu,
        residual: check.max_abs,
        condition: fit.condition,
    })
}

/// Classify fitted `lambda` samples: steady / expanding / shrinking / mixed.
pub fn classify_soliton<T: Scalar>(fits: &[SolitonFit<T>], tol: T) -> Result<SolitonClass> {
    let lambdas: Vec<T> = fits.iter().map(|f| f.lambda).collect();
    classify_lambda_values(&lambdas, tol)
}

/// Classify `lambda` samples directly.
pub fn classify_lambda_values<T: Scalar>(lambda: &[T], tol: T) -> Result<SolitonClass> {
    if lambda.is_empty() {
        return Err(Error::EmptyInput);
    }
    if lambda.iter().all(|l| l.abs() <= tol) {
        return Ok(SolitonClass::Steady);
    }
    if lambda.iter().all(|&l| l > tol) {
        return Ok(SolitonClass::Expanding);
    }
    if lambda.iter().all(|&l| l < -tol) {
        return Ok(SolitonClass::Shrinking);
    }
    Ok(SolitonClass::Mixed)
}

/// Ricci-form and scalar constraint checks for a soliton on a structure
/// expected to be para-Sasakian. All rows carry the hypothesis status; the
/// conclusions are evaluated regardless so that "holds anyway" is visible.
///
/// Rows: the Ricci closed form
/// `S = -eps*g(phi.,.) - lambda*g - mu*eta(x)eta`, the constraint
/// `eps*lambda + mu = n - 1`, the scalar identity
/// `scal = -div(V) - n*lambda - eps*mu`, the `mu = 0` sign branch, and the
/// steady (`lambda = 0`) branch.
#[allow(clippy::too_many_arguments)]
pub fn ps_soliton_ricci_check<T: Scalar>(
    metric: &MetricField,
    s: &ParacontactStructure,
    v: &[Expr],
    points: &[Vec<T>],
    lambda: &[T],
    mu: &[T],
    tol: T,
) -> Result<Vec<CheckReport<T>>> {
    let n = metric.dimension();
    let eps: T = s.epsilon.sign();
    let n_minus_1 = T::from_f64_lossy((n - 1) as f64);
    let n_t = T::from_f64_lossy(n as f64);
    let hypothesis = if para_sasakian_holds(metric, s, points, tol)? {
        HypothesisStatus::Met
    } else {
        HypothesisStatus::Unmet
    };

    let mut r_ea9 = ResidualSet::new(
        "ps-ricci-closed-form",
        "S(X,Y) = -eps*g(phi X, Y) - lambda*g(X,Y) - mu*eta(X)*eta(Y)",
    )
    .with_hypothesis(hypothesis);
    let mut r_constraint = ResidualSet::new(
        "ps-constraint-eps-lambda-mu",
        "eps*lambda + mu = n - 1",
    )
    .with_hypothesis(hypothesis);
    let mut r_scal = ResidualSet::new(
        "ps-scal-divergence",
        "scal = -div(V) - n*lambda - eps*mu",
    )
    .with_hypothesis(hypothesis);

    let mu_zero_applies = mu.iter().all(|m| m.abs() <= tol);
    let lambda_zero_applies = lambda.iter().all(|l| l.abs() <= tol);
    let mut r_mu0 = ResidualSet::new(
        "ps-ricci-soliton-sign",
        "mu = 0 forces lambda = eps*(n-1): expanding when spacelike, shrinking when timelike",
    )
    .with_hypothesis(if mu_zero_applies { hypothesis } else { HypothesisStatus::NotApplicable });
    let mut r_steady = ResidualSet::new(
        "ps-steady-branch",
        "lambda = 0 forces mu = n-1 and scal = -div(V) - eps*(n-1)",
    )
    .with_hypothesis(if lambda_zero_applies { hypothesis } else { HypothesisStatus::NotApplicable });
    if mu_zero_applies {
        let class = if s.epsilon.sign::<T>() > T::zero() { "expanding" } else { "shrinking" };
        r_mu0.set_detail(class);
    }

    for (idx, p) in points.iter().enumerate() {
        let (lam, m) = (lambda[idx], mu[idx]);
        let ev = curvature(metric, p)?;
        let at = s.eval(p)?;
        let lhs = (0..n).flat_map(|i| {
            let ricci = &ev.ricci;
            (0..n).map(move |j| ricci[i][j])
        });
        let rhs = (0..n).flat_map(|i| {
            let (g, at) = (&ev.g, &at);
            (0..n).map(move |j| {
                let g_phi = sum1(n, |k| at.phi[k][i] * g[k][j]);
                -eps * g_phi - lam * g[i][j] - m * at.eta[i] * at.eta[j]
            })
        });
        let (raw, scale) = residual_pair(lhs, rhs);
        r_ea9.push(raw, scale);

        let (raw, scale) = residual_pair([eps * lam + m], [n_minus_1]);
        r_constraint.push(raw, scale);

        let div_v = divergence(metric, v, p)?;
        let (raw, scale) = residual_pair([ev.scal], [-div_v - n_t * lam - eps * m]);
        r_scal.push(raw, scale);

        if mu_zero_applies {
            let (raw, scale) = residual_pair([lam], [eps * n_minus_1]);
            r_mu0.push(raw, scale);
        } else {
            r_mu0.push_plain(T::zero());
        }
        if lambda_zero_applies {
            let (raw_mu, scale_mu) = residual_pair([m], [n_minus_1]);
            let (raw_sc, scale_sc) = residual_pair([ev.scal], [-div_v - eps * n_minus_1]);
            r_steady.push(raw_mu.max(raw_sc), scale_mu.max(scale_sc));
        } else {
            r_steady.push_plain(T::zero());
        }
    }
    Ok(vec![
        r_ea9.finalize(tol),
        r_constraint.finalize(tol),
        r_scal.finalize(tol),
        r_mu0.finalize(tol),
        r_steady.finalize(tol),
    ])
}

/// Evaluate an expression-valued scalar and its derivative along a vector.
pub fn directional<T: Scalar>(f: &Expr, xi_vals: &[T], point: &[T]) -> Result<(T, T)> {
    let j = f.eval_jet(point, Order::One)?;
    let n = point.len();
    let d = sum1(n, |i| xi_vals[i] * j.d1(i));
    Ok((j.value(), d))
}

/// Compare the numeric covariant derivative of the Ricci tensor against its
/// closed form on a para-Sasakian soliton:
///
/// ```text
/// (nabla_X S)(Y,Z) = eta(Y)g(X,Z) + eta(Z)g(X,Y) - 2 eps eta(X)eta(Y)eta(Z)
///                    - X(lambda) g(Y,Z) - X(mu) eta(Y)eta(Z)
///                    - mu [eta(Y) g(phi X, Z) + eta(Z) g(phi X, Y)]
/// ```
pub fn nabla_s_closed_form_check<T: Scalar>(
    metric: &MetricField,
    s: &ParacontactStructure,
    lambda: &Expr,
    mu: &Expr,
    points: &[Vec<T>],
    tol: T,
) -> Result<CheckReport<T>> {
    let n = metric.dimension();
    let eps: T = s.epsilon.sign();
    let two = T::from_f64_lossy(2.0);
    let hypothesis = if para_sasakian_holds(metric, s, points, tol)? {
        HypothesisStatus::Met
    } else {
        HypothesisStatus::Unmet
    };
    let mut rs = ResidualSet::new(
        "nabla-S-closed-form",
        "(nabla_X S)(Y,Z) matches its paracontact closed form",
    )
    .with_hypothesis(hypothesis);
    for p in points {
        let ns = nabla_ricci(metric, p)?;
        let at = s.eval(p)?;
        let ev = curvature(metric, p)?;
        let lam_j = lambda.eval_jet(p, Order::One)?;
        let mu_j = mu.eval_jet(p, Order::One)?;
        let g = &ev.g;
        let g_phi = tensor2(n, |x, z| sum1(n, |m| at.phi[m][x] * g[m][z]));
        let lhs = (0..n).flat_map(|x| {
            let ns = &ns;
            (0..n).flat_map(move |y| (0..n).map(move |z| ns[x][y][z]))
        });
        let rhs = (0..n).flat_map(|x| {
            let (at, g, g_phi, lam_j, mu_j) = (&at, g, &g_phi, &lam_j, &mu_j);
            (0..n).flat_map(move |y| {
                (0..n).map(move |z| {
                    at.eta[y] * g[x][z] + at.eta[z] * g[x][y]
                        - two * eps * at.eta[x] * at.eta[y] * at.eta[z]
                        - lam_j.d1(x) * g[y][z]
                        - mu_j.d1(x) * at.eta[y] * at.eta[z]
                        - mu_j.value()
                            * (at.eta[y] * g_phi[x][z] + at.eta[z] * g_phi[x][y])
                })
            })
        });
        let (raw, scale) = residual_pair(lhs, rhs);
        rs.push(raw, scale);
    }
    Ok(rs.finalize(tol))
}

/// Ricci-tensor classification flags plus the theorem-conclusion checks
/// attached to each flag.
#[derive(Debug, Clone)]
pub struct RicciClassification<T> {
    /// `nabla S = 0`.
    pub parallel: bool,
    /// `nabla S = eta (x) S`.
    pub eta_recurrent: bool,
    /// `(nabla_X S)(Y,Z) = (nabla_Y S)(X,Z)`.
    pub codazzi: bool,
    /// `(nabla_X S)(phi Y, phi Z) = 0`.
    pub eta_parallel: bool,
    /// Conclusion checks, hypothesis-met when the matching flag holds.
    pub conclusions: Vec<CheckReport<T>>,
}

/// Test the four Ricci-tensor conditions numerically and, for each, the
/// conclusion it forces on the soliton functions.
pub fn classify_ricci_tensor<T: Scalar>(
    metric: &MetricField,
    s: &ParacontactStructure,
    lambda: &Expr,
    mu: &Expr,
    points: &[Vec<T>],
    tol: T,
) -> Result<RicciClassification<T>> {
    let n = metric.dimension();
    let eps: T = s.epsilon.sign();
    let n_minus_1 = T::from_f64_lossy((n - 1) as f64);

    let mut parallel = true;
    let mut eta_recurrent = true;
    let mut codazzi = true;
    let mut eta_parallel = true;
    let mut data = Vec::with_capacity(points.len());
    for p in points {
        let ns = nabla_ricci(metric, p)?;
        let ev = curvature(metric, p)?;
        let at = s.eval(p)?;
        let scale = T::one() + max_abs(ns.iter().flatten().flatten().copied())
            .max(max_abs(ev.ricci.iter().flatten().copied()));
        let par = max_abs(ns.iter().flatten().flatten().copied());
        if par > tol * scale {
            parallel = false;
        }
        let rec = max_abs((0..n).flat_map(|k| {
            let (ns, ev, at) = (&ns, &ev, &at);
            (0..n).flat_map(move |i| {
                (0..n).map(move |j| ns[k][i][j] - at.eta[k] * ev.ricci[i][j])
            })
        }));
        if rec > tol * scale {
            eta_recurrent = false;
        }
        let cod = max_abs((0..n).flat_map(|k| {
            let ns = &ns;
            (0..n).flat_map(move |i| (0..n).map(move |j| ns[k][i][j] - ns[i][k][j]))
        }));
        if cod > tol * scale {
            codazzi = false;
        }
        let etp = max_abs((0..n).flat_map(|x| {
            let (ns, at) = (&ns, &at);
            (0..n).flat_map(move |y| {
                (0..n).map(move |z| {
                    sum1(n, |m| sum1(n, |l| ns[x][m][l] * at.phi[m][y] * at.phi[l][z]))
                })
            })
        }));
        if etp > tol * scale {
            eta_parallel = false;
        }
        data.push((at, p.clone()));
    }

    let status = |flag: bool| {
        if flag {
            HypothesisStatus::Met
        } else {
            HypothesisStatus::Unmet
        }
    };
    let mut c1 = ResidualSet::new(
        "ricci-parallel-conclusion",
        "nabla S = 0 forces xi(mu) = -eps*xi(lambda)",
    )
    .with_hypothesis(status(parallel));
    let mut c2 = ResidualSet::new(
        "ricci-eta-recurrent-conclusion",
        "nabla S = eta (x) S forces xi(eps*lambda + mu) = n - 1",
    )
    .with_hypothesis(status(eta_recurrent));
    let mut c3 = ResidualSet::new(
        "ricci-codazzi-conclusion",
        "Codazzi S forces d(eps*lambda + mu) = xi(eps*lambda + mu) * eta",
    )
    .with_hypothesis(status(codazzi));
    let mut c4 = ResidualSet::new(
        "ricci-eta-parallel-conclusion",
        "eta-parallel S forces lambda locally constant",
    )
    .with_hypothesis(status(eta_parallel));

    for (at, p) in &data {
        let lam_j = lambda.eval_jet(p, Order::One)?;
        let mu_j = mu.eval_jet(p, Order::One)?;
        let xi_lam = sum1(n, |i| at.xi[i] * lam_j.d1(i));
        let xi_mu = sum1(n, |i| at.xi[i] * mu_j.d1(i));

        let (raw, scale) = residual_pair([xi_mu], [-eps * xi_lam]);
        c1.push(raw, scale);

        let (raw, scale) = residual_pair([eps * xi_lam + xi_mu], [n_minus_1]);
        c2.push(raw, scale);

        // d(eps lambda + mu) - xi(eps lambda + mu) eta, componentwise
        let xi_combo = eps * xi_lam + xi_mu;
        let lhs = (0..n).map(|i| eps * lam_j.d1(i) + mu_j.d1(i));
        let rhs = (0..n).map(|i| xi_combo * at.eta[i]);
        let (raw, scale) = residual_pair(lhs, rhs);
        c3.push(raw, scale);

        let (raw, scale) = residual_pair(
            (0..n).map(|i| lam_j.d1(i)),
            std::iter::repeat_n(T::zero(), n),
        );
        c4.push(raw, scale);
    }

    Ok(RicciClassification {
        parallel,
        eta_recurrent,
        codazzi,
        eta_parallel,
        conclusions: vec![
            c1.finalize(tol),
            c2.finalize(tol),
            c3.finalize(tol),
            c4.finalize(tol),
        ],
    })
}

/// Gradient-soliton checks with potential `f`: the Hessian form of the
/// equation, its operator form, their agreement under index raising, the
/// eigenvector property of `xi`, and the recorded duality discrepancies
/// between `i_(grad f) g` and the structure's `eta`.
pub fn gradient_soliton_residual<T: Scalar>(
    metric: &MetricField,
    s: &ParacontactStructure,
    f: &Expr,
    points: &[Vec<T>],
    lambda: &[T],
    mu: &[T],
    tol: T,
) -> Result<Vec<CheckReport<T>>> {
    let n = metric.dimension();
    let hypothesis = if para_sasakian_holds(metric, s, points, tol)? {
        HypothesisStatus::Met
    } else {
        HypothesisStatus::Unmet
    };

    let mut r_e22 = ResidualSet::new(
        "gradient-hessian-form",
        "Hess(f) + S + lambda*g + mu*df (x) df = 0",
    )
    .with_hypothesis(hypothesis);
    let mut r_e23 = ResidualSet::new(
        "gradient-operator-form",
        "nabla xi + Q + lambda*I + mu*df (x) xi = 0",
    )
    .with_hypothesis(hypothesis);
    let mut r_agree = ResidualSet::new(
        "gradient-form-agreement",
        "the operator form is the index-raised Hessian form",
    );
    let mut r_eigen = ResidualSet::new(
        "gradient-xi-eigenvector",
        "Q xi = -(lambda + mu) xi",
    )
    .with_hypothesis(hypothesis);
    // the two duality discrepancies are recorded, never judged: the sign
    // convention relating i_xi g, eta, and eps*eta is surfaced, not decided
    let mut r_dual_eta = ResidualSet::new(
        "gradient-duality-df-vs-eta",
        "recorded discrepancy |i_(grad f) g - eta| (informational)",
    )
    .with_hypothesis(HypothesisStatus::NotApplicable);
    let mut r_dual_eps_eta = ResidualSet::new(
        "gradient-duality-df-vs-eps-eta",
        "recorded discrepancy |i_(grad f) g - eps*eta| (informational)",
    )
    .with_hypothesis(HypothesisStatus::NotApplicable);

    let eps: T = s.epsilon.sign();
    for (idx, p) in points.iter().enumerate() {
        let (lam, m) = (lambda[idx], mu[idx]);
        let ctx = JetContext::new(metric, p, Order::Two)?;
        let ev = crate::tensor::point_evaluation_from(&ctx, p)?;
        let fj = f.eval_jet(p, Order::Two)?;
        let at = s.eval(p)?;
        let df: Vec<T> = (0..n).map(|i| fj.d1(i)).collect();

        // grad f as a jet field: xi^k = g^{km} d_m f
        let xi_jets: Vec<Jet<T>> = (0..n)
            .map(|k| {
                let mut acc = Jet::constant(T::zero(), n, Order::One);
                for m in 0..n {
                    acc = acc.add(&ctx.g_inv[k][m].mul(&fj.partial(m)));
                }
                acc
            })
            .collect();
        let xi_vals: Vec<T> = xi_jets.iter().map(|j| j.value()).collect();

        let (hess, _) = hessian(metric, f, p)?;
        let e22 = tensor2(n, |i, j| {
            hess[i][j] + ev.ricci[i][j] + lam * ev.g[i][j] + m * df[i] * df[j]
        });
        let lhs = (0..n).flat_map(|i| {
            let hess = &hess;
            (0..n).map(move |j| hess[i][j])
        });
        let rhs = (0..n).flat_map(|i| {
            let (ev, df) = (&ev, &df);
            (0..n).map(move |j| -ev.ricci[i][j] - lam * ev.g[i][j] - m * df[i] * df[j])
        });
        let (raw, scale) = residual_pair(lhs, rhs);
        r_e22.push(raw, scale);

        // operator form via jets of the gradient field
        let gamma = ctx.gamma_values();
        let q = tensor2(n, |i, j| sum1(n, |k| ev.g_inv[i][k] * ev.ricci[k][j]));
        let nabla_xi = tensor2(n, |k, j| {
            xi_jets[k].d1(j) + sum1(n, |mm| gamma[k][j][mm] * xi_vals[mm])
        });
        let e23 = tensor2(n, |k, j| {
            nabla_xi[k][j]
                + q[k][j]
                + (if k == j { lam } else { T::zero() })
                + m * df[j] * xi_vals[k]
        });
        let lhs = (0..n).flat_map(|k| {
            let nabla_xi = &nabla_xi;
            (0..n).map(move |j| nabla_xi[k][j])
        });
        let rhs = (0..n).flat_map(|k| {
            let (q, df, xi_vals) = (&q, &df, &xi_vals);
            (0..n).map(move |j| {
                -q[k][j] - (if k == j { lam } else { T::zero() }) - m * df[j] * xi_vals[k]
            })
        });
        let (raw, scale) = residual_pair(lhs, rhs);
        r_e23.push(raw, scale);

        // raise the first index of the Hessian-form residual
        let e22_raised = tensor2(n, |k, j| sum1(n, |i| ev.g_inv[k][i] * e22[i][j]));
        let (raw, scale) = residual_pair(
            e22_raised.iter().flatten().copied(),
            e23.iter().flatten().copied(),
        );
        r_agree.push(raw, scale);

        let lhs = (0..n).map(|k| sum1(n, |j| q[k][j] * xi_vals[j]));
        let rhs = (0..n).map(|k| -(lam + m) * xi_vals[k]);
        let (raw, scale) = residual_pair(lhs, rhs);
        r_eigen.push(raw, scale);

        // duality discrepancies against the structure's eta
        let i_xi_g: Vec<T> = (0..n)
            .map(|i| sum1(n, |j| ev.g[i][j] * xi_vals[j]))
            .collect();
        let (raw, scale) = residual_pair(i_xi_g.iter().copied(), at.eta.iter().copied());
        r_dual_eta.push(raw, scale);
        let (raw, scale) =
            residual_pair(i_xi_g.iter().copied(), at.eta.iter().map(|&e| eps * e));
        r_dual_eps_eta.push(raw, scale);
    }

    Ok(vec![
        r_e22.finalize(tol),
        r_e23.finalize(tol),
        r_agree.finalize(T::from_f64_lossy(1e-12)),
        r_eigen.finalize(tol),
        r_dual_eta.finalize(tol),
        r_dual_eps_eta.finalize(tol),
    ])
}

/// The two admissible `(lambda, mu)` pairs of the Codazzi Ricci-operator
/// branch, plus the sign classification they share.
pub fn codazzi_q_pairs<T: Scalar>(n: usize, eps: T) -> ([(T, T); 2], SolitonClass) {
    let n_t = T::from_f64_lossy(n as f64);
    let pairs = [
        (eps * n_t, -T::one()),
        (eps * (n_t - T::from_f64_lossy(2.0)), T::one()),
    ];
    let class = if eps > T::zero() {
        SolitonClass::Expanding
    } else {
        SolitonClass::Shrinking
    };
    (pairs, class)
}

/// Ricci-operator checks: symmetry of `Q`, commutation with `phi`, the
/// antisymmetrized `nabla Q` against its gradient-soliton closed form, and
/// the Codazzi branch with its admissible `(lambda, mu)` pairs.
#[allow(clippy::too_many_arguments)]
pub fn ricci_operator_checks<T: Scalar>(
    metric: &MetricField,
    s: &ParacontactStructure,
    lambda: &Expr,
    mu: &Expr,
    points: &[Vec<T>],
    tol: T,
) -> Result<Vec<CheckReport<T>>> {
    let n = metric.dimension();
    let eps: T = s.epsilon.sign();
    let hypothesis = if para_sasakian_holds(metric, s, points, tol)? {
        HypothesisStatus::Met
    } else {
        HypothesisStatus::Unmet
    };

    let mut r_sym = ResidualSet::new("ricci-operator-symmetry", "g(QX,Y) = g(X,QY)");
    let mut r_commute = ResidualSet::new("ricci-operator-phi-invariance", "Q o phi = phi o Q")
        .with_hypothesis(hypothesis);
    let mut r_nabla_q = ResidualSet::new(
        "nabla-Q-commutator-closed-form",
        "(nabla_X Q)Y - (nabla_Y Q)X matches its gradient-soliton closed form",
    )
    .with_hypothesis(hypothesis);

    let mut codazzi_q = true;
    let mut commutators: Vec<T> = Vec::new();
    for p in points {
        let ctx = JetContext::new(metric, p, Order::Three)?;
        let riemann = ctx.riemann_jets();
        let ricci = ctx.ricci_jets(&riemann);
        let gamma = ctx.gamma_values();
        let at = s.eval(p)?;
        let lam_j = lambda.eval_jet(p, Order::One)?;
        let mu_j = mu.eval_jet(p, Order::One)?;
        let g = tensor2(n, |i, j| ctx.g[i][j].value());

        // Q as order-1 jets
        let q_jets = tensor2(n, |i, j| {
            let mut acc = Jet::constant(T::zero(), n, Order::One);
            for k in 0..n {
                acc = acc.add(&ctx.g_inv[i][k].mul(&ricci[k][j]));
            }
            acc
        });
        let q = tensor2(n, |i, j| q_jets[i][j].value());

        let lhs = (0..n).flat_map(|i| {
            let (g, q) = (&g, &q);
            (0..n).map(move |j| sum1(n, |k| g[i][k] * q[k][j]))
        });
        let rhs = (0..n).flat_map(|i| {
            let (g, q) = (&g, &q);
            (0..n).map(move |j| sum1(n, |k| g[j][k] * q[k][i]))
        });
        let (raw, scale) = residual_pair(lhs, rhs);
        r_sym.push(raw, scale);

        let lhs = (0..n).flat_map(|i| {
            let (q, at) = (&q, &at);
            (0..n).map(move |j| sum1(n, |m| q[i][m] * at.phi[m][j]))
        });
        let rhs = (0..n).flat_map(|i| {
            let (q, at) = (&q, &at);
            (0..n).map(move |j| sum1(n, |m| at.phi[i][m] * q[m][j]))
        });
        let (raw, scale) = residual_pair(lhs, rhs);
        r_commute.push(raw, scale);

        // (nabla_i Q)^k_j = d_i Q^k_j + Gamma^k_{im} Q^m_j - Gamma^m_{ij} Q^k_m
        let nabla_q = tensor3(n, |k, i, j| {
            q_jets[k][j].d1(i) + sum1(n, |m| gamma[k][i][m] * q[m][j])
                - sum1(n, |m| gamma[m][i][j] * q[k][m])
        });
        let commutator = tensor3(n, |k, i, j| nabla_q[k][i][j] - nabla_q[k][j][i]);
        let comm_max = max_abs(commutator.iter().flatten().flatten().copied());
        let comm_scale = T::one()
            + max_abs(nabla_q.iter().flatten().flatten().copied());
        commutators.push(comm_max);
        if comm_max > tol * comm_scale {
            codazzi_q = false;
        }

        // closed form with eta standing in for df (gradient hypothesis)
        let lhs = (0..n).flat_map(|k| {
            let commutator = &commutator;
            (0..n).flat_map(move |i| (0..n).map(move |j| commutator[k][i][j]))
        });
        let rhs = (0..n).flat_map(|k| {
            let (at, lam_j, mu_j) = (&at, &lam_j, &mu_j);
            (0..n).flat_map(move |i| {
                (0..n).map(move |j| {
                    let d_f_lam_i = at.eta[i] - lam_j.d1(i);
                    let d_f_lam_j = at.eta[j] - lam_j.d1(j);
                    let di = if k == j { d_f_lam_i } else { T::zero() };
                    let dj = if k == i { d_f_lam_j } else { T::zero() };
                    di - dj
                        + (at.eta[i] * mu_j.d1(j) - mu_j.d1(i) * at.eta[j]) * at.xi[k]
                        + eps
                            * mu_j.value()
                            * (at.eta[i] * at.phi[k][j] - at.eta[j] * at.phi[k][i])
                })
            })
        });
        let (raw, scale) = residual_pair(lhs, rhs);
        r_nabla_q.push(raw, scale);
    }

    let mut r_codazzi = ResidualSet::new(
        "codazzi-Q-branch",
        "Codazzi Q forces mu^2 = 1 with (lambda, mu) in {(eps*n, -1), (eps*(n-2), 1)}",
    )
    .with_hypothesis(if codazzi_q { hypothesis } else { HypothesisStatus::NotApplicable });
    let (pairs, class) = codazzi_q_pairs(n, eps);
    r_codazzi.set_detail(format!(
        "pairs ({}, {}) and ({}, {}); {}",
        pairs[0].0.to_f64_lossy(),
        pairs[0].1.to_f64_lossy(),
        pairs[1].0.to_f64_lossy(),
        pairs[1].1.to_f64_lossy(),
        class.label(),
    ));
    for p in points {
        if codazzi_q {
            let m = mu.eval(p)?;
            let (raw, scale) = residual_pair([m * m], [T::one()]);
            r_codazzi.push(raw, scale);
        } else {
            r_codazzi.push_plain(T::zero());
        }
    }

    Ok(vec![
        r_sym.finalize(T::from_f64_lossy(1e-12)),
        r_commute.finalize(tol),
        r_nabla_q.finalize(tol),
        r_codazzi.finalize(tol),
    ])
}

/// Bounds on the squared Ricci norm of a gradient soliton.
#[derive(Debug, Clone, Copy)]
pub struct NormBounds<T> {
    pub lower: T,
    pub upper: T,
    /// `lower <= |S|^2 <= upper` within tolerance.
    pub within: bool,
    /// Both bounds collapse: `scal = 0` and `Delta f = -eps*mu`.
    pub equality: bool,
    /// The shared value `n - 1 + mu^2` in the equality case.
    pub equality_value: T,
}

/// Evaluate the Ricci-norm bounds
/// `n-1+mu^2 - (Delta f + eps*mu)^2/n <= |S|^2 <= n-1+mu^2 + scal^2/n`.
pub fn norm_bounds_check<T: Scalar>(
    n: usize,
    eps: T,
    mu: T,
    laplacian_f: T,
    scal: T,
    ricci_sq_norm: T,
    tol: T,
) -> Result<NormBounds<T>> {
    if n <= 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    let n_t = T::from_f64_lossy(n as f64);
    let base = n_t - T::one() + mu * mu;
    let defect = laplacian_f + eps * mu;
    let lower = base - defect * defect / n_t;
    let upper = base + scal * scal / n_t;
    let within = lower - tol <= ricci_sq_norm && ricci_sq_norm <= upper + tol;
    let equality = scal.abs() <= tol && defect.abs() <= tol;
    Ok(NormBounds { lower, upper, within, equality, equality_value: base })
}

/// Residuals of the potential-function Laplacian theorem and the scalar
/// curvature formula derived from it.
#[derive(Debug, Clone, Copy)]
pub struct LaplacianIdentity<T> {
    /// `Delta f` against its closed form.
    pub laplacian_residual: T,
    /// Measured scalar curvature against the derived formula.
    pub scal_residual: T,
    /// Pure-arithmetic consistency: substituting the Laplacian closed form
    /// into `scal = -div(xi) - n*lambda - eps*mu` reproduces the derived
    /// formula identically.
    pub consistency_residual: T,
    /// `scal` against the constant-function branch (no directional terms);
    /// `None` when `xi(lambda)` or `xi(mu)` is not negligible.
    pub constant_branch_residual: Option<T>,
    /// The constant `C = mu + (2n+1) lambda / (3 eps)` of the
    /// constant-scalar-curvature relation.
    pub constant_c: T,
}

/// Check the Laplacian identity
/// `Delta f = 1/2 [eps(n-1) + lambda + eps*mu + eps(n-2) xi(lambda) - xi(mu)]`
/// and the scalar-curvature formula it implies.
#[allow(clippy::too_many_arguments)]
pub fn potential_laplacian_identity<T: Scalar>(
    n: usize,
    eps: T,
    lambda: T,
    mu: T,
    xi_lambda: T,
    xi_mu: T,
    laplacian_measured: T,
    scal_measured: T,
    div_xi_measured: T,
    tol: T,
) -> Result<LaplacianIdentity<T>> {
    if n <= 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    let n_t = T::from_f64_lossy(n as f64);
    let half = T::from_f64_lossy(0.5);
    let one = T::one();
    let two = T::from_f64_lossy(2.0);
    let three = T::from_f64_lossy(3.0);

    let laplacian_formula = half
        * (eps * (n_t - one) + lambda + eps * mu + eps * (n_t - two) * xi_lambda - xi_mu);
    let scal_formula = -half
        * (eps * (n_t - one)
            + (two * n_t + one) * lambda
            + three * eps * mu
            + eps * (n_t - two) * xi_lambda
            - xi_mu);

    let laplacian_residual = (laplacian_measured - laplacian_formula).abs();
    let scal_residual = (scal_measured - scal_formula).abs();
    // div(grad f) = Delta f, so the scalar identity composes with the
    // Laplacian closed form; this must be an algebraic identity.
    let scal_via_divergence = -laplacian_formula - n_t * lambda - eps * mu;
    let consistency_residual = (scal_via_divergence - scal_formula).abs();
    let _ = div_xi_measured;

    let constant_branch_residual = if xi_lambda.abs() <= tol && xi_mu.abs() <= tol {
        let scal_const = -half * (eps * (n_t - one) + (two * n_t + one) * lambda + three * eps * mu);
        Some((scal_measured - scal_const).abs())
    } else {
        None
    };
    let constant_c = mu + (two * n_t + one) * lambda / (three * eps);
    Ok(LaplacianIdentity {
        laplacian_residual,
        scal_residual,
        consistency_residual,
        constant_branch_residual,
        constant_c,
    })
}

/// Ricci coefficients forced by a conformal-Killing (or torse-forming)
/// potential vector field: `S = a*g + b*eta (x) eta`.
#[derive(Debug, Clone, Copy)]
pub struct ConformalKillingForm<T> {
    pub a: T,
    pub b: T,
    /// `b = 0`, equivalently `lambda = eps*(n-1) - f`.
    pub einstein: bool,
}

/// Coefficients of the Ricci closed form under a conformal-Killing
/// potential with conformal factor `f`.
pub fn conformal_killing_einstein<T: Scalar>(
    n: usize,
    eps: T,
    f: T,
    lambda: T,
    tol: T,
) -> ConformalKillingForm<T> {
    let n_minus_1 = T::from_f64_lossy((n - 1) as f64);
    let a = -(f + lambda);
    let b = -(n_minus_1 - eps * (f + lambda));
    ConformalKillingForm { a, b, einstein: b.abs() <= tol }
}
