//! Almost paracontact structure verification.
//!
//! A structure is the quadruple `(phi, xi, eta, epsilon)` with `phi` a
//! (1,1)-tensor, `xi` a vector field, `eta` a 1-form, and `epsilon = +/-1`.
//! The check functions evaluate the defining axioms, the metric
//! compatibility conditions, the para-Sasakian condition, and the curvature
//! identities that follow from it, at supplied sample points. Failures are
//! report content, not errors; the identities record whether their
//! hypothesis held so that "holds anyway" is distinguishable from "holds".

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{Jet, Order};
use crate::linalg::{sum1, tensor2, tensor3};
use crate::report::{residual_pair, CheckReport, HypothesisStatus, ResidualSet};
use crate::scalar::Scalar;
use crate::tensor::{curvature, JetContext, MetricField};

/// Sign of `g(xi, xi)`, enumerated so that `epsilon^2 = 1` by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Epsilon {
    /// `epsilon = +1`.
    Spacelike,
    /// `epsilon = -1`.
    Timelike,
}

impl Epsilon {
    pub fn sign<T: Scalar>(self) -> T {
        match self {
            Epsilon::Spacelike => T::one(),
            Epsilon::Timelike => -T::one(),
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Epsilon::Spacelike => 1,
            Epsilon::Timelike => -1,
        }
    }

    pub fn from_i8(v: i8) -> Result<Epsilon> {
        match v {
            1 => Ok(Epsilon::Spacelike),
            -1 => Ok(Epsilon::Timelike),
            _ => Err(Error::spec(format!("epsilon must be +1 or -1, got {v}"))),
        }
    }
}

/// Causal character of the structure vector field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
}

/// The structure fields as expressions over the chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ParacontactStructure {
    /// Mixed components `phi^i_j`, row `i` = output component.
    pub phi: Vec<Vec<Expr>>,
    /// Vector components `xi^i`.
    pub xi: Vec<Expr>,
    /// Covector components `eta_i`.
    pub eta: Vec<Expr>,
    pub epsilon: Epsilon,
}

impl ParacontactStructure {
    pub fn dimension(&self) -> usize {
        self.xi.len()
    }

    /// Validate that all component shapes agree with the chart dimension.
    pub fn check_shape(&self, n: usize) -> Result<()> {
        if self.xi.len() != n || self.eta.len() != n {
            return Err(Error::spec("xi/eta component count differs from dimension"));
        }
        if self.phi.len() != n || self.phi.iter().any(|row| row.len() != n) {
            return Err(Error::spec("phi matrix shape differs from dimension"));
        }
        Ok(())
    }

    /// Values of `(phi, xi, eta)` at a point.
    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<StructureAt<T>> {
        let n = self.dimension();
        let mut phi = Vec::with_capacity(n);
        for row in &self.phi {
            let vals: Result<Vec<T>> = row.iter().map(|e| e.eval(point)).collect();
            phi.push(vals?);
        }
        let xi: Result<Vec<T>> = self.xi.iter().map(|e| e.eval(point)).collect();
        let eta: Result<Vec<T>> = self.eta.iter().map(|e| e.eval(point)).collect();
        Ok(StructureAt { phi, xi: xi?, eta: eta? })
    }

    /// Order-1 jets of the `phi` and `xi` components at a point.
    pub fn eval_jets<T: Scalar>(
        &self,
        point: &[T],
    ) -> Result<(Vec<Vec<Jet<T>>>, Vec<Jet<T>>)> {
        let n = self.dimension();
        let mut phi = Vec::with_capacity(n);
        for row in &self.phi {
            let vals: Result<Vec<Jet<T>>> =
                row.iter().map(|e| e.eval_jet(point, Order::One)).collect();
            phi.push(vals?);
        }
        let xi: Result<Vec<Jet<T>>> =
            self.xi.iter().map(|e| e.eval_jet(point, Order::One)).collect();
        Ok((phi, xi?))
    }
}

/// Structure values at one point.
#[derive(Debug, Clone)]
pub struct StructureAt<T> {
    pub phi: Vec<Vec<T>>,
    pub xi: Vec<T>,
    pub eta: Vec<T>,
}

impl<T: Scalar> StructureAt<T> {
    /// `(phi^2)^i_j`.
    pub fn phi_squared(&self) -> Vec<Vec<T>> {
        let n = self.xi.len();
        tensor2(n, |i, j| sum1(n, |m| self.phi[i][m] * self.phi[m][j]))
    }

    /// `eta(xi)`.
    pub fn eta_xi(&self) -> T {
        sum1(self.xi.len(), |i| self.eta[i] * self.xi[i])
    }
}

/// Verify the four structure axioms at every sampled point.
///
/// Residual rows: `phi^2 = I - eta (x) xi`, `eta(xi) = 1`, `phi xi = 0`,
/// `eta o phi = 0`.
pub fn check_axioms<T: Scalar>(
    s: &ParacontactStructure,
    points: &[Vec<T>],
    tol: T,
) -> Result<Vec<CheckReport<T>>> {
    let n = s.dimension();
    let mut r_phi2 = ResidualSet::new("axiom-phi-squared", "phi^2 = I - eta (x) xi");
    let mut r_eta_xi = ResidualSet::new("axiom-eta-xi", "eta(xi) = 1");
    let mut r_phi_xi = ResidualSet::new("axiom-phi-xi", "phi(xi) = 0");
    let mut r_eta_phi = ResidualSet::new("axiom-eta-phi", "eta o phi = 0");
    for p in points {
        let at = s.eval(p)?;
        let phi2 = at.phi_squared();
        let lhs = (0..n).flat_map(|i| (0..n).map({
            let phi2 = &phi2;
            move |j| phi2[i][j]
        }));
        let rhs = (0..n).flat_map(|i| (0..n).map({
            let at = &at;
            move |j| (if i == j { T::one() } else { T::zero() }) - at.xi[i] * at.eta[j]
        }));
        let (raw, scale) = residual_pair(lhs, rhs);
        r_phi2.push(raw, scale);

        let (raw, scale) = residual_pair([at.eta_xi()], [T::one()]);
        r_eta_xi.push(raw, scale);

        let phi_xi = (0..n).map(|i| sum1(n, |j| at.phi[i][j] * at.xi[j]));
        let (raw, scale) = residual_pair(phi_xi, std::iter::repeat_n(T::zero(), n));
        r_phi_xi.push(raw, scale);

        let eta_phi = (0..n).map(|j| sum1(n, |i| at.eta[i] * at.phi[i][j]));
        let (raw, scale) = residual_pair(eta_phi, std::iter::repeat_n(T::zero(), n));
        r_eta_phi.push(raw, scale);
    }
    Ok(vec![
        r_phi2.finalize(tol),
        r_eta_xi.finalize(tol),
        r_phi_xi.finalize(tol),
        r_eta_phi.finalize(tol),
    ])
}

/// Verify metric compatibility of the structure at every sampled point.
///
/// Residual rows: `g(phi X, phi Y) = g(X,Y) - eps eta(X) eta(Y)`,
/// `i_xi g = eps eta`, `g(X, phi Y) = g(phi X, Y)`, `g(xi, xi) = eps`.
pub fn check_compatibility<T: Scalar>(
    metric: &MetricField,
    s: &ParacontactStructure,
    points: &[Vec<T>],
    tol: T,
) -> Result<Vec<CheckReport<T>>> {
    let n = s.dimension();
    let eps: T = s.epsilon.sign();
    let mut r_metric = ResidualSet::new(
        "compat-phi-metric",
        "g(phi X, phi Y) = g(X,Y) - eps*eta(X)*eta(Y)",
    );
    let mut r_dual = ResidualSet::new("compat-xi-dual", "i_xi g = eps*eta");
    let mut r_selfadj = ResidualSet::new("compat-phi-self-adjoint", "g(X, phi Y) = g(phi X, Y)");
    let mut r_norm = ResidualSet::new("compat-xi-norm", "g(xi, xi) = eps");
    for p in points {
        let ctx = JetContext::new(metric, p, Order::Zero)?;
        let g = tensor2(n, |i, j| ctx.g[i][j].value());
        let at = s.eval(p)?;

        let lhs = (0..n).flat_map(|i| {
            let (g, at) = (&g, &at);
            (0..n).map(move |j| {
                sum1(n, |m| sum1(n, |l| at.phi[m][i] * at.phi[l][j] * g[m][l]))
            })
        });
        let rhs = (0..n).flat_map(|i| {
            let (g, at) = (&g, &at);
            (0..n).map(move |j| g[i][j] - eps * at.eta[i] * at.eta[j])
        });
        let (raw, scale) = residual_pair(lhs, rhs);
        r_metric.push(raw, scale);

        let lhs = (0..n).map(|i| sum1(n, |j| g[i][j] * at.xi[j]));
        let rhs = (0..n).map(|i| eps * at.eta[i]);
        let (raw, scale) = residual_pair(lhs, rhs);
        r_dual.push(raw, scale);

        let lhs = (0..n).flat_map(|i| {
            let (g, at) = (&g, &at);
            (0..n).map(move |j| sum1(n, |k| g[i][k] * at.phi[k][j]))
        });
        let rhs = (0..n).flat_map(|i| {
            let (g, at) = (&g, &at);
            (0..n).map(move |j| sum1(n, |k| g[j][k] * at.phi[k][i]))
        });
        let (raw, scale) = residual_pair(lhs, rhs);
        r_selfadj.push(raw, scale);

        let xi_norm = sum1(n, |i| sum1(n, |j| g[i][j] * at.xi[i] * at.xi[j]));
        let (raw, scale) = residual_pair([xi_norm], [eps]);
        r_norm.push(raw, scale);
    }
    Ok(vec![
        r_metric.finalize(tol),
        r_dual.finalize(tol),
        r_selfadj.finalize(tol),
        r_norm.finalize(tol),
    ])
}

fn max_failed_residual<T: Scalar>(reports: &[CheckReport<T>]) -> Option<T> {
    let mut worst: Option<T> = None;
    for r in reports {
        if !r.pass {
            worst = Some(worst.map_or(r.max_residual, |w: T| w.max(r.max_residual)));
        }
    }
    worst
}

/// Verify the para-Sasakian condition at every sampled point.
///
/// Residual rows: `(nabla_X phi)Y = -g(phi X, phi Y) xi - eps*eta(Y) phi^2 X`
/// and `nabla xi = eps*phi`. Errors with `PreconditionUnmet` when the
/// axiom or compatibility suites fail at the given tolerance.
pub fn check_para_sasakian<T: Scalar>(
    metric: &MetricField,
    s: &ParacontactStructure,
    points: &[Vec<T>],
    tol: T,
) -> Result<Vec<CheckReport<T>>> {
    let axioms = check_axioms(s, points, tol)?;
    let compat = check_compatibility(metric, s, points, tol)?;
    if let Some(residual) = max_failed_residual(&axioms).or(max_failed_residual(&compat)) {
        return Err(Error::PreconditionUnmet {
            check: "para-sasakian",
            residual: residual.to_f64_lossy(),
        });
    }
    para_sasakian_rows(metric, s, points, tol)
}

/// The para-Sasakian residual rows without the precondition gate.
pub(crate) fn para_sasakian_rows<T: Scalar>(
    metric: &MetricField,
    s: &ParacontactStructure,
    points: &[Vec<T>],
    tol: T,
) -> Result<Vec<CheckReport<T>>> {
    let n = s.dimension();
    let eps: T = s.epsilon.sign();
    let mut r_phi = ResidualSet::new(
        "para-sasakian: nabla-phi-condition",
        "(nabla_X phi)Y = -g(phi X, phi Y)*xi - eps*eta(Y)*phi^2 X",
    );
    let mut r_xi = ResidualSet::new("para-sasakian: nabla-xi-vs-eps-phi", "nabla xi = eps*phi");
    for p in points {
        let ctx = JetContext::new(metric, p, Order::One)?;
        let gamma = ctx.gamma_values();
        let g = tensor2(n, |i, j| ctx.g[i][j].value());
        let at = s.eval(p)?;
        let (phi_jets, xi_jets) = s.eval_jets(p)?;
        let phi2 = at.phi_squared();

        // (nabla_i phi)^k_j = d_i phi^k_j + Gamma^k_{im} phi^m_j - Gamma^m_{ij} phi^k_m
        let nabla_phi = tensor3(n, |k, i, j| {
            phi_jets[k][j].d1(i)
                + sum1(n, |m| gamma[k][i][m] * at.phi[m][j])
                - sum1(n, |m| gamma[m][i][j] * at.phi[k][m])
        });
        let g_phi_phi = tensor2(n, |i, j| {
            sum1(n, |m| sum1(n, |l| at.phi[m][i] * at.phi[l][j] * g[m][l]))
        });
        let lhs = (0..n).flat_map(|k| {
            let nabla_phi = &nabla_phi;
            (0..n).flat_map(move |i| (0..n).map(move |j| nabla_phi[k][i][j]))
        });
        let rhs = (0..n).flat_map(|k| {
            let (g_phi_phi, at, phi2) = (&g_phi_phi, &at, &phi2);
            (0..n).flat_map(move |i| {
                (0..n).map(move |j| {
                    -g_phi_phi[i][j] * at.xi[k] - eps * at.eta[j] * phi2[k][i]
                })
            })
        });
        let (raw, scale) = residual_pair(lhs, rhs);
        r_phi.push(raw, scale);

        // (nabla xi)^k_i = d_i xi^k + Gamma^k_{im} xi^m
        let nabla_xi = tensor2(n, |k, i| {
            xi_jets[k].d1(i) + sum1(n, |m| gamma[k][i][m] * at.xi[m])
        });
        let lhs = (0..n).flat_map(|k| {
            let nabla_xi = &nabla_xi;
            (0..n).map(move |i| nabla_xi[k][i])
        });
        let rhs = (0..n).flat_map(|k| {
            let at = &at;
            (0..n).map(move |i| eps * at.phi[k][i])
        });
        let (raw, scale) = residual_pair(lhs, rhs);
        r_xi.push(raw, scale);
    }
    Ok(vec![r_phi.finalize(tol), r_xi.finalize(tol)])
}

/// Whether the para-Sasakian condition holds at every point, evaluated
/// quietly (axiom preconditions included).
pub fn para_sasakian_holds<T: Scalar>(
    metric: &MetricField,
    s: &ParacontactStructure,
    points: &[Vec<T>],
    tol: T,
) -> Result<bool> {
    Ok(match check_para_sasakian(metric, s, points, tol) {
        Ok(rows) => rows.iter().all(|r| r.pass),
        Err(Error::PreconditionUnmet { .. }) => false,
        Err(e) => return Err(e),
    })
}

/// Verify the curvature identities of a para-Sasakian structure.
///
/// Runs unconditionally; each row records whether the para-Sasakian
/// hypothesis held at the sampled points. Rows:
/// `R(X,Y)xi = eta(X)Y - eta(Y)X`,
/// `R(xi,X)Y = -eps*g(X,Y)xi + eta(Y)X`,
/// `eta(R(X,Y)Z) = -eps*eta(X)g(Y,Z) + eps*eta(Y)g(X,Z)`,
/// `S(X,xi) = -(n-1)*eta(X)`, and `Q o phi = phi o Q`.
pub fn check_curvature_identities<T: Scalar>(
    metric: &MetricField,
    s: &ParacontactStructure,
    points: &[Vec<T>],
    tol: T,
) -> Result<Vec<CheckReport<T>>> {
    let n = s.dimension();
    let eps: T = s.epsilon.sign();
    let hypothesis = if para_sasakian_holds(metric, s, points, tol)? {
        HypothesisStatus::Met
    } else {
        HypothesisStatus::Unmet
    };
    let mut r1 = ResidualSet::new("identity-R(X,Y)xi", "R(X,Y)xi = eta(X)Y - eta(Y)X")
        .with_hypothesis(hypothesis);
    let mut r2 = ResidualSet::new(
        "identity-R(xi,X)Y",
        "R(xi,X)Y = -eps*g(X,Y)xi + eta(Y)X",
    )
    .with_hypothesis(hypothesis);
    let mut r3 = ResidualSet::new(
        "identity-eta(R(X,Y)Z)",
        "eta(R(X,Y)Z) = -eps*eta(X)g(Y,Z) + eps*eta(Y)g(X,Z)",
    )
    .with_hypothesis(hypothesis);
    let mut r4 = ResidualSet::new("identity-S(X,xi)", "S(X,xi) = -(n-1)*eta(X)")
        .with_hypothesis(hypothesis);
    let mut r5 = ResidualSet::new("identity-Q-phi-commute", "Q o phi = phi o Q")
        .with_hypothesis(hypothesis);
    let n_minus_1 = T::from_f64_lossy((n - 1) as f64);
    for p in points {
        let ev = curvature(metric, p)?;
        let at = s.eval(p)?;
        let (g, riemann, ricci) = (&ev.g, &ev.riemann, &ev.ricci);

        // R(d_i, d_j) xi = xi^k R^l_{kij} d_l
        let lhs = (0..n).flat_map(|l| {
            let (riemann, at) = (riemann, &at);
            (0..n).flat_map(move |i| {
                (0..n).map(move |j| sum1(n, |k| at.xi[k] * riemann[l][k][i][j]))
            })
        });
        let rhs = (0..n).flat_map(|l| {
            let at = &at;
            (0..n).flat_map(move |i| {
                (0..n).map(move |j| {
                    let di = if l == j { at.eta[i] } else { T::zero() };
                    let dj = if l == i { at.eta[j] } else { T::zero() };
                    di - dj
                })
            })
        });
        let (raw, scale) = residual_pair(lhs, rhs);
        r1.push(raw, scale);

        // R(xi, d_j) d_k = xi^i R^l_{kij} d_l
        let lhs = (0..n).flat_map(|l| {
            let (riemann, at) = (riemann, &at);
            (0..n).flat_map(move |j| {
                (0..n).map(move |k| sum1(n, |i| at.xi[i] * riemann[l][k][i][j]))
            })
        });
        let rhs = (0..n).flat_map(|l| {
            let (g, at) = (g, &at);
            (0..n).flat_map(move |j| {
                (0..n).map(move |k| {
                    -eps * g[j][k] * at.xi[l]
                        + if l == j { at.eta[k] } else { T::zero() }
                })
            })
        });
        let (raw, scale) = residual_pair(lhs, rhs);
        r2.push(raw, scale);

        let lhs = (0..n).flat_map(|i| {
            let (riemann, at) = (riemann, &at);
            (0..n).flat_map(move |j| {
                (0..n).map(move |k| sum1(n, |l| at.eta[l] * riemann[l][k][i][j]))
            })
        });
        let rhs = (0..n).flat_map(|i| {
            let (g, at) = (g, &at);
            (0..n).flat_map(move |j| {
                (0..n).map(move |k| -eps * at.eta[i] * g[j][k] + eps * at.eta[j] * g[i][k])
            })
        });
        let (raw, scale) = residual_pair(lhs, rhs);
        r3.push(raw, scale);

        let lhs = (0..n).map(|i| sum1(n, |j| ricci[i][j] * at.xi[j]));
        let rhs = (0..n).map(|i| -n_minus_1 * at.eta[i]);
        let (raw, scale) = residual_pair(lhs, rhs);
        r4.push(raw, scale);

        // Q^i_j = g^{ik} S_kj
        let q = tensor2(n, |i, j| sum1(n, |k| ev.g_inv[i][k] * ricci[k][j]));
        let lhs = (0..n).flat_map(|i| {
            let (q, at) = (&q, &at);
            (0..n).map(move |j| sum1(n, |m| q[i][m] * at.phi[m][j]))
        });
        let rhs = (0..n).flat_map(|i| {
            let (q, at) = (&q, &at);
            (0..n).map(move |j| sum1(n, |m| at.phi[i][m] * q[m][j]))
        });
        let (raw, scale) = residual_pair(lhs, rhs);
        r5.push(raw, scale);
    }
    Ok(vec![
        r1.finalize(tol),
        r2.finalize(tol),
        r3.finalize(tol),
        r4.finalize(tol),
        r5.finalize(tol),
    ])
}

/// Classify the causal character of `xi` at a point and cross-check it
/// against the declared `epsilon`.
pub fn classify_causal_character<T: Scalar>(
    metric: &MetricField,
    s: &ParacontactStructure,
    point: &[T],
    tol: T,
) -> Result<CausalCharacter> {
    let n = s.dimension();
    let ctx = JetContext::new(metric, point, Order::Zero)?;
    let at = s.eval(point)?;
    let v = sum1(n, |i| sum1(n, |j| ctx.g[i][j].value() * at.xi[i] * at.xi[j]));
    if v.abs() < tol {
        return Err(Error::LightlikeXi { value: v.to_f64_lossy() });
    }
    let character = if (v - T::one()).abs() <= tol {
        CausalCharacter::Spacelike
    } else if (v + T::one()).abs() <= tol {
        CausalCharacter::Timelike
    } else {
        return Err(Error::InconsistentEpsilon {
            measured: v.to_f64_lossy(),
            declared: s.epsilon.as_i8(),
        });
    };
    let consistent = matches!(
        (character, s.epsilon),
        (CausalCharacter::Spacelike, Epsilon::Spacelike)
            | (CausalCharacter::Timelike, Epsilon::Timelike)
    );
    if !consistent {
        return Err(Error::InconsistentEpsilon {
            measured: v.to_f64_lossy(),
            declared: s.epsilon.as_i8(),
        });
    }
    Ok(character)
}
