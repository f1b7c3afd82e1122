//! Check reports and the serializable verification report.
//!
//! Residual convention used everywhere: a check evaluates some identity
//! `lhs = rhs` over tensor components; the reported residual is the raw
//! max-abs of `lhs - rhs`, and the pass decision compares it against
//! `tol * scale` with `scale = 1 + max(|lhs|, |rhs|)` so thresholds stay
//! meaningful on fixtures with exponentially growing entries.

use serde::Serialize;

use crate::scalar::Scalar;

/// Status of a check's mathematical hypothesis at the sampled points.
///
/// Theorem conclusions are evaluated even when their hypothesis fails, so
/// a report can distinguish "holds vacuously", "holds anyway", "fails".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypothesisStatus {
    /// The check is not conditional on any hypothesis.
    Unconditional,
    /// The hypothesis was verified at the sampled points.
    Met,
    /// The hypothesis fails at one or more sampled points.
    Unmet,
    /// The branch does not apply to the supplied data (e.g. mu != 0 for a
    /// mu = 0 branch); the residual is vacuous.
    NotApplicable,
}

impl HypothesisStatus {
    pub fn label(self) -> &'static str {
        match self {
            HypothesisStatus::Unconditional => "unconditional",
            HypothesisStatus::Met => "met",
            HypothesisStatus::Unmet => "unmet",
            HypothesisStatus::NotApplicable => "n/a",
        }
    }
}

/// Outcome of one named check over a set of sampled points.
#[derive(Debug, Clone)]
pub struct CheckReport<T> {
    pub name: &'static str,
    /// The identity or statement being verified, in plain ASCII math.
    pub anchor: &'static str,
    pub hypothesis: HypothesisStatus,
    /// Raw max-abs residual per point, ordered by sample index.
    pub residuals: Vec<T>,
    /// Max over points of the raw residual.
    pub max_residual: T,
    /// Max over points of the per-point scale `1 + max(|lhs|, |rhs|)`.
    pub scale: T,
    pub tolerance: T,
    /// Whether every point's residual stayed within `tol * scale`.
    pub residual_ok: bool,
    /// Whether the row falsifies anything: false only when the residual
    /// exceeds tolerance under a hypothesis that actually held.
    pub pass: bool,
    /// Optional classification or derived-value payload.
    pub detail: Option<String>,
}

impl<T: Scalar> CheckReport<T> {
    pub fn points(&self) -> usize {
        self.residuals.len()
    }

    /// Verdict distinguishing "holds", "fails", "holds despite an unmet
    /// hypothesis", "vacuous" (unmet hypothesis, conclusion false too),
    /// and "n/a" (branch does not apply).
    pub fn status(&self) -> &'static str {
        match (self.hypothesis, self.residual_ok) {
            (HypothesisStatus::Unconditional | HypothesisStatus::Met, true) => "pass",
            (HypothesisStatus::Unconditional | HypothesisStatus::Met, false) => "fail",
            (HypothesisStatus::Unmet, true) => "holds-anyway",
            (HypothesisStatus::Unmet, false) => "vacuous",
            (HypothesisStatus::NotApplicable, _) => "n/a",
        }
    }
}

/// Accumulates per-point residuals for one check.
#[derive(Debug, Clone)]
pub struct ResidualSet<T> {
    name: &'static str,
    anchor: &'static str,
    hypothesis: HypothesisStatus,
    per_point: Vec<(T, T)>, // (raw, scale)
    detail: Option<String>,
}

impl<T: Scalar> ResidualSet<T> {
    pub fn new(name: &'static str, anchor: &'static str) -> Self {
        ResidualSet {
            name,
            anchor,
            hypothesis: HypothesisStatus::Unconditional,
            per_point: Vec::new(),
            detail: None,
        }
    }

    pub fn with_hypothesis(mut self, h: HypothesisStatus) -> Self {
        self.hypothesis = h;
        self
    }

    pub fn set_hypothesis(&mut self, h: HypothesisStatus) {
        self.hypothesis = h;
    }

    pub fn set_detail(&mut self, detail: impl Into<String>) {
        self.detail = Some(detail.into());
    }

    /// Record one point's raw residual and scale.
    pub fn push(&mut self, raw: T, scale: T) {
        self.per_point.push((raw, scale));
    }

    /// Record a residual with the trivial scale 1.
    pub fn push_plain(&mut self, raw: T) {
        self.per_point.push((raw, T::one()));
    }

    pub fn finalize(self, tolerance: T) -> CheckReport<T> {
        let mut max_residual = T::zero();
        let mut max_scale = T::one();
        let mut residual_ok = true;
        for &(raw, scale) in &self.per_point {
            max_residual = max_residual.max(raw);
            max_scale = max_scale.max(scale);
            if raw > tolerance * scale {
                residual_ok = false;
            }
        }
        // an exceeded tolerance under an unmet hypothesis falsifies nothing
        let pass = residual_ok
            || matches!(
                self.hypothesis,
                HypothesisStatus::Unmet | HypothesisStatus::NotApplicable
            );
        CheckReport {
            name: self.name,
            anchor: self.anchor,
            hypothesis: self.hypothesis,
            residuals: self.per_point.iter().map(|&(r, _)| r).collect(),
            max_residual,
            scale: max_scale,
            tolerance,
            residual_ok,
            pass,
            detail: self.detail,
        }
    }
}

/// Max-abs difference of two component lists plus the shared scale.
pub fn residual_pair<T: Scalar>(
    lhs: impl IntoIterator<Item = T>,
    rhs: impl IntoIterator<Item = T>,
) -> (T, T) {
    let mut raw = T::zero();
    let mut amp = T::zero();
    let mut rhs = rhs.into_iter();
    for l in lhs {
        let r = rhs.next().expect("component count mismatch");
        raw = raw.max((l - r).abs());
        amp = amp.max(l.abs()).max(r.abs());
    }
    assert!(rhs.next().is_none(), "component count mismatch");
    (raw, T::one() + amp)
}

/// Residual of components against zero.
pub fn residual_zero<T: Scalar>(lhs: impl IntoIterator<Item = T>) -> (T, T) {
    let mut raw = T::zero();
    for l in lhs {
        raw = raw.max(l.abs());
    }
    (raw, T::one() + raw)
}

/// One row of the serializable report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub anchor: String,
    pub hypothesis: String,
    pub points: usize,
    pub max_residual: String,
    pub scale: String,
    pub status: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Deterministic, serializable verification report.
///
/// Identical inputs produce byte-identical JSON: field order is fixed by
/// declaration order and every floating-point value is formatted with 17
/// significant digits.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub format_version: u32,
    pub engine_version: String,
    pub fixture: String,
    pub suite: String,
    pub tolerance: String,
    pub seed: u64,
    pub sampling_mode: String,
    pub points: usize,
    pub checks: Vec<CheckRow>,
    pub overall: bool,
}

/// Format a float with 17 significant digits, stable across runs.
pub fn format_sig17<T: Scalar>(x: T) -> String {
    format!("{:.16e}", x.to_f64_lossy())
}

impl VerificationReport {
    pub fn new(
        fixture: &str,
        suite: &str,
        tolerance: f64,
        seed: u64,
        sampling_mode: &str,
        points: usize,
    ) -> Self {
        VerificationReport {
            format_version: 1,
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            fixture: fixture.to_string(),
            suite: suite.to_string(),
            tolerance: format_sig17(tolerance),
            seed,
            sampling_mode: sampling_mode.to_string(),
            points,
            checks: Vec::new(),
            overall: true,
        }
    }

    pub fn push_check<T: Scalar>(&mut self, check: &CheckReport<T>) {
        if !check.pass {
            self.overall = false;
        }
        self.checks.push(CheckRow {
            name: check.name.to_string(),
            anchor: check.anchor.to_string(),
            hypothesis: check.hypothesis.label().to_string(),
            points: check.points(),
            max_residual: format_sig17(check.max_residual),
            scale: format_sig17(check.scale),
            status: check.status().to_string(),
            pass: check.pass,
            detail: check.detail.clone(),
        });
    }

    /// Stable JSON rendering.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    /// Aligned plain-text table, one row per check.
    pub fn to_text(&self, color: bool) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "fixture: {}  suite: {}  tol: {}  seed: {}  sampling: {} ({} points)\n",
            self.fixture, self.suite, self.tolerance, self.seed, self.sampling_mode, self.points
        ));
        let name_w = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(8)
            .max(8);
        out.push_str(&format!(
            "{:<name_w$}  {:<13}  {:>6}  {:>24}  {}\n",
            "CHECK", "HYPOTHESIS", "POINTS", "MAX RESIDUAL", "RESULT"
        ));
        for c in &self.checks {
            let verdict = match c.status.as_str() {
                "pass" => "PASS",
                "fail" => "FAIL",
                "holds-anyway" => "HOLDS-ANYWAY",
                "vacuous" => "VACUOUS",
                _ => "N/A",
            };
            let verdict = if color {
                if c.pass {
                    format!("\u{1b}[32m{verdict}\u{1b}[0m")
                } else {
                    format!("\u{1b}[31m{verdict}\u{1b}[0m")
                }
            } else {
                verdict.to_string()
            };
            out.push_str(&format!(
                "{:<name_w$}  {:<13}  {:>6}  {:>24}  {}{}\n",
                c.name,
                c.hypothesis,
                c.points,
                c.max_residual,
                verdict,
                c.detail
                    .as_ref()
                    .map(|d| format!("  [{d}]"))
                    .unwrap_or_default(),
            ));
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.overall { "PASS" } else { "FAIL" }
        ));
        out
    }
}
