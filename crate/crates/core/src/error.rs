//! Crate-wide error type.

use thiserror::Error;

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while parsing, evaluating, or verifying.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed expression source.
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    /// Identifier that is neither a chart coordinate, a function, nor a constant.
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    /// `^` exponent contains a coordinate reference.
    #[error("exponent at byte {offset} is not a constant subexpression")]
    NonConstantExponent { offset: usize },

    /// Function evaluated outside its domain.
    #[error("domain error: {function}({value}) is undefined")]
    Domain { function: &'static str, value: f64 },

    /// Metric determinant below the scale-invariant degeneracy threshold.
    #[error("degenerate metric: |det g| = {det:e} <= threshold {threshold:e}")]
    DegenerateMetric { det: f64, threshold: f64 },

    /// A check was invoked whose precondition fails at the point.
    #[error("precondition unmet for {check}: residual {residual:e}")]
    PreconditionUnmet { check: &'static str, residual: f64 },

    /// Measured g(xi,xi) is inconsistent with the declared epsilon.
    #[error("measured g(xi,xi) = {measured} inconsistent with declared epsilon = {declared}")]
    InconsistentEpsilon { measured: f64, declared: i8 },

    /// The structure vector field is lightlike at the point.
    #[error("xi is lightlike: g(xi,xi) = {value:e}")]
    LightlikeXi { value: f64 },

    /// Classification over an empty sample set.
    #[error("empty input")]
    EmptyInput,

    /// Scalar theorem requires dimension > 2.
    #[error("dimension {n} too small (need n > 2)")]
    DimensionTooSmall { n: usize },

    /// Manifold spec file is malformed.
    #[error("spec error{}: {message}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Spec { message: String, line: Option<usize> },

    /// I/O failure while reading or writing files.
    #[error("file error on {path}: {message}")]
    File { path: String, message: String },
}

impl Error {
    pub(crate) fn spec(message: impl Into<String>) -> Self {
        Error::Spec { message: message.into(), line: None }
    }

    pub(crate) fn spec_at(message: impl Into<String>, line: usize) -> Self {
        Error::Spec { message: message.into(), line: Some(line) }
    }
}
