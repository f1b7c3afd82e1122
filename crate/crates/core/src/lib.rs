//! Numerical verification engine for pseudo-Riemannian manifolds carrying
//! almost paracontact structure.
//!
//! The crate evaluates curvature and derived tensors from closed-form metric
//! data and certifies (or refutes) structural axioms, curvature identities,
//! and soliton equations at sampled chart points:
//!
//! * [`expr`] — expression parsing over chart coordinates,
//! * [`jet`] — truncated Taylor arithmetic carrying partials up to order 3,
//! * [`tensor`] — metric, connection, curvature, differential operators,
//! * [`structures`] — almost paracontact axiom and identity suites,
//! * [`solitons`] — soliton equations, pointwise fits, theorem checks,
//! * [`specfile`], [`sampling`], [`suites`], [`report`], [`fixtures`] — the
//!   verification harness around them.
//!
//! Numeric kernels are generic over [`scalar::Scalar`] (`f32` or `f64`);
//! the aliases below pin the `f64` instantiations the harness uses.

pub mod chart;
pub mod error;
pub mod expr;
pub mod jet;
pub mod linalg;
pub mod fixtures;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod solitons;
pub mod specfile;
pub mod structures;
pub mod suites;
pub mod tensor;

pub use chart::Chart;
pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use jet::{Jet, Order};
pub use report::VerificationReport;
pub use sampling::{Sampling, SamplingMode};
pub use scalar::Scalar;
pub use specfile::{load_manifold_spec, parse_manifold_spec, serialize_manifold_spec, ManifoldSpec};
pub use suites::{run_suite, SamplingOverride, Suite};
pub use tensor::MetricField;

/// `f64` jet.
pub type Jet64 = jet::Jet<f64>;
/// `f64` metric snapshot.
pub type MetricAt64 = tensor::MetricAt<f64>;
/// `f64` curvature evaluation.
pub type PointEvaluation64 = tensor::PointEvaluation<f64>;
/// `f64` check report.
pub type CheckReport64 = report::CheckReport<f64>;
/// `f64` soliton fit.
pub type SolitonFit64 = solitons::SolitonFit<f64>;
