//! Scalar abstraction for the numeric kernels.
//!
//! Everything downstream of the expression parser (jets, tensors, checks)
//! is generic over [`Scalar`] so the same pipelines run in `f32` or `f64`.
//! The harness and CLI pin `f64`; concrete aliases live at the crate root.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar usable by the tensor pipelines.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` constant (literals, tolerances).
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant must convert")
    }

    /// Lossy conversion to `f64` for diagnostics and reports.
    fn to_f64_lossy(self) -> f64;
}

impl Scalar for f32 {
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn to_f64_lossy(self) -> f64 {
        self
    }
}
