//! Scalar abstraction shared by the pointwise algebra.

use std::fmt::Debug;

use num_traits::Float;

/// Floating-point scalar accepted by the exterior algebra.
///
/// Implemented for `f32`, `f64` and [`crate::Hyper`].
pub trait Real: Float + Debug + Send + Sync + 'static {
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from(x).expect("f64 literal representable")
    }

    /// Real part as `f64`.
    #[inline]
    fn re64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
impl Real for crate::Hyper {}
