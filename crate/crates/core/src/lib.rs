//! Space-time splitting of exterior calculus on principal `R`-bundles.

pub mod dims;
pub mod em;
pub mod error;
pub mod exterior;
pub mod fields;
pub mod hyper;
pub mod metric;
pub mod scalar;
pub mod scenarios;
pub mod splitting;
pub mod verify;

pub use dims::{pd_check, Dim, DimError};
pub use error::{Error, Result};
pub use exterior::{CoForm, Meta, MultiVec, Slot, Valued};
pub use hyper::Hyper;
pub use scalar::Real;

/// Double-precision form.
pub type Form64 = CoForm<f64>;
/// Single-precision form.
pub type Form32 = CoForm<f32>;
/// Double-precision multivector.
pub type MultiVec64 = MultiVec<f64>;
/// Single-precision multivector.
pub type MultiVec32 = MultiVec<f32>;
