//! Exact exterior calculus on the tangent manifold of a chart domain.

pub mod dsl;
pub mod error;
pub mod geometry;
pub mod lifts;
pub mod numeric;
pub mod operators;
pub mod random;
pub mod scalar;
pub mod suite;
pub mod transitions;

pub use error::{Error, Result};
