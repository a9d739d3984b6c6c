//! Forms, vector fields and vector-valued forms on the tangent manifold of a
//! chart, with the Cartan calculus.

mod field;
mod form;
mod index;
mod tensor;
mod vvform;

pub use field::{BaseVectorField, VectorField};
pub use form::{BaseForm, Form};
pub use index::MultiIndex;
pub use tensor::{FactorKind, Tensor};
pub use vvform::VectorValuedForm;

pub(crate) use form::accumulate;
