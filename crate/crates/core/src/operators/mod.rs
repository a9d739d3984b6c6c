//! Derivations built from vector-valued forms (`i_K`, `L_K`, `d_B`, the
//! Frölicher-Nijenhuis self-bracket), the semi-basic machinery with its
//! constructive `d_B` potential, and the forms lying above base forms.

mod alpha_mu;
mod derivations;
mod semibasic;

pub use alpha_mu::{
    extract_mu, inverse_factorial, is_fiber_affine, lifted_cohomology_witness, make_f_mu, theta,
    AlphaMuForm,
};
pub(crate) use derivations::lie_derivation_degree_two;
pub use derivations::{
    apply_variable_d, circ_wedge, d_b, fn_self_bracket, insertion_derivation, lie_derivation,
    DOperator,
};
pub use semibasic::{db_poincare, semi_basic_defect};
