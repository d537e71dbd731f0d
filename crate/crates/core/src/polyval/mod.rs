//! Sparse polynomials and differential forms over `Q(z_N)`, the linear
//! group action on them, and monomial valuations with their discrepancies.
//!
//! The action is contragredient, `(g . f)(x) = f(g^-1 x)`. With that
//! convention the eigencoordinate dual to a weight-`a` eigenvector of `g`
//! satisfies `g . y = z_r^a y`, so the valuation `v_g` of a weight
//! component is congruent to its eigen-character exponent mod `r`.

mod form;
mod poly;
mod text;
mod valuation;

pub use form::DiffForm;
pub use poly::{act, Monomial, SparsePoly};
pub use text::parse_poly;
pub use valuation::{
    discrepancy_v, discrepancy_x, from_element, v_eval, v_eval_form, v_eval_rational,
    weight_components, Coordinates, MonomialValuation,
};
