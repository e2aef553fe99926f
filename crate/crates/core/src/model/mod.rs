pub mod algebra;
pub mod calculus;
pub mod element;

pub use algebra::AlgebraSpec;
pub use calculus::{
    abs_adjoint, abs_value, classify, is_order_projection, is_partial_isometry, is_partial_unitary, is_positive,
    is_selfadjoint, is_unitary, order_unit_norm, orthogonal, orthogonal_infty, orthogonal_infty_a, ElementClass,
};
pub use element::Element;
