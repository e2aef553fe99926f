//! K-theory of absolute matrix order unit spaces, computed on two concrete
//! models: finite-dimensional block algebras and matrix functions sampled on
//! the circle.

pub mod equivalence;
pub mod error;
pub mod harness;
pub mod kernel;
pub mod kgroup;
pub mod model;
pub mod random;
pub mod tolerance;

pub use error::{Error, Result};
pub use model::{AlgebraSpec, Element};
pub use tolerance::Tolerances;
