//! Grothendieck groups K₀, K₁ and K of the model algebras, their order
//! structure, functoriality under block-algebra maps, and the splitting θ.

mod class;
mod lattice;
mod morphism;
mod theta;
mod view;

pub use class::{class_invariant, grothendieck_complete, GroupDescription, GroupTag, KClass, MonoidElement};
pub use lattice::{hermite_basis, IntMatrix};
pub use morphism::{apply_morphism, induced_map, MorphismSpec};
pub use theta::{
    mu_witness, orthogonal_sum_unitary, partial_unitary_by_completion, partial_unitary_by_orthogonality,
    partial_unitary_decompose, theta_map, theta_matrix, theta_preimage, ThetaImage,
};
pub use view::{k0_group, k1_group, k_group, whitehead_holds, Cone, Generator, GroupFlags, OrderedGroupView};
