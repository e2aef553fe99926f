//! Decision procedures with certificates for the equivalence relations on
//! order projections, unitaries and partial unitaries.

mod bases;
mod certificate;
mod decide;
mod invariants;

pub use certificate::{CertificateKind, HomotopyPath, PartialIsometryCertificate, PathDomain, PathKind, PATH_SAMPLES, STEP_BOUND};
pub use decide::{
    abs_homotopy_transfer, approx1_equivalent, approx_k_equivalent, condition_t_transport, homotopic_partial_unitaries,
    homotopic_unitaries, mvn_equivalent, pad_with_unit, pad_with_zero, partial_unitary_invariant, projection_ranks,
    sim1_equivalent, sim1_path, sim_k_equivalent, sim_k_path, stabilized_projection_equiv, unitary_class,
    PartialUnitaryInvariant, TransferredPaths,
};
pub use invariants::{proj_invariant, unitary_invariant, winding_of_samples, ProjInvariant, UnitaryInvariant};
