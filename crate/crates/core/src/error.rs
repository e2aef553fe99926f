use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:.3e} exceeds tolerance {tol:.3e})")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("function undefined at eigenvalue {0}")]
    DomainError(f64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("elements live over different algebras")]
    AlgebraMismatch,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("operand has norm below tolerance")]
    ZeroOperand,
    #[error("element is not unitary")]
    NotUnitary,
    #[error("element is not an order projection")]
    NotProjection,
    #[error("element is not a partial unitary")]
    NotPartialUnitary,
    #[error("element is not a partial isometry")]
    NotPartialIsometry,
    #[error("partial isometries do not share a source projection")]
    SourceMismatch,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("derived sample {index} fails the {predicate} predicate")]
    PredicateFailure { index: usize, predicate: String },
    #[error("monoid generators fail the additivity check: {0}")]
    NotCancellative(String),
    #[error("morphism is not unital: {0}")]
    NotUnital(String),
    #[error("precondition failed: {0}")]
    PreconditionFailure(String),
    #[error("certificate failed validation: {0}")]
    InvalidCertificate(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    SpecParse(String),
}

impl Error {
    /// Numerical failures as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::Inconsistent(_) | Error::InvalidCertificate(_)
        )
    }
}
