use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("not a quantum function: {0}")]
    NotQuantumFunction(String),
    #[error("not a quantum bijection: {0}")]
    NotBijection(String),
    #[error("source and target must be classical algebras")]
    NotClassicalEndpoints,
    #[error("projector family violates a row condition: {0}")]
    RowConditionViolated(String),
    #[error("not a unital *-representation: {0}")]
    NotRepresentation(String),
    #[error("inconsistent list of simple elements: {0}")]
    InconsistentElements(String),
    #[error("not a unitary error basis: {0}")]
    NotUeb(String),
    #[error("not a dagger idempotent: {0}")]
    NotIdempotent(String),
    #[error("not an intertwiner (residual {residual:e})")]
    NotIntertwiner { residual: f64 },
    #[error("not (essentially) classical: {0}")]
    NotClassical(String),
    #[error("not a projective permutation matrix: {0}")]
    NotPpm(String),
    #[error("relation is not symmetric (residual {residual:e})")]
    NotSymmetric { residual: f64 },
    #[error("algebra is not a full matrix algebra")]
    NotMatrixAlgebra,
    #[error("not a projection in the opposite-tensor algebra: {0}")]
    NotProjection(String),
    #[error("postcondition failure: {0}")]
    PostconditionFailure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
