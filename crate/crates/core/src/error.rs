use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("subsystem index {index} out of range 1..={count}")]
    SubsystemOutOfRange { index: usize, count: usize },

    #[error("subsystem dimensions {dims:?} do not multiply to {dim}")]
    BadSubsystemDims { dims: Vec<usize>, dim: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace {0} differs from 1")]
    TraceNotOne(f64),

    #[error("matrix has negative eigenvalue {0:e}")]
    NotPositive(f64),

    #[error("non-finite matrix or vector entry")]
    NonFinite,

    #[error("state vector has zero norm")]
    ZeroNorm,

    #[error("state vector is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("invalid Weyl operator indices k={k}, l={l}, d={d}")]
    InvalidWeyl { k: usize, l: usize, d: usize },

    #[error("invalid GHZ label {0:?}: expected four characters from {{0,1}}")]
    InvalidLabel(String),

    #[error(
        "invalid lattice move on subsystem {0}: only subsystems 2, 3 and 4 move on the lattice"
    )]
    InvalidMoveSubsystem(usize),

    #[error("operator does not map GHZ_{0} into the basis")]
    LeavesBasis(String),

    #[error("invalid Pauli string {0:?}")]
    InvalidPauli(String),

    #[error("missing expectation value for {0}")]
    MissingExpectation(String),

    #[error("no count record covers {0}")]
    NoCoveringRecord(String),

    #[error("missing measurement settings: {}", .0.join(", "))]
    MissingSettings(Vec<String>),

    #[error("count record sets have mismatched settings")]
    MismatchedSettings,

    #[error("count record for {0} has no counts")]
    EmptyRecord(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("q-plate input on photon {0} is not in the m=0 OAM state")]
    QPlatePrecondition(char),

    #[error("state still has population in the m=0 OAM mode")]
    OamLeakage,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
