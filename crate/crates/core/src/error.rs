use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("signature ({pos},{neg}) is not of type (n-1,1)")]
    WrongSignature { pos: usize, neg: usize },
    #[error("vector is not in the closure of the cone")]
    NotInCone,
    #[error("expected an interior vector")]
    NotInterior,
    #[error("expected a cusp")]
    NotCusp,
    #[error("cone vectors lie in opposite components")]
    OppositeComponents,
    #[error("characteristic is not admissible for a cusp")]
    InadmissibleCharacteristic,
    #[error("lattice points with B(c,l)=0 contribute nonzero terms")]
    BoundaryContribution,
    #[error("enumeration exceeded {points} lattice points")]
    EnumerationBound { points: u64 },
    #[error("convergence not achieved: error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    ConvergenceNotAchieved { estimate: f64, tolerance: f64 },
    #[error("invalid transformation: {0}")]
    InvalidMove(String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("pole at the evaluation point")]
    Pole,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
