use thiserror::Error;

/// Errors raised by the exact-arithmetic layers and the verification pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("2-adic valuation of zero is undefined")]
    ZeroValuation,
    #[error("element {element} is not invertible (annihilated by {witness})")]
    NotInvertible { element: String, witness: String },
    #[error("element is not in the maximal order: coordinate {coordinate} = {value}")]
    NotInOrder { coordinate: usize, value: String },
    #[error("hilbert symbol requires nonzero arguments")]
    ZeroHilbertArgument,
    #[error("reduced norm is {0}, expected 1")]
    NotNormOne(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Moebius denominator vanishes at the given point")]
    PoleOfAction,
    #[error("odd torsion {0} appeared in a 2-local cohomology computation")]
    OddTorsion(String),
    #[error("coordinate is undefined at this point: {0}")]
    Undefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;
