use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element is not a unit")]
    NonUnit,
    #[error("operation not supported on this ring: {0}")]
    UnsupportedRing(&'static str),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("modulus is not irreducible over F_{0}")]
    NotIrreducible(u64),
    #[error("modulus must be monic of degree >= 1")]
    BadModulus,
    #[error("curve polynomial must have degree 5, got {0:?}")]
    DegreeNotFive(Option<usize>),
    #[error("curve polynomial is not squarefree")]
    NotSquarefree,
    #[error("division by zero")]
    DivisionByZero,
    #[error("differential is zero")]
    ZeroDifferential,
    #[error("vector is zero")]
    ZeroVector,
    #[error("polynomial degree {degree} exceeds cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },
    #[error("connection d + omega has non-vanishing p-curvature")]
    NotFlat,
    #[error("form is not p-torsion")]
    NotTorsion,
    #[error("field of size {size} too large for brute-force scan (limit {limit})")]
    FieldTooLargeForBrute { size: u128, limit: u128 },
    #[error("derivation is not dual to the chart form")]
    ChartMismatch,
    #[error("operands live over different fields or curves")]
    Mismatch,
    #[error("parameter out of range: {0}")]
    Range(String),
}

pub type Result<T> = std::result::Result<T, Error>;
