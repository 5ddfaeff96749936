use thiserror::Error;

use crate::ring::Valuation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid coefficient field: {0} is not an odd prime below 2^32")]
    InvalidField(u64),

    #[error("invalid polynomial literal at column {column}: {message}")]
    Literal { column: usize, message: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("the two quadrics are linearly dependent")]
    DependentPencil,

    #[error("the quadratic form is zero")]
    ZeroForm,

    #[error("both quadrics of the central fibre vanish")]
    ZeroPencil,

    #[error("pencil is not normalized: {0}")]
    NotNormalized(String),

    #[error("coordinate change is not invertible over the valuation ring")]
    NotInvertible,

    #[error("generic fibre is not smooth (discriminant vanishes identically)")]
    NonSmoothGenericFibre,

    #[error("weight system does not destabilize the pencil (mult {mult}, bound {bound})")]
    NotADestabilizer { mult: i64, bound: String },

    #[error("internal invariant violated: discriminant valuation {before} -> {after}, expected drop {expected_drop}")]
    InternalInvariantViolation { before: Valuation, after: Valuation, expected_drop: i64 },

    #[error("this diagnostic requires a prime field")]
    UnsupportedField,

    #[error("subspace enumeration needs {count} subspaces, above the cap {cap}")]
    FieldTooLarge { count: u128, cap: u128 },

    #[error("point does not lie on the central fibre")]
    PointNotOnFibre,

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid pencil file: {0}")]
    File(String),
}
