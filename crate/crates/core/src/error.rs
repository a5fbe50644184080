use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("commutation matrix is {rows}x{cols} but {names} generator names were given")]
    SizeMismatch { rows: usize, cols: usize, names: usize },

    #[error("commutation matrix is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("operands live over different algebra signatures")]
    SignatureMismatch,

    #[error("exponent vector has length {got}, signature has {expected} generators")]
    ExponentLength { expected: usize, got: usize },

    #[error("exponent arithmetic overflowed")]
    ExponentOverflow,

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid minor selection: {0}")]
    InvalidMinor(String),

    #[error("matrix size N={0} is not supported here: {1}")]
    InvalidSize(usize, String),

    #[error("morphism is malformed: {0}")]
    MalformedMorphism(String),

    #[error("elementary divisor {0} > 1 needs fractional powers of the torus generators")]
    ElementaryDivisor(i64),

    #[error("invalid reduced word: {0}")]
    InvalidWord(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
