use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {0} exceeds the supported maximum of 65536")]
    FieldTooLarge(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("element code {code} is out of range for GF({q})")]
    ElementOutOfRange { code: u32, q: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("q must be at least 2, got {0}")]
    InvalidQ(u64),
    #[error("length mismatch: shape has {shape} blocks but vector has {vector} entries")]
    LengthMismatch { shape: usize, vector: usize },
    #[error("invalid type {ty:?} for shape {shape:?}")]
    InvalidType { shape: Vec<usize>, ty: Vec<usize> },
    #[error("not a group element: {0}")]
    NotGroupElement(String),
    #[error("{what} has size {size}, exceeding the guard {guard}")]
    TooLarge { what: String, size: String, guard: u64 },
    #[error("operation requires t = 3, got t = {0}")]
    RequiresThreeBlocks(usize),
    #[error("invariant separation violated for shape {shape:?}, type {ty:?}, q = {q}: {detail}")]
    SeparationViolation { shape: Vec<usize>, ty: Vec<usize>, q: u32, detail: String },
    #[error("formula undefined: {0}")]
    UndefinedFormula(String),
    #[error("parse error: {0}")]
    Parse(String),
}
