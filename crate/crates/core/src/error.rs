use thiserror::Error;

/// Errors raised by field construction, function tables and the analysis engines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("modulus does not describe a monic polynomial of degree {expected}: {detail}")]
    DegreeMismatch { expected: u32, detail: String },
    #[error("modulus coefficient {coefficient} is not reduced mod {p}")]
    InvalidCoefficient { coefficient: u64, p: u32 },
    #[error("modulus {0:?} is reducible over the prime field")]
    ReducibleModulus(Vec<u32>),
    #[error("field of order {p}^{n} exceeds the supported size")]
    FieldTooLarge { p: u32, n: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{g} does not divide the extension degree {n}")]
    NonDivisorSubfieldDegree { g: u32, n: u32 },
    #[error("invalid exponent {0}: monomials need d >= 1")]
    InvalidExponent(u64),
    #[error("polynomial has no nonzero coefficient")]
    EmptyPolynomial,
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("rank {rank} out of range for a field of order {q}")]
    RankOutOfRange { rank: u64, q: u32 },
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },
    #[error("c1 and c2 must be distinct and nonzero")]
    DegenerateCs,
    #[error("value is not a rational integer: {0}")]
    NotRationalInteger(String),
    #[error("size guard exceeded: {what} needs {needed} operations, limit {limit}")]
    SizeGuardExceeded { what: String, needed: u128, limit: u128 },
    #[error("closed form gcd({p}^{k}+1, {p}^{n}-1) = {formula} but direct gcd = {direct}")]
    FormulaMismatch { p: u64, k: u32, n: u32, formula: u128, direct: u128 },
    #[error("k = {k} is a multiple of n = {n} (m = 1): if m=1, then k=n, and the trinomial degenerates")]
    SubfieldEdgeCase { k: u32, n: u32 },
    #[error("c = 1 is not admissible here")]
    UnitC,
    #[error("unknown claim {0}")]
    UnknownClaim(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        if err.is_io() {
            Error::Io(err.into())
        } else {
            Error::SchemaViolation(err.to_string())
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
