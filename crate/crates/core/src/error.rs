use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("invalid cycle type `{0}`")]
    InvalidCycleType(String),
    #[error("the identity class cannot define a calculus")]
    IdentityClass,
    #[error("{what} = {value} is out of range ({range})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        range: String,
    },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("signed crossed modules are only defined for the 2-cycle class")]
    SignedNeedsTranspositions,
    #[error("operation requires the 2-cycle class")]
    NotTranspositions,
    #[error("braiding position {pos} out of range for degree {degree}")]
    Position { pos: usize, degree: usize },
    #[error("degree {0} has not been built")]
    DegreeNotBuilt(usize),
    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("degree {degree} needs about {required} bytes, over the {limit} byte limit")]
    MemoryCap {
        degree: usize,
        required: u64,
        limit: u64,
    },
    #[error("elements belong to different algebras")]
    HostMismatch,
    #[error("class function is not a character: {0}")]
    NotACharacter(String),
    #[error("function is not invertible at group element {0}")]
    NotInvertible(usize),
    #[error("class has {0} elements; at most 64 are supported")]
    ClassTooLarge(usize),
    #[error("prime {0} divides a denominator")]
    BadPrime(u64),
    #[error("pairing is degenerate in degree {0}")]
    SingularGram(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal identity failed: {0}")]
    Inconsistent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
