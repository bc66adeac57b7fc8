use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported field order {0}: need a prime or 2^m with 2 <= r <= 65536")]
    UnsupportedOrder(u64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("scaling mismatch between operands")]
    AlphaMismatch,
    #[error("l-infinity norm requires an unscaled vector (alpha = {0})")]
    ScaledSpace(String),
    #[error("dimension cap exceeded: {needed} coordinates > cap {cap}")]
    DimensionCap { needed: String, cap: u64 },
    #[error("search space too large: {needed} > cap {cap}")]
    SearchSpaceTooLarge { needed: String, cap: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("insufficient colors: need {needed}, system has {have}")]
    InsufficientColors { needed: usize, have: usize },
    #[error("iterated logarithm undefined: log^({k}) of {p} leaves the positive reals")]
    UndefinedIterate { p: String, k: u32 },
    #[error("floating-point overflow: {0}")]
    Overflow(String),
    #[error("no verified system after {0} tries")]
    Exhausted(u64),
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("format version {found} not supported (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("expected a {expected} file, found {found}")]
    Kind { expected: String, found: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
