use thiserror::Error;

/// Errors raised by the exact and certified-numeric layers.
///
/// Summand indices are zero-based; messages count summands from 1.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("conductor mismatch ({left} vs {right}); lift both operands to a common conductor with lift_to_compositum")]
    ConductorMismatch { left: u64, right: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot lift from conductor {from} to {to}: {from} does not divide {to}")]
    NotDivisible { from: u64, to: u64 },

    #[error("pole at t = exp(2*pi*i*{j}/{n})")]
    Pole { n: u64, j: u64 },

    #[error("summand {} has a pole at t = exp(2*pi*i*{j}/{n})", summand + 1)]
    SummandPole { summand: usize, n: u64, j: u64 },

    #[error("interval division by an interval containing zero")]
    Indeterminate,

    #[error("refinement budget exceeded while {what}")]
    RefinementBudget { what: String },

    #[error("singular form{}", summand.map(|s| format!(" (summand {})", s + 1)).unwrap_or_default())]
    Singular { summand: Option<usize> },

    #[error("form is not epsilon-hermitian at entry ({row}, {col})")]
    NotHermitian { row: usize, col: usize },

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("epsilon mismatch: {0}")]
    EpsilonMismatch(String),

    #[error("exponent {k} does not define an embedding of Q(zeta_{m}) (gcd(k, m) != 1)")]
    InvalidEmbedding { m: u64, k: u64 },

    #[error("unsupported polynomial: {0}")]
    UnsupportedPolynomial(String),

    #[error("invalid isometry triple: {0}")]
    InvalidTriple(String),

    #[error("point is not a root of the polynomial: {0}")]
    NotARoot(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
