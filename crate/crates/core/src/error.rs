use thiserror::Error;

/// Why a coefficient `a` does not define a pentagonal quasigroup on `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum InvalidCoefficient {
    #[error("coefficient must satisfy 1 < a < n")]
    OutOfRange,
    #[error("gcd(a, n) != 1")]
    NotCoprime,
    #[error("gcd(a - 1, n) != 1 (x -> ax is not regular)")]
    NotRegular,
    #[error("a^4 - a^3 + a^2 - a + 1 is not 0 mod n")]
    QuarticNonzero,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulus {0}: must be at least 1")]
    InvalidModulus(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid coefficient a={a} for n={n}: {reason}")]
    InvalidCoefficient {
        n: u64,
        a: u64,
        reason: InvalidCoefficient,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unsupported group shape: {0}")]
    Unsupported(String),

    #[error("{what} exceeds budget ({size} > {limit})")]
    BudgetExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("table is not a Latin square")]
    NotLatin,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("independent computations disagree: {0}")]
    Inconsistent(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_budget(what: &'static str, size: u128, limit: u128) -> Result<()> {
    if size > limit {
        Err(Error::BudgetExceeded { what, size, limit })
    } else {
        Ok(())
    }
}
