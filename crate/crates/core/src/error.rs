use thiserror::Error;

/// Errors raised by the library. The CLI maps these onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension must be at least {min}, got {n}")]
    InvalidDimension { n: usize, min: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid group element: {0}")]
    InvalidAction(String),

    #[error("weight normalization needs 3 to be invertible mod p; p = 3 given")]
    WeightNotNormalizable,

    #[error("search space of {size} signatures exceeds the budget of {budget}")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("chain-pruned enumeration requires p > 3, got p = {0}")]
    ChainPrunedSmallPrime(u64),

    #[error("no prime has -2 of multiplicative order exactly {order} (n = {n})")]
    NoKleinPrime { n: usize, order: usize },

    #[error("invalid working modulus {0}: must be a prime other than 2 and 3")]
    InvalidModulus(u64),

    #[error("form vanishes identically modulo {0}")]
    ZeroModQ(u64),

    #[error("modulus list is empty")]
    EmptyModuli,

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("form is not an eigenvector of the given signature")]
    MixedWeight,

    #[error("characters computed modulo {0} and {1} disagree (bad reduction)")]
    ModuliDisagree(u64, u64),

    #[error("operation not supported for n = {0}")]
    UnsupportedDimension(usize),

    #[error("{value} is not a unit modulo {p}")]
    NotAUnit { value: i64, p: u64 },

    #[error("integer overflow in coefficient arithmetic")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
