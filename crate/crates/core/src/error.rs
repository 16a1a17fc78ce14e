use crate::gaussint::GaussInt;

/// Errors raised by the arithmetic, evaluation and verification layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("zero input where a nonzero Gaussian integer is required")]
    ZeroInput,
    #[error("zero modulus")]
    ZeroModulus,
    #[error("modulus {0} is divisible by the ramified prime 1+i")]
    EvenModulus(GaussInt),
    #[error("{0} is not primary (not congruent to 1 mod (1+i)^3)")]
    NotPrimary(GaussInt),
    #[error("{0} is not a Gaussian prime")]
    NotPrime(GaussInt),
    #[error("{0} is an associate of the ramified prime 1+i")]
    RamifiedPrime(GaussInt),
    #[error("{0} is not squarefree")]
    NotSquarefree(GaussInt),
    #[error("expected a degree-{expected} prime, got {pi}")]
    WrongPrimeType { pi: GaussInt, expected: u8 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("factorization of norm {norm} failed within the configured effort")]
    FactorizationFailed { norm: u128 },
    #[error("norm {norm} exceeds the direct-summation cap {cap}")]
    DirectCapExceeded { norm: u128, cap: u128 },
    #[error("Gauss sum at prime {0} unavailable in cache-only mode")]
    PrimeValueUnavailable(GaussInt),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
