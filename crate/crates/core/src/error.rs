use thiserror::Error;

/// Errors raised by the arithmetic layers and the identity checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("moduli differ: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("binomial index {k} is not below the characteristic {p}")]
    BinomialIndex { k: usize, p: u64 },

    #[error("polynomial does not split over F_p: leftover factor {factor}")]
    NotSplit { factor: String },

    #[error("pole at {point}")]
    Pole { point: u64 },

    #[error("coefficient of X^{k} has a pole at {point}")]
    CoefficientPole { k: usize, point: u64 },

    #[error("quotient polynomials carry different moduli")]
    QuotientMismatch,

    #[error("quotient polynomial carries no modulus")]
    MissingModulus,

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: u64,
        lo: u64,
        hi: u64,
    },

    #[error("{0}")]
    Hypothesis(&'static str),

    #[error("identity violated: {0}")]
    TheoremViolation(String),

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(name: &'static str, value: u64, lo: u64, hi: u64) -> Result<()> {
    if value < lo || value > hi {
        Err(Error::OutOfRange {
            name,
            value,
            lo,
            hi,
        })
    } else {
        Ok(())
    }
}
