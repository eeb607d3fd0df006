use crate::halfint::HalfInt;

/// Errors surfaced by engine operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("variable arity mismatch between operands")]
    VarMismatch,

    #[error("no variable registered at site {0}")]
    UnknownSite(i64),

    #[error("reorder requires distinct sites, got {0} twice")]
    SameSite(i64),

    #[error("expansion base mixes variable types")]
    MixedTypes,

    #[error("expansion over an empty site set")]
    EmptySites,

    #[error("graded commutator requires a homogeneous right operand")]
    NotHomogeneous,

    #[error("series has no unique leading monomial; cannot invert")]
    NoLeadingMonomial,

    #[error("inverting a non-monomial exact series would not terminate; truncate first")]
    InfiniteInverse,

    #[error("operands carry different cut weights: {0} vs {1}")]
    CutMismatch(HalfInt, HalfInt),

    #[error("truncation cut required for exponent {0}")]
    CutRequired(HalfInt),

    #[error("highest-site expansion direction requires a nonnegative integer exponent, got {0}")]
    BadDirection(HalfInt),

    #[error("generator must have total degree zero, found {0}")]
    NonzeroDegree(HalfInt),

    #[error("cyclotomic coefficients only admit integral powers of q^2, got s-exponent {0}")]
    FractionalCyclotomicPower(i64),

    #[error("pole at the requested substitution point")]
    Pole,

    #[error("modulus must be at least 1, got {0}")]
    BadModulus(i64),

    #[error("binomial index out of range: k={0}, n={1}")]
    BinomialRange(i64, i64),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
