use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quadratic fields differ: d = {left} vs d = {right}")]
    DiscriminantMismatch { left: i64, right: i64 },
    #[error("unsupported discriminant {0}; only -1 and 2 are available")]
    UnsupportedDiscriminant(i64),
    #[error("division by zero")]
    DivisionByZero,

    #[error("series constant term must be {expected}")]
    BadConstantTerm { expected: &'static str },
    #[error("coefficient of t^{n} requested but series is only known mod t^{order_plus_one}", order_plus_one = .order + 1)]
    BeyondOrder { n: usize, order: usize },
    #[error("series is not divisible by t^{0}")]
    NotDivisibleByT(usize),

    #[error("step set is empty")]
    EmptySet,
    #[error("step ({dx},{dy}) has no mirror ({dx},{mirror}) with equal weight", mirror = -.dy)]
    SymmetryViolation { dx: i64, dy: i64 },
    #[error("step ({dx},{dy}) changes height by more than one")]
    HeightViolation { dx: i64, dy: i64 },
    #[error("step ({dx},{dy}) is listed twice")]
    DuplicateStep { dx: i64, dy: i64 },
    #[error("step ({dx},{dy}) has non-positive weight")]
    BadWeight { dx: i64, dy: i64 },
    #[error("operation needs a step set symmetric under reversal")]
    NotReverseSymmetric,

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("zero root with negative exponents present")]
    ZeroRootWithNegativePart,
    #[error("denominator does not divide the series: {0}")]
    DivisionInconsistency(String),

    #[error("length {requested} exceeds the resource guard {limit} (raise with SLITWALK_GUARD_N)")]
    GuardExceeded { requested: usize, limit: usize },

    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
