use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("face enumeration overflow: {0} generators exceed the exact L2 limit of 8")]
    FaceEnumerationOverflow(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("cone is not pointed")]
    NotPointed,
    #[error("functional is not strictly positive on the cone")]
    NotStrictlyPositive,
    #[error("eta {eta} outside (0, {delta_b})")]
    EtaOutOfRange { eta: f64, delta_b: f64 },
    #[error("alpha {alpha} outside admissible range (0, {max})")]
    AlphaOutOfRange { alpha: f64, max: f64 },
    #[error("the pair of cones does not have the strict separation property")]
    SspDoesNotHold,
    #[error("relative-position dichotomy violated")]
    DichotomyViolated,
    #[error("query point is not in the feasible set")]
    PointNotInSet,
    #[error("unsupported open cone: {0}")]
    UnsupportedQ(String),
    #[error("feasible set has several blocks, so A + C is not known to be convex")]
    NotConvexData,
    #[error("A + C is not starshaped at the query point (violation at {0:?})")]
    NotStarshaped(Vec<f64>),
    #[error("approximation set is not in the admissible family: {0}")]
    NotInHbar(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by the input rather than by arithmetic.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::NumericalFailure(_) | Error::FaceEnumerationOverflow(_) | Error::DichotomyViolated
        )
    }
}
