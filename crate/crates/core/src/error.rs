use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("metric ordering a > c > b > 0 violated by (a, b, c) = ({a}, {b}, {c})")]
    OrderingViolation { a: f64, b: f64, c: f64 },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error(
        "invalid conformal parameters (alpha, beta) = ({alpha}, {beta}): require 0 < beta < alpha"
    )]
    InvalidParams { alpha: f64, beta: f64 },

    #[error("metric (a, b, c) = ({a}, {b}, {c}) is not positive definite")]
    NotPositiveDefinite { a: f64, b: f64, c: f64 },

    #[error("metric entry magnitude {magnitude:e} exceeds 1e300 at step {step}")]
    ScaleOverflow { step: usize, magnitude: f64 },

    #[error("vector is proportional to an eigenvector of q ({direction}); angles to qw and q²w are undefined")]
    EigenvectorInput { direction: &'static str },

    #[error("zero vector has no angles")]
    ZeroVector,

    #[error("cosine {value} lies outside [-1, 1]")]
    CosineOutOfRange { value: f64 },

    #[error("cos = -1 is the repelling fixed point of the cosine recurrence")]
    BoundaryFixedPoint,

    #[error("point {point:?} lies outside the field domain")]
    OutOfDomain { point: [f64; 4] },

    #[error("metric is numerically singular (|det| = {det:e})")]
    SingularMetric { det: f64 },

    #[error("unknown field family `{0}`")]
    UnknownFamily(String),

    #[error("field bundle carries no alpha/beta fields")]
    MissingConformalFields,

    #[error("unknown positivity criterion `{0}`")]
    UnknownCriterion(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(x: f64, what: &'static str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(what))
    }
}
