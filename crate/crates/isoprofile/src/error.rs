//! Error taxonomy shared by every module in the crate.
//!
//! Variants mirror the failure modes of the public operations: graph
//! validation, annulus gluing, profile construction, ODE solves, and
//! file-level I/O. Functions that can only fail in one way still return
//! [`Error`] so callers compose uniformly.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A vertex has a degree pattern other than (in,out) = (1,2) or (2,1).
    #[error("trivalence violation: {0}")]
    TrivalenceViolation(String),

    /// Two vertices share the same integer critical value.
    #[error("duplicate critical value: {0}")]
    DuplicateCriticalValue(String),

    /// Vertex values do not form a consecutive interval of integers.
    #[error("value gap: {0}")]
    ValueGap(String),

    /// Some regular level is crossed by no edge.
    #[error("empty level: {0}")]
    EmptyLevel(String),

    /// The renormalization exponent base is too small for the seed count.
    #[error("nu too small: {0}")]
    NuTooSmall(String),

    /// Glued boundary circles disagree in length (construction bug).
    #[error("gluing mismatch: {0}")]
    GluingMismatch(String),

    /// Inputs outside an operation's stated domain.
    #[error("bad parameters: {0}")]
    BadParameters(String),

    /// A requested point lies outside the singular-model chart.
    #[error("out of chart: {0}")]
    OutOfChart(String),

    /// A critical level has no component free of the critical point, so
    /// the area-exchange construction cannot run there.
    #[error("no spare component: {0}")]
    NoSpareComponent(String),

    /// The region handed to the rearrangement bound is not a sublevel set.
    #[error("not a sublevel region: {0}")]
    NotSublevel(String),

    /// The warping function vanishes in the interior of its domain.
    #[error("non-positive warping function: {0}")]
    NonPositiveProfile(String),

    /// The profile's square lacks the 4π slope at zero needed for a
    /// metric smooth at the pole.
    #[error("bad origin anchor: {0}")]
    BadOrigin(String),

    /// A constructed object violates one of its required properties; the
    /// message names the first failing property.
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    /// A lemma-hypothesis checklist failed; the message names the bullet.
    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),

    /// Argument outside the domain of a closed-form expression.
    #[error("domain error: {0}")]
    DomainError(String),

    /// The profile handed to the level-equation solver is not convex.
    #[error("non-convex profile: {0}")]
    NonConvexProfile(String),

    /// No band satisfying the requested (volume, boundary) target exists
    /// under the configured densities.
    #[error("target unreachable: {0}")]
    TargetUnreachable(String),

    /// Generic numerical failure (step-size underflow, no bracket, ...).
    #[error("numerical failure: {0}")]
    Numerics(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable small integer for FFI and process exit codes.
    pub fn code(&self) -> i32 {
        match self {
            Error::TrivalenceViolation(_) => 2,
            Error::DuplicateCriticalValue(_) => 3,
            Error::ValueGap(_) => 4,
            Error::EmptyLevel(_) => 5,
            Error::NuTooSmall(_) => 6,
            Error::GluingMismatch(_) => 7,
            Error::BadParameters(_) => 8,
            Error::OutOfChart(_) => 9,
            Error::NoSpareComponent(_) => 10,
            Error::NotSublevel(_) => 11,
            Error::NonPositiveProfile(_) => 12,
            Error::BadOrigin(_) => 13,
            Error::ConstraintViolation(_) => 14,
            Error::HypothesisFailure(_) => 15,
            Error::DomainError(_) => 16,
            Error::NonConvexProfile(_) => 17,
            Error::TargetUnreachable(_) => 18,
            Error::Numerics(_) => 19,
            Error::Io(_) => 20,
            Error::Json(_) => 21,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
