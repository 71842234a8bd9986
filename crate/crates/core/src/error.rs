//! Error type shared by all evaluation and integration routines.

use crate::phase::Chart;

/// Everything that can go wrong when evaluating or integrating a system.
///
/// Evaluation close to a singular set is an error, never a huge number:
/// silent precision loss near the poles of the barrier terms would poison
/// drift statistics downstream.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoreError {
    #[error("state at the coordinate origin: the polar chart is undefined there")]
    OriginPoint,

    #[error("polar radius must be strictly positive, got {0}")]
    NonpositiveRadius(f64),

    #[error("non-finite phase-space component")]
    NonFinite,

    #[error("expected a state in the {expected} chart, got {got}")]
    WrongChart { expected: Chart, got: Chart },

    #[error("{what} within {band:.1e} of a singular set")]
    NearSingularity { what: &'static str, band: f64 },

    #[error("J2 = {0} is not positive: sqrt(J2) factor functions are undefined")]
    NonpositiveJ2(f64),

    #[error("invariant {kind} does not apply to family {family}")]
    Inapplicable {
        kind: &'static str,
        family: &'static str,
    },

    #[error("rational k must be p/q with p >= 1 and q >= 1")]
    BadRational,

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("invariant track is empty")]
    EmptyTrack,

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, CoreError>;
