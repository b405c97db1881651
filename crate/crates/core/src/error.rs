use std::fmt;

use thiserror::Error;

use crate::expr::ExprError;
use crate::jet::JetError;

/// Why a candidate pair was rejected by [`crate::bertrand::detect_bertrand`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RejectReason {
    OffsetNotNormal,
    LambdaVaries,
    NormalsNotAligned,
    EpsilonFlip,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::OffsetNotNormal => "offset-not-normal",
            RejectReason::LambdaVaries => "lambda-varies",
            RejectReason::NormalsNotAligned => "normals-not-aligned",
            RejectReason::EpsilonFlip => "epsilon-flip",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereDefect {
    /// Constant geodesic curvature; the generated curve is a circular helix.
    Helical,
    /// The sphere curve has a stationary point.
    Irregular,
    /// The generated curve would have an inflection point.
    Inflection,
}

impl fmt::Display for SphereDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SphereDefect::Helical => "helical",
            SphereDefect::Irregular => "irregular",
            SphereDefect::Inflection => "inflection",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("parameter {t} outside domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },
    #[error("singular point at t = {t}: {what}")]
    SingularPoint { t: f64, what: String },
    #[error("quadrature did not converge on [{a}, {b}]")]
    NonConvergent { a: f64, b: f64 },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("degenerate ratio: {0}")]
    DegenerateRatio(String),
    #[error("not a Bertrand pair: {reason} ({detail})")]
    NotAPair { reason: RejectReason, detail: String },
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),
    #[error("sphere curve is not on the unit sphere (max |norm - 1| = {0:e})")]
    NotSpherical(f64),
    #[error("degenerate sphere curve: {0}")]
    DegenerateSphereCurve(SphereDefect),
    #[error("too few samples: need {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn singular(t: f64, what: impl Into<String>) -> Self {
        Error::SingularPoint {
            t,
            what: what.into(),
        }
    }
}
