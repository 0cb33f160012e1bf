use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quaternion has zero norm")]
    ZeroQuaternion,
    #[error("point lies on the real axis (|Im q| = {0:e})")]
    OnRealAxis(f64),
    #[error("point lies on the polar axis of the chart")]
    PolarAxis,
    #[error("quaternion is not unit (|a| = {0})")]
    NotUnit(f64),
    #[error("evaluation point is within tolerance of a pole")]
    NearPole,
    #[error("the zero element has no inverse")]
    ZeroElement,
    #[error("denominator simplifies to the zero polynomial")]
    ZeroDenominator,
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("stencil leaves the evaluable region: {0}")]
    RegionViolation(String),
    #[error("point too close to the real axis for the right-hand side (r = {0})")]
    TooCloseToAxis(f64),
    #[error("dichotomy violated: non-singular fraction {0}")]
    DichotomyViolation(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable identifier used in machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroQuaternion => "ZeroQuaternion",
            Error::OnRealAxis(_) => "OnRealAxis",
            Error::PolarAxis => "PolarAxis",
            Error::NotUnit(_) => "NotUnit",
            Error::NearPole => "NearPole",
            Error::ZeroElement => "ZeroElement",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::Syntax { .. } => "SyntaxError",
            Error::RegionViolation(_) => "RegionViolation",
            Error::TooCloseToAxis(_) => "TooCloseToAxis",
            Error::DichotomyViolation(_) => "DichotomyViolation",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
