use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which inequality of the admissible region a parameter pair violates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionViolation {
    /// A parameter is NaN or infinite.
    NotFinite,
    /// `|alpha - pi/4| < pi/4` fails.
    AngleBound { alpha_tilde: f64 },
    /// `a > 1 / (sqrt(2) cos(alpha - pi/4))` fails.
    LowerRadius { a: f64, bound: f64 },
    /// `a < 1` fails.
    UpperRadius { a: f64 },
}

impl fmt::Display for RegionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RegionViolation::NotFinite => write!(f, "parameters must be finite"),
            RegionViolation::AngleBound { alpha_tilde } => write!(
                f,
                "-pi/4 < alpha - pi/4 < pi/4 violated (alpha - pi/4 = {alpha_tilde})"
            ),
            RegionViolation::LowerRadius { a, bound } => write!(
                f,
                "(sqrt(2) cos(alpha - pi/4))^-1 < a violated (a = {a}, bound = {bound})"
            ),
            RegionViolation::UpperRadius { a } => write!(f, "a < 1 violated (a = {a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("parameters outside the admissible region: {0}")]
    Region(RegionViolation),

    #[error("perimeter {perimeter} is below the regular-octagon minimum P_reg = {minimum}")]
    BelowMinimum { perimeter: f64, minimum: f64 },

    #[error("singular parameter in {op}: {detail}")]
    Singular { op: &'static str, detail: String },

    #[error("consistency check failed in {op}: {detail}")]
    Consistency { op: &'static str, detail: String },

    #[error("numeric failure in {op}: {detail}")]
    Numeric { op: &'static str, detail: String },

    #[error("quadrature did not converge: estimate {estimate} with error {error_estimate}")]
    Quadrature { estimate: f64, error_estimate: f64 },

    #[error("unphysical state: J^2 = {j_squared} is below the Casimir C = {casimir}")]
    Unphysical { j_squared: f64, casimir: f64 },

    #[error("degenerate state: {0}")]
    Degenerate(String),

    #[error("integration hit a singular state (J^2 - C < tolerance) at tau = {tau}")]
    SingularState {
        tau: f64,
        /// States accepted before the failure, in integration order.
        partial: Vec<(f64, f64, f64)>,
    },
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { op, detail: detail.into() }
    }

    pub(crate) fn singular(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Singular { op, detail: detail.into() }
    }

    pub(crate) fn consistency(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Consistency { op, detail: detail.into() }
    }

    pub(crate) fn numeric(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Numeric { op, detail: detail.into() }
    }

    /// True for errors caused by the caller's input rather than by a numerical
    /// breakdown.
    pub fn is_domain_like(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::Region(_)
                | Error::BelowMinimum { .. }
                | Error::Singular { .. }
                | Error::Unphysical { .. }
        )
    }
}
