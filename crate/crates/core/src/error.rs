use core::fmt;

use num_complex::Complex64;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every kernel in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    Domain(&'static str),
    /// Evaluation requested at a pole.
    Pole { at: Complex64 },
    /// Argument outside the region where the chosen representation is valid.
    Region { constraint: &'static str },
    /// Integer or floating range exhausted.
    Overflow(&'static str),
    /// Iterative or adaptive scheme did not reach tolerance.
    NoConvergence {
        what: &'static str,
        estimate: Complex64,
        error: f64,
    },
    /// Not enough usable data points.
    InsufficientData { needed: usize, got: usize },
    /// Linear system too close to singular.
    IllConditioned { condition: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Pole { at } => write!(f, "pole at {}{:+}i", at.re, at.im),
            Error::Region { constraint } => write!(f, "outside region: requires {constraint}"),
            Error::Overflow(msg) => write!(f, "overflow: {msg}"),
            Error::NoConvergence {
                what,
                estimate,
                error,
            } => write!(
                f,
                "{what} did not converge (estimate {}{:+}i, error {error:e})",
                estimate.re, estimate.im
            ),
            Error::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need {needed}, got {got}")
            }
            Error::IllConditioned { condition } => {
                write!(f, "ill-conditioned system (condition number {condition:e})")
            }
        }
    }
}

impl core::error::Error for Error {}
