//! Error type shared by all evaluators.

use std::fmt;

use crate::numerics::Complex;

/// Errors from evaluation, construction, and rendering.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Gamma evaluated at a non-positive integer.
    GammaPole(Complex),
    /// An evaluator was asked for a value at the simple pole s = 1.
    PoleAtOne,
    /// Input outside a function's domain (e.g. a ≤ 0 for a real-base power).
    Domain(String),
    /// A table index exceeded the configured cap.
    CapExceeded { requested: usize, cap: usize },
    /// No parameter choice within the caps certifies the requested tolerance.
    UnattainableTolerance { requested: f64, best: f64 },
    /// Contour differentiation requested too close to the pole at s = 1.
    PoleTooClose { distance: f64 },
    /// An adaptive process hit its iteration cap without meeting tolerance.
    NonConvergence { cap: usize, last_change: f64 },
    /// A series term is a genuine (non-removable) pole of the operand.
    UndefinedTerm { index: usize },
    /// Requested raster exceeds the resolution cap.
    ResolutionCap { pixels: u64, cap: u64 },
    /// I/O failure while writing an artifact.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GammaPole(z) => write!(f, "gamma pole at z = {z}"),
            Error::PoleAtOne => write!(f, "evaluation at the pole s = 1"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::CapExceeded { requested, cap } => {
                write!(f, "index {requested} exceeds cap {cap}")
            }
            Error::UnattainableTolerance { requested, best } => write!(
                f,
                "tolerance {requested:e} unattainable within caps (best bound {best:e})"
            ),
            Error::PoleTooClose { distance } => {
                write!(f, "point is {distance:e} from the pole s = 1; too close to differentiate")
            }
            Error::NonConvergence { cap, last_change } => write!(
                f,
                "no convergence within {cap} steps (last change {last_change:e})"
            ),
            Error::UndefinedTerm { index } => {
                write!(f, "series term {index} is not a well-defined complex number")
            }
            Error::ResolutionCap { pixels, cap } => {
                write!(f, "raster of {pixels} pixels exceeds cap {cap}")
            }
            Error::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
