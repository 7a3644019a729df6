//! Error type shared by the fallible operations of this crate.

use alloc::string::String;
use core::fmt;

/// Errors reported by model construction, integration and analysis.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input value (state, time, parameter) was NaN or infinite.
    NonFiniteInput(&'static str),
    /// A parameter set or configuration violates a structural invariant.
    InvalidParameters(String),
    /// The adaptive stepper could not make progress; `t` is the last good time.
    StepUnderflow { t: f64 },
    /// A point handed to `classify` does not satisfy the steady-state
    /// equations to the required residual.
    NotASteadyState { residual: f64 },
    /// Separatrix tracing was asked to start from a non-saddle state.
    NotASaddle,
    /// The focus/node threshold only applies when `c1*c2 < 0`.
    WrongSignRegime,
    /// Neither global-stability certificate applies to the given parameters.
    NoCertificateApplies,
    /// The steady-state count contradicts the case analysis; this signals
    /// a missed root in the scan, not a user error.
    InconsistentCount(String),
    /// A parameter scan range is empty, non-finite or would produce invalid
    /// parameter sets.
    InvalidScanRange(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFiniteInput(what) => write!(f, "non-finite input: {what}"),
            Error::InvalidParameters(why) => write!(f, "invalid parameters: {why}"),
            Error::StepUnderflow { t } => {
                write!(f, "adaptive step size underflow at t = {t}")
            }
            Error::NotASteadyState { residual } => {
                write!(f, "point is not a steady state (residual {residual:.3e})")
            }
            Error::NotASaddle => write!(f, "state is not a saddle"),
            Error::WrongSignRegime => {
                write!(f, "focus/node threshold requires c1*c2 < 0")
            }
            Error::NoCertificateApplies => {
                write!(f, "no global-stability certificate applies")
            }
            Error::InconsistentCount(why) => {
                write!(f, "steady-state count inconsistent: {why}")
            }
            Error::InvalidScanRange(why) => write!(f, "invalid scan range: {why}"),
        }
    }
}

impl core::error::Error for Error {}
