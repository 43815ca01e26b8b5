use alloc::boxed::Box;
use alloc::string::String;

use crate::field::SpectralField;

/// Errors raised by the core library.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Grid parameters violate `n >= 8`, power of two, `dim in {2, 3}` or `nu > 0`.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// Input data contained NaN or infinity.
    #[error("non-finite value in input ({0})")]
    NonFinite(&'static str),

    /// Array length or lattice size does not match the grid.
    #[error("shape mismatch: expected {expected} values, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    /// An operation precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Integer arithmetic outside the supported exact range.
    #[error("value outside exact arithmetic range: {0}")]
    OutOfRange(String),

    /// A solver step produced NaN/Inf. Carries the last finite state.
    #[error("blow-up suspected at t = {time}: non-finite coefficients after step")]
    BlowUpSuspected {
        time: f64,
        last_finite: Box<SpectralField>,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
