use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value violates a documented precondition (range, sign, finiteness).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Undamped drive exactly at an eigenfrequency; the steady state does not exist.
    #[error("singular drive: undamped resonance at omega_d = {omega}")]
    SingularDrive { omega: f64 },

    #[error("zero state: both granule amplitudes vanish")]
    ZeroState,

    #[error("undefined phase: {0} is zero")]
    UndefinedPhase(&'static str),

    #[error("integration produced a non-finite state at t = {t}")]
    NonFinite { t: f64 },

    #[error("steady state not converged: relative drift {drift:.3e} exceeds {limit:.1e}")]
    NotConverged { drift: f64, limit: f64 },
}

impl Error {
    /// True when the error stems from bad input rather than from the computation itself.
    pub fn is_invalid_input(&self) -> bool {
        matches!(self, Error::InvalidParameter(_))
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}
