use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite state at step {step} (tau = {tau})")]
    NonFinite { step: usize, tau: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("amplitude |z| = {0:e} is too small for a phase-referenced quantity")]
    DegenerateAmplitude(f64),

    #[error("classical amplitude underflow at tau = {tau} (|z_cl| = {modulus:e})")]
    AmplitudeUnderflow { tau: f64, modulus: f64 },

    #[error("unknown regime `{0}`")]
    UnknownRegime(String),

    #[error("Fock truncation n_max = {n_max} leaks probability {leak:e} (tolerance {tolerance:e})")]
    TruncationLeak { n_max: usize, leak: f64, tolerance: f64 },

    #[error("density-matrix trace drift {drift:e} at t = {t}")]
    TraceDrift { t: f64, drift: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be finite, got {value}")))
    }
}
