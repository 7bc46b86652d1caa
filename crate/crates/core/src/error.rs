use thiserror::Error;

/// Errors raised by the field, dynamics and entanglement routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("infeasible mean photon number {target}: squeezing alone contributes {floor}")]
    Infeasible { target: f64, floor: f64 },

    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("spectrum not real: imaginary part {0:e}")]
    SpectrumNotReal(f64),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// True for errors caused by the caller's inputs rather than by the numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::UnsupportedRegime(_)
                | Error::Infeasible { .. }
                | Error::Config(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
