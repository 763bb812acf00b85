use thiserror::Error;

/// Errors raised by the state engines, protocol builders and analyses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("mode {mode} is out of range for a {mode_count}-mode state")]
    InvalidMode { mode: usize, mode_count: usize },

    #[error("transmittance {0} is outside the open interval (0, 1)")]
    InvalidTransmittance(f64),

    #[error("mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("Fock truncation error {error:.3e} exceeds the allowed bound {bound:.3e}")]
    CutoffTooSmall { error: f64, bound: f64 },

    #[error("post-selected outcome has vanishing density ({0:.3e})")]
    ZeroDensity(f64),

    #[error("expected a single-mode state, found {0} modes")]
    NotSingleMode(usize),

    #[error("acceptance window {v_up} exceeds the integration domain {p_max}")]
    WindowExceedsDomain { v_up: f64, p_max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not representable in the coherent engine: {0}")]
    Unsupported(String),

    #[error("numerical convergence failure: {0}")]
    Convergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
