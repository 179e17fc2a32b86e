use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zeta pole: |s - 1| below the exclusion radius")]
    PoleAtOne,
    #[error("argument too close to a pole: {0}")]
    PoleNear(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("unsupported weight {0}")]
    BadWeight(i64),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),
    #[error("outside domain: {0}")]
    Domain(String),
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("singular system: {0}")]
    SingularSystem(String),
    #[error("bad data: {0}")]
    BadData(String),
    #[error("odd Maass forms are not supported")]
    ParityUnsupported,
    #[error("invalid value: {0}")]
    InvalidValue(String),
}

impl Error {
    /// Convergence-type failures (CLI exit code 3); everything else is a domain failure.
    pub fn is_convergence(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence(_)
                | Error::QuadratureFailure(_)
                | Error::InsufficientPrecision(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
