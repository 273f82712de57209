use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not Hermitian (max |C - C^H| = {defect:.3e})")]
    NonHermitian { defect: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:.3e}, largest {max_eigenvalue:.3e})")]
    NotPositiveSemidefinite {
        min_eigenvalue: f64,
        max_eigenvalue: f64,
    },

    #[error("transmit power must be positive and finite, got {0}")]
    NonPositivePower(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("LMMSE system is numerically singular (condition number {condition:.3e})")]
    SingularSystem { condition: f64 },

    #[error(
        "pilot-projected covariance is numerically singular (condition number {condition:.3e})"
    )]
    SingularPilotGram { condition: f64 },

    #[error("estimated channel matrix is rank deficient (Gram condition number {condition:.3e})")]
    RankDeficient { condition: f64 },

    #[error("cannot normalize an all-zero channel matrix")]
    ZeroMatrix,

    #[error(
        "training length T_dl = {t_dl} leaves no data symbols in a coherence interval of {t_coh}"
    )]
    InvalidPrelog { t_dl: usize, t_coh: usize },

    #[error("{}:{line}: {message}", path.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "<input>".into()))]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("unknown preset `{0}` (expected fig1..fig8)")]
    UnknownPreset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn mismatch(context: &'static str, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            context,
            expected,
            found,
        }
    }
}
