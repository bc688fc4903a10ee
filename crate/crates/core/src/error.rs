use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the polynomial eigenvalue toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("leading coefficient is numerically singular (sigma_min = {sigma_min:e}, threshold = {threshold:e})")]
    SingularLeadingCoefficient { sigma_min: f64, threshold: f64 },

    #[error("eigenvalue {lambda} is not simple (|y^H P'(lambda) x| = {derivative:e})")]
    NotSimple { lambda: Complex64, derivative: f64 },

    #[error("structured projection vanishes (norm {norm:e} relative to input {input:e})")]
    ZeroProjection { norm: f64, input: f64 },

    #[error("every coefficient of the structured direction is zero")]
    AllZeroDirection,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("fewer than two usable eigenvalues ({usable} simple of {total})")]
    DegenerateSpectrum { usable: usize, total: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("{0}")]
    InvalidInput(String),

    #[error("QZ iteration failed to converge after {iterations} sweeps")]
    NoConvergence { iterations: usize },

    #[error("parse error at line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable name, printed by the command-line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::SingularLeadingCoefficient { .. } => "SingularLeadingCoefficient",
            Error::NotSimple { .. } => "NotSimple",
            Error::ZeroProjection { .. } => "ZeroProjection",
            Error::AllZeroDirection => "AllZeroDirection",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::DegenerateSpectrum { .. } => "DegenerateSpectrum",
            Error::NonFinite { .. } => "NonFinite",
            Error::InvalidInput(_) => "InvalidInput",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::Parse { .. } => "ParseError",
            Error::Io(_) => "IoError",
        }
    }

    /// True for failures of a numerical precondition (as opposed to bad user input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularLeadingCoefficient { .. }
                | Error::NotSimple { .. }
                | Error::ZeroProjection { .. }
                | Error::AllZeroDirection
                | Error::DegenerateSpectrum { .. }
                | Error::NoConvergence { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
