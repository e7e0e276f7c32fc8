use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid dumbbell parameters r={r}, s={s}, ell={ell}: {reason}")]
    InvalidParams {
        r: usize,
        s: usize,
        ell: usize,
        reason: &'static str,
    },

    #[error("gain modulus {modulus} is not on the unit circle (tolerance {tol})")]
    NonUnitGain { modulus: f64, tol: f64 },

    #[error("case coordinate {value} outside [-1, 1]")]
    CoordinateOutOfRange { value: f64 },

    #[error("operation requires {expected} cycle parity, got r={r}, s={s}")]
    WrongParity {
        expected: &'static str,
        r: usize,
        s: usize,
    },

    #[error("graph has {n} vertices, limit for this operation is {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("eigensolver failed to converge on a {n}x{n} Hermitian matrix")]
    EigenFailed { n: usize },

    #[error("quadrature did not reach tolerance {tol}; achieved error estimate {achieved}")]
    QuadratureFailed { tol: f64, achieved: f64 },

    #[error("invalid search configuration: {0}")]
    BadConfig(String),

    #[error("invalid scan range: {0}")]
    BadScanRange(String),

    #[error("energy evaluation failed at alpha={alpha}, beta={beta}: {source}")]
    EnergyEval {
        alpha: f64,
        beta: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Process exit code the CLI maps this error to: 1 for input
    /// validation, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams { .. }
            | Error::NonUnitGain { .. }
            | Error::CoordinateOutOfRange { .. }
            | Error::WrongParity { .. }
            | Error::TooLarge { .. }
            | Error::BadConfig(_)
            | Error::BadScanRange(_) => 1,
            Error::EigenFailed { .. } | Error::QuadratureFailed { .. } => 2,
            Error::EnergyEval { source, .. } => source.exit_code(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
