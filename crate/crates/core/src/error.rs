use num_complex::Complex64;
use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A point with non-positive ordinate, or a non-finite coordinate.
    #[error("point ({x}, {y}) is not in the open upper half-plane")]
    InvalidPoint { x: f64, y: f64 },

    /// An argument outside the domain of a scalar function or estimate.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value failed validation.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Adaptive quadrature ran out of depth or cell budget before meeting tolerance.
    #[error("quadrature did not converge: value {value}, error estimate {err_estimate:e} over {cells} cells")]
    NotConverged { value: Complex64, err_estimate: f64, cells: usize },

    /// Per-probe reproducing constants disagreed.
    #[error("calibration failure: {0}")]
    Calibration(String),

    /// The requested operation is not defined for this kind of object.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
