use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum ReconError {
    /// Argument outside the domain of a function.
    #[error("{function}: argument {value} outside domain ({expected})")]
    Domain {
        function: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A hypothesis of the parameter choice or bound is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Adaptive quadrature ran out of subdivisions.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (best estimate {best}, error estimate {error_estimate:e})"
    )]
    Convergence {
        best: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    /// Reconstruction needs samples the sample set does not hold.
    #[error("samples {first}..={last} required but only {k_min}..={k_max} available")]
    OutOfRange {
        first: i64,
        last: i64,
        k_min: i64,
        k_max: i64,
    },

    /// A sample value is not finite.
    #[error("sample at index {index} is not finite ({value})")]
    Ingestion { index: i64, value: f64 },

    /// Malformed user input (CLI values, CSV contents).
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, ReconError>;
