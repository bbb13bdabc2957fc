//! Error and warning types shared across the toolkit.

use thiserror::Error;

/// Unified error type for all fallible operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the inputs was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative kernel failed to converge or produced an unusable state.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// A requested rank exceeds what the data supports.
    #[error("rank deficiency: {0}")]
    RankDeficient(String),

    /// A metric is undefined for the given reference data.
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    /// A configured resource limit would be exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// A file does not follow the expected layout.
    #[error("format error in {path}: {reason}")]
    Format { path: String, reason: String },

    /// A file failed its integrity checks.
    #[error("corrupt file {path}: {reason}")]
    Corruption { path: String, reason: String },

    /// An underlying I/O operation failed.
    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Non-fatal conditions attached to results instead of aborting them.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// Query parameter lies outside the training range by more than the
    /// configured fraction on one axis.
    Extrapolation { axis: usize, value: f64, lo: f64, hi: f64 },
    /// Eigenvector matrix condition estimate exceeds the defectiveness bound.
    Defective { cond: f64 },
    /// Eigenvalue matching cost suggests a crossing between neighbors.
    EigenCrossing { cost: f64, threshold: f64 },
    /// Largest imaginary residue (relative) seen while projecting to reals.
    ImaginaryResidue { max_ratio: f64 },
    /// A physics parameter is outside its studied range.
    ParamOutOfRange { name: String, value: f64, lo: f64, hi: f64 },
    /// Advective CFL number when stepping without upwind implicitness.
    CflExceeded { number: f64 },
    /// Interpolation fell back to inverse-distance weights on a scattered set.
    ScatteredWeights,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::Extrapolation { axis, value, lo, hi } => write!(
                f,
                "extrapolation on axis {axis}: {value} outside training range [{lo}, {hi}]"
            ),
            Diagnostic::Defective { cond } => {
                write!(f, "eigenvector matrix nearly defective (cond ~ {cond:.3e})")
            }
            Diagnostic::EigenCrossing { cost, threshold } => write!(
                f,
                "eigenvalue pairing cost {cost:.3e} exceeds {threshold:.3e}; possible crossing"
            ),
            Diagnostic::ImaginaryResidue { max_ratio } => {
                write!(f, "imaginary residue ratio {max_ratio:.3e} in real projection")
            }
            Diagnostic::ParamOutOfRange { name, value, lo, hi } => {
                write!(f, "parameter {name}={value} outside studied range [{lo}, {hi}]")
            }
            Diagnostic::CflExceeded { number } => {
                write!(f, "advective CFL number {number:.3} exceeds 1 in explicit stepping")
            }
            Diagnostic::ScatteredWeights => {
                write!(f, "neighbors do not form a tensor grid; inverse-distance weights used")
            }
        }
    }
}
