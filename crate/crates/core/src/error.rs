use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A scalar argument fell outside its admissible range.
    #[error("{name} = {value} is outside the valid range [{min}, {max}]")]
    Domain {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    /// A matrix that was supposed to be a density matrix violates one of the
    /// physical constraints; `invariant` names which one.
    #[error("not a physical state: {invariant} violated ({detail})")]
    NonPhysical {
        invariant: &'static str,
        detail: String,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, min: f64, max: f64) -> Self {
        Error::Domain {
            name,
            value,
            min,
            max,
        }
    }
}

/// Checks `value` against `[min, max]` with an absolute slack of `tol`, and
/// clamps values that are within the slack.
pub(crate) fn check_range(name: &'static str, value: f64, min: f64, max: f64, tol: f64) -> Result<f64> {
    if !value.is_finite() || value < min - tol || value > max + tol {
        return Err(Error::domain(name, value, min, max));
    }
    Ok(value.clamp(min, max))
}
