use thiserror::Error;

/// Library-wide error type. `exit_code` is the process status the CLI maps
/// each variant to.
#[derive(Error, Debug)]
pub enum Error {
    /// Bad configuration: unknown key, unparsable file, out-of-range setting.
    #[error("config error: {0}")]
    Config(String),

    /// An argument violates a function's domain (negative width, non-finite
    /// input, probability outside [0,1], ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested grid cannot resolve the physics (span too short for the
    /// lifetimes, filter narrower than the spectral resolution, ...).
    #[error("resolution error: {0}")]
    Resolution(String),

    /// Two objects that must share structure do not (mismatched grids,
    /// incompatible dimensions).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Domain(_) | Error::Resolution(_) | Error::Contract(_) => 3,
            Error::Io(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Rejects NaN/inf arguments up front so they cannot propagate silently.
pub fn ensure_finite(value: f64, what: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{what} must be finite, got {value}")))
    }
}
