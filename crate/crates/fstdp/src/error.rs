use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
///
/// Variants are grouped by how the CLI maps them to exit codes: bad input
/// (configs, specs, arguments, malformed files) versus failures that occur
/// while executing an otherwise valid request.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter or argument violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A generator or experiment spec is internally inconsistent or infeasible.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// Configuration file could not be read, parsed, or validated.
    #[error("config error: {0}")]
    Config(String),

    /// A data file has a malformed row. Line numbers are 1-based and include
    /// the header.
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    /// The same (station, hour) cell appeared twice in an event file.
    #[error("conflicting duplicate entry for station {station:?} at hour {hour}")]
    DuplicateEntry { station: String, hour: u64 },

    /// Threshold calibration could not reach the requested output rate.
    /// `min_hz`/`max_hz` bound what the bisection actually achieved.
    #[error(
        "calibration failed: target {target_hz} Hz outside achievable range [{min_hz}, {max_hz}] Hz"
    )]
    CalibrationFailed {
        target_hz: f64,
        min_hz: f64,
        max_hz: f64,
    },

    /// Pearson correlation is undefined for a zero-variance channel.
    #[error("undefined correlation: channel {0} has zero variance")]
    UndefinedCorrelation(usize),

    /// The learning-condition ratio has no information to compare, e.g. a
    /// single-class channel population or zero causal probability.
    #[error("degenerate learning condition: {0}")]
    DegenerateCondition(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True when the error reflects bad user input rather than a runtime
    /// failure. The CLI exits with 2 for validation errors and 3 otherwise.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::InvalidSpec(_)
                | Error::Config(_)
                | Error::Parse { .. }
                | Error::DuplicateEntry { .. }
                | Error::DegenerateCondition(_)
        )
    }
}
