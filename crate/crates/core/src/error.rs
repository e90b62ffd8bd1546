use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the mode, biphoton and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Axes of a grid do not share the representation an operation needs.
    #[error("representation mismatch: {0}")]
    RepresentationMismatch(String),

    #[error("expansion index j = {j} out of range for order {order}")]
    IndexOutOfRange { j: usize, order: usize },

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    /// Grid construction or layout problem (non-uniform, too small, mismatched axes).
    #[error("grid error: {0}")]
    Grid(String),

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    /// Operation applied to a state in the wrong stage (e.g. converting twice).
    #[error("state error: {0}")]
    State(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("winding number undefined: loop amplitude {min_amplitude:.3e} is below {threshold:.1e} of peak")]
    UndefinedWinding { min_amplitude: f64, threshold: f64 },

    #[error("winding number ambiguous: accumulated phase is {turns:.4} turns")]
    AmbiguousWinding { turns: f64 },

    #[error("no signal: conditional amplitude at detector-2 position {position} is negligible")]
    NoSignal { position: f64 },

    #[error("fringe visibility {visibility:.4} below 0.1")]
    LowVisibility { visibility: f64 },

    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("io error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
