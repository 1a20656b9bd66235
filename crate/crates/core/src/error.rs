//! Error type shared by every module in the crate.

use std::path::PathBuf;

use thiserror::Error;

use crate::predictors::MethodId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed header: expected `date,close`, found `{found}`")]
    MalformedHeader { found: String },

    /// A data row failed to parse or violated a series invariant. `row` is the
    /// 1-based data row (the header is not counted).
    #[error("row {row}: {message}")]
    BadRow { row: usize, message: String },

    #[error("empty series")]
    EmptySeries,

    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("window of {k} days ending at day {t} is unavailable (series has {len} days)")]
    WindowUnavailable { t: usize, k: usize, len: usize },

    #[error("unknown method id {0}")]
    UnknownMethod(MethodId),

    #[error("no error recorded for method {method} on day {day}")]
    MissingCell { day: usize, method: MethodId },

    #[error("duplicate interpolation abscissa {0}")]
    DuplicateDay(f64),

    #[error("interpolation needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("non-finite value {0}")]
    NonFinite(f64),

    #[error("empty trace")]
    EmptyTrace,

    #[error("misaligned inputs: {0}")]
    Misaligned(String),

    #[error("series too short: need at least {needed} days, have {len}")]
    SeriesTooShort { needed: usize, len: usize },
}

impl Error {
    /// Errors that originate in the input data rather than in how the run was configured.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Io { .. }
                | Error::MalformedHeader { .. }
                | Error::BadRow { .. }
                | Error::EmptySeries
                | Error::SeriesTooShort { .. }
                | Error::WindowUnavailable { .. }
                | Error::MissingCell { .. }
                | Error::EmptyTrace
        )
    }
}
