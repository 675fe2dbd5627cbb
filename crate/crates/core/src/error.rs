use std::path::PathBuf;

use chrono::NaiveDate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("missing file: {0}")]
    MissingFile(PathBuf),
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("duplicate date {0}")]
    DuplicateDate(NaiveDate),
    #[error("non-positive close {value} on {date}")]
    NonPositiveClose { date: NaiveDate, value: f64 },
    #[error("dates out of order: {later} is not after {earlier}")]
    Unordered {
        earlier: NaiveDate,
        later: NaiveDate,
    },
    #[error("no secondary observation on or before {0}")]
    NoPrecedingObservation(NaiveDate),
    #[error("constant column: cannot fit a min-max scaler")]
    ConstantColumn,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("model has not been trained")]
    Untrained,
    #[error("date mismatch between series: {0}")]
    DateMismatch(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    ///
    /// 1 is a configuration problem, 2 a data problem, 3 a numeric failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::MissingFile(_) | Error::Config(_) => 1,
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::DuplicateDate(_)
            | Error::NonPositiveClose { .. }
            | Error::Unordered { .. }
            | Error::NoPrecedingObservation(_)
            | Error::ConstantColumn
            | Error::InsufficientData(_)
            | Error::InvalidSplit(_)
            | Error::Empty(_)
            | Error::DateMismatch(_) => 2,
            Error::Shape(_) | Error::Untrained | Error::Numeric(_) => 3,
        }
    }
}
