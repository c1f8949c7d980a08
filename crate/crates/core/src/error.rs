use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by estimation, ingestion and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// No event at or before the truncation time; AH is zero and log-scale
    /// quantities are undefined.
    #[error("no events at or before tau{}", cell_suffix(.cell))]
    ZeroEvents { cell: Option<String> },

    /// The survival curve is not estimable at tau: the risk set was exhausted
    /// by censoring before tau.
    #[error("survival not estimable at tau = {tau}{}", cell_suffix(.cell))]
    TauBeyondData { tau: f64, cell: Option<String> },

    #[error("stratum {stratum:?} has no subjects in arm {arm}")]
    MissingStratumArm { stratum: String, arm: String },

    #[error("estimates cannot be paired: {0}")]
    InvalidPairing(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("config key {key:?}: {message}")]
    Config { key: String, message: String },

    #[error(
        "simulation aborted: {failed} of {attempted} replicate evaluations failed ({summary})"
    )]
    SimulationAborted {
        failed: usize,
        attempted: usize,
        summary: String,
    },

    #[error("i/o: {0}")]
    Io(String),
}

fn cell_suffix(cell: &Option<String>) -> String {
    match cell {
        Some(c) => format!(" in {c}"),
        None => String::new(),
    }
}

impl Error {
    /// Attach a cell identifier (e.g. `"arm 1, stratum B"`) to errors that carry one.
    pub fn in_cell(self, label: impl Into<String>) -> Self {
        let label = label.into();
        let merge = |cell: Option<String>| match cell {
            Some(inner) => Some(format!("{label}: {inner}")),
            None => Some(label.clone()),
        };
        match self {
            Error::ZeroEvents { cell } => Error::ZeroEvents { cell: merge(cell) },
            Error::TauBeyondData { tau, cell } => Error::TauBeyondData {
                tau,
                cell: merge(cell),
            },
            other => other,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Config { .. } | Error::Io(_) => 3,
            Error::InvalidInput(_) | Error::MissingStratumArm { .. } | Error::InvalidPairing(_) => {
                4
            }
            Error::TauBeyondData { .. } | Error::ZeroEvents { .. } => 5,
            Error::SimulationAborted { .. } => 6,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
