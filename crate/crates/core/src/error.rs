use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("direction has norm {0}, expected a unit vector")]
    NonUnitDirection(f64),
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),
    #[error("invalid state ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("invalid probability table: {0}")]
    InvalidTable(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("number of excluded answers {k} outside 0..={max}")]
    ExclusionOutOfRange { k: usize, max: usize },
    #[error("post-processing has no rule for exclusion set {set:?} and outcome {outcome}")]
    MissingRule { set: Vec<usize>, outcome: String },
    #[error("post-processing rule for exclusion set {set:?} and outcome {outcome} does not sum to one")]
    InvalidRule { set: Vec<usize>, outcome: String },
    #[error("angle {0} outside (0, pi/2]")]
    AngleOutOfRange(f64),
    #[error("unsupported number of excluded answers {0}; the auxiliary construction covers 1 and 2")]
    UnsupportedK(usize),
    #[error("measurement is not certified optimal: {0}")]
    NotCertified(String),
    #[error("invalid noise parameter: {0}")]
    InvalidNoise(String),
    #[error("invalid experiment plan: {0}")]
    InvalidPlan(String),
    #[error("unbalanced basis split: {0}")]
    UnbalancedBases(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
