use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pattern has no dark pixels and cannot be normalized")]
    DegeneratePattern,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("PBM parse error: {0}")]
    Pbm(String),

    #[error("catalog line {line}: {message}")]
    Catalog { line: usize, message: String },

    #[error("duplicate catalog entry {group}:{index}")]
    DuplicateEntry { group: String, index: usize },

    #[error("label must not be empty")]
    EmptyLabel,

    #[error("label is {len} bytes; version 3-L holds at most {max}")]
    LabelTooLong { len: usize, max: usize },

    #[error("invalid scale {0}; must be at least 1")]
    InvalidScale(usize),

    #[error("neuron index {index} out of range for ball {ball} with {count} neurons")]
    NeuronOutOfRange {
        ball: String,
        index: usize,
        count: usize,
    },

    #[error("unknown attribute ball {0}")]
    UnknownBall(String),

    #[error("cue neurons {0} and {1} are in the same ball; intra-ball links are not allowed")]
    IntraBallLink(String, String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("probe not recognized by ball {ball} (max q = {max_q} < D = {threshold})")]
    NoRecognition {
        ball: String,
        max_q: f64,
        threshold: f64,
    },

    #[error("no trained link from {from} fires in ball {to}")]
    NoAssociation { from: String, to: String },

    #[error("cue neuron {0} does not fire on its own stored pattern; train the ball first")]
    UntrainedNeuron(String),

    #[error("unsupported model format tag {0:?}")]
    UnsupportedVersion(String),

    #[error("model file line {line}: {message}")]
    Model { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
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

    /// True for errors caused by bad user input (as opposed to I/O or
    /// recall failures at runtime).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::EmptyLabel
                | Error::DegeneratePattern
                | Error::DimensionMismatch { .. }
                | Error::Catalog { .. }
                | Error::DuplicateEntry { .. }
                | Error::LabelTooLong { .. }
                | Error::InvalidScale(_)
                | Error::NeuronOutOfRange { .. }
                | Error::UnknownBall(_)
                | Error::IntraBallLink(..)
                | Error::InvalidConfig(_)
        )
    }
}
