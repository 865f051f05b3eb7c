use std::path::PathBuf;

use thiserror::Error;

/// Problems found while loading or validating an instance.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("malformed instance: {0}")]
    Syntax(String),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("instance has no target words")]
    NoWords,
    #[error("word `{word_id}` has no candidate senses")]
    NoSenses { word_id: String },
    #[error("duplicate word id `{word_id}`")]
    DuplicateWord { word_id: String },
    #[error("word `{word_id}` lists sense `{sense_id}` more than once")]
    DuplicateSense { word_id: String, sense_id: String },
    #[error("{owner}: embedding has length {found}, expected {expected}")]
    DimensionMismatch {
        owner: String,
        expected: usize,
        found: usize,
    },
    #[error("{owner}: embedding is the zero vector")]
    ZeroEmbedding { owner: String },
    #[error("{owner}: embedding contains a non-finite value")]
    NonFinite { owner: String },
    #[error("gold has {found} labels for {expected} words")]
    GoldLength { expected: usize, found: usize },
    #[error("gold sense `{sense_id}` is not a candidate of word `{word_id}`")]
    GoldNotCandidate { word_id: String, sense_id: String },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Instance(#[from] InstanceError),

    #[error("instance {index}: {source}")]
    CorpusEntry {
        index: usize,
        #[source]
        source: InstanceError,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Csv(#[from] csv::Error),

    #[error("vectors have different lengths ({0} vs {1})")]
    DimensionMismatch(usize, usize),

    #[error("relatedness is undefined for a word paired with itself (word {0})")]
    SelfPair(usize),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("assignment picks sense {found} for word `{word}` but sense {fixed} is fixed")]
    FixedViolation {
        word: String,
        fixed: usize,
        found: usize,
    },

    #[error("order is not a permutation of the {0} words")]
    NotPermutation(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("solver `{solver}` cannot solve this model: {reason}")]
    Incompatible { solver: String, reason: String },

    #[error("search space of {size} assignments exceeds the cap of {cap}")]
    SearchSpace { size: u128, cap: u128 },

    #[error("reports do not describe the same corpus: {0}")]
    CorpusMismatch(String),

    #[error("solver returned objective {reported} but the assignment evaluates to {recomputed}")]
    ObjectiveMismatch { reported: f64, recomputed: f64 },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for the CLI: 1 for bad input, 2 for solver or
    /// configuration problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Incompatible { .. }
            | Error::SearchSpace { .. }
            | Error::ObjectiveMismatch { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
