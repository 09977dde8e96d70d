use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("duplicate document id `{0}`")]
    DuplicateId(String),

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("vocabulary is empty after pruning (min_df={min_df}, max_df_ratio={max_df_ratio}); thresholds are too aggressive")]
    EmptyVocabulary { min_df: usize, max_df_ratio: f64 },

    #[error("class `{0}` would receive no training documents")]
    EmptyTrainingClass(String),

    #[error("training data is missing class `{0}`")]
    MissingClass(String),

    #[error("document `{0}` has no tokens")]
    EmptyDocument(String),

    #[error("document has no in-vocabulary tokens")]
    OutOfVocabulary,

    #[error("expected `count` weighting, got `{0}`")]
    WeightingMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("zero-norm vector")]
    ZeroNorm,

    #[error("topic {topic} carries no mass")]
    ZeroTopicMass { topic: usize },

    #[error("length mismatch: {0} predictions vs {1} labels")]
    LengthMismatch(usize, usize),

    #[error("topic count {topics} exceeds attribute count {attributes}")]
    TopicsExceedAttributes { topics: usize, attributes: usize },

    #[error("hash mismatch: expected {expected}, found {found}")]
    HashMismatch { expected: String, found: String },

    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag, used by the CLI's error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidConfig(_) => "invalid_config",
            Error::DuplicateId(_) => "duplicate_id",
            Error::EmptyCorpus => "empty_corpus",
            Error::EmptyVocabulary { .. } => "empty_vocabulary",
            Error::EmptyTrainingClass(_) => "empty_training_class",
            Error::MissingClass(_) => "missing_class",
            Error::EmptyDocument(_) => "empty_document",
            Error::OutOfVocabulary => "out_of_vocabulary",
            Error::WeightingMismatch(_) => "weighting_mismatch",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ZeroNorm => "zero_norm",
            Error::ZeroTopicMass { .. } => "zero_topic_mass",
            Error::LengthMismatch(..) => "length_mismatch",
            Error::TopicsExceedAttributes { .. } => "topics_exceed_attributes",
            Error::HashMismatch { .. } => "hash_mismatch",
            Error::UnsupportedVersion(_) => "unsupported_version",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
