//! Binary document classification in topic space.
//!
//! The pipeline turns labeled raw texts into pruned bag-of-words counts
//! ([`corpus`]), fits an LDA topic model by collapsed Gibbs sampling
//! ([`topic_model`]), and classifies documents either with the single-topic
//! and centroid classifiers in [`topic_classifiers`] or with the from-scratch
//! SVM and decision tree in [`learners`]. [`evaluation`] runs the
//! split/train/predict/score protocol over grids of training fractions,
//! topic counts and classifiers, and [`synth`] generates labeled corpora
//! with a known topic structure.

pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod hashing;
pub mod learners;
pub mod synth;
pub mod topic_classifiers;
pub mod topic_model;

pub use corpus::{
    build_vocabulary, stratified_split, tokenize, vectorize, Corpus, DocTermMatrix, Document,
    Label, SplitSpec, Vocabulary, VocabularyConfig, Weighting,
};
pub use error::{Error, Result};
pub use evaluation::{
    confusion, metrics, run_experiment, sweep, ClassifierId, ConfusionMatrix, Metrics,
    PipelineSpec, SweepResult,
};
pub use topic_model::{
    dimension_reduction, infer_topics, train_lda, LdaConfig, LdaModel, TopicVector,
};

/// Version written into every persisted model and manifest.
pub const FORMAT_VERSION: u32 = 1;
