//! LDA fitted by collapsed Gibbs sampling, with fold-in inference for
//! held-out documents.

mod config;
mod inference;
mod model;
mod sampler;

pub use config::LdaConfig;
pub use inference::{infer_topics, infer_topics_seeded};
pub use model::{dimension_reduction, top_words, LdaModel, TopicVector, SIMPLEX_TOLERANCE};
pub use sampler::{train_lda, train_lda_observed, GibbsSampler};
