//! Confusion counts, precision/recall/F-score, single experiment runs and
//! grid sweeps.

mod experiment;
mod metrics;
mod sweep;

pub use experiment::{
    evaluate_on_topics, inference_seed, run_experiment, run_split, topic_features,
    train_raw_classifier, train_topic_classifier, ExperimentReport, PipelineSpec, TopicFeatures,
};
pub use metrics::{confusion, macro_metrics, metrics, ConfusionMatrix, Metrics};
pub use sweep::{
    sweep, sweep_with, SummaryRow, SweepOptions, SweepResult, SweepRow, CSV_HEADER,
    DEFAULT_TOPIC_COUNTS,
};

pub use crate::topic_classifiers::ClassifierId;
