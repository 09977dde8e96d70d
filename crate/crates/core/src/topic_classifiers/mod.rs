//! Classifiers that work in topic space: the single-topic aggregate (ATC)
//! and confidence-based (CTC) rules, the centroid-similarity classifier
//! (STC), and conventional learners trained on topic vectors (TVC).

mod aggregate;
mod confidence;
mod persist;
mod similarity;
mod threshold;
mod tvc;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use aggregate::{predict_atc, select_discriminative_topic, train_atc, AtcModel};
pub use confidence::{
    predict_ctc, select_confident_topic, topic_confidence, train_ctc, CtcModel, SupportMode,
};
pub use persist::{ClassifierArtifact, ModelReference, TrainedClassifier};
pub use similarity::{
    class_centroids, cosine_similarity, predict_stc, train_stc, ClassCentroid, StcModel,
};
pub use threshold::{quantile, ThresholdMode, CV_CANDIDATES, CV_VALIDATION_FRACTION};
pub use tvc::{predict_tvc, train_tvc, BaseModel, LearnerKind, TvcModel};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::learners::{SvmConfig, TreeConfig};

/// Which side of the threshold is predicted positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// Positive iff `v > threshold`.
    PositiveHigh,
    /// Positive iff `v < threshold`.
    PositiveLow,
}

impl Orientation {
    pub fn classify(self, value: f64, threshold: f64) -> Label {
        let positive = match self {
            Orientation::PositiveHigh => value > threshold,
            Orientation::PositiveLow => value < threshold,
        };
        if positive {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

/// Every classifier the pipeline can train.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassifierId {
    Atc,
    Ctc,
    Stc,
    TvcSvm,
    TvcTree,
    RawSvm,
    RawTree,
}

impl ClassifierId {
    pub const ALL: [ClassifierId; 7] = [
        ClassifierId::Atc,
        ClassifierId::Ctc,
        ClassifierId::Stc,
        ClassifierId::TvcSvm,
        ClassifierId::TvcTree,
        ClassifierId::RawSvm,
        ClassifierId::RawTree,
    ];

    /// The five classifiers that work on topic vectors.
    pub const TOPIC_SPACE: [ClassifierId; 5] = [
        ClassifierId::Atc,
        ClassifierId::Ctc,
        ClassifierId::Stc,
        ClassifierId::TvcSvm,
        ClassifierId::TvcTree,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierId::Atc => "atc",
            ClassifierId::Ctc => "ctc",
            ClassifierId::Stc => "stc",
            ClassifierId::TvcSvm => "tvc-svm",
            ClassifierId::TvcTree => "tvc-tree",
            ClassifierId::RawSvm => "raw-svm",
            ClassifierId::RawTree => "raw-tree",
        }
    }

    /// Whether the classifier consumes topic vectors (and so needs an LDA model).
    pub fn uses_topics(self) -> bool {
        !matches!(self, ClassifierId::RawSvm | ClassifierId::RawTree)
    }
}

impl fmt::Display for ClassifierId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassifierId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassifierId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown classifier `{s}`")))
    }
}

/// Training options shared by all classifiers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifierConfig {
    pub threshold_mode: ThresholdMode,
    pub support: SupportMode,
    pub svm: SvmConfig,
    pub tree: TreeConfig,
    /// Seed for the threshold validation fold.
    pub seed: u64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            threshold_mode: ThresholdMode::PriorQuantile,
            support: SupportMode::Fractional,
            svm: SvmConfig::default(),
            tree: TreeConfig::default(),
            seed: 1,
        }
    }
}

pub(crate) fn check_inputs<V: AsRef<[f64]>>(vectors: &[V], labels: &[Label]) -> Result<usize> {
    if vectors.len() != labels.len() {
        return Err(Error::LengthMismatch(vectors.len(), labels.len()));
    }
    let k = vectors
        .first()
        .map(|v| v.as_ref().len())
        .ok_or(Error::EmptyCorpus)?;
    for v in vectors {
        crate::learners::check_dim(k, v.as_ref().len())?;
    }
    for class in [Label::Positive, Label::Negative] {
        if !labels.contains(&class) {
            return Err(Error::MissingClass(class.to_string()));
        }
    }
    Ok(k)
}

pub(crate) fn pick_threshold(
    values: &[f64],
    labels: &[Label],
    positive_ratio: f64,
    orientation: Orientation,
    config: &ClassifierConfig,
) -> f64 {
    match config.threshold_mode {
        ThresholdMode::PriorQuantile => {
            threshold::prior_quantile_threshold(values, positive_ratio, orientation)
        }
        ThresholdMode::Cv => threshold::cv_threshold(values, labels, orientation, config.seed),
    }
}
