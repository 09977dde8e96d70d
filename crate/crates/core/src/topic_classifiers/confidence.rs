use serde::{Deserialize, Serialize};

use super::{check_inputs, pick_threshold, ClassifierConfig, Orientation};
use crate::corpus::{ClassCounts, Label};
use crate::error::{Error, Result};

/// How a continuous topic weight counts toward association-rule support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportMode {
    /// A document contributes `θ_d[t]` to the support of topic `t`.
    Fractional,
    /// A document contributes 1 when `θ_d[t] > 1/K`, else 0.
    Binarized,
}

fn support_weight(value: f64, k: usize, mode: SupportMode) -> f64 {
    match mode {
        SupportMode::Fractional => value,
        SupportMode::Binarized => f64::from(u8::from(value > 1.0 / k as f64)),
    }
}

/// `conf(topic ⇒ class) = supp(topic ∪ class) / supp(topic)`; the common
/// `1/N` factor of both supports cancels.
pub fn topic_confidence<V: AsRef<[f64]>>(
    vectors: &[V],
    labels: &[Label],
    topic: usize,
    class: Label,
    mode: SupportMode,
) -> Result<f64> {
    if vectors.len() != labels.len() {
        return Err(Error::LengthMismatch(vectors.len(), labels.len()));
    }
    let k = vectors
        .first()
        .map(|v| v.as_ref().len())
        .ok_or(Error::EmptyCorpus)?;
    if topic >= k {
        return Err(Error::InvalidConfig(format!(
            "topic {topic} out of range for {k} topics"
        )));
    }
    let (mut joint, mut total) = (0.0, 0.0);
    for (v, &l) in vectors.iter().zip(labels) {
        let w = support_weight(v.as_ref()[topic], k, mode);
        total += w;
        if l == class {
            joint += w;
        }
    }
    if total <= 0.0 {
        return Err(Error::ZeroTopicMass { topic });
    }
    Ok(joint / total)
}

/// Topic with the highest confidence for the positive class, lowest index
/// on ties. Topics without support are skipped.
pub fn select_confident_topic<V: AsRef<[f64]>>(
    vectors: &[V],
    labels: &[Label],
    mode: SupportMode,
) -> Result<usize> {
    let k = check_inputs(vectors, labels)?;
    let mut best: Option<(usize, f64)> = None;
    for t in 0..k {
        let conf = match topic_confidence(vectors, labels, t, Label::Positive, mode) {
            Ok(c) => c,
            Err(Error::ZeroTopicMass { .. }) => continue,
            Err(e) => return Err(e),
        };
        if best.is_none_or(|(_, b)| conf > b) {
            best = Some((t, conf));
        }
    }
    best.map(|(t, _)| t)
        .ok_or(Error::ZeroTopicMass { topic: 0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CtcModel {
    pub topic: usize,
    pub threshold: f64,
}

impl CtcModel {
    pub fn predict(&self, theta: &[f64]) -> Result<Label> {
        let v = *theta.get(self.topic).ok_or(Error::DimensionMismatch {
            expected: self.topic + 1,
            actual: theta.len(),
        })?;
        Ok(Orientation::PositiveHigh.classify(v, self.threshold))
    }
}

pub fn train_ctc<V: AsRef<[f64]>>(
    vectors: &[V],
    labels: &[Label],
    config: &ClassifierConfig,
) -> Result<CtcModel> {
    let topic = select_confident_topic(vectors, labels, config.support)?;
    let values: Vec<f64> = vectors.iter().map(|v| v.as_ref()[topic]).collect();
    let ratio = ClassCounts::from_labels(labels).positive_ratio();
    let threshold = pick_threshold(&values, labels, ratio, Orientation::PositiveHigh, config);
    Ok(CtcModel { topic, threshold })
}

pub fn predict_ctc(model: &CtcModel, theta: &[f64]) -> Result<Label> {
    model.predict(theta)
}
