use serde::{Deserialize, Serialize};

use super::{class_centroids, pick_threshold, ClassifierConfig, Orientation};
use crate::corpus::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtcModel {
    pub topic: usize,
    pub threshold: f64,
    pub orientation: Orientation,
}

impl AtcModel {
    pub fn predict(&self, theta: &[f64]) -> Result<Label> {
        let v = *theta.get(self.topic).ok_or(Error::DimensionMismatch {
            expected: self.topic + 1,
            actual: theta.len(),
        })?;
        Ok(self.orientation.classify(v, self.threshold))
    }
}

/// Topic maximizing `|positive[t] - negative[t]|` (lowest index on ties)
/// and the side the positive class sits on.
pub fn select_discriminative_topic(positive: &[f64], negative: &[f64]) -> (usize, Orientation) {
    let mut best = (0, f64::NEG_INFINITY);
    for (t, (p, n)) in positive.iter().zip(negative).enumerate() {
        let gap = (p - n).abs();
        if gap > best.1 {
            best = (t, gap);
        }
    }
    let t = best.0;
    let orientation = if positive[t] > negative[t] {
        Orientation::PositiveHigh
    } else {
        Orientation::PositiveLow
    };
    (t, orientation)
}

pub fn train_atc<V: AsRef<[f64]>>(
    vectors: &[V],
    labels: &[Label],
    positive_ratio: f64,
    config: &ClassifierConfig,
) -> Result<AtcModel> {
    if !(positive_ratio > 0.0 && positive_ratio < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "positive_ratio must lie in (0, 1), got {positive_ratio}"
        )));
    }
    let (pos, neg) = class_centroids(vectors, labels)?;
    if pos.mean_theta == neg.mean_theta {
        log::warn!("class centroids are identical; ATC has no discriminative topic");
    }
    let (topic, orientation) = select_discriminative_topic(&pos.mean_theta, &neg.mean_theta);
    let values: Vec<f64> = vectors.iter().map(|v| v.as_ref()[topic]).collect();
    let threshold = pick_threshold(&values, labels, positive_ratio, orientation, config);
    Ok(AtcModel {
        topic,
        threshold,
        orientation,
    })
}

pub fn predict_atc(model: &AtcModel, theta: &[f64]) -> Result<Label> {
    model.predict(theta)
}
