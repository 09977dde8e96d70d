use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Orientation;
use crate::corpus::Label;
use crate::evaluation::{confusion, metrics};

/// How ATC and CTC pick the cut on their selected topic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMode {
    /// Quantile of the training values that reproduces the training
    /// positive ratio.
    PriorQuantile,
    /// Best F-score over a fixed candidate grid on a held-out validation fold.
    Cv,
}

/// Number of evenly spaced candidates in [0, 1] for [`ThresholdMode::Cv`].
pub const CV_CANDIDATES: usize = 21;
/// Share of each class held out for threshold validation.
pub const CV_VALIDATION_FRACTION: f64 = 0.2;

/// Linear-interpolation quantile of `values` at `q` in [0, 1].
pub fn quantile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of an empty sample");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub(crate) fn prior_quantile_threshold(
    values: &[f64],
    positive_ratio: f64,
    orientation: Orientation,
) -> f64 {
    match orientation {
        Orientation::PositiveHigh => quantile(values, 1.0 - positive_ratio),
        Orientation::PositiveLow => quantile(values, positive_ratio),
    }
}

/// Grid search on a stratified validation fold; ties keep the lowest
/// candidate.
pub(crate) fn cv_threshold(
    values: &[f64],
    labels: &[Label],
    orientation: Orientation,
    seed: u64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut validation = Vec::new();
    for class in [Label::Positive, Label::Negative] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        members.shuffle(&mut rng);
        let take = ((CV_VALIDATION_FRACTION * members.len() as f64).round() as usize)
            .max(1)
            .min(members.len());
        validation.extend_from_slice(&members[..take]);
    }
    validation.sort_unstable();
    let actual: Vec<Label> = validation.iter().map(|&i| labels[i]).collect();

    let mut best = (f64::NEG_INFINITY, 0.0);
    for c in 0..CV_CANDIDATES {
        let th = c as f64 / (CV_CANDIDATES - 1) as f64;
        let predicted: Vec<Label> = validation
            .iter()
            .map(|&i| orientation.classify(values[i], th))
            .collect();
        let f = metrics(&confusion(&predicted, &actual).expect("equal lengths")).fscore;
        if f > best.0 {
            best = (f, th);
        }
    }
    best.1
}
