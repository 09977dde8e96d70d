use serde::{Deserialize, Serialize};

use super::check_inputs;
use crate::corpus::Label;
use crate::error::{Error, Result};

/// `x·y / (|x||y|)`.
pub fn cosine_similarity(x: &[f64], y: &[f64]) -> Result<f64> {
    crate::learners::check_dim(x.len(), y.len())?;
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let nx = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    let ny = y.iter().map(|b| b * b).sum::<f64>().sqrt();
    if nx == 0.0 || ny == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(dot / (nx * ny))
}

/// Mean topic distribution of one class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassCentroid {
    pub label: Label,
    pub mean_theta: Vec<f64>,
}

/// Component-wise means of each class, returned as `(positive, negative)`.
pub fn class_centroids<V: AsRef<[f64]>>(
    vectors: &[V],
    labels: &[Label],
) -> Result<(ClassCentroid, ClassCentroid)> {
    let k = check_inputs(vectors, labels)?;
    let mean = |class: Label| {
        let mut sum = vec![0.0; k];
        let mut n = 0usize;
        for (v, _) in vectors.iter().zip(labels).filter(|(_, l)| **l == class) {
            for (s, x) in sum.iter_mut().zip(v.as_ref()) {
                *s += x;
            }
            n += 1;
        }
        ClassCentroid {
            label: class,
            mean_theta: sum.into_iter().map(|s| s / n as f64).collect(),
        }
    };
    Ok((mean(Label::Positive), mean(Label::Negative)))
}

/// Nearest-centroid classifier under cosine similarity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StcModel {
    pub positive: ClassCentroid,
    pub negative: ClassCentroid,
}

impl StcModel {
    pub fn predict(&self, theta: &[f64]) -> Result<Label> {
        let pos = cosine_similarity(theta, &self.positive.mean_theta)?;
        let neg = cosine_similarity(theta, &self.negative.mean_theta)?;
        Ok(if pos > neg {
            Label::Positive
        } else {
            Label::Negative
        })
    }
}

pub fn train_stc<V: AsRef<[f64]>>(vectors: &[V], labels: &[Label]) -> Result<StcModel> {
    let (positive, negative) = class_centroids(vectors, labels)?;
    Ok(StcModel { positive, negative })
}

pub fn predict_stc(model: &StcModel, theta: &[f64]) -> Result<Label> {
    model.predict(theta)
}
