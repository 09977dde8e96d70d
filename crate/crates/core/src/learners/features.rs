use crate::corpus::{DocTermMatrix, Label};
use crate::error::{Error, Result};
use crate::topic_model::TopicVector;

/// Dense row-major feature rows with binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    n_features: usize,
    values: Vec<f64>,
    labels: Vec<Label>,
}

impl FeatureMatrix {
    pub fn from_rows(rows: &[Vec<f64>], labels: &[Label]) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::LengthMismatch(rows.len(), labels.len()));
        }
        let n_features = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(rows.len() * n_features);
        for row in rows {
            super::check_dim(n_features, row.len())?;
            values.extend_from_slice(row);
        }
        Ok(Self {
            n_features,
            values,
            labels: labels.to_vec(),
        })
    }

    pub fn from_topic_vectors(thetas: &[TopicVector], labels: &[Label]) -> Result<Self> {
        let rows: Vec<Vec<f64>> = thetas.iter().map(|t| t.as_slice().to_vec()).collect();
        Self::from_rows(&rows, labels)
    }

    pub fn from_doc_term(matrix: &DocTermMatrix) -> Self {
        let v = matrix.vocab_size;
        let mut values = vec![0.0; matrix.len() * v];
        for (i, row) in matrix.rows.iter().enumerate() {
            for &(t, w) in row {
                values[i * v + t] = w;
            }
        }
        Self {
            n_features: v,
            values,
            labels: matrix.labels.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.len()).map(|i| self.row(i))
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Labels as `+1.0` / `-1.0`.
    pub fn signs(&self) -> Vec<f64> {
        self.labels.iter().map(|l| l.sign()).collect()
    }

    pub(crate) fn require_both_classes(&self) -> Result<()> {
        for class in [Label::Positive, Label::Negative] {
            if !self.labels.contains(&class) {
                return Err(Error::MissingClass(class.to_string()));
            }
        }
        Ok(())
    }
}
