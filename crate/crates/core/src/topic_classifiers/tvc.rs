use serde::{Deserialize, Serialize};

use super::{check_inputs, ClassifierConfig};
use crate::corpus::Label;
use crate::error::Result;
use crate::learners::{train_svm, train_tree, DecisionTreeModel, FeatureMatrix, LinearSvmModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LearnerKind {
    Svm,
    Tree,
}

/// A trained base learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "learner", content = "model", rename_all = "lowercase")]
pub enum BaseModel {
    Svm(LinearSvmModel),
    Tree(DecisionTreeModel),
}

impl BaseModel {
    pub fn train(
        data: &FeatureMatrix,
        learner: LearnerKind,
        config: &ClassifierConfig,
    ) -> Result<Self> {
        Ok(match learner {
            LearnerKind::Svm => BaseModel::Svm(train_svm(data, &config.svm)?),
            LearnerKind::Tree => BaseModel::Tree(train_tree(data, &config.tree)?),
        })
    }

    pub fn kind(&self) -> LearnerKind {
        match self {
            BaseModel::Svm(_) => LearnerKind::Svm,
            BaseModel::Tree(_) => LearnerKind::Tree,
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            BaseModel::Svm(m) => m.n_features(),
            BaseModel::Tree(m) => m.n_features,
        }
    }

    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        match self {
            BaseModel::Svm(m) => m.predict(x),
            BaseModel::Tree(m) => m.predict(x),
        }
    }
}

/// Base learner trained with topic vectors as features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TvcModel(pub BaseModel);

impl TvcModel {
    pub fn learner(&self) -> LearnerKind {
        self.0.kind()
    }

    pub fn predict(&self, theta: &[f64]) -> Result<Label> {
        self.0.predict(theta)
    }
}

pub fn train_tvc<V: AsRef<[f64]>>(
    vectors: &[V],
    labels: &[Label],
    learner: LearnerKind,
    config: &ClassifierConfig,
) -> Result<TvcModel> {
    check_inputs(vectors, labels)?;
    let rows: Vec<Vec<f64>> = vectors.iter().map(|v| v.as_ref().to_vec()).collect();
    let data = FeatureMatrix::from_rows(&rows, labels)?;
    Ok(TvcModel(BaseModel::train(&data, learner, config)?))
}

pub fn predict_tvc(model: &TvcModel, theta: &[f64]) -> Result<Label> {
    model.predict(theta)
}
