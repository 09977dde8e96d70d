use serde::{Deserialize, Serialize};

use super::{AtcModel, ClassifierId, CtcModel, StcModel, TvcModel};
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::learners::{DecisionTreeModel, LinearSvmModel};
use crate::FORMAT_VERSION;

/// Any trained classifier, tagged by its id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "classifier", content = "model", rename_all = "kebab-case")]
pub enum TrainedClassifier {
    Atc(AtcModel),
    Ctc(CtcModel),
    Stc(StcModel),
    TvcSvm(TvcModel),
    TvcTree(TvcModel),
    RawSvm(LinearSvmModel),
    RawTree(DecisionTreeModel),
}

impl TrainedClassifier {
    pub fn id(&self) -> ClassifierId {
        match self {
            TrainedClassifier::Atc(_) => ClassifierId::Atc,
            TrainedClassifier::Ctc(_) => ClassifierId::Ctc,
            TrainedClassifier::Stc(_) => ClassifierId::Stc,
            TrainedClassifier::TvcSvm(_) => ClassifierId::TvcSvm,
            TrainedClassifier::TvcTree(_) => ClassifierId::TvcTree,
            TrainedClassifier::RawSvm(_) => ClassifierId::RawSvm,
            TrainedClassifier::RawTree(_) => ClassifierId::RawTree,
        }
    }

    /// Predicts from a topic vector (topic classifiers) or a dense term
    /// vector (raw classifiers).
    pub fn predict(&self, features: &[f64]) -> Result<Label> {
        match self {
            TrainedClassifier::Atc(m) => m.predict(features),
            TrainedClassifier::Ctc(m) => m.predict(features),
            TrainedClassifier::Stc(m) => m.predict(features),
            TrainedClassifier::TvcSvm(m) | TrainedClassifier::TvcTree(m) => m.predict(features),
            TrainedClassifier::RawSvm(m) => m.predict(features),
            TrainedClassifier::RawTree(m) => m.predict(features),
        }
    }

    /// Topic selected by a single-topic classifier.
    pub fn selected_topic(&self) -> Option<usize> {
        match self {
            TrainedClassifier::Atc(m) => Some(m.topic),
            TrainedClassifier::Ctc(m) => Some(m.topic),
            _ => None,
        }
    }
}

/// What a persisted classifier was trained against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "hash", rename_all = "lowercase")]
pub enum ModelReference {
    /// Content hash of the LDA model producing the topic vectors.
    Lda(String),
    /// Content hash of the vocabulary defining the term columns.
    Vocabulary(String),
}

impl ModelReference {
    pub fn hash(&self) -> &str {
        match self {
            ModelReference::Lda(h) | ModelReference::Vocabulary(h) => h,
        }
    }
}

/// On-disk classifier: the model plus the hash of what it depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierArtifact {
    pub version: u32,
    pub reference: ModelReference,
    #[serde(flatten)]
    pub classifier: TrainedClassifier,
}

impl ClassifierArtifact {
    pub fn new(classifier: TrainedClassifier, reference: ModelReference) -> Self {
        Self {
            version: FORMAT_VERSION,
            reference,
            classifier,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let artifact: Self = serde_json::from_str(text)?;
        if artifact.version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(artifact.version));
        }
        Ok(artifact)
    }

    /// Fails unless the artifact was trained against `expected`.
    pub fn check_reference(&self, expected: &ModelReference) -> Result<()> {
        if &self.reference == expected {
            Ok(())
        } else {
            Err(Error::HashMismatch {
                expected: expected.hash().to_string(),
                found: self.reference.hash().to_string(),
            })
        }
    }
}
