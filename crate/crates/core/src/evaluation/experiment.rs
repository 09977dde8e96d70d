use serde::{Deserialize, Serialize};

use super::{confusion, macro_metrics, metrics, ConfusionMatrix, Metrics};
use crate::corpus::{
    build_vocabulary, stratified_split, vectorize, ClassCounts, Corpus, Document, Label, SplitSpec,
    Vocabulary, VocabularyConfig, Weighting,
};
use crate::error::{Error, Result};
use crate::hashing::derive_seed;
use crate::learners::FeatureMatrix;
use crate::topic_classifiers::{
    train_atc, train_ctc, train_stc, train_tvc, BaseModel, ClassifierConfig, ClassifierId,
    LearnerKind, TrainedClassifier,
};
use crate::topic_model::{infer_topics_seeded, train_lda, LdaConfig, LdaModel, TopicVector};

/// Everything needed to run one train/evaluate cell after splitting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineSpec {
    pub classifier: ClassifierId,
    pub lda: LdaConfig,
    pub vocabulary: VocabularyConfig,
    /// Term weighting for the raw-text classifiers.
    pub raw_weighting: Weighting,
    pub classifier_config: ClassifierConfig,
    /// Fit vocabulary and topic model on train and test documents together
    /// (labels are still only used from the training part).
    pub fit_on_all: bool,
}

impl Default for PipelineSpec {
    fn default() -> Self {
        Self {
            classifier: ClassifierId::Atc,
            lda: LdaConfig::default(),
            vocabulary: VocabularyConfig::default(),
            raw_weighting: Weighting::Tfidf,
            classifier_config: ClassifierConfig::default(),
            fit_on_all: false,
        }
    }
}

impl PipelineSpec {
    /// Copies `seed` into every seeded stage.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.lda.seed = seed;
        self.classifier_config.seed = seed;
        self.classifier_config.svm.seed = seed;
        self
    }
}

/// Topic representation of a train/test pair.
#[derive(Debug, Clone)]
pub struct TopicFeatures {
    pub vocabulary: Vocabulary,
    pub model: LdaModel,
    pub train: Vec<TopicVector>,
    pub test: Vec<TopicVector>,
}

/// Seed for folding in document `id` under an LDA run seeded with `seed`.
pub fn inference_seed(seed: u64, id: &str) -> u64 {
    derive_seed(seed, id)
}

/// Builds the vocabulary, fits LDA and infers topic vectors for both parts.
pub fn topic_features(train: &Corpus, test: &Corpus, spec: &PipelineSpec) -> Result<TopicFeatures> {
    let fit_corpus = if spec.fit_on_all {
        let docs: Vec<Document> = train.iter().chain(test.iter()).cloned().collect();
        Corpus::new(docs)?
    } else {
        train.clone()
    };
    let vocabulary = build_vocabulary(&fit_corpus, &spec.vocabulary)?;
    let fit_matrix = vectorize(&fit_corpus, &vocabulary, Weighting::Count)?;
    let (model, mut fitted) = train_lda(&fit_matrix, &spec.lda)?;

    let test_vectors = if spec.fit_on_all {
        fitted.split_off(train.len())
    } else {
        let test_matrix = vectorize(test, &vocabulary, Weighting::Count)?;
        test_matrix
            .rows
            .iter()
            .zip(&test_matrix.doc_ids)
            .map(|(row, id)| infer_topics_seeded(&model, row, inference_seed(spec.lda.seed, id)))
            .collect::<Result<Vec<_>>>()?
    };
    Ok(TopicFeatures {
        vocabulary,
        model,
        train: fitted,
        test: test_vectors,
    })
}

/// Trains a topic-space classifier.
pub fn train_topic_classifier(
    id: ClassifierId,
    thetas: &[TopicVector],
    labels: &[Label],
    config: &ClassifierConfig,
) -> Result<TrainedClassifier> {
    Ok(match id {
        ClassifierId::Atc => {
            let ratio = ClassCounts::from_labels(labels).positive_ratio();
            TrainedClassifier::Atc(train_atc(thetas, labels, ratio, config)?)
        }
        ClassifierId::Ctc => TrainedClassifier::Ctc(train_ctc(thetas, labels, config)?),
        ClassifierId::Stc => TrainedClassifier::Stc(train_stc(thetas, labels)?),
        ClassifierId::TvcSvm => {
            TrainedClassifier::TvcSvm(train_tvc(thetas, labels, LearnerKind::Svm, config)?)
        }
        ClassifierId::TvcTree => {
            TrainedClassifier::TvcTree(train_tvc(thetas, labels, LearnerKind::Tree, config)?)
        }
        ClassifierId::RawSvm | ClassifierId::RawTree => {
            return Err(Error::InvalidConfig(format!(
                "{id} does not use topic vectors"
            )))
        }
    })
}

/// Trains a raw-text classifier on bag-of-words features.
pub fn train_raw_classifier(
    id: ClassifierId,
    data: &FeatureMatrix,
    config: &ClassifierConfig,
) -> Result<TrainedClassifier> {
    match id {
        ClassifierId::RawSvm => match BaseModel::train(data, LearnerKind::Svm, config)? {
            BaseModel::Svm(m) => Ok(TrainedClassifier::RawSvm(m)),
            BaseModel::Tree(_) => unreachable!(),
        },
        ClassifierId::RawTree => match BaseModel::train(data, LearnerKind::Tree, config)? {
            BaseModel::Tree(m) => Ok(TrainedClassifier::RawTree(m)),
            BaseModel::Svm(_) => unreachable!(),
        },
        other => Err(Error::InvalidConfig(format!(
            "{other} is not a raw-text classifier"
        ))),
    }
}

/// Outcome of one experiment cell, including the trained artifacts.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub classifier: TrainedClassifier,
    pub confusion: ConfusionMatrix,
    pub metrics: Metrics,
    pub macro_metrics: Metrics,
    pub predictions: Vec<Label>,
    pub vocabulary: Vocabulary,
    /// Present for topic-space classifiers.
    pub lda: Option<LdaModel>,
}

impl ExperimentReport {
    pub fn vocab_hash(&self) -> String {
        self.vocabulary.content_hash()
    }

    pub fn lda_hash(&self) -> Result<Option<String>> {
        self.lda.as_ref().map(LdaModel::content_hash).transpose()
    }
}

fn score(
    predictions: Vec<Label>,
    test: &Corpus,
) -> Result<(ConfusionMatrix, Metrics, Metrics, Vec<Label>)> {
    let cm = confusion(&predictions, &test.labels())?;
    Ok((cm, metrics(&cm), macro_metrics(&cm), predictions))
}

/// Evaluates a topic classifier on precomputed topic features.
pub fn evaluate_on_topics(
    id: ClassifierId,
    features: &TopicFeatures,
    train: &Corpus,
    test: &Corpus,
    config: &ClassifierConfig,
) -> Result<ExperimentReport> {
    let classifier = train_topic_classifier(id, &features.train, &train.labels(), config)?;
    let predictions = features
        .test
        .iter()
        .map(|t| classifier.predict(t.as_slice()))
        .collect::<Result<Vec<_>>>()?;
    let (confusion, metrics, macro_metrics, predictions) = score(predictions, test)?;
    Ok(ExperimentReport {
        classifier,
        confusion,
        metrics,
        macro_metrics,
        predictions,
        vocabulary: features.vocabulary.clone(),
        lda: Some(features.model.clone()),
    })
}

fn evaluate_raw(
    id: ClassifierId,
    train: &Corpus,
    test: &Corpus,
    spec: &PipelineSpec,
) -> Result<ExperimentReport> {
    let vocabulary = build_vocabulary(train, &spec.vocabulary)?;
    let train_matrix = vectorize(train, &vocabulary, spec.raw_weighting)?;
    let test_matrix = vectorize(test, &vocabulary, spec.raw_weighting)?;
    let classifier = train_raw_classifier(
        id,
        &FeatureMatrix::from_doc_term(&train_matrix),
        &spec.classifier_config,
    )?;
    let predictions = (0..test_matrix.len())
        .map(|i| classifier.predict(&test_matrix.dense_row(i)))
        .collect::<Result<Vec<_>>>()?;
    let (confusion, metrics, macro_metrics, predictions) = score(predictions, test)?;
    Ok(ExperimentReport {
        classifier,
        confusion,
        metrics,
        macro_metrics,
        predictions,
        vocabulary,
        lda: None,
    })
}

/// Runs one pipeline on an explicit train/test pair. Only the training
/// part (and, with `fit_on_all`, the unlabeled test text) reaches any
/// fitting stage.
pub fn run_split(train: &Corpus, test: &Corpus, spec: &PipelineSpec) -> Result<ExperimentReport> {
    if spec.classifier.uses_topics() {
        let features = topic_features(train, test, spec)?;
        evaluate_on_topics(
            spec.classifier,
            &features,
            train,
            test,
            &spec.classifier_config,
        )
    } else {
        evaluate_raw(spec.classifier, train, test, spec)
    }
}

/// Split, preprocess on the training part, fit, predict the test part and
/// score. `seed` drives every seeded stage after the split.
pub fn run_experiment(
    corpus: &Corpus,
    split: &SplitSpec,
    spec: &PipelineSpec,
    seed: u64,
) -> Result<ExperimentReport> {
    let (train, test) = stratified_split(corpus, split)?;
    run_split(&train, &test, &spec.clone().with_seed(seed))
}
