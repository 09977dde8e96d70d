use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Corpus, Label};
use crate::error::{Error, Result};

/// Training proportions of the standard evaluation protocol.
pub const DEFAULT_FRACTIONS: [f64; 5] = [0.75, 0.66, 0.50, 0.34, 0.25];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(train_fraction: f64, seed: u64) -> Result<Self> {
        let spec = Self {
            train_fraction,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.train_fraction > 0.0 && self.train_fraction < 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "train_fraction must lie in (0, 1), got {}",
                self.train_fraction
            )))
        }
    }

    /// Number of training documents drawn from a class of `class_size`.
    pub fn train_count(&self, class_size: usize) -> usize {
        (self.train_fraction * class_size as f64).round() as usize
    }
}

/// Randomized split that keeps `round(fraction * n_c)` documents of each
/// class in the training part. Both parts preserve corpus order.
pub fn stratified_split(corpus: &Corpus, spec: &SplitSpec) -> Result<(Corpus, Corpus)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut in_train = vec![false; corpus.len()];
    for label in [Label::Positive, Label::Negative] {
        let mut members: Vec<usize> = corpus
            .iter()
            .enumerate()
            .filter(|(_, d)| d.label == label)
            .map(|(i, _)| i)
            .collect();
        if members.is_empty() {
            return Err(Error::MissingClass(label.to_string()));
        }
        let take = spec.train_count(members.len());
        if take == 0 {
            return Err(Error::EmptyTrainingClass(label.to_string()));
        }
        members.shuffle(&mut rng);
        for &i in &members[..take] {
            in_train[i] = true;
        }
    }
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (doc, &t) in corpus.iter().zip(&in_train) {
        if t {
            train.push(doc.clone());
        } else {
            test.push(doc.clone());
        }
    }
    Ok((Corpus::new(train)?, Corpus::new(test)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn shaped(pos: usize, neg: usize) -> Corpus {
        let docs = (0..pos + neg)
            .map(|i| {
                let label = if i < pos {
                    Label::Positive
                } else {
                    Label::Negative
                };
                Document::new(format!("d{i}"), "", label)
            })
            .collect();
        Corpus::new(docs).unwrap()
    }

    #[test]
    fn orbital_shape_counts() {
        let corpus = shaped(463, 3242);
        let (train, test) = stratified_split(&corpus, &SplitSpec::new(0.75, 3).unwrap()).unwrap();
        let c = train.class_counts();
        // 0.75 * 463 = 347.25, 0.75 * 3242 = 2431.5
        assert!(c.positive.abs_diff(347) <= 1);
        assert!(c.negative.abs_diff(2432) <= 1);
        assert_eq!(train.len() + test.len(), 3705);
    }

    #[test]
    fn two_document_corpus_keeps_one_of_each_class_in_training() {
        let corpus = shaped(1, 1);
        let (train, test) = stratified_split(&corpus, &SplitSpec::new(0.5, 0).unwrap()).unwrap();
        assert_eq!(train.class_counts().positive, 1);
        assert_eq!(train.class_counts().negative, 1);
        assert!(test.is_empty());
    }

    #[test]
    fn class_without_training_documents_is_an_error() {
        let corpus = shaped(1, 10);
        let err = stratified_split(&corpus, &SplitSpec::new(0.25, 0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::EmptyTrainingClass(l) if l == "positive"));
        let err = stratified_split(&shaped(0, 10), &SplitSpec::new(0.5, 0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::MissingClass(_)));
    }

    #[test]
    fn invalid_fraction() {
        assert!(SplitSpec::new(0.0, 1).is_err());
        assert!(SplitSpec::new(1.0, 1).is_err());
    }

    proptest! {
        #[test]
        fn split_is_a_stratified_partition(
            pos in 1usize..60,
            neg in 1usize..200,
            fraction in 0.05f64..0.95,
            seed in any::<u64>(),
        ) {
            let corpus = shaped(pos, neg);
            let spec = SplitSpec { train_fraction: fraction, seed };
            let Ok((train, test)) = stratified_split(&corpus, &spec) else {
                prop_assert!(spec.train_count(pos) == 0 || spec.train_count(neg) == 0);
                return Ok(());
            };
            let tr: HashSet<&str> = train.iter().map(|d| d.id.as_str()).collect();
            let te: HashSet<&str> = test.iter().map(|d| d.id.as_str()).collect();
            prop_assert!(tr.is_disjoint(&te));
            prop_assert_eq!(tr.len() + te.len(), corpus.len());

            let c = train.class_counts();
            prop_assert_eq!(c.positive, spec.train_count(pos));
            prop_assert_eq!(c.negative, spec.train_count(neg));
            let gap = (c.positive_ratio() - corpus.class_counts().positive_ratio()).abs();
            prop_assert!(gap <= 1.0 / train.len() as f64 + 1e-12);

            let (again, _) = stratified_split(&corpus, &spec).unwrap();
            prop_assert_eq!(again, train);
        }
    }
}
