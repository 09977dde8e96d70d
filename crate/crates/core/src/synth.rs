//! Labeled corpora drawn from the LDA generative process, with a planted
//! class-correlated topic, plus a two-cluster corpus with disjoint
//! vocabulary halves. Both are deterministic given their seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document, Label};
use crate::error::{Error, Result};

/// Symmetric Dirichlet concentration of the generator's document-topic prior.
pub const GENERATOR_ALPHA: f64 = 2.0;
/// Symmetric Dirichlet concentration of the generator's topic-word prior.
pub const GENERATOR_BETA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SyntheticSpec {
    pub topics: usize,
    pub vocab_size: usize,
    pub n_docs: usize,
    /// Mean document length (Poisson).
    pub doc_len: f64,
    pub positive_ratio: f64,
    pub class_topic: usize,
    /// Multiplier on the class topic's prior weight for positive documents.
    pub class_topic_boost: f64,
    /// Symmetric document-topic concentration before the boost.
    pub alpha: f64,
    /// Symmetric topic-word concentration.
    pub beta: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            topics: 10,
            vocab_size: 1000,
            n_docs: 1000,
            doc_len: 80.0,
            positive_ratio: 0.125,
            class_topic: 0,
            class_topic_boost: 10.0,
            alpha: GENERATOR_ALPHA,
            beta: GENERATOR_BETA,
            seed: 1,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.topics == 0 || self.vocab_size == 0 || self.n_docs == 0 {
            return bad("topics, vocab_size and n_docs must be positive");
        }
        if self.class_topic >= self.topics {
            return bad("class_topic must be below the topic count");
        }
        if !(self.positive_ratio > 0.0 && self.positive_ratio < 1.0) {
            return bad("positive_ratio must lie in (0, 1)");
        }
        if ![self.class_topic_boost, self.doc_len, self.alpha, self.beta]
            .iter()
            .all(|&x| x > 0.0 && x.is_finite())
        {
            return bad("class_topic_boost, doc_len, alpha and beta must be positive");
        }
        Ok(())
    }

    pub fn positive_count(&self) -> usize {
        (self.positive_ratio * self.n_docs as f64).round() as usize
    }
}

/// A generated corpus together with the parameters it was drawn from.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub corpus: Corpus,
    /// Generator term strings, indexed like the rows of `topic_word`.
    pub terms: Vec<String>,
    /// K x V generating topic-word distributions.
    pub topic_word: Vec<Vec<f64>>,
    /// Per-document generating topic proportions, in corpus order.
    pub theta: Vec<Vec<f64>>,
}

pub fn term_name(i: usize) -> String {
    format!("w{i:04}")
}

fn dirichlet(concentration: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut draws: Vec<f64> = concentration
        .iter()
        .map(|&a| Gamma::new(a, 1.0).expect("positive shape").sample(rng))
        .collect();
    let total: f64 = draws.iter().sum();
    if total > 0.0 {
        draws.iter_mut().for_each(|x| *x /= total);
    } else {
        // every gamma draw underflowed; fall back to a point mass
        let hit = rng.random_range(0..draws.len());
        draws
            .iter_mut()
            .enumerate()
            .for_each(|(i, x)| *x = f64::from(u8::from(i == hit)));
    }
    draws
}

fn cumulative(p: &[f64]) -> Vec<f64> {
    p.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

fn draw(cum: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u = rng.random::<f64>() * cum[cum.len() - 1];
    cum.partition_point(|&c| c <= u).min(cum.len() - 1)
}

/// Samples documents from the LDA generative process. Exactly
/// `round(positive_ratio * n_docs)` documents are positive; their topic
/// prior has the class topic's weight multiplied by the boost.
pub fn generate_synthetic_corpus(spec: &SyntheticSpec) -> Result<SyntheticCorpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let terms: Vec<String> = (0..spec.vocab_size).map(term_name).collect();
    let topic_word: Vec<Vec<f64>> = (0..spec.topics)
        .map(|_| dirichlet(&vec![spec.beta; spec.vocab_size], &mut rng))
        .collect();
    let word_cum: Vec<Vec<f64>> = topic_word.iter().map(|p| cumulative(p)).collect();

    let mut labels = vec![Label::Negative; spec.n_docs];
    labels[..spec.positive_count()].fill(Label::Positive);
    labels.shuffle(&mut rng);

    let negative_prior = vec![spec.alpha; spec.topics];
    let mut positive_prior = negative_prior.clone();
    positive_prior[spec.class_topic] *= spec.class_topic_boost;
    let lengths = Poisson::new(spec.doc_len).expect("positive mean");

    let mut docs = Vec::with_capacity(spec.n_docs);
    let mut thetas = Vec::with_capacity(spec.n_docs);
    for (i, &label) in labels.iter().enumerate() {
        let prior = if label.is_positive() {
            &positive_prior
        } else {
            &negative_prior
        };
        let theta = dirichlet(prior, &mut rng);
        let topic_cum = cumulative(&theta);
        let len = (lengths.sample(&mut rng) as usize).max(1);
        let words: Vec<&str> = (0..len)
            .map(|_| {
                let z = draw(&topic_cum, &mut rng);
                terms[draw(&word_cum[z], &mut rng)].as_str()
            })
            .collect();
        docs.push(Document::new(format!("doc{i:05}"), words.join(" "), label));
        thetas.push(theta);
    }
    Ok(SyntheticCorpus {
        corpus: Corpus::new(docs)?,
        terms,
        topic_word,
        theta: thetas,
    })
}

/// Corpus whose documents alternate between two clusters; a cluster-0
/// document uses only the first half of the vocabulary, a cluster-1
/// document only the second. Cluster 0 is labeled positive. Returns the
/// corpus and each document's cluster.
pub fn two_cluster_corpus(
    n_docs: usize,
    vocab_size: usize,
    doc_len: usize,
    seed: u64,
) -> Result<(Corpus, Vec<usize>)> {
    if vocab_size < 2 || doc_len == 0 {
        return Err(Error::InvalidConfig(
            "two-cluster corpus needs vocab_size >= 2 and doc_len >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = vocab_size / 2;
    let mut docs = Vec::with_capacity(n_docs);
    let mut clusters = Vec::with_capacity(n_docs);
    for i in 0..n_docs {
        let cluster = i % 2;
        let words: Vec<String> = (0..doc_len)
            .map(|_| term_name(cluster * half + rng.random_range(0..half)))
            .collect();
        let label = if cluster == 0 {
            Label::Positive
        } else {
            Label::Negative
        };
        docs.push(Document::new(format!("doc{i:05}"), words.join(" "), label));
        clusters.push(cluster);
    }
    Ok((Corpus::new(docs)?, clusters))
}

/// Index of the vocabulary half a generator term belongs to.
pub fn cluster_of_term(term: &str, vocab_size: usize) -> Option<usize> {
    let i: usize = term.strip_prefix('w')?.parse().ok()?;
    (i < vocab_size).then(|| i / (vocab_size / 2))
}
