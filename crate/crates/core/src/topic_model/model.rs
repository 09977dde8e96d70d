use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::LdaConfig;
use crate::corpus::Vocabulary;
use crate::error::{Error, Result};
use crate::hashing::content_hash;
use crate::FORMAT_VERSION;

/// Slack allowed when checking that a probability vector sums to one.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// A document's distribution over topics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TopicVector(Vec<f64>);

impl TopicVector {
    /// Wraps `theta`, checking that it lies on the simplex.
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        let sum: f64 = theta.iter().sum();
        if theta.is_empty()
            || theta.iter().any(|&p| !(p >= 0.0))
            || (sum - 1.0).abs() > SIMPLEX_TOLERANCE
        {
            return Err(Error::InvalidConfig(format!(
                "topic vector is not a probability distribution (sum {sum})"
            )));
        }
        Ok(Self(theta))
    }

    pub(crate) fn new_unchecked(theta: Vec<f64>) -> Self {
        Self(theta)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, topic: usize) -> f64 {
        self.0[topic]
    }

    /// Topic with the largest weight, lowest index on ties.
    pub fn dominant_topic(&self) -> usize {
        let mut best = 0;
        for (k, &p) in self.0.iter().enumerate() {
            if p > self.0[best] {
                best = k;
            }
        }
        best
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for TopicVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A fitted topic model: topic-word counts plus the smoothed topic-word
/// distributions derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct LdaModel {
    config: LdaConfig,
    vocab_size: usize,
    vocab_hash: String,
    /// K x V topic-word counts, row-major.
    nwt: Vec<u32>,
    nt: Vec<u64>,
    /// K x V, row-major.
    phi: Vec<f64>,
    /// V x K copy of `phi` for fold-in sampling.
    phi_by_word: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    version: u32,
    config: LdaConfig,
    vocab_hash: String,
    vocab_size: usize,
    /// Sparse `(topic, term, count)` triplets in row-major order.
    nwt: Vec<(usize, usize, u32)>,
}

impl LdaModel {
    pub(crate) fn from_counts(
        config: LdaConfig,
        vocab_size: usize,
        vocab_hash: String,
        nwt: Vec<u32>,
    ) -> Self {
        let k = config.topics;
        assert_eq!(nwt.len(), k * vocab_size);
        let nt: Vec<u64> = nwt
            .chunks(vocab_size)
            .map(|row| row.iter().map(|&c| u64::from(c)).sum())
            .collect();
        let vb = vocab_size as f64 * config.beta;
        let mut phi = vec![0.0; k * vocab_size];
        let mut phi_by_word = vec![0.0; k * vocab_size];
        for t in 0..k {
            let denom = nt[t] as f64 + vb;
            for w in 0..vocab_size {
                let p = (f64::from(nwt[t * vocab_size + w]) + config.beta) / denom;
                phi[t * vocab_size + w] = p;
                phi_by_word[w * k + t] = p;
            }
        }
        Self {
            config,
            vocab_size,
            vocab_hash,
            nwt,
            nt,
            phi,
            phi_by_word,
        }
    }

    pub fn config(&self) -> &LdaConfig {
        &self.config
    }

    pub fn num_topics(&self) -> usize {
        self.config.topics
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn vocab_hash(&self) -> &str {
        &self.vocab_hash
    }

    /// Topic-word distribution of `topic`.
    pub fn phi(&self, topic: usize) -> &[f64] {
        &self.phi[topic * self.vocab_size..(topic + 1) * self.vocab_size]
    }

    pub fn topic_word_counts(&self, topic: usize) -> &[u32] {
        &self.nwt[topic * self.vocab_size..(topic + 1) * self.vocab_size]
    }

    pub fn topic_totals(&self) -> &[u64] {
        &self.nt
    }

    pub fn total_tokens(&self) -> u64 {
        self.nt.iter().sum()
    }

    pub(crate) fn phi_for_word(&self, word: usize) -> &[f64] {
        let k = self.config.topics;
        &self.phi_by_word[word * k..(word + 1) * k]
    }

    pub fn to_json(&self) -> Result<String> {
        let triplets = self
            .nwt
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i / self.vocab_size, i % self.vocab_size, c))
            .collect();
        let file = ModelFile {
            version: FORMAT_VERSION,
            config: self.config,
            vocab_hash: self.vocab_hash.clone(),
            vocab_size: self.vocab_size,
            nwt: triplets,
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        if file.version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(file.version));
        }
        file.config.validate()?;
        let (k, v) = (file.config.topics, file.vocab_size);
        let mut nwt = vec![0u32; k * v];
        for (t, w, c) in file.nwt {
            if t >= k || w >= v {
                return Err(Error::Parse {
                    location: "model nwt".into(),
                    message: format!("triplet ({t}, {w}) out of range"),
                });
            }
            nwt[t * v + w] = c;
        }
        Ok(Self::from_counts(file.config, v, file.vocab_hash, nwt))
    }

    /// SHA-256 of the serialized model; classifiers refer to their topic
    /// model by this hash.
    pub fn content_hash(&self) -> Result<String> {
        Ok(content_hash(self.to_json()?.as_bytes()))
    }
}

/// Percentage of features removed by replacing `attributes` terms with
/// `topics` topics: `100 * (V - K) / V`.
pub fn dimension_reduction(attributes: usize, topics: usize) -> Result<f64> {
    if attributes == 0 {
        return Err(Error::InvalidConfig(
            "attribute count must be positive".into(),
        ));
    }
    if topics > attributes {
        return Err(Error::TopicsExceedAttributes { topics, attributes });
    }
    Ok(100.0 * (attributes - topics) as f64 / attributes as f64)
}

/// The `n` most probable terms of `topic`, ties broken lexicographically.
pub fn top_words(
    model: &LdaModel,
    vocab: &Vocabulary,
    topic: usize,
    n: usize,
) -> Result<Vec<(String, f64)>> {
    if topic >= model.num_topics() {
        return Err(Error::InvalidConfig(format!(
            "topic {topic} out of range for {} topics",
            model.num_topics()
        )));
    }
    if vocab.len() != model.vocab_size() {
        return Err(Error::DimensionMismatch {
            expected: model.vocab_size(),
            actual: vocab.len(),
        });
    }
    let phi = model.phi(topic);
    let mut ranked: Vec<(&str, f64)> = vocab
        .terms()
        .iter()
        .map(String::as_str)
        .zip(phi.iter().copied())
        .collect();
    ranked.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.0.cmp(b.0))
    });
    Ok(ranked
        .into_iter()
        .take(n)
        .map(|(t, p)| (t.to_string(), p))
        .collect())
}
