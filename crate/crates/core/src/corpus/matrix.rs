use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{tokenize, Corpus, Label, Vocabulary};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Raw term counts.
    Count,
    /// Count divided by the document's in-vocabulary length.
    Tf,
    /// `tf * ln(N / df)` with N and df taken from the vocabulary's corpus.
    Tfidf,
}

impl Weighting {
    pub fn as_str(self) -> &'static str {
        match self {
            Weighting::Count => "count",
            Weighting::Tf => "tf",
            Weighting::Tfidf => "tfidf",
        }
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "count" => Ok(Weighting::Count),
            "tf" => Ok(Weighting::Tf),
            "tfidf" | "tf-idf" => Ok(Weighting::Tfidf),
            other => Err(Error::InvalidConfig(format!("unknown weighting `{other}`"))),
        }
    }
}

/// Sparse row of `(term index, weight)` pairs, sorted by term index.
pub type SparseRow = Vec<(usize, f64)>;

/// Per-document sparse term weights, one row per document in corpus order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocTermMatrix {
    pub weighting: Weighting,
    pub vocab_size: usize,
    /// Content hash of the vocabulary the columns refer to.
    pub vocab_hash: String,
    pub doc_ids: Vec<String>,
    pub labels: Vec<Label>,
    pub rows: Vec<SparseRow>,
}

impl DocTermMatrix {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row expanded to a dense vector of length `vocab_size`.
    pub fn dense_row(&self, i: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.vocab_size];
        for &(t, w) in &self.rows[i] {
            out[t] = w;
        }
        out
    }

    /// Checks the structural invariants: non-negative weights, in-range
    /// sorted columns, and matching row metadata.
    pub fn validate(&self) -> Result<()> {
        if self.doc_ids.len() != self.rows.len() || self.labels.len() != self.rows.len() {
            return Err(Error::Parse {
                location: "matrix".into(),
                message: "row metadata length mismatch".into(),
            });
        }
        for (i, row) in self.rows.iter().enumerate() {
            let mut prev = None;
            for &(t, w) in row {
                if t >= self.vocab_size || !(w >= 0.0) || prev.is_some_and(|p| p >= t) {
                    return Err(Error::Parse {
                        location: format!("matrix row {i}"),
                        message: format!("invalid entry ({t}, {w})"),
                    });
                }
                prev = Some(t);
            }
        }
        Ok(())
    }
}

/// Term counts of `text` restricted to `vocab`, sorted by term index.
pub fn count_row(text: &str, vocab: &Vocabulary) -> Vec<(usize, u32)> {
    let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
    for token in tokenize(text) {
        if let Some(id) = vocab.id(&token) {
            *counts.entry(id).or_insert(0) += 1;
        }
    }
    counts.into_iter().collect()
}

pub fn vectorize(
    corpus: &Corpus,
    vocab: &Vocabulary,
    weighting: Weighting,
) -> Result<DocTermMatrix> {
    let idf: Option<Vec<f64>> = match weighting {
        Weighting::Tfidf => {
            let stats = vocab.stats().ok_or_else(|| {
                Error::InvalidConfig(
                    "tf-idf weighting needs vocabulary document frequencies".into(),
                )
            })?;
            let n = stats.n_docs as f64;
            Some(
                stats
                    .doc_freq
                    .iter()
                    .map(|&df| (n / df as f64).ln())
                    .collect(),
            )
        }
        _ => None,
    };
    let rows = corpus
        .iter()
        .map(|doc| {
            let counts = count_row(&doc.text, vocab);
            let len: u32 = counts.iter().map(|&(_, c)| c).sum();
            counts
                .into_iter()
                .map(|(t, c)| {
                    let w = match weighting {
                        Weighting::Count => f64::from(c),
                        Weighting::Tf => f64::from(c) / f64::from(len),
                        Weighting::Tfidf => {
                            f64::from(c) / f64::from(len) * idf.as_ref().expect("idf")[t]
                        }
                    };
                    (t, w)
                })
                .collect()
        })
        .collect();
    Ok(DocTermMatrix {
        weighting,
        vocab_size: vocab.len(),
        vocab_hash: vocab.content_hash(),
        doc_ids: corpus.iter().map(|d| d.id.clone()).collect(),
        labels: corpus.labels(),
        rows,
    })
}
