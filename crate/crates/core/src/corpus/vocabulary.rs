use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{tokenize, Corpus};
use crate::error::{Error, Result};
use crate::hashing::content_hash;

/// Built-in English stopword list.
pub const ENGLISH_STOPWORDS: &[&str] = &[
    "about",
    "above",
    "after",
    "again",
    "against",
    "all",
    "am",
    "an",
    "and",
    "any",
    "are",
    "as",
    "at",
    "be",
    "because",
    "been",
    "before",
    "being",
    "below",
    "between",
    "both",
    "but",
    "by",
    "can",
    "could",
    "did",
    "do",
    "does",
    "doing",
    "down",
    "during",
    "each",
    "few",
    "for",
    "from",
    "further",
    "had",
    "has",
    "have",
    "having",
    "he",
    "her",
    "here",
    "hers",
    "herself",
    "him",
    "himself",
    "his",
    "how",
    "if",
    "in",
    "into",
    "is",
    "it",
    "its",
    "itself",
    "me",
    "more",
    "most",
    "my",
    "myself",
    "nor",
    "of",
    "off",
    "on",
    "once",
    "only",
    "or",
    "other",
    "ought",
    "our",
    "ours",
    "ourselves",
    "out",
    "over",
    "own",
    "same",
    "she",
    "should",
    "so",
    "some",
    "such",
    "than",
    "that",
    "the",
    "their",
    "theirs",
    "them",
    "themselves",
    "then",
    "there",
    "these",
    "they",
    "this",
    "those",
    "through",
    "to",
    "too",
    "under",
    "until",
    "up",
    "very",
    "was",
    "we",
    "were",
    "what",
    "when",
    "where",
    "which",
    "while",
    "who",
    "whom",
    "why",
    "will",
    "with",
    "would",
    "you",
    "your",
    "yours",
    "yourself",
    "yourselves",
];

/// Pruning thresholds for [`build_vocabulary`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VocabularyConfig {
    /// Minimum number of documents a term must occur in.
    pub min_df: usize,
    /// Maximum fraction of documents a term may occur in.
    pub max_df_ratio: f64,
    pub stoplist: HashSet<String>,
    /// When set, only these tokens are eligible.
    pub allowlist: Option<HashSet<String>>,
}

impl Default for VocabularyConfig {
    fn default() -> Self {
        Self {
            min_df: 3,
            max_df_ratio: 0.5,
            stoplist: ENGLISH_STOPWORDS.iter().map(|s| s.to_string()).collect(),
            allowlist: None,
        }
    }
}

impl VocabularyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.max_df_ratio > 0.0 && self.max_df_ratio <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "max_df_ratio must lie in (0, 1], got {}",
                self.max_df_ratio
            )));
        }
        Ok(())
    }
}

/// Document-frequency statistics of the corpus a vocabulary was built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocFreqStats {
    pub n_docs: usize,
    /// Per-term document frequency, in index order.
    pub doc_freq: Vec<usize>,
}

/// Pruned term index. Terms are kept in index order; the column id of a
/// term is its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    stats: Option<DocFreqStats>,
}

impl Vocabulary {
    /// Vocabulary over `terms` in the given order, without frequency stats.
    pub fn from_terms(terms: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::Parse {
                    location: format!("vocabulary line {}", i + 1),
                    message: format!("duplicate term `{t}`"),
                });
            }
        }
        Ok(Self {
            terms,
            index,
            stats: None,
        })
    }

    pub fn with_stats(mut self, stats: DocFreqStats) -> Result<Self> {
        if stats.doc_freq.len() != self.terms.len() {
            return Err(Error::DimensionMismatch {
                expected: self.terms.len(),
                actual: stats.doc_freq.len(),
            });
        }
        self.stats = Some(stats);
        Ok(self)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term(&self, id: usize) -> Option<&str> {
        self.terms.get(id).map(String::as_str)
    }

    pub fn id(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn stats(&self) -> Option<&DocFreqStats> {
        self.stats.as_ref()
    }

    pub fn doc_freq(&self, id: usize) -> Option<usize> {
        self.stats
            .as_ref()
            .and_then(|s| s.doc_freq.get(id).copied())
    }

    /// One term per line in index order, newline-terminated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            out.push_str(t);
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let terms = text
            .lines()
            .map(str::trim_end)
            .filter(|l| !l.is_empty())
            .map(str::to_owned)
            .collect();
        Self::from_terms(terms)
    }

    /// SHA-256 of [`Vocabulary::to_text`].
    pub fn content_hash(&self) -> String {
        content_hash(self.to_text().as_bytes())
    }
}

/// Builds the vocabulary of terms whose document frequency lies in
/// `[min_df, max_df_ratio * N]`, excluding stopwords, sorted
/// lexicographically.
pub fn build_vocabulary(corpus: &Corpus, config: &VocabularyConfig) -> Result<Vocabulary> {
    config.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for doc in corpus {
        let unique: HashSet<String> = tokenize(&doc.text).into_iter().collect();
        for token in unique {
            *df.entry(token).or_insert(0) += 1;
        }
    }
    let n = corpus.len();
    let max_df = config.max_df_ratio * n as f64;
    let (terms, doc_freq): (Vec<String>, Vec<usize>) = df
        .into_iter()
        .filter(|(t, f)| {
            *f >= config.min_df
                && (*f as f64) <= max_df
                && !config.stoplist.contains(t)
                && config.allowlist.as_ref().is_none_or(|a| a.contains(t))
        })
        .unzip();
    if terms.is_empty() {
        return Err(Error::EmptyVocabulary {
            min_df: config.min_df,
            max_df_ratio: config.max_df_ratio,
        });
    }
    Vocabulary::from_terms(terms)?.with_stats(DocFreqStats {
        n_docs: n,
        doc_freq,
    })
}
