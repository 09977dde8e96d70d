//! Labeled documents, tokenization, vocabulary pruning, bag-of-words
//! matrices and stratified splits.

mod document;
pub mod io;
mod matrix;
mod split;
mod tokenize;
mod vocabulary;

pub use document::{ClassCounts, Corpus, Document, Label};
pub use matrix::{vectorize, DocTermMatrix, SparseRow, Weighting};
pub use split::{stratified_split, SplitSpec, DEFAULT_FRACTIONS};
pub use tokenize::tokenize;
pub use vocabulary::{build_vocabulary, Vocabulary, VocabularyConfig, ENGLISH_STOPWORDS};
