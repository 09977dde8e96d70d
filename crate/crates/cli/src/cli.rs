use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "topicclass",
    version,
    about = "Topic-model based binary document classification"
)]
pub struct Cli {
    /// TOML file whose keys mirror the long flag names (snake_case).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Seed for every randomized stage; falls back to TOPICCLASS_SEED.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Read a JSON-lines corpus or a text directory, optionally splitting it.
    Ingest(IngestArgs),
    /// Build the pruned vocabulary of a (training) corpus.
    Vocab(VocabCmd),
    /// Write the document-term matrix of a corpus.
    Vectorize(VectorizeArgs),
    /// Fit an LDA model and write the training topic vectors.
    TrainLda(TrainLdaArgs),
    /// Fold held-out documents into a fitted LDA model.
    Infer(InferArgs),
    /// Train a classifier on topic vectors or raw text.
    TrainClf(TrainClfArgs),
    /// Apply a trained classifier.
    Predict(PredictArgs),
    /// Score a predictions file, or run one full experiment on a corpus.
    Evaluate(EvaluateArgs),
    /// Evaluate a grid of fractions, topic counts, classifiers and seeds.
    Sweep(SweepArgs),
    /// Generate a labeled corpus with a planted class topic.
    Synth(SynthArgs),
    /// Print the most probable terms of every topic.
    TopWords(TopWordsArgs),
}

#[derive(Debug, Clone, Args, Default)]
pub struct VocabArgs {
    #[arg(long)]
    pub min_df: Option<usize>,
    #[arg(long)]
    pub max_df_ratio: Option<f64>,
    /// Replace the built-in English stoplist with this file (one token per line).
    #[arg(long)]
    pub stoplist: Option<PathBuf>,
    /// Keep only tokens listed in this file.
    #[arg(long)]
    pub allowlist: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Default)]
pub struct LdaArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Training Gibbs sweeps.
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Fold-in Gibbs sweeps per held-out document.
    #[arg(long)]
    pub infer_iters: Option<usize>,
    #[arg(long)]
    pub infer_burn_in: Option<usize>,
}

#[derive(Debug, Clone, Args, Default)]
pub struct ClassifierArgs {
    /// prior-quantile or cv.
    #[arg(long)]
    pub threshold_mode: Option<String>,
    /// fractional or binarized confidence support.
    #[arg(long)]
    pub support: Option<String>,
    /// SVM box constraint.
    #[arg(long)]
    pub svm_c: Option<f64>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// JSON-lines file, or a directory of .txt files (requires --labels).
    #[arg(long)]
    pub input: PathBuf,
    /// CSV with `id,label` rows for a text directory.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// When given (exactly one value), also write train.jsonl and test.jsonl.
    #[arg(long, value_delimiter = ',')]
    pub fractions: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct VocabCmd {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub vocab: VocabArgs,
}

#[derive(Debug, Args)]
pub struct VectorizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub vocab: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// count, tf or tfidf.
    #[arg(long)]
    pub weighting: Option<String>,
}

#[derive(Debug, Args)]
pub struct TrainLdaArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub vocab: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub topics: Option<usize>,
    #[command(flatten)]
    pub lda: LdaArgs,
}

#[derive(Debug, Args)]
pub struct InferArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub vocab: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub lda: LdaArgs,
}

#[derive(Debug, Args)]
pub struct TrainClfArgs {
    /// Topic vectors (thetas JSON) for topic classifiers, a corpus for raw ones.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub classifier: Option<String>,
    /// LDA model the topic vectors came from.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Vocabulary for raw-text classifiers.
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    #[arg(long)]
    pub weighting: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub clf: ClassifierArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub clf_model: PathBuf,
    /// Topic vectors (thetas JSON) or a corpus, matching the classifier.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    #[arg(long)]
    pub weighting: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Corpus for a full split/train/predict run.
    #[arg(long, required_unless_present = "predictions")]
    pub input: Option<PathBuf>,
    /// Predictions JSON-lines to score instead.
    #[arg(long, conflicts_with = "input")]
    pub predictions: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub classifier: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub fractions: Vec<f64>,
    #[arg(long)]
    pub topics: Option<usize>,
    #[arg(long)]
    pub weighting: Option<String>,
    /// Fit vocabulary and LDA on train and test text together.
    #[arg(long)]
    pub fit_on_all: bool,
    #[command(flatten)]
    pub vocab: VocabArgs,
    #[command(flatten)]
    pub lda: LdaArgs,
    #[command(flatten)]
    pub clf: ClassifierArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_delimiter = ',')]
    pub fractions: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub topics: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub classifier: Vec<String>,
    /// Seeds to replicate every cell with; defaults to the single --seed.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u64>,
    #[arg(long)]
    pub weighting: Option<String>,
    #[arg(long)]
    pub fit_on_all: bool,
    /// Write 0 in the seconds column so reruns are byte-identical.
    #[arg(long)]
    pub no_timing: bool,
    #[command(flatten)]
    pub vocab: VocabArgs,
    #[command(flatten)]
    pub lda: LdaArgs,
    #[command(flatten)]
    pub clf: ClassifierArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub out: PathBuf,
    /// Number of generating topics.
    #[arg(long)]
    pub topics: Option<usize>,
    #[arg(long)]
    pub vocab_size: Option<usize>,
    #[arg(long)]
    pub n_docs: Option<usize>,
    #[arg(long)]
    pub doc_len: Option<f64>,
    #[arg(long)]
    pub positive_ratio: Option<f64>,
    #[arg(long)]
    pub class_topic: Option<usize>,
    #[arg(long)]
    pub boost: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TopWordsArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub vocab: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
