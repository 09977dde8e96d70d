//! Config-file layer. Precedence: flags, then the config file, then (for the
//! seed) `TOPICCLASS_SEED`, then built-in defaults.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use topicclass::corpus::io::read_token_list;
use topicclass::corpus::{VocabularyConfig, Weighting};
use topicclass::evaluation::ClassifierId;
use topicclass::topic_classifiers::{ClassifierConfig, SupportMode, ThresholdMode};
use topicclass::topic_model::LdaConfig;
use topicclass::{Error, Result};

use crate::cli::{ClassifierArgs, LdaArgs, VocabArgs};

pub const SEED_ENV: &str = "TOPICCLASS_SEED";
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub seeds: Option<Vec<u64>>,
    pub min_df: Option<usize>,
    pub max_df_ratio: Option<f64>,
    pub stoplist: Option<PathBuf>,
    pub allowlist: Option<PathBuf>,
    pub weighting: Option<String>,
    pub topics: Option<OneOrMany<usize>>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub iters: Option<usize>,
    pub burn_in: Option<usize>,
    pub infer_iters: Option<usize>,
    pub infer_burn_in: Option<usize>,
    pub classifier: Option<OneOrMany<String>>,
    pub fractions: Option<OneOrMany<f64>>,
    pub threshold_mode: Option<String>,
    pub support: Option<String>,
    pub svm_c: Option<f64>,
    pub fit_on_all: Option<bool>,
    pub no_timing: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Parse {
            location: path.display().to_string(),
            message: e.message().to_string(),
        })
    }
}

/// Flags merged over a config file.
#[derive(Debug, Clone)]
pub struct Settings {
    pub file: FileConfig,
    pub seed_flag: Option<u64>,
}

fn parse<T: std::str::FromStr<Err = Error>>(value: Option<&str>) -> Result<Option<T>> {
    value.map(str::parse).transpose()
}

/// The per-flag list if non-empty, else the config file's.
pub fn list_or<T: Clone>(flag: &[T], file: &Option<OneOrMany<T>>) -> Option<Vec<T>> {
    if flag.is_empty() {
        file.as_ref().map(OneOrMany::to_vec)
    } else {
        Some(flag.to_vec())
    }
}

impl Settings {
    pub fn seed(&self) -> Result<u64> {
        if let Some(s) = self.seed_flag.or(self.file.seed) {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| {
                Error::InvalidConfig(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))
            }),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }

    pub fn vocabulary(&self, args: &VocabArgs) -> Result<VocabularyConfig> {
        let mut cfg = VocabularyConfig::default();
        if let Some(v) = args.min_df.or(self.file.min_df) {
            cfg.min_df = v;
        }
        if let Some(v) = args.max_df_ratio.or(self.file.max_df_ratio) {
            cfg.max_df_ratio = v;
        }
        if let Some(p) = args.stoplist.as_ref().or(self.file.stoplist.as_ref()) {
            cfg.stoplist = read_token_list(p)?.into_iter().collect();
        }
        if let Some(p) = args.allowlist.as_ref().or(self.file.allowlist.as_ref()) {
            cfg.allowlist = Some(read_token_list(p)?.into_iter().collect::<HashSet<_>>());
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn weighting(&self, flag: Option<&str>, default: Weighting) -> Result<Weighting> {
        Ok(parse(flag.or(self.file.weighting.as_deref()))?.unwrap_or(default))
    }

    /// Single topic count (first entry when the config file holds a list).
    pub fn topics(&self, flag: Option<usize>) -> Option<usize> {
        flag.or_else(|| {
            self.file
                .topics
                .as_ref()
                .and_then(|t| t.to_vec().first().copied())
        })
    }

    /// LDA settings for `topics`; α defaults to 50/K unless set.
    pub fn lda(&self, topics: usize, args: &LdaArgs) -> Result<LdaConfig> {
        let mut cfg = LdaConfig::with_topics(topics).seed(self.seed()?);
        let f = &self.file;
        if let Some(v) = args.alpha.or(f.alpha) {
            cfg.alpha = v;
        }
        if let Some(v) = args.beta.or(f.beta) {
            cfg.beta = v;
        }
        if let Some(v) = args.iters.or(f.iters) {
            cfg.train_iterations = v;
        }
        if let Some(v) = args.burn_in.or(f.burn_in) {
            cfg.burn_in = v;
        }
        if let Some(v) = args.infer_iters.or(f.infer_iters) {
            cfg.infer_iterations = v;
        }
        if let Some(v) = args.infer_burn_in.or(f.infer_burn_in) {
            cfg.infer_burn_in = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn alpha_override(&self, args: &LdaArgs) -> Option<f64> {
        args.alpha.or(self.file.alpha)
    }

    pub fn classifier_config(&self, args: &ClassifierArgs) -> Result<ClassifierConfig> {
        let seed = self.seed()?;
        let mut cfg = ClassifierConfig {
            seed,
            ..ClassifierConfig::default()
        };
        cfg.svm.seed = seed;
        if let Some(mode) = args
            .threshold_mode
            .as_deref()
            .or(self.file.threshold_mode.as_deref())
        {
            cfg.threshold_mode = match mode {
                "prior-quantile" => ThresholdMode::PriorQuantile,
                "cv" => ThresholdMode::Cv,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown threshold mode `{other}`"
                    )))
                }
            };
        }
        if let Some(mode) = args.support.as_deref().or(self.file.support.as_deref()) {
            cfg.support = match mode {
                "fractional" => SupportMode::Fractional,
                "binarized" => SupportMode::Binarized,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown support mode `{other}`"
                    )))
                }
            };
        }
        if let Some(c) = args.svm_c.or(self.file.svm_c) {
            cfg.svm.c = c;
        }
        cfg.svm.validate()?;
        Ok(cfg)
    }

    pub fn classifier(&self, flag: Option<&str>) -> Result<ClassifierId> {
        let from_file = self
            .file
            .classifier
            .as_ref()
            .and_then(|c| c.to_vec().into_iter().next());
        match flag.map(str::to_string).or(from_file) {
            Some(s) => s.parse(),
            None => Err(Error::InvalidConfig("--classifier is required".into())),
        }
    }

    pub fn classifiers(&self, flag: &[String]) -> Result<Option<Vec<ClassifierId>>> {
        list_or(flag, &self.file.classifier)
            .map(|v| v.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>())
            .transpose()
    }

    pub fn fit_on_all(&self, flag: bool) -> bool {
        flag || self.file.fit_on_all.unwrap_or(false)
    }
}
