use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::experiment::{evaluate_on_topics, run_split, topic_features, PipelineSpec};
use super::{ClassifierId, ConfusionMatrix, Metrics};
use crate::corpus::{stratified_split, Corpus, SplitSpec};
use crate::error::{Error, Result};
use crate::topic_model::dimension_reduction;

/// Topic counts of the default sweep grid.
pub const DEFAULT_TOPIC_COUNTS: [usize; 8] = [5, 10, 25, 50, 75, 100, 125, 150];

pub const CSV_HEADER: &str =
    "classifier,train_fraction,topics,seed,precision,recall,fscore,dim_reduction_pct,seconds";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepOptions {
    /// When false every row reports 0 seconds so that output files are
    /// byte-for-byte reproducible.
    pub record_timing: bool,
    /// Fixed document-topic prior for every K; `None` means 50/K.
    pub alpha: Option<f64>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            record_timing: true,
            alpha: None,
        }
    }
}

/// One evaluated grid cell. Raw-text classifiers report `topics = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub classifier: ClassifierId,
    pub train_fraction: f64,
    pub topics: usize,
    pub seed: u64,
    pub vocab_size: Option<usize>,
    pub confusion: Option<ConfusionMatrix>,
    pub metrics: Option<Metrics>,
    pub macro_metrics: Option<Metrics>,
    pub dim_reduction_pct: Option<f64>,
    pub seconds: f64,
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(
        classifier: ClassifierId,
        train_fraction: f64,
        topics: usize,
        seed: u64,
        err: &Error,
    ) -> Self {
        Self {
            classifier,
            train_fraction,
            topics,
            seed,
            vocab_size: None,
            confusion: None,
            metrics: None,
            macro_metrics: None,
            dim_reduction_pct: None,
            seconds: 0.0,
            error: Some(format!("{}: {err}", err.kind())),
        }
    }
}

/// Mean and sample standard deviation of the F-score over seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub classifier: ClassifierId,
    pub train_fraction: f64,
    pub topics: usize,
    pub runs: usize,
    pub failures: usize,
    pub precision_mean: f64,
    pub recall_mean: f64,
    pub fscore_mean: f64,
    pub fscore_sd: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl SweepResult {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn failures(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.error.is_some())
    }

    /// CSV with the fixed plotting header; metric fields of failed cells are empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER.split(','))
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        for r in &self.rows {
            let m = r.metrics.as_ref();
            w.write_record([
                r.classifier.as_str().to_string(),
                r.train_fraction.to_string(),
                r.topics.to_string(),
                r.seed.to_string(),
                opt(m.map(|m| m.precision)),
                opt(m.map(|m| m.recall)),
                opt(m.map(|m| m.fscore)),
                opt(r.dim_reduction_pct),
                r.seconds.to_string(),
            ])
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for r in &self.rows {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Aggregates rows sharing (classifier, fraction, topics), in first-seen order.
    pub fn summary(&self) -> Vec<SummaryRow> {
        let mut keys: Vec<(ClassifierId, f64, usize)> = Vec::new();
        for r in &self.rows {
            let key = (r.classifier, r.train_fraction, r.topics);
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        keys.into_iter()
            .map(|(classifier, train_fraction, topics)| {
                let group: Vec<&SweepRow> = self
                    .rows
                    .iter()
                    .filter(|r| {
                        r.classifier == classifier
                            && r.train_fraction == train_fraction
                            && r.topics == topics
                    })
                    .collect();
                let ok: Vec<&Metrics> = group.iter().filter_map(|r| r.metrics.as_ref()).collect();
                let n = ok.len() as f64;
                let mean = |f: fn(&Metrics) -> f64| {
                    if ok.is_empty() {
                        f64::NAN
                    } else {
                        ok.iter().map(|m| f(m)).sum::<f64>() / n
                    }
                };
                let fscore_mean = mean(|m| m.fscore);
                let fscore_sd = if ok.len() < 2 {
                    0.0
                } else {
                    (ok.iter()
                        .map(|m| (m.fscore - fscore_mean).powi(2))
                        .sum::<f64>()
                        / (n - 1.0))
                        .sqrt()
                };
                SummaryRow {
                    classifier,
                    train_fraction,
                    topics,
                    runs: group.len(),
                    failures: group.len() - ok.len(),
                    precision_mean: mean(|m| m.precision),
                    recall_mean: mean(|m| m.recall),
                    fscore_mean,
                    fscore_sd,
                }
            })
            .collect()
    }
}

/// [`sweep_with`] using default options.
pub fn sweep(
    corpus: &Corpus,
    fractions: &[f64],
    topic_counts: &[usize],
    classifiers: &[ClassifierId],
    seeds: &[u64],
    base: &PipelineSpec,
) -> Result<SweepResult> {
    sweep_with(
        corpus,
        fractions,
        topic_counts,
        classifiers,
        seeds,
        base,
        SweepOptions::default(),
    )
}

/// Evaluates the cartesian product of the grid. Each (fraction, seed) split
/// and each (fraction, K, seed) topic model are computed once and shared by
/// all classifiers in that cell. Rows are ordered by fraction, then topic
/// count, then classifier, then seed, all in the order given; raw-text
/// classifiers come after the topic-space rows of their fraction.
pub fn sweep_with(
    corpus: &Corpus,
    fractions: &[f64],
    topic_counts: &[usize],
    classifiers: &[ClassifierId],
    seeds: &[u64],
    base: &PipelineSpec,
    options: SweepOptions,
) -> Result<SweepResult> {
    if fractions.is_empty() || classifiers.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidConfig(
            "sweep needs non-empty fraction, classifier and seed lists".into(),
        ));
    }
    let topic_ids: Vec<ClassifierId> = classifiers
        .iter()
        .copied()
        .filter(|c| c.uses_topics())
        .collect();
    let raw_ids: Vec<ClassifierId> = classifiers
        .iter()
        .copied()
        .filter(|c| !c.uses_topics())
        .collect();
    if !topic_ids.is_empty() && topic_counts.is_empty() {
        return Err(Error::InvalidConfig(
            "topic-space classifiers need at least one topic count".into(),
        ));
    }
    for &f in fractions {
        SplitSpec::new(f, 0)?;
    }

    let mut rows = Vec::new();
    for &fraction in fractions {
        let splits: Vec<Result<(Corpus, Corpus)>> = seeds
            .iter()
            .map(|&seed| stratified_split(corpus, &SplitSpec::new(fraction, seed)?))
            .collect();

        for &k in topic_counts.iter().filter(|_| !topic_ids.is_empty()) {
            let mut block: Vec<Vec<SweepRow>> = vec![Vec::new(); topic_ids.len()];
            for (si, &seed) in seeds.iter().enumerate() {
                let mut spec = base.clone().with_seed(seed);
                spec.lda.topics = k;
                spec.lda.alpha = options.alpha.unwrap_or(50.0 / k as f64);
                let started = Instant::now();
                let features = splits[si]
                    .as_ref()
                    .map_err(clone_error)
                    .and_then(|(train, test)| topic_features(train, test, &spec));
                let lda_seconds = started.elapsed().as_secs_f64();
                for (ci, &id) in topic_ids.iter().enumerate() {
                    let row = match &features {
                        Err(e) => SweepRow::failed(id, fraction, k, seed, e),
                        Ok(feat) => {
                            let (train, test) =
                                splits[si].as_ref().expect("features imply a split");
                            let started = Instant::now();
                            match evaluate_on_topics(id, feat, train, test, &spec.classifier_config)
                            {
                                Ok(report) => {
                                    let v = feat.vocabulary.len();
                                    SweepRow {
                                        classifier: id,
                                        train_fraction: fraction,
                                        topics: k,
                                        seed,
                                        vocab_size: Some(v),
                                        confusion: Some(report.confusion),
                                        metrics: Some(report.metrics),
                                        macro_metrics: Some(report.macro_metrics),
                                        dim_reduction_pct: dimension_reduction(v, k).ok(),
                                        seconds: lda_seconds + started.elapsed().as_secs_f64(),
                                        error: None,
                                    }
                                }
                                Err(e) => SweepRow::failed(id, fraction, k, seed, &e),
                            }
                        }
                    };
                    block[ci].push(row);
                }
            }
            rows.extend(block.into_iter().flatten());
        }

        for &id in &raw_ids {
            for (si, &seed) in seeds.iter().enumerate() {
                let mut spec = base.clone().with_seed(seed);
                spec.classifier = id;
                let started = Instant::now();
                let outcome = splits[si]
                    .as_ref()
                    .map_err(clone_error)
                    .and_then(|(train, test)| run_split(train, test, &spec));
                rows.push(match outcome {
                    Ok(report) => SweepRow {
                        classifier: id,
                        train_fraction: fraction,
                        topics: 0,
                        seed,
                        vocab_size: Some(report.vocabulary.len()),
                        confusion: Some(report.confusion),
                        metrics: Some(report.metrics),
                        macro_metrics: Some(report.macro_metrics),
                        dim_reduction_pct: Some(0.0),
                        seconds: started.elapsed().as_secs_f64(),
                        error: None,
                    },
                    Err(e) => SweepRow::failed(id, fraction, 0, seed, &e),
                });
            }
        }
    }

    if !options.record_timing {
        for r in &mut rows {
            r.seconds = 0.0;
        }
    }
    for r in rows.iter().filter(|r| r.error.is_some()) {
        log::warn!(
            "sweep cell {} f={} k={} seed={} failed: {}",
            r.classifier,
            r.train_fraction,
            r.topics,
            r.seed,
            r.error.as_deref().unwrap_or("")
        );
    }
    Ok(SweepResult { rows })
}

fn clone_error(e: &Error) -> Error {
    Error::InvalidConfig(format!("split failed: {e}"))
}
