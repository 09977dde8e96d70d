use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;
use topicclass::corpus::io::{parse_jsonl, read_text_dir, to_jsonl};
use topicclass::corpus::{
    build_vocabulary, stratified_split, vectorize, ClassCounts, Corpus, DocTermMatrix, Label,
    SplitSpec, Vocabulary, Weighting, DEFAULT_FRACTIONS,
};
use topicclass::evaluation::{
    confusion, inference_seed, macro_metrics, metrics, run_experiment, sweep_with,
    train_raw_classifier, train_topic_classifier, ClassifierId, PipelineSpec, SweepOptions,
    DEFAULT_TOPIC_COUNTS,
};
use topicclass::learners::FeatureMatrix;
use topicclass::synth::{generate_synthetic_corpus, SyntheticSpec};
use topicclass::topic_classifiers::{ClassifierArtifact, ModelReference};
use topicclass::topic_model::{infer_topics, top_words, train_lda, LdaModel, TopicVector};
use topicclass::{Error, Result, FORMAT_VERSION};

use crate::cli::*;
use crate::manifest::Stage;
use crate::settings::{list_or, Settings};

/// Topic vectors of a set of documents, tied to the LDA model that produced them.
#[derive(Debug, Serialize, Deserialize)]
pub struct ThetaFile {
    pub version: u32,
    pub lda_hash: String,
    pub documents: Vec<ThetaRow>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ThetaRow {
    pub id: String,
    pub label: Label,
    pub theta: TopicVector,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PredictionRow {
    pub id: String,
    pub label: Label,
    pub predicted: Label,
}

fn stats_path(vocab: &Path) -> PathBuf {
    let stem = vocab
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("vocab");
    vocab.with_file_name(format!("{stem}_stats.json"))
}

fn read_corpus(stage: &mut Stage, path: &Path) -> Result<Corpus> {
    parse_jsonl(&stage.read(path)?).map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        },
        other => other,
    })
}

/// Reads a vocabulary and, when present, its document-frequency sidecar.
fn read_vocab(stage: &mut Stage, path: &Path) -> Result<Vocabulary> {
    let vocab = Vocabulary::from_text(&stage.read(path)?)?;
    let stats = stats_path(path);
    if stats.exists() {
        vocab.with_stats(serde_json::from_str(&stage.read(&stats)?)?)
    } else {
        Ok(vocab)
    }
}

fn read_lda(stage: &mut Stage, path: &Path) -> Result<LdaModel> {
    LdaModel::from_json(&stage.read(path)?)
}

fn read_thetas(stage: &mut Stage, path: &Path) -> Result<ThetaFile> {
    let file: ThetaFile = serde_json::from_str(&stage.read(path)?)?;
    if file.version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(file.version));
    }
    Ok(file)
}

fn check_hash(expected: &str, found: &str) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::HashMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        })
    }
}

fn single_fraction(fractions: &[f64], default: f64) -> Result<f64> {
    match fractions {
        [] => Ok(default),
        [f] => Ok(*f),
        _ => Err(Error::InvalidConfig(
            "this command takes a single --fractions value".into(),
        )),
    }
}

fn jsonl<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut out = String::new();
    for r in rows {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

fn pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn ingest(settings: &Settings, args: &IngestArgs) -> Result<()> {
    let mut stage = Stage::new("ingest", &args.out)?;
    let corpus = if args.input.is_dir() {
        let labels = args.labels.as_ref().ok_or_else(|| {
            Error::InvalidConfig("--labels is required for a text directory".into())
        })?;
        stage.note_input(labels)?;
        read_text_dir(&args.input, labels)?
    } else {
        read_corpus(&mut stage, &args.input)?
    };
    let counts = corpus.class_counts();
    log::info!("{} documents ({} positive)", corpus.len(), counts.positive);
    stage.write("corpus.jsonl", &to_jsonl(&corpus)?)?;

    let fraction = list_or(&args.fractions, &settings.file.fractions);
    let split = match fraction {
        Some(f) => {
            let spec = SplitSpec::new(single_fraction(&f, 0.75)?, settings.seed()?)?;
            let (train, test) = stratified_split(&corpus, &spec)?;
            stage.write("train.jsonl", &to_jsonl(&train)?)?;
            stage.write("test.jsonl", &to_jsonl(&test)?)?;
            Some(spec)
        }
        None => None,
    };
    stage.config(&json!({ "split": split, "class_counts": counts }))?;
    stage.finish()
}

pub fn vocab(settings: &Settings, args: &VocabCmd) -> Result<()> {
    let mut stage = Stage::new("vocab", &args.out)?;
    let corpus = read_corpus(&mut stage, &args.input)?;
    let cfg = settings.vocabulary(&args.vocab)?;
    let vocab = build_vocabulary(&corpus, &cfg)?;
    log::info!("vocabulary of {} terms", vocab.len());
    stage.write("vocab.txt", &vocab.to_text())?;
    stage.write("vocab_stats.json", &serde_json::to_string(&vocab.stats())?)?;
    let mut stoplist: Vec<&String> = cfg.stoplist.iter().collect();
    stoplist.sort();
    stage.config(&json!({
        "min_df": cfg.min_df,
        "max_df_ratio": cfg.max_df_ratio,
        "stoplist_size": stoplist.len(),
        "allowlist_size": cfg.allowlist.as_ref().map(|a| a.len()),
        "vocab_size": vocab.len(),
        "vocab_hash": vocab.content_hash(),
    }))?;
    stage.finish()
}

pub fn vectorize_cmd(settings: &Settings, args: &VectorizeArgs) -> Result<()> {
    let mut stage = Stage::new("vectorize", &args.out)?;
    let corpus = read_corpus(&mut stage, &args.input)?;
    let vocab = read_vocab(&mut stage, &args.vocab)?;
    let weighting = settings.weighting(args.weighting.as_deref(), Weighting::Count)?;
    let matrix = vectorize(&corpus, &vocab, weighting)?;
    stage.write("matrix.json", &serde_json::to_string(&matrix)?)?;
    stage.config(&json!({ "weighting": weighting }))?;
    stage.finish()
}

pub fn train_lda_cmd(settings: &Settings, args: &TrainLdaArgs) -> Result<()> {
    let mut stage = Stage::new("train-lda", &args.out)?;
    let corpus = read_corpus(&mut stage, &args.input)?;
    let vocab = read_vocab(&mut stage, &args.vocab)?;
    let topics = settings
        .topics(args.topics)
        .ok_or_else(|| Error::InvalidConfig("--topics is required".into()))?;
    let cfg = settings.lda(topics, &args.lda)?;
    let matrix = vectorize(&corpus, &vocab, Weighting::Count)?;
    let (model, thetas) = train_lda(&matrix, &cfg)?;
    let model_json = model.to_json()?;
    let lda_hash = topicclass::hashing::content_hash(model_json.as_bytes());
    stage.write("lda.json", &model_json)?;
    stage.write(
        "train_thetas.json",
        &theta_file(&matrix, thetas, &lda_hash)?,
    )?;
    stage.config(&json!({ "lda": cfg, "lda_hash": lda_hash }))?;
    stage.finish()
}

fn theta_file(matrix: &DocTermMatrix, thetas: Vec<TopicVector>, lda_hash: &str) -> Result<String> {
    let documents = matrix
        .doc_ids
        .iter()
        .zip(&matrix.labels)
        .zip(thetas)
        .map(|((id, label), theta)| ThetaRow {
            id: id.clone(),
            label: *label,
            theta,
        })
        .collect();
    Ok(serde_json::to_string(&ThetaFile {
        version: FORMAT_VERSION,
        lda_hash: lda_hash.to_string(),
        documents,
    })?)
}

pub fn infer(settings: &Settings, args: &InferArgs) -> Result<()> {
    let mut stage = Stage::new("infer", &args.out)?;
    let corpus = read_corpus(&mut stage, &args.input)?;
    let vocab = read_vocab(&mut stage, &args.vocab)?;
    let model = read_lda(&mut stage, &args.model)?;
    let lda_hash = model.content_hash()?;
    check_hash(model.vocab_hash(), &vocab.content_hash())?;
    // Fold-in sweeps may be overridden; the model's own settings otherwise.
    let mut cfg = *model.config();
    if let Some(v) = args.lda.infer_iters.or(settings.file.infer_iters) {
        cfg.infer_iterations = v;
    }
    if let Some(v) = args.lda.infer_burn_in.or(settings.file.infer_burn_in) {
        cfg.infer_burn_in = v;
    }
    cfg.validate()?;
    let matrix = vectorize(&corpus, &vocab, Weighting::Count)?;
    let thetas = matrix
        .rows
        .iter()
        .zip(&matrix.doc_ids)
        .map(|(row, id)| infer_topics(&model, row, &cfg.seed(inference_seed(cfg.seed, id))))
        .collect::<Result<Vec<_>>>()?;
    stage.write("thetas.json", &theta_file(&matrix, thetas, &lda_hash)?)?;
    stage.config(&json!({ "infer_iterations": cfg.infer_iterations, "infer_burn_in": cfg.infer_burn_in, "lda_hash": lda_hash }))?;
    stage.finish()
}

fn raw_matrix(
    stage: &mut Stage,
    settings: &Settings,
    corpus_path: &Path,
    vocab: Option<&PathBuf>,
    weighting: Option<&str>,
) -> Result<(DocTermMatrix, String)> {
    let vocab_path =
        vocab.ok_or_else(|| Error::InvalidConfig("raw-text classifiers need --vocab".into()))?;
    let corpus = read_corpus(stage, corpus_path)?;
    let vocab = read_vocab(stage, vocab_path)?;
    let weighting = settings.weighting(weighting, Weighting::Tfidf)?;
    Ok((vectorize(&corpus, &vocab, weighting)?, vocab.content_hash()))
}

pub fn train_clf(settings: &Settings, args: &TrainClfArgs) -> Result<()> {
    let mut stage = Stage::new("train-clf", &args.out)?;
    let id = settings.classifier(args.classifier.as_deref())?;
    let cfg = settings.classifier_config(&args.clf)?;
    let artifact = if id.uses_topics() {
        let model_path = args
            .model
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("topic classifiers need --model".into()))?;
        let model = read_lda(&mut stage, model_path)?;
        let lda_hash = model.content_hash()?;
        let file = read_thetas(&mut stage, &args.input)?;
        check_hash(&lda_hash, &file.lda_hash)?;
        let labels: Vec<Label> = file.documents.iter().map(|d| d.label).collect();
        let thetas: Vec<TopicVector> = file.documents.into_iter().map(|d| d.theta).collect();
        ClassifierArtifact::new(
            train_topic_classifier(id, &thetas, &labels, &cfg)?,
            ModelReference::Lda(lda_hash),
        )
    } else {
        let (matrix, vocab_hash) = raw_matrix(
            &mut stage,
            settings,
            &args.input,
            args.vocab.as_ref(),
            args.weighting.as_deref(),
        )?;
        let clf = train_raw_classifier(id, &FeatureMatrix::from_doc_term(&matrix), &cfg)?;
        ClassifierArtifact::new(clf, ModelReference::Vocabulary(vocab_hash))
    };
    stage.write("classifier.json", &artifact.to_json()?)?;
    stage.config(&json!({ "classifier": id, "classifier_config": cfg }))?;
    stage.finish()
}

pub fn predict(settings: &Settings, args: &PredictArgs) -> Result<()> {
    let mut stage = Stage::new("predict", &args.out)?;
    let artifact = ClassifierArtifact::from_json(&stage.read(&args.clf_model)?)?;
    let id = artifact.classifier.id();
    let rows = if id.uses_topics() {
        let model_path = args
            .model
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("topic classifiers need --model".into()))?;
        let lda_hash = read_lda(&mut stage, model_path)?.content_hash()?;
        artifact.check_reference(&ModelReference::Lda(lda_hash.clone()))?;
        let file = read_thetas(&mut stage, &args.input)?;
        check_hash(&lda_hash, &file.lda_hash)?;
        file.documents
            .iter()
            .map(|d| {
                Ok(PredictionRow {
                    id: d.id.clone(),
                    label: d.label,
                    predicted: artifact.classifier.predict(d.theta.as_slice())?,
                })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        let (matrix, vocab_hash) = raw_matrix(
            &mut stage,
            settings,
            &args.input,
            args.vocab.as_ref(),
            args.weighting.as_deref(),
        )?;
        artifact.check_reference(&ModelReference::Vocabulary(vocab_hash))?;
        (0..matrix.len())
            .map(|i| {
                Ok(PredictionRow {
                    id: matrix.doc_ids[i].clone(),
                    label: matrix.labels[i],
                    predicted: artifact.classifier.predict(&matrix.dense_row(i))?,
                })
            })
            .collect::<Result<Vec<_>>>()?
    };
    stage.write("predictions.jsonl", &jsonl(&rows)?)?;
    stage.config(&json!({ "classifier": id }))?;
    stage.finish()
}

pub fn evaluate(settings: &Settings, args: &EvaluateArgs) -> Result<()> {
    let mut stage = Stage::new("evaluate", &args.out)?;
    let report = if let Some(path) = &args.predictions {
        let text = stage.read(path)?;
        let rows = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str::<PredictionRow>(l).map_err(|e| Error::Parse {
                    location: format!("{} line {}", path.display(), i + 1),
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let predicted: Vec<Label> = rows.iter().map(|r| r.predicted).collect();
        let actual: Vec<Label> = rows.iter().map(|r| r.label).collect();
        let cm = confusion(&predicted, &actual)?;
        json!({ "confusion": cm, "metrics": metrics(&cm), "macro_metrics": macro_metrics(&cm) })
    } else {
        let input = args
            .input
            .as_ref()
            .expect("clap requires --input without --predictions");
        let corpus = read_corpus(&mut stage, input)?;
        let fraction = single_fraction(
            &list_or(&args.fractions, &settings.file.fractions).unwrap_or_default(),
            0.75,
        )?;
        let seed = settings.seed()?;
        let classifier = settings.classifier(args.classifier.as_deref())?;
        let topics = settings.topics(args.topics).unwrap_or(10);
        let spec = PipelineSpec {
            classifier,
            lda: settings.lda(topics, &args.lda)?,
            vocabulary: settings.vocabulary(&args.vocab)?,
            raw_weighting: settings.weighting(args.weighting.as_deref(), Weighting::Tfidf)?,
            classifier_config: settings.classifier_config(&args.clf)?,
            fit_on_all: settings.fit_on_all(args.fit_on_all),
        };
        let r = run_experiment(&corpus, &SplitSpec::new(fraction, seed)?, &spec, seed)?;
        json!({
            "classifier": classifier,
            "train_fraction": fraction,
            "topics": if classifier.uses_topics() { topics } else { 0 },
            "seed": seed,
            "confusion": r.confusion,
            "metrics": r.metrics,
            "macro_metrics": r.macro_metrics,
            "vocab_hash": r.vocab_hash(),
            "lda_hash": r.lda_hash()?,
            "selected_topic": r.classifier.selected_topic(),
        })
    };
    println!("{}", serde_json::to_string(&report["metrics"])?);
    stage.write("metrics.json", &pretty(&report)?)?;
    stage.config(
        &json!({ "mode": if args.predictions.is_some() { "predictions" } else { "experiment" } }),
    )?;
    stage.finish()
}

pub fn sweep(settings: &Settings, args: &SweepArgs) -> Result<()> {
    let mut stage = Stage::new("sweep", &args.out)?;
    let corpus = read_corpus(&mut stage, &args.input)?;
    let fractions = list_or(&args.fractions, &settings.file.fractions)
        .unwrap_or_else(|| DEFAULT_FRACTIONS.to_vec());
    let topics = list_or(&args.topics, &settings.file.topics)
        .unwrap_or_else(|| DEFAULT_TOPIC_COUNTS.to_vec());
    let classifiers = settings
        .classifiers(&args.classifier)?
        .unwrap_or_else(|| ClassifierId::TOPIC_SPACE.to_vec());
    let seeds = if args.seeds.is_empty() {
        settings
            .file
            .seeds
            .clone()
            .unwrap_or(vec![settings.seed()?])
    } else {
        args.seeds.clone()
    };
    let base = PipelineSpec {
        classifier: classifiers[0],
        lda: settings.lda(topics.first().copied().unwrap_or(10), &args.lda)?,
        vocabulary: settings.vocabulary(&args.vocab)?,
        raw_weighting: settings.weighting(args.weighting.as_deref(), Weighting::Tfidf)?,
        classifier_config: settings.classifier_config(&args.clf)?,
        fit_on_all: settings.fit_on_all(args.fit_on_all),
    };
    let options = SweepOptions {
        record_timing: !(args.no_timing || settings.file.no_timing.unwrap_or(false)),
        alpha: settings.alpha_override(&args.lda),
    };
    let result = sweep_with(
        &corpus,
        &fractions,
        &topics,
        &classifiers,
        &seeds,
        &base,
        options,
    )?;
    let failures = result.failures().count();
    if failures > 0 {
        log::warn!(
            "{failures} of {} cells failed; see sweep.jsonl",
            result.len()
        );
    }
    stage.write("sweep.csv", &result.to_csv()?)?;
    let mut lines = Vec::new();
    result.write_jsonl(&mut lines)?;
    stage.write(
        "sweep.jsonl",
        &String::from_utf8(lines).expect("json is utf-8"),
    )?;
    stage.write("summary.csv", &summary_csv(&result))?;
    stage.config(&json!({
        "fractions": fractions,
        "topics": topics,
        "classifiers": classifiers,
        "seeds": seeds,
        "lda": { "alpha": options.alpha, "beta": base.lda.beta, "train_iterations": base.lda.train_iterations,
                 "burn_in": base.lda.burn_in, "infer_iterations": base.lda.infer_iterations, "infer_burn_in": base.lda.infer_burn_in },
        "min_df": base.vocabulary.min_df,
        "max_df_ratio": base.vocabulary.max_df_ratio,
        "raw_weighting": base.raw_weighting,
        "classifier_config": base.classifier_config,
        "fit_on_all": base.fit_on_all,
        "record_timing": options.record_timing,
    }))?;
    println!(
        "{} rows written to {}",
        result.len(),
        stage.path("sweep.csv").display()
    );
    stage.finish()
}

fn summary_csv(result: &topicclass::SweepResult) -> String {
    let mut out = String::from("classifier,train_fraction,topics,runs,failures,precision_mean,recall_mean,fscore_mean,fscore_sd\n");
    for s in result.summary() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            s.classifier,
            s.train_fraction,
            s.topics,
            s.runs,
            s.failures,
            s.precision_mean,
            s.recall_mean,
            s.fscore_mean,
            s.fscore_sd
        ));
    }
    out
}

pub fn synth(settings: &Settings, args: &SynthArgs) -> Result<()> {
    let mut stage = Stage::new("synth", &args.out)?;
    let d = SyntheticSpec::default();
    let spec = SyntheticSpec {
        topics: args.topics.unwrap_or(d.topics),
        vocab_size: args.vocab_size.unwrap_or(d.vocab_size),
        n_docs: args.n_docs.unwrap_or(d.n_docs),
        doc_len: args.doc_len.unwrap_or(d.doc_len),
        positive_ratio: args.positive_ratio.unwrap_or(d.positive_ratio),
        class_topic: args.class_topic.unwrap_or(d.class_topic),
        class_topic_boost: args.boost.unwrap_or(d.class_topic_boost),
        seed: settings.seed()?,
        ..d
    };
    let data = generate_synthetic_corpus(&spec)?;
    stage.write("corpus.jsonl", &to_jsonl(&data.corpus)?)?;
    stage.config(&spec)?;
    let counts: ClassCounts = data.corpus.class_counts();
    println!(
        "{} documents ({} positive) written to {}",
        data.corpus.len(),
        counts.positive,
        stage.path("corpus.jsonl").display()
    );
    stage.finish()
}

pub fn top_words_cmd(args: &TopWordsArgs) -> Result<()> {
    let out_dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let mut stage = Stage::new("top-words", &out_dir)?;
    let model = read_lda(&mut stage, &args.model)?;
    let vocab = read_vocab(&mut stage, &args.vocab)?;
    check_hash(model.vocab_hash(), &vocab.content_hash())?;
    let mut topics = Vec::new();
    let mut stdout = std::io::stdout().lock();
    for t in 0..model.num_topics() {
        let words = top_words(&model, &vocab, t, args.n)?;
        // A closed pipe (e.g. `| head`) is not an error.
        let _ = writeln!(
            stdout,
            "topic {t}: {}",
            words
                .iter()
                .map(|(w, _)| w.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        );
        topics.push(json!({ "topic": t, "words": words }));
    }
    if args.out.is_some() {
        stage.write("top_words.json", &pretty(&topics)?)?;
        stage.config(&json!({ "n": args.n }))?;
        stage.finish()?;
    }
    Ok(())
}
