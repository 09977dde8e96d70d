//! Corpus file formats: JSON-lines (`id`, `text`, `label` per line) and a
//! directory of `.txt` files with an `id,label` CSV.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::vocabulary::DocFreqStats;
use super::{Corpus, Document, Label, Vocabulary};
use crate::error::{Error, Result};

pub fn parse_jsonl(text: &str) -> Result<Corpus> {
    let mut docs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(line).map_err(|e| Error::Parse {
            location: format!("line {}", i + 1),
            message: e.to_string(),
        })?;
        docs.push(doc);
    }
    Corpus::new(docs)
}

pub fn read_jsonl(path: &Path) -> Result<Corpus> {
    parse_jsonl(&fs::read_to_string(path)?)
}

pub fn to_jsonl(corpus: &Corpus) -> Result<String> {
    let mut out = String::new();
    for doc in corpus {
        out.push_str(&serde_json::to_string(doc)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn write_jsonl(corpus: &Corpus, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(to_jsonl(corpus)?.as_bytes())?;
    Ok(())
}

/// Reads `<dir>/<id>.txt` files labeled by a two-column `id,label` CSV.
/// Documents appear in CSV order; a header row `id,label` is optional.
pub fn read_text_dir(dir: &Path, labels_csv: &Path) -> Result<Corpus> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_path(labels_csv)
        .map_err(|e| csv_error(labels_csv, e))?;
    let mut docs = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(labels_csv, e))?;
        if record.len() != 2 {
            return Err(Error::Parse {
                location: format!("{} row {}", labels_csv.display(), i + 1),
                message: "expected two columns `id,label`".into(),
            });
        }
        let (id, label) = (record[0].trim(), record[1].trim());
        if i == 0 && id.eq_ignore_ascii_case("id") && label.eq_ignore_ascii_case("label") {
            continue;
        }
        let label: Label = label.parse().map_err(|_| Error::Parse {
            location: format!("{} row {}", labels_csv.display(), i + 1),
            message: format!("unknown label `{label}`"),
        })?;
        let text = fs::read_to_string(dir.join(format!("{id}.txt")))?;
        docs.push(Document::new(id, text, label));
    }
    Corpus::new(docs)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Parse {
        location: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Reads a vocabulary file, attaching document-frequency stats from
/// `stats_path` when given.
pub fn read_vocabulary(path: &Path, stats_path: Option<&Path>) -> Result<Vocabulary> {
    let vocab = Vocabulary::from_text(&fs::read_to_string(path)?)?;
    match stats_path {
        Some(p) => {
            let stats: DocFreqStats = serde_json::from_str(&fs::read_to_string(p)?)?;
            vocab.with_stats(stats)
        }
        None => Ok(vocab),
    }
}

/// Reads a newline-separated token list (stoplist or allowlist).
pub fn read_token_list(path: &Path) -> Result<Vec<String>> {
    let f = fs::File::open(path)?;
    let mut out = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line?;
        let t = line.trim();
        if !t.is_empty() && !t.starts_with('#') {
            out.push(t.to_lowercase());
        }
    }
    Ok(out)
}
