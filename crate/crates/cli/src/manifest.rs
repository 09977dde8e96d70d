use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use topicclass::hashing::content_hash;
use topicclass::{Result, FORMAT_VERSION};

/// Provenance record written next to every stage's outputs as
/// `<stage>.manifest.json`. Holds no timestamps so that it is as
/// reproducible as the outputs it describes.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub version: u32,
    pub tool: String,
    pub stage: String,
    pub inputs: BTreeMap<String, String>,
    pub config: serde_json::Value,
    pub outputs: BTreeMap<String, String>,
}

/// Collects inputs and outputs of one stage.
pub struct Stage {
    out_dir: PathBuf,
    manifest: Manifest,
}

impl Stage {
    pub fn new(name: &str, out_dir: &Path) -> Result<Self> {
        fs::create_dir_all(out_dir)?;
        Ok(Self {
            out_dir: out_dir.to_path_buf(),
            manifest: Manifest {
                version: FORMAT_VERSION,
                tool: format!("topicclass {}", env!("CARGO_PKG_VERSION")),
                stage: name.to_string(),
                inputs: BTreeMap::new(),
                config: serde_json::Value::Null,
                outputs: BTreeMap::new(),
            },
        })
    }

    /// Reads an input file, recording its hash.
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path)?;
        self.manifest
            .inputs
            .insert(path.display().to_string(), content_hash(text.as_bytes()));
        Ok(text)
    }

    /// Records a file that was read by other means (e.g. a directory scan).
    pub fn note_input(&mut self, path: &Path) -> Result<()> {
        let bytes = fs::read(path)?;
        self.manifest
            .inputs
            .insert(path.display().to_string(), content_hash(&bytes));
        Ok(())
    }

    pub fn config<T: Serialize>(&mut self, config: &T) -> Result<()> {
        self.manifest.config = serde_json::to_value(config)?;
        Ok(())
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.path(name);
        fs::write(&path, contents)?;
        self.manifest
            .outputs
            .insert(name.to_string(), content_hash(contents.as_bytes()));
        Ok(path)
    }

    pub fn finish(self) -> Result<()> {
        let name = format!("{}.manifest.json", self.manifest.stage);
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        fs::write(self.out_dir.join(name), text)?;
        Ok(())
    }
}
