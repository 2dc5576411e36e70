//! Versioned JSON artifacts and content hashing.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use diachron_core::{TopicModel, Vocabulary};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Version stamped into every JSON artifact this tool writes.
pub const SCHEMA_VERSION: u32 = 1;

pub const PREPROCESS_DIR: &str = "preprocess";
pub const VOCABULARY_FILE: &str = "preprocess/vocabulary.json";
pub const TOKENS_FILE: &str = "preprocess/tokens.json";
pub const PREPROCESS_MANIFEST: &str = "preprocess/manifest.json";
pub const MODEL_FILE: &str = "model.json";
pub const TOPICS_CSV: &str = "topics.csv";
pub const PREVALENCE_CSV: &str = "prevalence.csv";
pub const FREQUENCY_CSV: &str = "frequency.csv";
pub const SIGNIFICANCE_CSV: &str = "significance.csv";
pub const CHARTS_DIR: &str = "charts";
pub const REPORT_FILE: &str = "report.md";
pub const RUN_MANIFEST: &str = "run-manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::read(path, e))?;
    Ok(sha256_hex(&bytes))
}

/// Writes `bytes`, creating parent directories, and returns their hash.
pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<String> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::write(parent, e))?;
    }
    fs::write(path, bytes).map_err(|e| Error::write(path, e))?;
    Ok(sha256_hex(bytes))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<String> {
    write_bytes(path, &to_json(value)?)
}

/// Reads an artifact written by an earlier stage; `stage` names the command
/// that produces it.
pub fn read_json<T: DeserializeOwned>(path: &Path, stage: &str) -> Result<T> {
    let bytes = fs::read(path).map_err(|e| {
        Error::data(format!(
            "missing artifact {} ({e}); run `{stage}` first",
            path.display()
        ))
    })?;
    serde_json::from_slice(&bytes).map_err(|e| Error::data(format!("{}: {e}", path.display())))
}

fn check_version(found: u32, path: &Path) -> Result<()> {
    if found == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(Error::data(format!(
            "{}: schema version {found} is not supported (expected {SCHEMA_VERSION})",
            path.display()
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VocabularyFile {
    pub schema_version: u32,
    pub vocabulary: Vocabulary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenDoc {
    pub id: String,
    pub source: String,
    pub year: i32,
    pub tokens: Vec<u32>,
}

/// Stem-id streams in corpus order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokensFile {
    pub schema_version: u32,
    pub corpus_sha256: String,
    pub documents: Vec<TokenDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRecord {
    /// As written in the config, or `bundled`.
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessManifest {
    pub schema_version: u32,
    pub inputs: BTreeMap<String, InputRecord>,
    pub records: usize,
    pub documents: usize,
    pub rejected: usize,
    pub empty_after_preprocessing: usize,
    pub tokens: u64,
    pub vocabulary_size: usize,
    /// Artifact path relative to the output directory, and its hash.
    pub artifacts: BTreeMap<String, String>,
}

/// Self-describing model file: sampler settings, vocabulary and estimates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: u32,
    pub vocabulary: Vocabulary,
    pub model: TopicModel,
}

impl ModelFile {
    pub fn new(vocabulary: Vocabulary, model: TopicModel) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            vocabulary,
            model,
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let f: Self = read_json(path, "fit")?;
        check_version(f.schema_version, path)?;
        if f.vocabulary.len() != f.model.vocab_size() {
            return Err(Error::data(format!(
                "{}: vocabulary has {} stems but the model has {}",
                path.display(),
                f.vocabulary.len(),
                f.model.vocab_size()
            )));
        }
        Ok(f)
    }
}

impl VocabularyFile {
    pub fn read(path: &Path) -> Result<Self> {
        let f: Self = read_json(path, "preprocess")?;
        check_version(f.schema_version, path)?;
        Ok(f)
    }
}

impl TokensFile {
    pub fn read(path: &Path) -> Result<Self> {
        let f: Self = read_json(path, "preprocess")?;
        check_version(f.schema_version, path)?;
        Ok(f)
    }
}

/// Every file under `root`, as sorted `/`-separated relative paths.
pub fn list_files(root: &Path) -> Result<Vec<String>> {
    fn walk(dir: &Path, prefix: &str, out: &mut Vec<String>) -> Result<()> {
        let entries = fs::read_dir(dir).map_err(|e| Error::read(dir, e))?;
        let mut names: Vec<(String, PathBuf)> = Vec::new();
        for entry in entries {
            let entry = entry.map_err(|e| Error::read(dir, e))?;
            names.push((entry.file_name().to_string_lossy().into_owned(), entry.path()));
        }
        names.sort();
        for (name, path) in names {
            let rel = if prefix.is_empty() {
                name
            } else {
                format!("{prefix}/{name}")
            };
            if path.is_dir() {
                walk(&path, &rel, out)?;
            } else {
                out.push(rel);
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    if root.is_dir() {
        walk(root, "", &mut out)?;
    }
    Ok(out)
}
