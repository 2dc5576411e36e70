//! Stopword files and the word-list manifest.
//!
//! Word lists must be registered through a manifest before analysis; the
//! analysis commands accept nothing else, which keeps the set of hypotheses
//! fixed ahead of time.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use diachron_core::text::parse_word_lines;
use diachron_core::{TokenizerRules, WordList};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BUNDLED_STOPWORDS: &str = include_str!("../data/stopwords_es.txt");
pub const BUNDLED_WORD_LISTS: &str = include_str!("../data/word_lists.json");
pub const WORD_LIST_SCHEMA_VERSION: u32 = 1;

/// On-disk form of a word-list manifest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordListManifest {
    pub schema_version: u32,
    pub lists: Vec<WordListEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordListEntry {
    pub label: String,
    pub words: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl WordListManifest {
    pub fn from_lists(lists: &[WordList]) -> Self {
        Self {
            schema_version: WORD_LIST_SCHEMA_VERSION,
            lists: lists
                .iter()
                .map(|l| WordListEntry {
                    label: l.label().into(),
                    words: l.words().iter().cloned().collect(),
                    provenance: l.provenance().map(str::to_owned),
                })
                .collect(),
        }
    }
}

/// Words of a one-per-line file, `#` comments and blank lines skipped.
pub fn read_word_file(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read word file {}: {e}", path.display())))?;
    Ok(parse_word_lines(&text).into_iter().map(str::to_owned).collect())
}

pub fn bundled_stopwords() -> Vec<String> {
    parse_word_lines(BUNDLED_STOPWORDS)
        .into_iter()
        .map(str::to_owned)
        .collect()
}

/// Validates a manifest; `origin` names it in messages.
pub fn parse_word_lists(text: &str, origin: &str, rules: &TokenizerRules) -> Result<Vec<WordList>> {
    let manifest: WordListManifest = serde_json::from_str(text)
        .map_err(|e| Error::config(format!("{origin}: unparseable word-list manifest: {e}")))?;
    if manifest.schema_version != WORD_LIST_SCHEMA_VERSION {
        return Err(Error::config(format!(
            "{origin}: word-list schema version {} is not supported (expected {WORD_LIST_SCHEMA_VERSION})",
            manifest.schema_version
        )));
    }
    let mut labels = BTreeSet::new();
    let mut lists = Vec::with_capacity(manifest.lists.len());
    for entry in manifest.lists {
        if !labels.insert(entry.label.clone()) {
            return Err(Error::config(format!(
                "{origin}: duplicate list label `{}`",
                entry.label
            )));
        }
        let provenance = entry.provenance.filter(|p| !p.trim().is_empty());
        if provenance.is_none() {
            log::warn!("{origin}: list `{}` has no provenance note", entry.label);
        }
        let list = WordList::new(entry.label, entry.words.iter().map(String::as_str), provenance, rules)
            .map_err(|e| Error::config(format!("{origin}: {e}")))?;
        lists.push(list);
    }
    if lists.is_empty() {
        log::warn!("{origin}: no word lists registered");
    }
    Ok(lists)
}

pub fn register_word_lists(path: &Path, rules: &TokenizerRules) -> Result<Vec<WordList>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read word-list manifest {}: {e}", path.display())))?;
    parse_word_lists(&text, &path.display().to_string(), rules)
}

pub fn bundled_word_lists(rules: &TokenizerRules) -> Result<Vec<WordList>> {
    parse_word_lists(BUNDLED_WORD_LISTS, "bundled word lists", rules)
}
