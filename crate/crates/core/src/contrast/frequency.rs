use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::wordlist::WordList;
use crate::corpus::{CellKey, Corpus};
use crate::text::{tokenize, FilterLists, TokenizerRules};

/// Which token total divides the list hits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Denominator {
    /// Tokens left after stopword and exclusion filtering.
    #[default]
    Filtered,
    /// Every token produced by the tokenizer.
    Raw,
}

/// Relative frequency of a word list in one `(source, year)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyPoint {
    pub source: String,
    pub year: i32,
    pub list_label: String,
    pub hits: u64,
    pub total: u64,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct CellCounts {
    surface: BTreeMap<String, u64>,
    raw_total: u64,
    filtered_total: u64,
}

/// Unstemmed surface-token counts per cell, computed once and reused for every list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellTokenCounts {
    cells: BTreeMap<CellKey, CellCounts>,
}

impl CellTokenCounts {
    pub fn from_corpus(corpus: &Corpus, rules: &TokenizerRules, filters: &FilterLists) -> Self {
        let mut cells: BTreeMap<CellKey, CellCounts> = BTreeMap::new();
        for (key, docs) in corpus.partition_index() {
            let cell = cells.entry(key.clone()).or_default();
            for &d in docs {
                for token in tokenize(&corpus.documents()[d].text, rules) {
                    cell.raw_total += 1;
                    if filters.contains(&token) {
                        continue;
                    }
                    cell.filtered_total += 1;
                    *cell.surface.entry(token).or_default() += 1;
                }
            }
        }
        Self { cells }
    }

    pub fn cells(&self) -> impl Iterator<Item = &CellKey> {
        self.cells.keys()
    }

    pub fn total(&self, key: &CellKey, denominator: Denominator) -> Option<u64> {
        self.cells.get(key).map(|c| match denominator {
            Denominator::Filtered => c.filtered_total,
            Denominator::Raw => c.raw_total,
        })
    }

    /// Occurrences of `word` in the filtered stream of a cell.
    pub fn count(&self, key: &CellKey, word: &str) -> u64 {
        self.cells
            .get(key)
            .and_then(|c| c.surface.get(word))
            .copied()
            .unwrap_or(0)
    }

    /// Frequency series of `list`; cells with a zero total are omitted.
    pub fn frequency(&self, list: &WordList, denominator: Denominator) -> Vec<FrequencyPoint> {
        let mut points = Vec::new();
        for (key, cell) in &self.cells {
            let total = match denominator {
                Denominator::Filtered => cell.filtered_total,
                Denominator::Raw => cell.raw_total,
            };
            if total == 0 {
                log::warn!("cell {key} has no tokens; frequency of `{}` omitted", list.label());
                continue;
            }
            let hits: u64 = list.words().iter().filter_map(|w| cell.surface.get(w)).sum();
            points.push(FrequencyPoint {
                source: key.source.clone(),
                year: key.year,
                list_label: list.label().into(),
                hits,
                total,
                value: hits as f64 / total as f64,
            });
        }
        points
    }
}

/// Frequency of `list` in every cell of `corpus`, counting unstemmed tokens
/// after filtering.
pub fn word_frequency(
    corpus: &Corpus,
    list: &WordList,
    rules: &TokenizerRules,
    filters: &FilterLists,
    denominator: Denominator,
) -> Vec<FrequencyPoint> {
    CellTokenCounts::from_corpus(corpus, rules, filters).frequency(list, denominator)
}
