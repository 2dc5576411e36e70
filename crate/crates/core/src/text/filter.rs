use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::tokenize::{normalize_word, TokenizerRules};

/// Words removed before any counting or modeling.
///
/// All entries are normalized with the tokenizer rules and the three sets are
/// disjoint: a word listed in several sets is kept only in the first of
/// stopwords, curated exclusions, source-specific exclusions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FilterLists {
    stopwords: BTreeSet<String>,
    curated_exclusions: BTreeSet<String>,
    source_specific_exclusions: BTreeSet<String>,
}

fn normalize_set<'a, I>(words: I, rules: &TokenizerRules, taken: &BTreeSet<String>) -> BTreeSet<String>
where
    I: IntoIterator<Item = &'a str>,
{
    words
        .into_iter()
        .filter_map(|w| {
            let n = normalize_word(w, rules);
            if n.is_none() && !w.trim().is_empty() {
                log::warn!("filter entry `{}` is not a single token; ignored", w);
            }
            n
        })
        .filter(|w| !taken.contains(w))
        .collect()
}

impl FilterLists {
    pub fn new<'a, A, B, C>(stopwords: A, curated: B, source_specific: C, rules: &TokenizerRules) -> Self
    where
        A: IntoIterator<Item = &'a str>,
        B: IntoIterator<Item = &'a str>,
        C: IntoIterator<Item = &'a str>,
    {
        let stopwords = normalize_set(stopwords, rules, &BTreeSet::new());
        let curated_exclusions = normalize_set(curated, rules, &stopwords);
        let taken: BTreeSet<String> = stopwords.union(&curated_exclusions).cloned().collect();
        let source_specific_exclusions = normalize_set(source_specific, rules, &taken);
        Self {
            stopwords,
            curated_exclusions,
            source_specific_exclusions,
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn stopwords(&self) -> &BTreeSet<String> {
        &self.stopwords
    }

    pub fn curated_exclusions(&self) -> &BTreeSet<String> {
        &self.curated_exclusions
    }

    pub fn source_specific_exclusions(&self) -> &BTreeSet<String> {
        &self.source_specific_exclusions
    }

    pub fn contains(&self, token: &str) -> bool {
        self.stopwords.contains(token)
            || self.curated_exclusions.contains(token)
            || self.source_specific_exclusions.contains(token)
    }

    pub fn is_empty(&self) -> bool {
        self.stopwords.is_empty() && self.curated_exclusions.is_empty() && self.source_specific_exclusions.is_empty()
    }
}

/// Drops filtered tokens, preserving order.
pub fn apply_filters(tokens: Vec<String>, lists: &FilterLists) -> Vec<String> {
    if lists.is_empty() {
        return tokens;
    }
    tokens.into_iter().filter(|t| !lists.contains(t)).collect()
}

/// Parses a one-word-per-line list. Blank lines and `#` comments are skipped.
pub fn parse_word_lines(text: &str) -> Vec<&str> {
    text.lines()
        .map(|line| match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        })
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect()
}
