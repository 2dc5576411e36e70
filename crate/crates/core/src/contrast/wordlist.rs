use alloc::collections::BTreeSet;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use crate::text::{normalize_word, TokenizerRules};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordListError {
    #[error("word list has an empty label")]
    EmptyLabel,
    #[error("word list `{0}` has no words")]
    NoWords(String),
    #[error("word list `{label}`: entry `{word}` is not a single word")]
    BadWord { label: String, word: String },
    #[error("word list `{label}`: `{word}` appears more than once after normalization")]
    Duplicate { label: String, word: String },
}

/// A named, pre-registered set of surface words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordList {
    label: String,
    words: BTreeSet<String>,
    provenance: Option<String>,
}

impl WordList {
    /// Normalizes `words` with `rules`; rejects empty lists, multi-token
    /// entries and duplicates.
    pub fn new<'a>(
        label: impl Into<String>,
        words: impl IntoIterator<Item = &'a str>,
        provenance: Option<String>,
        rules: &TokenizerRules,
    ) -> Result<Self, WordListError> {
        let label = label.into();
        if label.trim().is_empty() {
            return Err(WordListError::EmptyLabel);
        }
        let mut set = BTreeSet::new();
        for w in words {
            let n = normalize_word(w, rules).ok_or_else(|| WordListError::BadWord {
                label: label.clone(),
                word: w.into(),
            })?;
            if !set.insert(n) {
                return Err(WordListError::Duplicate { label, word: w.into() });
            }
        }
        if set.is_empty() {
            return Err(WordListError::NoWords(label));
        }
        Ok(Self {
            label,
            words: set,
            provenance: provenance.filter(|p| !p.trim().is_empty()),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn words(&self) -> &BTreeSet<String> {
        &self.words
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_entries() {
        let l = WordList::new("family", ["Mamá", "papá", "hijos"], None, &TokenizerRules::default()).unwrap();
        assert!(l.contains("mama") && l.contains("papa") && l.contains("hijos"));
        assert_eq!(l.provenance(), None);
    }

    #[test]
    fn rejects_bad_lists() {
        let r = TokenizerRules::default();
        assert_eq!(
            WordList::new("x", [], None, &r).unwrap_err(),
            WordListError::NoWords("x".into())
        );
        assert_eq!(
            WordList::new(" ", ["a"], None, &r).unwrap_err(),
            WordListError::EmptyLabel
        );
        assert!(matches!(
            WordList::new("x", ["mamá", "mama"], None, &r),
            Err(WordListError::Duplicate { .. })
        ));
        assert!(matches!(
            WordList::new("x", ["dos palabras"], None, &r),
            Err(WordListError::BadWord { .. })
        ));
    }
}
