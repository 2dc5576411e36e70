use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::filter::{apply_filters, FilterLists};
use super::stem::stem;
use super::tokenize::{tokenize, TokenizerRules};
use crate::corpus::Corpus;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VocabError {
    #[error("vocabulary is empty (min_count = {min_count})")]
    Empty { min_count: u64 },
    #[error("inconsistent vocabulary: {0}")]
    Inconsistent(&'static str),
}

/// Stem vocabulary with dense ids and a de-stemming table.
///
/// Ids follow the lexicographic order of the stems, so they do not depend on
/// document order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "VocabularyRepr", into = "VocabularyRepr")]
pub struct Vocabulary {
    terms: Vec<String>,
    term_to_id: BTreeMap<String, u32>,
    destem: Vec<String>,
    doc_freq: Vec<u32>,
    term_freq: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct VocabularyRepr {
    terms: Vec<String>,
    destem: Vec<String>,
    doc_freq: Vec<u32>,
    term_freq: Vec<u64>,
}

impl TryFrom<VocabularyRepr> for Vocabulary {
    type Error = VocabError;

    fn try_from(r: VocabularyRepr) -> Result<Self, VocabError> {
        Vocabulary::from_parts(r.terms, r.destem, r.doc_freq, r.term_freq)
    }
}

impl From<Vocabulary> for VocabularyRepr {
    fn from(v: Vocabulary) -> Self {
        VocabularyRepr {
            terms: v.terms,
            destem: v.destem,
            doc_freq: v.doc_freq,
            term_freq: v.term_freq,
        }
    }
}

impl Vocabulary {
    pub fn from_parts(
        terms: Vec<String>,
        destem: Vec<String>,
        doc_freq: Vec<u32>,
        term_freq: Vec<u64>,
    ) -> Result<Self, VocabError> {
        let n = terms.len();
        if destem.len() != n || doc_freq.len() != n || term_freq.len() != n {
            return Err(VocabError::Inconsistent("column lengths differ"));
        }
        let term_to_id: BTreeMap<String, u32> = terms.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        if term_to_id.len() != n {
            return Err(VocabError::Inconsistent("duplicate term"));
        }
        Ok(Self {
            terms,
            term_to_id,
            destem,
            doc_freq,
            term_freq,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn id(&self, stem: &str) -> Option<u32> {
        self.term_to_id.get(stem).copied()
    }

    pub fn term(&self, id: u32) -> Option<&str> {
        self.terms.get(id as usize).map(String::as_str)
    }

    /// Most frequent surface form of the stem `id`.
    pub fn destem(&self, id: u32) -> Option<&str> {
        self.destem.get(id as usize).map(String::as_str)
    }

    pub fn doc_freq(&self, id: u32) -> Option<u32> {
        self.doc_freq.get(id as usize).copied()
    }

    pub fn term_freq(&self, id: u32) -> Option<u64> {
        self.term_freq.get(id as usize).copied()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }
}

/// Tokenize, filter and stem one text; returns `(surface, stem)` pairs.
pub(crate) fn stemmed_tokens(text: &str, rules: &TokenizerRules, lists: &FilterLists) -> Vec<(String, String)> {
    apply_filters(tokenize(text, rules), lists)
        .into_iter()
        .map(|t| {
            let s = stem(&t);
            (t, s)
        })
        .collect()
}

/// Builds the stem vocabulary over `corpus` and attaches stem-id streams to
/// every document. Stems seen fewer than `min_count` times are dropped from
/// both.
pub fn build_vocabulary(
    corpus: &mut Corpus,
    rules: &TokenizerRules,
    lists: &FilterLists,
    min_count: u64,
) -> Result<Vocabulary, VocabError> {
    let docs: Vec<Vec<(String, String)>> = corpus
        .documents()
        .iter()
        .map(|d| stemmed_tokens(&d.text, rules, lists))
        .collect();

    // stem -> (corpus count, doc count, surface counts)
    let mut stats: BTreeMap<&str, (u64, u32, BTreeMap<&str, u64>)> = BTreeMap::new();
    for doc in &docs {
        let mut seen_here: BTreeSet<&str> = BTreeSet::new();
        for (surface, s) in doc {
            let entry = stats.entry(s.as_str()).or_default();
            entry.0 += 1;
            if seen_here.insert(s.as_str()) {
                entry.1 += 1;
            }
            *entry.2.entry(surface.as_str()).or_default() += 1;
        }
    }

    let mut terms = Vec::new();
    let mut destem = Vec::new();
    let mut doc_freq = Vec::new();
    let mut term_freq = Vec::new();
    for (s, (count, df, surfaces)) in &stats {
        if *count < min_count {
            continue;
        }
        // max count, ties to the lexicographically smallest surface
        let modal = surfaces
            .iter()
            .fold(None::<(&str, u64)>, |best, (w, c)| match best {
                Some((_, bc)) if bc >= *c => best,
                _ => Some((w, *c)),
            })
            .map(|(w, _)| w)
            .unwrap_or(s);
        terms.push(String::from(*s));
        destem.push(String::from(modal));
        doc_freq.push(*df);
        term_freq.push(*count);
    }
    if terms.is_empty() {
        return Err(VocabError::Empty { min_count });
    }
    let vocab = Vocabulary::from_parts(terms, destem, doc_freq, term_freq)?;
    let streams: Vec<Vec<u32>> = docs
        .iter()
        .map(|doc| doc.iter().filter_map(|(_, s)| vocab.id(s)).collect())
        .collect();
    corpus
        .attach_tokens(streams)
        .map_err(|_| VocabError::Inconsistent("token stream count"))?;
    Ok(vocab)
}
