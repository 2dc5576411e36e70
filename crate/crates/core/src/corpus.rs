//! Document collection partitioned by `(source, year)` cells.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// One article.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub source: String,
    pub year: i32,
    pub text: String,
    /// Stem ids, filled in by [`crate::text::build_vocabulary`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tokens: Option<Vec<u32>>,
}

impl Document {
    pub fn new(id: impl Into<String>, source: impl Into<String>, year: i32, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            source: source.into(),
            year,
            text: text.into(),
            tokens: None,
        }
    }
}

/// Inclusive range of accepted publication years.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearRange {
    pub first: i32,
    pub last: i32,
}

impl YearRange {
    pub const fn new(first: i32, last: i32) -> Self {
        Self { first, last }
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.first..=self.last).contains(&year)
    }

    pub fn years(&self) -> impl Iterator<Item = i32> {
        self.first..=self.last
    }
}

impl Default for YearRange {
    fn default() -> Self {
        Self::new(2008, 2018)
    }
}

/// A `(source, year)` partition cell.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellKey {
    pub source: String,
    pub year: i32,
}

impl CellKey {
    pub fn new(source: impl Into<String>, year: i32) -> Self {
        Self {
            source: source.into(),
            year,
        }
    }
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.source, self.year)
    }
}

/// Why a single record was left out of a corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectReason {
    YearOutOfRange { year: i32, range: YearRange },
    EmptyText,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::YearOutOfRange { year, range } => {
                write!(f, "year {} outside accepted range {}-{}", year, range.first, range.last)
            }
            RejectReason::EmptyText => f.write_str("text is empty after trimming"),
        }
    }
}

/// A record that was rejected; `index` is its position in the input sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub index: usize,
    pub id: String,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("duplicate document id `{id}` (records {first} and {second})")]
    DuplicateId { id: String, first: usize, second: usize },
    #[error("corpus has no valid documents")]
    Empty,
    #[error("token streams do not match the corpus ({expected} documents, {found} streams)")]
    TokenCountMismatch { expected: usize, found: usize },
}

/// Immutable document collection with its `(source, year)` index.
#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    documents: Vec<Document>,
    partition_index: BTreeMap<CellKey, Vec<usize>>,
    doc_counts: BTreeMap<CellKey, usize>,
}

impl Corpus {
    /// Validates `records` and builds the partition index.
    ///
    /// Records outside `years` or with blank text are returned as rejections;
    /// duplicate ids and an empty result are fatal.
    pub fn from_documents(records: Vec<Document>, years: YearRange) -> Result<(Corpus, Vec<Rejection>), CorpusError> {
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let mut documents = Vec::with_capacity(records.len());
        let mut rejected = Vec::new();
        for (index, doc) in records.into_iter().enumerate() {
            if let Some(&first) = seen.get(&doc.id) {
                return Err(CorpusError::DuplicateId {
                    id: doc.id,
                    first,
                    second: index,
                });
            }
            seen.insert(doc.id.clone(), index);
            let reason = if !years.contains(doc.year) {
                Some(RejectReason::YearOutOfRange {
                    year: doc.year,
                    range: years,
                })
            } else if doc.text.trim().is_empty() {
                Some(RejectReason::EmptyText)
            } else {
                None
            };
            match reason {
                Some(reason) => {
                    log::debug!("rejecting document `{}`: {}", doc.id, reason);
                    rejected.push(Rejection {
                        index,
                        id: doc.id,
                        reason,
                    });
                }
                None => documents.push(doc),
            }
        }
        if documents.is_empty() {
            return Err(CorpusError::Empty);
        }
        Ok((Self::index(documents), rejected))
    }

    fn index(documents: Vec<Document>) -> Corpus {
        let mut partition_index: BTreeMap<CellKey, Vec<usize>> = BTreeMap::new();
        for (i, doc) in documents.iter().enumerate() {
            partition_index
                .entry(CellKey::new(doc.source.clone(), doc.year))
                .or_default()
                .push(i);
        }
        let doc_counts = partition_index.iter().map(|(k, v)| (k.clone(), v.len())).collect();
        Corpus {
            documents,
            partition_index,
            doc_counts,
        }
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Documents of one cell in input order; empty when the cell is absent.
    pub fn partition(&self, source: &str, year: i32) -> Vec<&Document> {
        self.cell_indices(source, year)
            .iter()
            .map(|&i| &self.documents[i])
            .collect()
    }

    /// Indices into [`Corpus::documents`] for one cell.
    pub fn cell_indices(&self, source: &str, year: i32) -> &[usize] {
        self.partition_index
            .get(&CellKey::new(source, year))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn partition_index(&self) -> &BTreeMap<CellKey, Vec<usize>> {
        &self.partition_index
    }

    pub fn doc_counts(&self) -> &BTreeMap<CellKey, usize> {
        &self.doc_counts
    }

    pub fn sources(&self) -> BTreeSet<&str> {
        self.partition_index.keys().map(|k| k.source.as_str()).collect()
    }

    pub fn years(&self) -> BTreeSet<i32> {
        self.partition_index.keys().map(|k| k.year).collect()
    }

    /// Attaches per-document stem-id streams, in document order.
    pub fn attach_tokens(&mut self, streams: Vec<Vec<u32>>) -> Result<(), CorpusError> {
        if streams.len() != self.documents.len() {
            return Err(CorpusError::TokenCountMismatch {
                expected: self.documents.len(),
                found: streams.len(),
            });
        }
        for (doc, tokens) in self.documents.iter_mut().zip(streams) {
            doc.tokens = Some(tokens);
        }
        Ok(())
    }

    /// Stem-id streams in document order; documents without tokens yield empty streams.
    pub fn token_streams(&self) -> Vec<Vec<u32>> {
        self.documents
            .iter()
            .map(|d| d.tokens.clone().unwrap_or_default())
            .collect()
    }
}
