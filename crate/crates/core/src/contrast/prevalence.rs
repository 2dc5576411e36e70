use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::lda::TopicModel;

/// Mean topic probability over the documents of one `(source, year)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopicPrevalencePoint {
    pub source: String,
    pub year: i32,
    pub topic: usize,
    pub value: f64,
    pub n_docs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PrevalenceError {
    #[error("topic {topic} out of range (model has {topics} topics)")]
    TopicOutOfRange { topic: usize, topics: usize },
    #[error("model covers {model} documents but the corpus has {corpus}")]
    CorpusMismatch { model: usize, corpus: usize },
}

/// Prevalence of `topic` in every cell of `corpus`.
///
/// Documents that were empty after preprocessing contribute only when
/// `include_unfitted` is set. Cells without contributing documents are omitted.
pub fn topic_prevalence(
    model: &TopicModel,
    corpus: &Corpus,
    topic: usize,
    include_unfitted: bool,
) -> Result<Vec<TopicPrevalencePoint>, PrevalenceError> {
    if topic >= model.topics() {
        return Err(PrevalenceError::TopicOutOfRange {
            topic,
            topics: model.topics(),
        });
    }
    if model.num_docs() != corpus.len() {
        return Err(PrevalenceError::CorpusMismatch {
            model: model.num_docs(),
            corpus: corpus.len(),
        });
    }
    let mut points = Vec::new();
    for (cell, docs) in corpus.partition_index() {
        let mut sum = 0.0;
        let mut n = 0usize;
        for &d in docs {
            if include_unfitted || model.is_fitted(d) {
                sum += model.theta(d)[topic];
                n += 1;
            }
        }
        if n == 0 {
            log::warn!("cell {cell} has no fitted documents; prevalence omitted");
            continue;
        }
        points.push(TopicPrevalencePoint {
            source: cell.source.clone(),
            year: cell.year,
            topic,
            value: sum / n as f64,
            n_docs: n,
        });
    }
    Ok(points)
}
