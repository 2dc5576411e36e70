//! Algorithms for contrasting two sources of a dated text corpus.
//!
//! The pipeline is: build a [`corpus::Corpus`] partitioned by `(source, year)`,
//! preprocess Spanish text with [`text`], fit a pooled LDA topic model with
//! [`lda`], then measure per-cell topic prevalence and word-list frequency and
//! test between-source differences with [`contrast`]. [`smoothing`] provides the
//! LOESS curves and confidence bands used for reporting.
//!
//! The crate is `no_std` and only needs `alloc`; file formats, configuration and
//! the command-line driver live in the `diachron` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod contrast;
pub mod corpus;
pub mod lda;
pub mod smoothing;
pub mod special;
pub mod text;

pub use contrast::{
    compare_sources, fisher_exact_two_sided, topic_prevalence, word_frequency, CellTokenCounts, Denominator,
    FrequencyPoint, SignificanceResult, TopicPrevalencePoint, WordList,
};
pub use corpus::{CellKey, Corpus, Document, YearRange};
pub use lda::{fit_lda, LdaConfig, LdaState, TopicModel};
pub use smoothing::{loess_eval, loess_fit, SmoothConfig, SmoothError, SmoothedSeries};
pub use text::{build_vocabulary, stem, tokenize, FilterLists, TokenizerRules, Vocabulary};
