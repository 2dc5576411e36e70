//! Per-cell topic prevalence, word-list frequency and between-source tests.

mod compare;
mod fisher;
mod frequency;
mod prevalence;
mod wordlist;

pub use compare::{compare_sources, SignificanceResult};
pub use fisher::fisher_exact_two_sided;
pub use frequency::{word_frequency, CellTokenCounts, Denominator, FrequencyPoint};
pub use prevalence::{topic_prevalence, PrevalenceError, TopicPrevalencePoint};
pub use wordlist::{WordList, WordListError};
