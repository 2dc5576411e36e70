//! Spanish text preprocessing: tokenization, filtering, stemming and vocabulary.

mod filter;
mod stem;
mod tokenize;
mod vocab;

pub use filter::{apply_filters, parse_word_lines, FilterLists};
pub use stem::stem;
pub use tokenize::{normalize_word, tokenize, TokenizerRules};
pub use vocab::{build_vocabulary, VocabError, Vocabulary};
