use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Normalization applied to every token and every filter or list entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TokenizerRules {
    pub lowercase: bool,
    /// Drops acute accents (á é í ó ú); ñ and ü are kept.
    pub strip_acute_accents: bool,
    /// Minimum length in characters.
    pub min_token_length: usize,
}

impl Default for TokenizerRules {
    fn default() -> Self {
        Self {
            lowercase: true,
            strip_acute_accents: true,
            min_token_length: 1,
        }
    }
}

fn strip_acute(c: char) -> char {
    match c {
        'á' => 'a',
        'é' => 'e',
        'í' => 'i',
        'ó' => 'o',
        'ú' => 'u',
        'Á' => 'A',
        'É' => 'E',
        'Í' => 'I',
        'Ó' => 'O',
        'Ú' => 'U',
        _ => c,
    }
}

fn push_normalized(out: &mut String, c: char, rules: &TokenizerRules) {
    let mut push = |c: char| out.push(if rules.strip_acute_accents { strip_acute(c) } else { c });
    if rules.lowercase {
        c.to_lowercase().for_each(&mut push);
    } else {
        push(c);
    }
}

/// Splits `text` on every non-alphabetic character and normalizes the pieces.
pub fn tokenize(text: &str, rules: &TokenizerRules) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut flush = |current: &mut String| {
        if !current.is_empty() {
            if current.chars().count() >= rules.min_token_length {
                tokens.push(core::mem::take(current));
            } else {
                current.clear();
            }
        }
    };
    for c in text.chars() {
        if c.is_alphabetic() {
            push_normalized(&mut current, c, rules);
        } else {
            flush(&mut current);
        }
    }
    flush(&mut current);
    tokens
}

/// Normalizes a single dictionary entry (stopword, list word) the way tokens are.
///
/// Returns `None` when the entry is not exactly one token under `rules`.
pub fn normalize_word(word: &str, rules: &TokenizerRules) -> Option<String> {
    let mut tokens = tokenize(word, rules);
    if tokens.len() == 1 {
        tokens.pop()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn empty_input() {
        assert!(tokenize("", &TokenizerRules::default()).is_empty());
        assert!(tokenize("  ,.;123 ", &TokenizerRules::default()).is_empty());
    }

    #[test]
    fn accents_case_and_punctuation() {
        assert_eq!(
            tokenize("Diseño y TECNOLOGÍA.", &TokenizerRules::default()),
            vec!["diseño", "y", "tecnologia"]
        );
        assert_eq!(
            tokenize("PINGÜINO, ¿Qué?", &TokenizerRules::default()),
            vec!["pingüino", "que"]
        );
    }

    #[test]
    fn digits_and_apostrophes_split() {
        assert_eq!(
            tokenize("mp3 l'oreal", &TokenizerRules::default()),
            vec!["mp", "l", "oreal"]
        );
    }

    #[test]
    fn min_length_and_flags() {
        let rules = TokenizerRules {
            lowercase: false,
            strip_acute_accents: false,
            min_token_length: 2,
        };
        assert_eq!(tokenize("Diseño y TECNOLOGÍA.", &rules), vec!["Diseño", "TECNOLOGÍA"]);
    }

    #[test]
    fn normalize_single_word() {
        let rules = TokenizerRules::default();
        assert_eq!(normalize_word(" Mamá ", &rules).as_deref(), Some("mama"));
        assert_eq!(normalize_word("dos palabras", &rules), None);
        assert_eq!(normalize_word("", &rules), None);
    }

    fn normalized_letters(text: &str, rules: &TokenizerRules) -> Vec<char> {
        let mut out = String::new();
        for c in text.chars().filter(|c| c.is_alphabetic()) {
            push_normalized(&mut out, c, rules);
        }
        out.chars().collect()
    }

    fn is_subsequence(needle: &[char], haystack: &[char]) -> bool {
        let mut it = haystack.iter();
        needle.iter().all(|c| it.any(|h| h == c))
    }

    proptest! {
        #[test]
        fn tokens_are_subsequence_of_letters(text in "[a-zA-ZñÑáéíóúÁÉÍÓÚü0-9 ,.;!¿?'\\-]{0,60}", min in 1usize..4) {
            let rules = TokenizerRules { min_token_length: min, ..TokenizerRules::default() };
            let tokens = tokenize(&text, &rules);
            let joined: Vec<char> = tokens.iter().flat_map(|t| t.chars()).collect();
            prop_assert!(is_subsequence(&joined, &normalized_letters(&text, &rules)));
            for t in &tokens {
                prop_assert!(t.chars().all(char::is_alphabetic));
                prop_assert!(t.chars().count() >= min);
            }
        }
    }
}
