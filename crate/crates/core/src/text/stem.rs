//! Snowball-compatible Spanish stemmer.
//!
//! Follows the Snowball `spanish` algorithm: mark the RV, R1 and R2 regions,
//! remove attached pronouns, then one of standard / y-verb / verb suffixes,
//! then a residual suffix, and finally drop acute accents.

use alloc::string::String;
use alloc::vec::Vec;

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'á' | 'é' | 'í' | 'ó' | 'ú' | 'ü')
}

struct Regions {
    rv: usize,
    r1: usize,
    r2: usize,
}

fn find_from(w: &[char], start: usize, pred: impl Fn(char) -> bool) -> Option<usize> {
    (start..w.len()).find(|&i| pred(w[i]))
}

fn rv_start(w: &[char]) -> usize {
    let n = w.len();
    if n < 2 {
        return n;
    }
    let (c0, c1) = (is_vowel(w[0]), is_vowel(w[1]));
    let found = match (c0, c1) {
        // consonant after the first letter: region after the next vowel
        (true, false) | (false, false) => find_from(w, 2, is_vowel).map(|i| i + 1),
        // two leading vowels: region after the next consonant
        (true, true) => find_from(w, 2, |c| !is_vowel(c)).map(|i| i + 1),
        // consonant-vowel: region after the third letter
        (false, true) => (n > 2).then_some(3),
    };
    found.unwrap_or(n)
}

/// Position after the first non-vowel that follows a vowel, starting at `from`.
fn next_region(w: &[char], from: usize) -> usize {
    find_from(w, from, is_vowel)
        .and_then(|v| find_from(w, v + 1, |c| !is_vowel(c)))
        .map_or(w.len(), |i| i + 1)
}

fn regions(w: &[char]) -> Regions {
    let r1 = next_region(w, 0);
    let r2 = if r1 < w.len() { next_region(w, r1) } else { w.len() };
    Regions {
        rv: rv_start(w),
        r1,
        r2,
    }
}

fn ends_with(w: &[char], suffix: &str) -> bool {
    let n = suffix.chars().count();
    n <= w.len() && w[w.len() - n..].iter().copied().eq(suffix.chars())
}

/// Longest suffix of `w` from `table` starting at or after `lo`.
fn longest_suffix<T: Copy>(w: &[char], lo: usize, table: &[(&str, T)]) -> Option<(usize, T)> {
    let mut best: Option<(usize, T)> = None;
    for &(suffix, tag) in table {
        let len = suffix.chars().count();
        if len > w.len() || w.len() - len < lo || !ends_with(w, suffix) {
            continue;
        }
        let start = w.len() - len;
        if best.is_none_or(|(s, _)| start < s) {
            best = Some((start, tag));
        }
    }
    best
}

fn replace_tail(w: &mut Vec<char>, from: usize, with: &str) {
    w.truncate(from);
    w.extend(with.chars());
}

const PRONOUNS: &[(&str, ())] = &[
    ("me", ()),
    ("se", ()),
    ("sela", ()),
    ("selo", ()),
    ("selas", ()),
    ("selos", ()),
    ("la", ()),
    ("le", ()),
    ("lo", ()),
    ("las", ()),
    ("les", ()),
    ("los", ()),
    ("nos", ()),
];

#[derive(Clone, Copy)]
enum Before {
    Replace(&'static str),
    Delete,
    AfterU,
}

const PRONOUN_HOSTS: &[(&str, Before)] = &[
    ("iéndo", Before::Replace("iendo")),
    ("ándo", Before::Replace("ando")),
    ("ár", Before::Replace("ar")),
    ("ér", Before::Replace("er")),
    ("ír", Before::Replace("ir")),
    ("ando", Before::Delete),
    ("iendo", Before::Delete),
    ("ar", Before::Delete),
    ("er", Before::Delete),
    ("ir", Before::Delete),
    ("yendo", Before::AfterU),
];

fn attached_pronoun(w: &mut Vec<char>, reg: &Regions) {
    let Some((pronoun, ())) = longest_suffix(w, 0, PRONOUNS) else {
        return;
    };
    let Some((host, action)) = longest_suffix(&w[..pronoun], 0, PRONOUN_HOSTS) else {
        return;
    };
    if host < reg.rv {
        return;
    }
    match action {
        Before::Replace(plain) => replace_tail(w, host, plain),
        Before::Delete => w.truncate(pronoun),
        Before::AfterU => {
            if host > 0 && w[host - 1] == 'u' {
                w.truncate(pronoun);
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Standard {
    Delete,
    DeleteIc,
    Log,
    U,
    Ente,
    Amente,
    Mente,
    Idad,
    Iv,
}

const STANDARD: &[(&str, Standard)] = &[
    ("ica", Standard::Delete),
    ("icas", Standard::Delete),
    ("ico", Standard::Delete),
    ("icos", Standard::Delete),
    ("osa", Standard::Delete),
    ("osas", Standard::Delete),
    ("oso", Standard::Delete),
    ("osos", Standard::Delete),
    ("ista", Standard::Delete),
    ("istas", Standard::Delete),
    ("anza", Standard::Delete),
    ("anzas", Standard::Delete),
    ("able", Standard::Delete),
    ("ables", Standard::Delete),
    ("ible", Standard::Delete),
    ("ibles", Standard::Delete),
    ("ismo", Standard::Delete),
    ("ismos", Standard::Delete),
    ("amiento", Standard::Delete),
    ("amientos", Standard::Delete),
    ("imiento", Standard::Delete),
    ("imientos", Standard::Delete),
    ("ancia", Standard::DeleteIc),
    ("ancias", Standard::DeleteIc),
    ("adora", Standard::DeleteIc),
    ("adoras", Standard::DeleteIc),
    ("ador", Standard::DeleteIc),
    ("adores", Standard::DeleteIc),
    ("ante", Standard::DeleteIc),
    ("antes", Standard::DeleteIc),
    ("acion", Standard::DeleteIc),
    ("ación", Standard::DeleteIc),
    ("aciones", Standard::DeleteIc),
    ("logía", Standard::Log),
    ("logías", Standard::Log),
    ("ucion", Standard::U),
    ("ución", Standard::U),
    ("uciones", Standard::U),
    ("encia", Standard::Ente),
    ("encias", Standard::Ente),
    ("amente", Standard::Amente),
    ("mente", Standard::Mente),
    ("idad", Standard::Idad),
    ("idades", Standard::Idad),
    ("iva", Standard::Iv),
    ("ivas", Standard::Iv),
    ("ivo", Standard::Iv),
    ("ivos", Standard::Iv),
];

const AMENTE_PREFIX: &[(&str, bool)] = &[("ic", false), ("ad", false), ("os", false), ("iv", true)];
const MENTE_PREFIX: &[(&str, ())] = &[("able", ()), ("ible", ()), ("ante", ())];
const IDAD_PREFIX: &[(&str, ())] = &[("ic", ()), ("abil", ()), ("iv", ())];

/// Deletes `suffix` at the end of `w` when it starts inside R2.
fn delete_in_r2(w: &mut Vec<char>, suffix: &str, r2: usize) -> bool {
    let len = suffix.chars().count();
    if ends_with(w, suffix) && w.len() - len >= r2 {
        w.truncate(w.len() - len);
        true
    } else {
        false
    }
}

fn delete_longest_in_r2<T: Copy>(w: &mut Vec<char>, table: &[(&str, T)], r2: usize) -> Option<T> {
    let (start, tag) = longest_suffix(w, 0, table)?;
    if start < r2 {
        return None;
    }
    w.truncate(start);
    Some(tag)
}

fn standard_suffix(w: &mut Vec<char>, reg: &Regions) -> bool {
    let Some((start, kind)) = longest_suffix(w, 0, STANDARD) else {
        return false;
    };
    if kind == Standard::Amente {
        if start < reg.r1 {
            return false;
        }
    } else if start < reg.r2 {
        return false;
    }
    match kind {
        Standard::Delete => w.truncate(start),
        Standard::DeleteIc => {
            w.truncate(start);
            delete_in_r2(w, "ic", reg.r2);
        }
        Standard::Log => replace_tail(w, start, "log"),
        Standard::U => replace_tail(w, start, "u"),
        Standard::Ente => replace_tail(w, start, "ente"),
        Standard::Amente => {
            w.truncate(start);
            if delete_longest_in_r2(w, AMENTE_PREFIX, reg.r2) == Some(true) {
                delete_in_r2(w, "at", reg.r2);
            }
        }
        Standard::Mente => {
            w.truncate(start);
            delete_longest_in_r2(w, MENTE_PREFIX, reg.r2);
        }
        Standard::Idad => {
            w.truncate(start);
            delete_longest_in_r2(w, IDAD_PREFIX, reg.r2);
        }
        Standard::Iv => {
            w.truncate(start);
            delete_in_r2(w, "at", reg.r2);
        }
    }
    true
}

const Y_VERB: &[(&str, ())] = &[
    ("ya", ()),
    ("ye", ()),
    ("yan", ()),
    ("yen", ()),
    ("yeron", ()),
    ("yendo", ()),
    ("yo", ()),
    ("yas", ()),
    ("yes", ()),
    ("yais", ()),
    ("yamos", ()),
    ("yó", ()),
];

fn y_verb_suffix(w: &mut Vec<char>, reg: &Regions) -> bool {
    if w.len() < reg.rv {
        return false;
    }
    match longest_suffix(w, reg.rv, Y_VERB) {
        Some((start, ())) if start > 0 && w[start - 1] == 'u' => {
            w.truncate(start);
            true
        }
        _ => false,
    }
}

/// `true` marks endings that also take a preceding `u` when it follows `g`.
const VERB: &[(&str, bool)] = &[
    ("en", true),
    ("es", true),
    ("éis", true),
    ("emos", true),
    ("aba", false),
    ("ada", false),
    ("ida", false),
    ("ara", false),
    ("iera", false),
    ("ía", false),
    ("aría", false),
    ("ería", false),
    ("iría", false),
    ("ad", false),
    ("ed", false),
    ("id", false),
    ("ase", false),
    ("iese", false),
    ("aste", false),
    ("iste", false),
    ("an", false),
    ("aban", false),
    ("aran", false),
    ("ieran", false),
    ("ían", false),
    ("arían", false),
    ("erían", false),
    ("irían", false),
    ("asen", false),
    ("iesen", false),
    ("aron", false),
    ("ieron", false),
    ("arán", false),
    ("erán", false),
    ("irán", false),
    ("ado", false),
    ("ido", false),
    ("ando", false),
    ("iendo", false),
    ("ar", false),
    ("er", false),
    ("ir", false),
    ("as", false),
    ("abas", false),
    ("adas", false),
    ("idas", false),
    ("aras", false),
    ("ieras", false),
    ("ías", false),
    ("arías", false),
    ("erías", false),
    ("irías", false),
    ("ases", false),
    ("ieses", false),
    ("abais", false),
    ("arais", false),
    ("ierais", false),
    ("íais", false),
    ("aríais", false),
    ("eríais", false),
    ("iríais", false),
    ("aseis", false),
    ("ieseis", false),
    ("asteis", false),
    ("isteis", false),
    ("áis", false),
    ("aréis", false),
    ("eréis", false),
    ("iréis", false),
    ("ados", false),
    ("idos", false),
    ("amos", false),
    ("ábamos", false),
    ("áramos", false),
    ("iéramos", false),
    ("íamos", false),
    ("aríamos", false),
    ("eríamos", false),
    ("iríamos", false),
    ("aremos", false),
    ("eremos", false),
    ("iremos", false),
    ("ásemos", false),
    ("iésemos", false),
    ("imos", false),
    ("arás", false),
    ("erás", false),
    ("irás", false),
    ("ís", false),
    ("ará", false),
    ("erá", false),
    ("irá", false),
    ("aré", false),
    ("eré", false),
    ("iré", false),
    ("ió", false),
];

fn verb_suffix(w: &mut Vec<char>, reg: &Regions) -> bool {
    if w.len() < reg.rv {
        return false;
    }
    let Some((start, after_gu)) = longest_suffix(w, reg.rv, VERB) else {
        return false;
    };
    if after_gu && start >= 2 && w[start - 1] == 'u' && w[start - 2] == 'g' {
        w.truncate(start - 1);
    } else {
        w.truncate(start);
    }
    true
}

const RESIDUAL: &[(&str, bool)] = &[
    ("a", false),
    ("o", false),
    ("os", false),
    ("á", false),
    ("í", false),
    ("ó", false),
    ("e", true),
    ("é", true),
];

fn residual_suffix(w: &mut Vec<char>, reg: &Regions) {
    let Some((start, is_e)) = longest_suffix(w, 0, RESIDUAL) else {
        return;
    };
    if start < reg.rv {
        return;
    }
    w.truncate(start);
    if is_e && start >= 2 && w[start - 1] == 'u' && w[start - 2] == 'g' && start > reg.rv {
        w.truncate(start - 1);
    }
}

fn drop_acute(c: char) -> char {
    match c {
        'á' => 'a',
        'é' => 'e',
        'í' => 'i',
        'ó' => 'o',
        'ú' => 'u',
        _ => c,
    }
}

/// Stems one lowercase Spanish word.
pub fn stem(word: &str) -> String {
    let mut w: Vec<char> = word.chars().collect();
    let reg = regions(&w);
    attached_pronoun(&mut w, &reg);
    if !standard_suffix(&mut w, &reg) && !y_verb_suffix(&mut w, &reg) {
        verb_suffix(&mut w, &reg);
    }
    residual_suffix(&mut w, &reg);
    w.into_iter().map(drop_acute).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regions_follow_the_snowball_definition() {
        let chars: Vec<char> = "macho".chars().collect();
        assert_eq!(rv_start(&chars), 3);
        let chars: Vec<char> = "oliva".chars().collect();
        assert_eq!(rv_start(&chars), 3);
        let chars: Vec<char> = "trabajo".chars().collect();
        assert_eq!(rv_start(&chars), 3);
        let chars: Vec<char> = "áureo".chars().collect();
        assert_eq!(rv_start(&chars), 3);
        let chars: Vec<char> = "beautiful".chars().collect();
        let r = regions(&chars);
        assert_eq!((r.r1, r.r2), (5, 7));
    }

    #[test]
    fn short_words_untouched() {
        assert_eq!(stem("a"), "a");
        assert_eq!(stem(""), "");
        assert_eq!(stem("y"), "y");
    }

    #[test]
    fn known_outputs() {
        for (w, s) in [
            ("niños", "niñ"),
            ("niñas", "niñ"),
            ("familia", "famili"),
            ("tecnología", "tecnolog"),
            ("años", "años"),
            ("diseño", "diseñ"),
            ("hijos", "hij"),
        ] {
            assert_eq!(stem(w), s, "{w}");
        }
    }
}
