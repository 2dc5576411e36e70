//! JSON-lines corpus files: one `{"id", "source", "year", "text"}` object per line.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use diachron_core::corpus::{CorpusError, Rejection};
use diachron_core::{Corpus, Document, YearRange};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

const KEYS: [&str; 4] = ["id", "source", "year", "text"];

/// A record accepted by the parser but left out of the corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineRejection {
    pub line: usize,
    pub rejection: Rejection,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub records: usize,
    pub rejected: Vec<LineRejection>,
    /// Keys outside the schema that were ignored.
    pub unknown_keys: BTreeSet<String>,
}

#[derive(Clone, Debug)]
pub struct LoadedCorpus {
    pub corpus: Corpus,
    pub report: LoadReport,
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> std::result::Result<&'a Value, String> {
    obj.get(key).ok_or_else(|| format!("missing field `{key}`"))
}

fn string_field(obj: &Map<String, Value>, key: &str) -> std::result::Result<String, String> {
    field(obj, key)?
        .as_str()
        .map(str::to_owned)
        .ok_or_else(|| format!("field `{key}` is not a string"))
}

fn parse_record(line: &str, unknown: &mut BTreeSet<String>) -> std::result::Result<Document, String> {
    let value: Value = serde_json::from_str(line).map_err(|e| format!("invalid JSON: {e}"))?;
    let Value::Object(obj) = value else {
        return Err("record is not a JSON object".into());
    };
    for key in obj.keys().filter(|k| !KEYS.contains(&k.as_str())) {
        unknown.insert(key.clone());
    }
    let year = field(&obj, "year")?;
    let year = year
        .as_i64()
        .and_then(|y| i32::try_from(y).ok())
        .ok_or_else(|| format!("field `year` is not an integer year: {year}"))?;
    Ok(Document::new(
        string_field(&obj, "id")?,
        string_field(&obj, "source")?,
        year,
        string_field(&obj, "text")?,
    ))
}

/// Parses corpus records from `text`; `origin` names the input in messages.
///
/// Any malformed record fails the whole load, listing every bad line. Records
/// outside `years` or with blank text are skipped and reported.
pub fn parse_corpus(text: &str, origin: &str, years: YearRange) -> Result<LoadedCorpus> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut docs = Vec::new();
    let mut lines = Vec::new();
    let mut errors = Vec::new();
    let mut unknown = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match parse_record(line, &mut unknown) {
            Ok(doc) => {
                docs.push(doc);
                lines.push(i + 1);
            }
            Err(msg) => errors.push(format!("{origin}:{}: {msg}", i + 1)),
        }
    }
    if !errors.is_empty() {
        return Err(Error::data(format!(
            "{} malformed record(s)\n  {}",
            errors.len(),
            errors.join("\n  ")
        )));
    }
    for key in &unknown {
        log::warn!("{origin}: ignoring unknown key `{key}`");
    }
    let records = docs.len();
    let (corpus, rejected) = Corpus::from_documents(docs, years).map_err(|e| match e {
        CorpusError::DuplicateId { id, first, second } => Error::data(format!(
            "{origin}: duplicate document id `{id}` on lines {} and {}",
            lines[first], lines[second]
        )),
        CorpusError::Empty => Error::data(format!("{origin}: no valid documents")),
        other => Error::Internal(other.to_string()),
    })?;
    let rejected: Vec<LineRejection> = rejected
        .into_iter()
        .map(|r| LineRejection {
            line: lines[r.index],
            rejection: r,
        })
        .collect();
    for r in &rejected {
        log::warn!(
            "{origin}:{}: skipping document `{}`: {}",
            r.line,
            r.rejection.id,
            r.rejection.reason
        );
    }
    Ok(LoadedCorpus {
        corpus,
        report: LoadReport {
            records,
            rejected,
            unknown_keys: unknown,
        },
    })
}

pub fn load_corpus(path: &Path, years: YearRange) -> Result<LoadedCorpus> {
    let text = fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
    parse_corpus(&text, &path.display().to_string(), years)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<LoadedCorpus> {
        parse_corpus(text, "c.jsonl", YearRange::default())
    }

    #[test]
    fn singleton() {
        let c = parse(r#"{"id":"a","source":"x","year":2010,"text":"hola mundo"}"#).unwrap();
        assert_eq!(c.corpus.len(), 1);
        assert_eq!(c.corpus.partition("x", 2010).len(), 1);
    }

    #[test]
    fn malformed_records_report_line_numbers() {
        let text = concat!(
            r#"{"id":"a","source":"x","year":2010,"text":"uno"}"#,
            "\n\n",
            r#"{"id":"b","source":"x","year":"2010","text":"dos"}"#,
            "\n",
            r#"{"id":"c","source":"x","text":"tres"}"#,
            "\nnot json\n"
        );
        let msg = parse(text).unwrap_err().to_string();
        assert!(msg.contains("c.jsonl:3: field `year`"), "{msg}");
        assert!(msg.contains("c.jsonl:4: missing field `year`"), "{msg}");
        assert!(msg.contains("c.jsonl:5: invalid JSON"), "{msg}");
    }

    #[test]
    fn duplicate_ids_are_fatal_with_lines() {
        let text = concat!(
            r#"{"id":"a","source":"x","year":2010,"text":"uno"}"#,
            "\n",
            r#"{"id":"b","source":"x","year":2010,"text":"dos"}"#,
            "\n",
            r#"{"id":"a","source":"y","year":2011,"text":"tres"}"#
        );
        let e = parse(text).unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().contains("lines 1 and 3"), "{e}");
    }

    #[test]
    fn out_of_range_and_blank_records_are_reported() {
        let text = concat!(
            r#"{"id":"a","source":"x","year":2001,"text":"uno"}"#,
            "\n",
            r#"{"id":"b","source":"x","year":2010,"text":"  "}"#,
            "\n",
            r#"{"id":"c","source":"x","year":2010,"text":"tres","url":"u"}"#
        );
        let c = parse(text).unwrap();
        assert_eq!(c.corpus.len(), 1);
        let lines: Vec<usize> = c.report.rejected.iter().map(|r| r.line).collect();
        assert_eq!(lines, vec![1, 2]);
        assert!(c.report.unknown_keys.contains("url"));
        assert_eq!(c.report.records, 3);
    }

    #[test]
    fn empty_input_is_fatal() {
        assert_eq!(parse("").unwrap_err().exit_code(), 3);
        assert_eq!(parse("\n\n").unwrap_err().exit_code(), 3);
    }

    #[test]
    fn loading_is_deterministic() {
        let text: String = (0..100)
            .map(|i| {
                format!(
                    "{{\"id\":\"d{i}\",\"source\":\"{}\",\"year\":{},\"text\":\"w{i}\"}}\n",
                    ["a", "b"][i % 2],
                    2010 + i % 5
                )
            })
            .collect();
        let a = parse(&text).unwrap().corpus;
        let b = parse(&text).unwrap().corpus;
        assert_eq!(a, b);
        assert_eq!(a.doc_counts().values().sum::<usize>(), 100);
    }
}
