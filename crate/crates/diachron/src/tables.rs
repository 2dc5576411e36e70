//! CSV tables: topic summaries, prevalence and frequency series, test results.

use std::path::Path;

use diachron_core::{FrequencyPoint, SignificanceResult, TopicPrevalencePoint};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::artifacts::write_bytes;
use crate::error::{Error, Result};

/// One row of `prevalence.csv` or `frequency.csv`.
///
/// Prevalence rows leave `hits`, `p_value` and `significant` empty and put
/// the number of averaged documents in `total`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub list_or_topic: String,
    pub source: String,
    pub year: i32,
    pub hits: Option<u64>,
    pub total: Option<u64>,
    pub value: f64,
    pub p_value: Option<f64>,
    pub significant: Option<bool>,
}

impl SeriesRow {
    pub fn prevalence(label: &str, p: &TopicPrevalencePoint) -> Self {
        Self {
            list_or_topic: label.into(),
            source: p.source.clone(),
            year: p.year,
            hits: None,
            total: Some(p.n_docs as u64),
            value: p.value,
            p_value: None,
            significant: None,
        }
    }

    /// A frequency row, with the test result of its year when there is one.
    pub fn frequency(p: &FrequencyPoint, test: Option<&SignificanceResult>) -> Self {
        Self {
            list_or_topic: p.list_label.clone(),
            source: p.source.clone(),
            year: p.year,
            hits: Some(p.hits),
            total: Some(p.total),
            value: p.value,
            p_value: test.map(|t| t.p_value),
            significant: test.map(|t| t.significant),
        }
    }
}

/// One row of `significance.csv`: the 2×2 table and its two-sided p-value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignificanceRow {
    pub list: String,
    pub year: i32,
    pub source_a: String,
    pub source_b: String,
    pub hits_a: u64,
    pub other_a: u64,
    pub hits_b: u64,
    pub other_b: u64,
    pub p_value: f64,
    pub significant: bool,
}

impl From<&SignificanceResult> for SignificanceRow {
    fn from(r: &SignificanceResult) -> Self {
        let [hits_a, other_a, hits_b, other_b] = r.table;
        Self {
            list: r.list_label.clone(),
            year: r.year,
            source_a: r.source_a.clone(),
            source_b: r.source_b.clone(),
            hits_a,
            other_a,
            hits_b,
            other_b,
            p_value: r.p_value,
            significant: r.significant,
        }
    }
}

fn csv_bytes<T: Serialize>(rows: &[T], header: &[&str]) -> Result<Vec<u8>> {
    // explicit header so an empty table still names its columns
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).map_err(|e| Error::Internal(e.to_string()))?;
    for row in rows {
        w.serialize(row).map_err(|e| Error::Internal(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Error::Internal(e.to_string()))
}

pub const SERIES_HEADER: [&str; 8] = [
    "list_or_topic",
    "source",
    "year",
    "hits",
    "total",
    "value",
    "p_value",
    "significant",
];

pub const SIGNIFICANCE_HEADER: [&str; 10] = [
    "list",
    "year",
    "source_a",
    "source_b",
    "hits_a",
    "other_a",
    "hits_b",
    "other_b",
    "p_value",
    "significant",
];

pub fn write_series(path: &Path, rows: &[SeriesRow]) -> Result<String> {
    write_bytes(path, &csv_bytes(rows, &SERIES_HEADER)?)
}

pub fn write_significance(path: &Path, rows: &[SignificanceRow]) -> Result<String> {
    write_bytes(path, &csv_bytes(rows, &SIGNIFICANCE_HEADER)?)
}

/// `topic,word_1,...,word_n` with one row per topic.
pub fn write_topics(path: &Path, topics: &[Vec<String>]) -> Result<String> {
    let width = topics.iter().map(Vec::len).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![String::from("topic")];
    header.extend((1..=width).map(|i| format!("word_{i}")));
    w.write_record(&header).map_err(|e| Error::Internal(e.to_string()))?;
    for (k, words) in topics.iter().enumerate() {
        let mut row = vec![k.to_string()];
        row.extend(words.iter().cloned());
        row.resize(width + 1, String::new());
        w.write_record(&row).map_err(|e| Error::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    write_bytes(path, &bytes)
}

fn read_rows<T: DeserializeOwned>(path: &Path, header: &[&str], stage: &str) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)
        .map_err(|e| Error::data(format!("missing table {} ({e}); run `{stage}` first", path.display())))?;
    let found = r
        .headers()
        .map_err(|e| Error::data(format!("{}: {e}", path.display())))?;
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::data(format!(
            "{}: unexpected header {:?}",
            path.display(),
            found
        )));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| Error::data(format!("{}: {e}", path.display()))))
        .collect()
}

pub fn read_series(path: &Path) -> Result<Vec<SeriesRow>> {
    read_rows(path, &SERIES_HEADER, "analyze")
}

pub fn read_significance(path: &Path) -> Result<Vec<SignificanceRow>> {
    read_rows(path, &SIGNIFICANCE_HEADER, "analyze")
}
