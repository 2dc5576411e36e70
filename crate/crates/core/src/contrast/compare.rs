use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::fisher::fisher_exact_two_sided;
use super::frequency::FrequencyPoint;

/// Fisher test of one list in one year between two sources.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignificanceResult {
    pub year: i32,
    pub list_label: String,
    pub source_a: String,
    pub source_b: String,
    /// `(hits_a, total_a - hits_a, hits_b, total_b - hits_b)`
    pub table: [u64; 4],
    pub p_value: f64,
    pub significant: bool,
}

/// Tests each year present in both series; years found in only one are skipped.
pub fn compare_sources(freq_a: &[FrequencyPoint], freq_b: &[FrequencyPoint], alpha: f64) -> Vec<SignificanceResult> {
    let by_year =
        |s: &[FrequencyPoint]| -> BTreeMap<i32, FrequencyPoint> { s.iter().map(|p| (p.year, p.clone())).collect() };
    let a = by_year(freq_a);
    let b = by_year(freq_b);
    let mut out = Vec::new();
    for (year, pa) in &a {
        let Some(pb) = b.get(year) else {
            log::warn!(
                "year {year} missing for source `{}`; skipped",
                freq_b.first().map_or("?", |p| p.source.as_str())
            );
            continue;
        };
        if pa.list_label != pb.list_label {
            log::warn!("comparing different lists `{}` and `{}`", pa.list_label, pb.list_label);
        }
        let table = [pa.hits, pa.total - pa.hits, pb.hits, pb.total - pb.hits];
        let p_value = fisher_exact_two_sided(table[0], table[1], table[2], table[3]);
        out.push(SignificanceResult {
            year: *year,
            list_label: pa.list_label.clone(),
            source_a: pa.source.clone(),
            source_b: pb.source.clone(),
            table,
            p_value,
            significant: p_value < alpha,
        });
    }
    for year in b.keys().filter(|y| !a.contains_key(y)) {
        log::warn!(
            "year {year} missing for source `{}`; skipped",
            freq_a.first().map_or("?", |p| p.source.as_str())
        );
    }
    out
}
