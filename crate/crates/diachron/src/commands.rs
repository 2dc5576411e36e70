//! The `preprocess`, `fit`, `analyze`, `report` and `pipeline` commands.
//!
//! Each command reads the run configuration and the artifacts of earlier
//! stages only, and ends by refreshing `run-manifest.json`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use diachron_core::lda::{fit_lda_observed, log_likelihood};
use diachron_core::{
    build_vocabulary, compare_sources, topic_prevalence, CellTokenCounts, Corpus, FilterLists, LdaConfig, WordList,
};
use serde::Serialize;

use crate::artifacts::{
    list_files, read_json, sha256_file, sha256_hex, write_bytes, write_json, InputRecord, ModelFile,
    PreprocessManifest, TokenDoc, TokensFile, VocabularyFile, CHARTS_DIR, FREQUENCY_CSV, MODEL_FILE,
    PREPROCESS_MANIFEST, PREVALENCE_CSV, REPORT_FILE, RUN_MANIFEST, SCHEMA_VERSION, SIGNIFICANCE_CSV, TOKENS_FILE,
    TOPICS_CSV, VOCABULARY_FILE,
};
use crate::chart::{render, ChartSpec, SourceSeries};
use crate::config::{slug, ConfigFile, RunConfig, TopicLabel, WordSource};
use crate::corpus_io::{load_corpus, LoadedCorpus};
use crate::error::{Error, Result};
use crate::lists::{
    bundled_stopwords, bundled_word_lists, read_word_file, register_word_lists, BUNDLED_STOPWORDS, BUNDLED_WORD_LISTS,
};
use crate::tables::{
    read_series, read_significance, write_series, write_significance, write_topics, SeriesRow, SignificanceRow,
};

/// Sweeps between progress messages during fitting.
const PROGRESS_EVERY: usize = 100;

fn input_record(given: &str, path: Option<&Path>, bundled: &str) -> Result<InputRecord> {
    Ok(InputRecord {
        path: given.to_string(),
        sha256: match path {
            Some(p) => sha256_file(p)?,
            None => sha256_hex(bundled.as_bytes()),
        },
    })
}

fn word_source_record(given: &str, source: &WordSource, bundled: &str) -> Result<InputRecord> {
    match source {
        WordSource::Bundled => input_record(given, None, bundled),
        WordSource::File(p) => input_record(given, Some(p), bundled),
    }
}

/// Hashes of every input the configuration names.
pub fn input_hashes(cfg: &RunConfig) -> Result<BTreeMap<String, InputRecord>> {
    let f = &cfg.file;
    let mut out = BTreeMap::new();
    out.insert("corpus".into(), input_record(&f.corpus, Some(&cfg.corpus), "")?);
    out.insert(
        "stopwords".into(),
        word_source_record(&f.text.stopwords, &cfg.stopwords, BUNDLED_STOPWORDS)?,
    );
    if let (Some(given), Some(p)) = (&f.text.curated_exclusions, &cfg.curated_exclusions) {
        out.insert("curated_exclusions".into(), input_record(given, Some(p), "")?);
    }
    if let (Some(given), Some(p)) = (&f.text.source_exclusions, &cfg.source_exclusions) {
        out.insert("source_exclusions".into(), input_record(given, Some(p), "")?);
    }
    out.insert(
        "word_lists".into(),
        word_source_record(&f.analysis.word_lists, &cfg.word_lists, BUNDLED_WORD_LISTS)?,
    );
    if let Some(given) = &f.topics.labels_file {
        out.insert(
            "topic_labels".into(),
            input_record(given, Some(&cfg.base_dir.join(given)), "")?,
        );
    }
    Ok(out)
}

pub fn filter_lists(cfg: &RunConfig) -> Result<FilterLists> {
    let stop = match &cfg.stopwords {
        WordSource::Bundled => bundled_stopwords(),
        WordSource::File(p) => read_word_file(p)?,
    };
    let curated = cfg
        .curated_exclusions
        .as_deref()
        .map(read_word_file)
        .transpose()?
        .unwrap_or_default();
    let sources = cfg
        .source_exclusions
        .as_deref()
        .map(read_word_file)
        .transpose()?
        .unwrap_or_default();
    Ok(FilterLists::new(
        stop.iter().map(String::as_str),
        curated.iter().map(String::as_str),
        sources.iter().map(String::as_str),
        &cfg.rules,
    ))
}

pub fn word_lists(cfg: &RunConfig) -> Result<Vec<WordList>> {
    match &cfg.word_lists {
        WordSource::Bundled => bundled_word_lists(&cfg.rules),
        WordSource::File(p) => register_word_lists(p, &cfg.rules),
    }
}

/// Tokenizes, filters and stems the corpus and writes the vocabulary and
/// stem-id streams.
pub fn preprocess(cfg: &RunConfig) -> Result<PreprocessManifest> {
    let out = &cfg.output_dir;
    let LoadedCorpus { mut corpus, report } = load_corpus(&cfg.corpus, cfg.years)?;
    let filters = filter_lists(cfg)?;
    let vocabulary = build_vocabulary(&mut corpus, &cfg.rules, &filters, cfg.min_count)
        .map_err(|e| Error::data(format!("{}: {e}", cfg.corpus.display())))?;
    let documents: Vec<TokenDoc> = corpus
        .documents()
        .iter()
        .map(|d| TokenDoc {
            id: d.id.clone(),
            source: d.source.clone(),
            year: d.year,
            tokens: d.tokens.clone().unwrap_or_default(),
        })
        .collect();
    let empty = documents.iter().filter(|d| d.tokens.is_empty()).count();
    if empty > 0 {
        log::warn!("{empty} documents have no tokens after preprocessing");
    }
    let tokens: u64 = documents.iter().map(|d| d.tokens.len() as u64).sum();
    let inputs = input_hashes(cfg)?;
    let tokens_file = TokensFile {
        schema_version: SCHEMA_VERSION,
        corpus_sha256: inputs["corpus"].sha256.clone(),
        documents,
    };
    let mut artifacts = BTreeMap::new();
    let vocab_size = vocabulary.len();
    let vocab_file = VocabularyFile {
        schema_version: SCHEMA_VERSION,
        vocabulary,
    };
    artifacts.insert(
        VOCABULARY_FILE.to_string(),
        write_json(&out.join(VOCABULARY_FILE), &vocab_file)?,
    );
    artifacts.insert(
        TOKENS_FILE.to_string(),
        write_json(&out.join(TOKENS_FILE), &tokens_file)?,
    );
    let manifest = PreprocessManifest {
        schema_version: SCHEMA_VERSION,
        inputs,
        records: report.records,
        documents: corpus.len(),
        rejected: report.rejected.len(),
        empty_after_preprocessing: empty,
        tokens,
        vocabulary_size: vocab_size,
        artifacts,
    };
    write_json(&out.join(PREPROCESS_MANIFEST), &manifest)?;
    log::info!(
        "preprocessed {} documents: {} tokens, {} stems",
        manifest.documents,
        tokens,
        vocab_size
    );
    write_run_manifest(cfg)?;
    Ok(manifest)
}

/// Checks that the preprocessing artifacts are the ones its manifest describes.
fn verified_preprocess(out: &Path) -> Result<(PreprocessManifest, VocabularyFile, TokensFile)> {
    let manifest: PreprocessManifest = read_json(&out.join(PREPROCESS_MANIFEST), "preprocess")?;
    for (rel, hash) in &manifest.artifacts {
        let found = sha256_file(&out.join(rel))?;
        if &found != hash {
            return Err(Error::data(format!(
                "{rel} does not match {PREPROCESS_MANIFEST}; rerun `preprocess`"
            )));
        }
    }
    let vocab = VocabularyFile::read(&out.join(VOCABULARY_FILE))?;
    let tokens = TokensFile::read(&out.join(TOKENS_FILE))?;
    Ok((manifest, vocab, tokens))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitSummary {
    /// Top words of every topic, de-stemmed.
    pub top_words: Vec<Vec<String>>,
    pub final_log_likelihood: f64,
}

/// Fits the topic model and writes it with the top-word table.
pub fn fit(cfg: &RunConfig) -> Result<FitSummary> {
    let out = &cfg.output_dir;
    let (_, vocab, tokens) = verified_preprocess(out)?;
    let streams: Vec<Vec<u32>> = tokens.documents.into_iter().map(|d| d.tokens).collect();
    let v = vocab.vocabulary.len();
    let lda = &cfg.lda;
    log::info!(
        "fitting {} topics over {} documents ({} sweeps, seed {})",
        lda.topics,
        streams.len(),
        lda.sweeps,
        lda.seed
    );
    let mut last_ll = f64::NAN;
    let model = fit_lda_observed(&streams, v, lda, |sweep, state| {
        if sweep % PROGRESS_EVERY == 0 || sweep == lda.sweeps {
            last_ll = log_likelihood(state, lda);
            log::info!("sweep {sweep}/{}: log-likelihood {last_ll:.1}", lda.sweeps);
        }
    })
    .map_err(|e| Error::data(e.to_string()))?;
    let n = cfg.top_words.min(v);
    let top_words = (0..model.topics())
        .map(|k| model.top_words(&vocab.vocabulary, k, n))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::Internal(e.to_string()))?;
    write_json(&out.join(MODEL_FILE), &ModelFile::new(vocab.vocabulary, model))?;
    write_topics(&out.join(TOPICS_CSV), &top_words)?;
    write_run_manifest(cfg)?;
    Ok(FitSummary {
        top_words,
        final_log_likelihood: last_ll,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnalyzeSummary {
    pub topics: usize,
    pub lists: usize,
    pub tests: usize,
    pub significant: usize,
}

/// The topics to analyse: the configured selection, or every topic.
fn selected_topics(cfg: &RunConfig, topics: usize) -> Result<Vec<TopicLabel>> {
    if cfg.topic_labels.is_empty() {
        log::warn!("no topics selected; analysing all {topics} as topic-<id>");
        return Ok((0..topics)
            .map(|id| TopicLabel {
                id,
                label: format!("topic-{id}"),
            })
            .collect());
    }
    for t in &cfg.topic_labels {
        if t.id >= topics {
            return Err(Error::config(format!(
                "unknown topic id {} (the model has {topics} topics)",
                t.id
            )));
        }
    }
    Ok(cfg.topic_labels.clone())
}

fn check_sources(corpus: &Corpus, sources: &[String; 2]) -> Result<()> {
    let present = corpus.sources();
    for s in sources {
        if !present.contains(s.as_str()) {
            return Err(Error::data(format!(
                "source `{s}` has no documents (corpus sources: {:?})",
                present
            )));
        }
    }
    if present.len() > 2 {
        log::info!(
            "corpus has {} sources; contrasting {} and {}",
            present.len(),
            sources[0],
            sources[1]
        );
    }
    Ok(())
}

/// Computes prevalence for the selected topics, frequency for every
/// registered list, and the per-year tests.
pub fn analyze(cfg: &RunConfig) -> Result<AnalyzeSummary> {
    let out = &cfg.output_dir;
    let (_, _, tokens) = verified_preprocess(out)?;
    let LoadedCorpus { corpus, .. } = load_corpus(&cfg.corpus, cfg.years)?;
    if sha256_file(&cfg.corpus)? != tokens.corpus_sha256 {
        return Err(Error::data(format!(
            "{} changed since preprocessing; rerun `preprocess`",
            cfg.corpus.display()
        )));
    }
    let ids_match = corpus.len() == tokens.documents.len()
        && corpus
            .documents()
            .iter()
            .zip(&tokens.documents)
            .all(|(d, t)| d.id == t.id);
    if !ids_match {
        return Err(Error::data(format!(
            "documents of {} do not match {TOKENS_FILE}; rerun `preprocess`",
            cfg.corpus.display()
        )));
    }
    let model_file = ModelFile::read(&out.join(MODEL_FILE))?;
    let model = &model_file.model;
    if model.num_docs() != corpus.len() {
        return Err(Error::data(format!(
            "{MODEL_FILE} covers {} documents but the corpus has {}; rerun `fit`",
            model.num_docs(),
            corpus.len()
        )));
    }
    if model.config() != &cfg.lda {
        log::warn!("{MODEL_FILE} was fitted with different sampler settings than the current config");
    }
    check_sources(&corpus, &cfg.sources)?;
    let topics = selected_topics(cfg, model.topics())?;
    let lists = word_lists(cfg)?;

    let mut slugs = BTreeSet::new();
    for label in topics
        .iter()
        .map(|t| t.label.as_str())
        .chain(lists.iter().map(WordList::label))
    {
        let s = slug(label);
        if s.is_empty() || !slugs.insert(s.clone()) {
            return Err(Error::config(format!(
                "label `{label}` gives chart name `{s}`, which is empty or already used"
            )));
        }
    }

    let in_contrast = |source: &str| cfg.sources.iter().any(|s| s == source);
    let mut prevalence_rows = Vec::new();
    for t in &topics {
        let points = topic_prevalence(model, &corpus, t.id, cfg.include_empty_documents)
            .map_err(|e| Error::Internal(e.to_string()))?;
        prevalence_rows.extend(
            points
                .iter()
                .filter(|p| in_contrast(&p.source))
                .map(|p| SeriesRow::prevalence(&t.label, p)),
        );
    }

    let filters = filter_lists(cfg)?;
    let counts = CellTokenCounts::from_corpus(&corpus, &cfg.rules, &filters);
    let mut frequency_rows = Vec::new();
    let mut significance_rows = Vec::new();
    let [a, b] = &cfg.sources;
    for list in &lists {
        let points = counts.frequency(list, cfg.denominator);
        let fa: Vec<_> = points.iter().filter(|p| &p.source == a).cloned().collect();
        let fb: Vec<_> = points.iter().filter(|p| &p.source == b).cloned().collect();
        let tests = compare_sources(&fa, &fb, cfg.alpha);
        let by_year: BTreeMap<i32, _> = tests.iter().map(|t| (t.year, t)).collect();
        for p in fa.iter().chain(&fb) {
            frequency_rows.push(SeriesRow::frequency(p, by_year.get(&p.year).copied()));
        }
        significance_rows.extend(tests.iter().map(SignificanceRow::from));
    }
    if lists.is_empty() {
        log::warn!("no word lists registered; frequency tables are empty");
    }
    write_series(&out.join(PREVALENCE_CSV), &prevalence_rows)?;
    write_series(&out.join(FREQUENCY_CSV), &frequency_rows)?;
    write_significance(&out.join(SIGNIFICANCE_CSV), &significance_rows)?;
    let summary = AnalyzeSummary {
        topics: topics.len(),
        lists: lists.len(),
        tests: significance_rows.len(),
        significant: significance_rows.iter().filter(|r| r.significant).count(),
    };
    log::info!(
        "{} prevalence series, {} word lists, {} significant of {} tests",
        summary.topics,
        summary.lists,
        summary.significant,
        summary.tests
    );
    write_run_manifest(cfg)?;
    Ok(summary)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportSummary {
    pub charts: Vec<String>,
}

/// Rows grouped by label in first-appearance order.
fn group_by_label(rows: &[SeriesRow]) -> Vec<(String, Vec<&SeriesRow>)> {
    let mut groups: Vec<(String, Vec<&SeriesRow>)> = Vec::new();
    for r in rows {
        match groups.iter_mut().find(|(l, _)| l == &r.list_or_topic) {
            Some((_, g)) => g.push(r),
            None => groups.push((r.list_or_topic.clone(), vec![r])),
        }
    }
    groups
}

fn chart_spec(cfg: &RunConfig, title: String, y_label: &str, rows: &[&SeriesRow]) -> ChartSpec {
    let series = cfg
        .sources
        .iter()
        .map(|s| SourceSeries {
            source: s.clone(),
            points: rows
                .iter()
                .filter(|r| &r.source == s)
                .map(|r| (r.year, r.value))
                .collect(),
        })
        .collect();
    ChartSpec {
        title,
        y_label: y_label.into(),
        series,
        nonsig_years: rows
            .iter()
            .filter(|r| r.significant == Some(false))
            .map(|r| r.year)
            .collect(),
        smoothing: cfg.smoothing.clone(),
    }
}

/// Draws one chart per topic and list from the CSV tables and writes the
/// summary document.
pub fn report(cfg: &RunConfig) -> Result<ReportSummary> {
    let out = &cfg.output_dir;
    let prevalence = read_series(&out.join(PREVALENCE_CSV))?;
    let frequency = read_series(&out.join(FREQUENCY_CSV))?;
    let significance = read_significance(&out.join(SIGNIFICANCE_CSV))?;
    let charts_dir = out.join(CHARTS_DIR);
    if charts_dir.exists() {
        fs::remove_dir_all(&charts_dir).map_err(|e| Error::write(&charts_dir, e))?;
    }
    let mut charts = Vec::new();
    let mut topic_lines = Vec::new();
    for (label, rows) in group_by_label(&prevalence) {
        let spec = chart_spec(cfg, format!("Topic: {label}"), "mean topic share (%)", &rows);
        let name = format!("{CHARTS_DIR}/{}.svg", slug(&label));
        write_bytes(&out.join(&name), render(&spec).as_bytes())?;
        topic_lines.push(format!("| {label} | [{name}]({name}) |"));
        charts.push(name);
    }
    let mut list_lines = Vec::new();
    for (label, rows) in group_by_label(&frequency) {
        let spec = chart_spec(cfg, format!("Word list: {label}"), "share of tokens (%)", &rows);
        let name = format!("{CHARTS_DIR}/{}.svg", slug(&label));
        write_bytes(&out.join(&name), render(&spec).as_bytes())?;
        let tests: Vec<&SignificanceRow> = significance.iter().filter(|r| r.list == label).collect();
        let sig: Vec<String> = tests
            .iter()
            .filter(|r| r.significant)
            .map(|r| r.year.to_string())
            .collect();
        list_lines.push(format!(
            "| {label} | {} | {} | {} | [{name}]({name}) |",
            tests.len(),
            sig.len(),
            if sig.is_empty() {
                "none".to_string()
            } else {
                sig.join(", ")
            }
        ));
        charts.push(name);
    }
    let doc = report_markdown(cfg, &topic_lines, &list_lines, &significance);
    write_bytes(&out.join(REPORT_FILE), doc.as_bytes())?;
    write_run_manifest(cfg)?;
    Ok(ReportSummary { charts })
}

fn report_markdown(cfg: &RunConfig, topics: &[String], lists: &[String], tests: &[SignificanceRow]) -> String {
    let [a, b] = &cfg.sources;
    let s = &cfg.smoothing;
    let significant = tests.iter().filter(|t| t.significant).count();
    let mut doc = format!(
        "# Source contrast: {a} vs {b}\n\nYears {}-{}. Values are proportions; charts show them in percent.\n",
        cfg.years.first, cfg.years.last
    );
    doc.push_str("\n## Topic prevalence\n\nMean per-document topic share for each source and year.\n\n");
    if topics.is_empty() {
        doc.push_str("No topics were analysed.\n");
    } else {
        doc.push_str("| topic | chart |\n|---|---|\n");
        for l in topics {
            doc.push_str(l);
            doc.push('\n');
        }
    }
    doc.push_str(
        "\n## Word-list frequency\n\nOccurrences of the list's surface words over all tokens left after filtering, \
         for each source and year. Grey bands mark years where the two sources do not differ significantly.\n\n",
    );
    if lists.is_empty() {
        doc.push_str("No word lists were registered.\n");
    } else {
        doc.push_str("| list | tests | significant | significant years | chart |\n|---|---|---|---|---|\n");
        for l in lists {
            doc.push_str(l);
            doc.push('\n');
        }
    }
    doc.push_str(&format!(
        "\n## Method notes\n\n\
         - {} two-sided Fisher exact tests were run at level {}; {significant} were significant. \
         No multiple-comparison correction was applied; the word lists were registered before the analysis.\n\
         - Curves are LOESS fits (local linear, tricube weights, span {}) with {}% pointwise confidence bands. \
         The same smoother stands in for a GAM on the topic-prevalence charts.\n",
        tests.len(),
        cfg.alpha,
        s.span,
        s.ci_level * 100.0
    ));
    doc
}

/// Runs every stage in order.
pub fn pipeline(cfg: &RunConfig) -> Result<(FitSummary, AnalyzeSummary, ReportSummary)> {
    preprocess(cfg)?;
    let fit = fit(cfg)?;
    let analysis = analyze(cfg)?;
    let report = report(cfg)?;
    Ok((fit, analysis, report))
}

#[derive(Serialize)]
struct TestDisclosure {
    tests: usize,
    significant: usize,
    level: f64,
    correction: &'static str,
    lists: Vec<String>,
}

#[derive(Serialize)]
struct RunManifest {
    schema_version: u32,
    tool: String,
    config: ConfigFile,
    /// Sampler settings after defaults were filled in.
    sampler: LdaConfig,
    inputs: BTreeMap<String, InputRecord>,
    outputs: BTreeMap<String, String>,
    tests: Option<TestDisclosure>,
}

/// Rewrites `run-manifest.json` from the configuration and whatever outputs exist.
pub fn write_run_manifest(cfg: &RunConfig) -> Result<()> {
    let out = &cfg.output_dir;
    let mut outputs = BTreeMap::new();
    for rel in list_files(out)? {
        if rel != RUN_MANIFEST {
            outputs.insert(rel.clone(), sha256_file(&out.join(&rel))?);
        }
    }
    let sig_path = out.join(SIGNIFICANCE_CSV);
    let tests = if sig_path.exists() {
        let rows = read_significance(&sig_path)?;
        let lists: BTreeSet<String> = rows.iter().map(|r| r.list.clone()).collect();
        Some(TestDisclosure {
            tests: rows.len(),
            significant: rows.iter().filter(|r| r.significant).count(),
            level: cfg.alpha,
            correction: "none",
            lists: lists.into_iter().collect(),
        })
    } else {
        None
    };
    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION,
        tool: format!("diachron {}", env!("CARGO_PKG_VERSION")),
        config: cfg.echo(),
        sampler: cfg.lda.clone(),
        inputs: input_hashes(cfg)?,
        outputs,
        tests,
    };
    write_json(&out.join(RUN_MANIFEST), &manifest)?;
    Ok(())
}
