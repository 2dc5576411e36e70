//! Run configuration read from TOML.
//!
//! Relative paths are resolved against the directory of the config file.
//! The special value `"bundled"` selects the stopword or word-list file that
//! ships with the binary.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use diachron_core::{Denominator, LdaConfig, SmoothConfig, TokenizerRules, YearRange};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BUNDLED: &str = "bundled";

/// The config file as written, with command-line overrides applied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub corpus: String,
    pub sources: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    #[serde(default)]
    pub years: Years,
    #[serde(default)]
    pub text: TextSection,
    pub lda: LdaSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub smoothing: SmoothingSection,
    #[serde(default)]
    pub topics: TopicsSection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Years {
    pub first: i32,
    pub last: i32,
}

impl Default for Years {
    fn default() -> Self {
        let r = YearRange::default();
        Self {
            first: r.first,
            last: r.last,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TextSection {
    pub stopwords: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curated_exclusions: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_exclusions: Option<String>,
    pub lowercase: bool,
    pub strip_acute_accents: bool,
    pub min_token_length: usize,
    pub min_count: u64,
}

impl Default for TextSection {
    fn default() -> Self {
        let rules = TokenizerRules::default();
        Self {
            stopwords: BUNDLED.into(),
            curated_exclusions: None,
            source_exclusions: None,
            lowercase: rules.lowercase,
            strip_acute_accents: rules.strip_acute_accents,
            min_token_length: rules.min_token_length,
            min_count: 1,
        }
    }
}

impl TextSection {
    pub fn rules(&self) -> TokenizerRules {
        TokenizerRules {
            lowercase: self.lowercase,
            strip_acute_accents: self.strip_acute_accents,
            min_token_length: self.min_token_length,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SmoothingSection {
    pub span: f64,
    pub ci_level: f64,
    /// Evaluate the curves on a grid ten times finer than the years.
    pub densify: bool,
}

impl Default for SmoothingSection {
    fn default() -> Self {
        let c = SmoothConfig::default();
        Self {
            span: c.span,
            ci_level: c.ci_level,
            densify: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LdaSection {
    pub topics: usize,
    /// Defaults to `50 / topics`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweeps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_lag: Option<usize>,
    /// Required here or through `--seed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    /// Significance level of the per-year tests.
    pub alpha: f64,
    pub word_lists: String,
    pub denominator: Denominator,
    /// Count documents that were empty after preprocessing (uniform theta)
    /// in prevalence means.
    pub include_empty_documents: bool,
    pub top_words: usize,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            word_lists: BUNDLED.into(),
            denominator: Denominator::Filtered,
            include_empty_documents: false,
            top_words: 10,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopicsSection {
    /// CSV file with `topic,label` rows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels_file: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub selected: Vec<TopicLabel>,
}

/// A topic chosen for analysis, with the name a reader gave it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopicLabel {
    pub id: usize,
    pub label: String,
}

/// Where a word file comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordSource {
    Bundled,
    File(PathBuf),
}

/// Validated configuration with resolved paths.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub file: ConfigFile,
    pub base_dir: PathBuf,
    pub corpus: PathBuf,
    pub sources: [String; 2],
    pub output_dir: PathBuf,
    pub years: YearRange,
    pub rules: TokenizerRules,
    pub stopwords: WordSource,
    pub curated_exclusions: Option<PathBuf>,
    pub source_exclusions: Option<PathBuf>,
    pub min_count: u64,
    pub lda: LdaConfig,
    pub alpha: f64,
    pub word_lists: WordSource,
    pub denominator: Denominator,
    pub include_empty_documents: bool,
    pub top_words: usize,
    pub smoothing: SmoothConfig,
    pub topic_labels: Vec<TopicLabel>,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
}

fn existing(base: &Path, rel: &str, what: &str) -> Result<PathBuf> {
    let p = base.join(rel);
    if p.is_file() {
        Ok(p)
    } else {
        Err(Error::config(format!("{what} `{}` does not exist", p.display())))
    }
}

fn word_source(base: &Path, value: &str, what: &str) -> Result<WordSource> {
    if value == BUNDLED {
        Ok(WordSource::Bundled)
    } else {
        existing(base, value, what).map(WordSource::File)
    }
}

/// `topic,label` rows; a header row starting with `topic` is skipped.
pub fn parse_labels_csv(text: &str, origin: &str) -> Result<Vec<TopicLabel>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::config(format!("{origin}: {e}")))?;
        if i == 0 && row.get(0) == Some("topic") {
            continue;
        }
        let line = row.position().map_or(i + 1, |p| p.line() as usize);
        if row.len() != 2 {
            return Err(Error::config(format!("{origin}:{line}: expected `topic,label`")));
        }
        let id = row[0]
            .parse()
            .map_err(|_| Error::config(format!("{origin}:{line}: topic id `{}` is not a number", &row[0])))?;
        out.push(TopicLabel {
            id,
            label: row[1].to_string(),
        });
    }
    Ok(out)
}

/// Turns a label into a file stem: lowercase ASCII letters, digits and `-`.
pub fn slug(label: &str) -> String {
    let mut s = String::new();
    for c in label.chars() {
        let c = match c {
            'á' | 'Á' => 'a',
            'é' | 'É' => 'e',
            'í' | 'Í' => 'i',
            'ó' | 'Ó' => 'o',
            'ú' | 'Ú' | 'ü' | 'Ü' => 'u',
            'ñ' | 'Ñ' => 'n',
            c => c.to_ascii_lowercase(),
        };
        if c.is_ascii_alphanumeric() {
            s.push(c);
        } else if !s.ends_with('-') {
            s.push('-');
        }
    }
    s.trim_matches('-').to_string()
}

impl RunConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
        let file: ConfigFile = toml::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        let base = path.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf);
        Self::from_file(file, &base, overrides)
    }

    pub fn from_file(mut file: ConfigFile, base: &Path, overrides: &Overrides) -> Result<Self> {
        if let Some(seed) = overrides.seed {
            file.lda.seed = Some(seed);
        }
        let output_dir = match (&overrides.output_dir, &file.output_dir) {
            (Some(p), _) => p.clone(),
            (None, Some(p)) => base.join(p),
            (None, None) => return Err(Error::config("no output directory (set `output_dir` or pass --out)")),
        };

        let corpus = existing(base, &file.corpus, "corpus file")?;
        let sources: [String; 2] = match file.sources.as_slice() {
            [a, b] if a != b => [a.clone(), b.clone()],
            _ => {
                return Err(Error::config(format!(
                    "`sources` must name exactly two distinct sources, got {:?}",
                    file.sources
                )))
            }
        };
        if file.years.first > file.years.last {
            return Err(Error::config(format!(
                "year range {}-{} is empty",
                file.years.first, file.years.last
            )));
        }
        let years = YearRange::new(file.years.first, file.years.last);

        let t = &file.text;
        let stopwords = word_source(base, &t.stopwords, "stopword file")?;
        let curated_exclusions = t
            .curated_exclusions
            .as_deref()
            .map(|p| existing(base, p, "curated exclusion file"))
            .transpose()?;
        let source_exclusions = t
            .source_exclusions
            .as_deref()
            .map(|p| existing(base, p, "source exclusion file"))
            .transpose()?;

        let l = &file.lda;
        let seed = l
            .seed
            .ok_or_else(|| Error::config("no sampler seed (set `lda.seed` or pass --seed)"))?;
        let mut lda = LdaConfig::new(l.topics, seed);
        if let Some(a) = l.alpha {
            lda.alpha = a;
        }
        if let Some(b) = l.beta {
            lda.beta = b;
        }
        lda.sweeps = l.sweeps.unwrap_or(lda.sweeps);
        lda.burn_in = l.burn_in.unwrap_or(lda.burn_in);
        lda.sample_lag = l.sample_lag.unwrap_or(lda.sample_lag);
        lda.validate().map_err(|e| Error::config(format!("[lda] {e}")))?;

        let a = &file.analysis;
        if !(a.alpha > 0.0 && a.alpha < 1.0) {
            return Err(Error::config(format!("analysis.alpha {} outside (0, 1)", a.alpha)));
        }
        if a.top_words == 0 {
            return Err(Error::config("analysis.top_words must be at least 1"));
        }
        let word_lists = word_source(base, &a.word_lists, "word-list manifest")?;

        let s = &file.smoothing;
        if !(s.span > 0.0 && s.span <= 1.0) {
            return Err(Error::config(format!("smoothing.span {} outside (0, 1]", s.span)));
        }
        if !(s.ci_level > 0.0 && s.ci_level < 1.0) {
            return Err(Error::config(format!(
                "smoothing.ci_level {} outside (0, 1)",
                s.ci_level
            )));
        }

        let mut topic_labels = file.topics.selected.clone();
        if let Some(p) = &file.topics.labels_file {
            let path = existing(base, p, "topic labels file")?;
            let text = fs::read_to_string(&path).map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
            topic_labels.extend(parse_labels_csv(&text, &path.display().to_string())?);
        }
        let mut ids = BTreeSet::new();
        let mut slugs = BTreeSet::new();
        for t in &topic_labels {
            if t.id >= lda.topics {
                return Err(Error::config(format!(
                    "selected topic {} does not exist (model has {} topics)",
                    t.id, lda.topics
                )));
            }
            if !ids.insert(t.id) {
                return Err(Error::config(format!("topic {} is selected twice", t.id)));
            }
            let s = slug(&t.label);
            if s.is_empty() || !slugs.insert(s) {
                return Err(Error::config(format!(
                    "topic label `{}` is empty or not unique",
                    t.label
                )));
            }
        }

        Ok(Self {
            base_dir: base.to_path_buf(),
            corpus,
            sources,
            output_dir,
            years,
            rules: file.text.rules(),
            stopwords,
            curated_exclusions,
            source_exclusions,
            min_count: file.text.min_count,
            lda,
            alpha: file.analysis.alpha,
            word_lists,
            denominator: file.analysis.denominator,
            include_empty_documents: file.analysis.include_empty_documents,
            top_words: file.analysis.top_words,
            smoothing: SmoothConfig {
                span: file.smoothing.span,
                ci_level: file.smoothing.ci_level,
                densify: file.smoothing.densify,
            },
            topic_labels,
            file,
        })
    }

    /// The effective settings for the run manifest. The output directory is
    /// left out so identical runs into different directories match.
    pub fn echo(&self) -> ConfigFile {
        let mut f = self.file.clone();
        f.output_dir = None;
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs::File;

    fn base() -> (tempfile::TempDir, PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        File::create(dir.path().join("c.jsonl")).unwrap();
        let p = dir.path().to_path_buf();
        (dir, p)
    }

    fn parse(text: &str, base: &Path, o: &Overrides) -> Result<RunConfig> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        RunConfig::from_file(file, base, o)
    }

    const MINIMAL: &str = r#"
corpus = "c.jsonl"
sources = ["a", "b"]
output_dir = "out"
[lda]
topics = 4
seed = 1
"#;

    #[test]
    fn defaults_fill_in() {
        let (_d, b) = base();
        let c = parse(MINIMAL, &b, &Overrides::default()).unwrap();
        assert_eq!(c.lda, LdaConfig::new(4, 1));
        assert_eq!(c.years, YearRange::default());
        assert_eq!(c.stopwords, WordSource::Bundled);
        assert_eq!(c.alpha, 0.05);
        assert_eq!(c.top_words, 10);
        assert_eq!(c.output_dir, b.join("out"));
        assert!(c.echo().output_dir.is_none());
    }

    #[test]
    fn overrides_win() {
        let (_d, b) = base();
        let o = Overrides {
            seed: Some(9),
            output_dir: Some(PathBuf::from("/tmp/x")),
        };
        let c = parse(MINIMAL, &b, &o).unwrap();
        assert_eq!(c.lda.seed, 9);
        assert_eq!(c.output_dir, PathBuf::from("/tmp/x"));
    }

    #[test]
    fn rejects_bad_configs() {
        let (_d, b) = base();
        let o = Overrides::default();
        let one_source = MINIMAL.replace(r#"["a", "b"]"#, r#"["a", "a"]"#);
        assert_eq!(parse(&one_source, &b, &o).unwrap_err().exit_code(), 2);
        let missing = MINIMAL.replace("c.jsonl", "nope.jsonl");
        assert!(parse(&missing, &b, &o)
            .unwrap_err()
            .to_string()
            .contains("does not exist"));
        let no_seed = MINIMAL.replace("seed = 1", "");
        assert!(parse(&no_seed, &b, &o).is_err());
        let bad_lda = MINIMAL.replace("seed = 1", "seed = 1\nsweeps = 10\nburn_in = 10");
        assert!(parse(&bad_lda, &b, &o).is_err());
        let unknown = format!("{MINIMAL}\n[analysis]\nalpah = 0.1\n");
        assert!(parse(&unknown, &b, &o).is_err());
        let topic = format!("{MINIMAL}\n[[topics.selected]]\nid = 4\nlabel = \"x\"\n");
        assert!(parse(&topic, &b, &o)
            .unwrap_err()
            .to_string()
            .contains("does not exist"));
    }

    #[test]
    fn labels_from_file_and_inline() {
        let (_d, b) = base();
        fs::write(
            b.join("labels.csv"),
            "topic,label\n0,moda\n# note\n2, Ciencia y tecnología\n",
        )
        .unwrap();
        let text = format!(
            "{MINIMAL}\n[topics]\nlabels_file = \"labels.csv\"\n[[topics.selected]]\nid = 3\nlabel = \"hogar\"\n"
        );
        let c = parse(&text, &b, &Overrides::default()).unwrap();
        let ids: Vec<usize> = c.topic_labels.iter().map(|t| t.id).collect();
        assert_eq!(ids, vec![3, 0, 2]);
        assert_eq!(c.topic_labels[2].label, "Ciencia y tecnología");
    }

    #[test]
    fn slugs() {
        assert_eq!(slug("Ciencia y tecnología"), "ciencia-y-tecnologia");
        assert_eq!(slug("women-as-sex-objects"), "women-as-sex-objects");
        assert_eq!(slug("  Niños!! "), "ninos");
    }

    #[test]
    fn shipped_sample_parses() {
        let text = include_str!("../config/sample.toml");
        let file: ConfigFile = toml::from_str(text).unwrap();
        assert_eq!(file.lda.topics, 100);
        assert_eq!(file.sources.len(), 2);
    }
}
