use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use serde::{Deserialize, Serialize};

use super::config::{ConfigError, LdaConfig};
use super::state::{gibbs_sweep, LdaState};
use crate::text::Vocabulary;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FitError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("vocabulary is empty")]
    EmptyVocabulary,
    #[error("all documents are empty")]
    AllEmpty,
    #[error("document {doc} contains token id {token} outside the vocabulary of size {vocab_size}")]
    TokenOutOfRange { doc: usize, token: u32, vocab_size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TopWordsError {
    #[error("topic {topic} out of range (model has {topics} topics)")]
    TopicOutOfRange { topic: usize, topics: usize },
    #[error("requested {n} words but the vocabulary has {vocab_size}")]
    TooManyWords { n: usize, vocab_size: usize },
    #[error("model and vocabulary sizes differ ({model} vs {vocabulary})")]
    VocabularyMismatch { model: usize, vocabulary: usize },
}

/// Posterior-mean estimates of a fitted LDA model.
///
/// `phi` is topics × vocabulary and `theta` is documents × topics, both
/// row-major. Documents that were empty after preprocessing were not sampled;
/// their `theta` row is uniform and `fitted` is `false`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TopicModelRepr")]
pub struct TopicModel {
    config: LdaConfig,
    vocab_size: usize,
    phi: Vec<f64>,
    theta: Vec<f64>,
    fitted: Vec<bool>,
    samples: usize,
}

#[derive(Deserialize)]
struct TopicModelRepr {
    config: LdaConfig,
    vocab_size: usize,
    phi: Vec<f64>,
    theta: Vec<f64>,
    fitted: Vec<bool>,
    samples: usize,
}

impl TryFrom<TopicModelRepr> for TopicModel {
    type Error = ModelShapeError;

    fn try_from(r: TopicModelRepr) -> Result<Self, ModelShapeError> {
        TopicModel::from_parts(r.config, r.vocab_size, r.phi, r.theta, r.fitted, r.samples)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("inconsistent topic model: {0}")]
pub struct ModelShapeError(pub &'static str);

impl TopicModel {
    /// Reassembles a model, checking shapes and row normalization.
    pub fn from_parts(
        config: LdaConfig,
        vocab_size: usize,
        phi: Vec<f64>,
        theta: Vec<f64>,
        fitted: Vec<bool>,
        samples: usize,
    ) -> Result<Self, ModelShapeError> {
        let k = config.topics;
        if k == 0 || vocab_size == 0 {
            return Err(ModelShapeError("zero topics or empty vocabulary"));
        }
        if phi.len() != k * vocab_size {
            return Err(ModelShapeError("phi has the wrong size"));
        }
        if theta.len() != fitted.len() * k {
            return Err(ModelShapeError("theta has the wrong size"));
        }
        let rows_ok = |m: &[f64], width: usize| {
            m.chunks(width)
                .all(|r| r.iter().all(|&p| p > 0.0 && p <= 1.0) && (r.iter().sum::<f64>() - 1.0).abs() < 1e-9)
        };
        if !rows_ok(&phi, vocab_size) || !rows_ok(&theta, k) {
            return Err(ModelShapeError("a probability row is not normalized"));
        }
        Ok(Self {
            config,
            vocab_size,
            phi,
            theta,
            fitted,
            samples,
        })
    }

    pub fn config(&self) -> &LdaConfig {
        &self.config
    }

    pub fn topics(&self) -> usize {
        self.config.topics
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn num_docs(&self) -> usize {
        self.fitted.len()
    }

    /// Number of post-burn-in states averaged into the estimates.
    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn phi(&self, topic: usize) -> &[f64] {
        &self.phi[topic * self.vocab_size..(topic + 1) * self.vocab_size]
    }

    pub fn theta(&self, doc: usize) -> &[f64] {
        let k = self.config.topics;
        &self.theta[doc * k..(doc + 1) * k]
    }

    pub fn is_fitted(&self, doc: usize) -> bool {
        self.fitted[doc]
    }

    /// Stem ids of the `n` most probable words of `topic`, by descending
    /// probability with ties broken by ascending id.
    pub fn top_word_ids(&self, topic: usize, n: usize) -> Result<Vec<u32>, TopWordsError> {
        if topic >= self.topics() {
            return Err(TopWordsError::TopicOutOfRange {
                topic,
                topics: self.topics(),
            });
        }
        if n > self.vocab_size {
            return Err(TopWordsError::TooManyWords {
                n,
                vocab_size: self.vocab_size,
            });
        }
        let row = self.phi(topic);
        let mut ids: Vec<u32> = (0..self.vocab_size as u32).collect();
        ids.sort_by(|&a, &b| row[b as usize].total_cmp(&row[a as usize]).then(a.cmp(&b)));
        ids.truncate(n);
        Ok(ids)
    }

    /// De-stemmed top words of `topic`.
    pub fn top_words(&self, vocabulary: &Vocabulary, topic: usize, n: usize) -> Result<Vec<String>, TopWordsError> {
        if vocabulary.len() != self.vocab_size {
            return Err(TopWordsError::VocabularyMismatch {
                model: self.vocab_size,
                vocabulary: vocabulary.len(),
            });
        }
        Ok(self
            .top_word_ids(topic, n)?
            .into_iter()
            .map(|id| String::from(vocabulary.destem(id).unwrap_or_default()))
            .collect())
    }
}

/// Fits LDA to `streams` (stem ids per document) with sequential Gibbs sampling.
///
/// Bit-reproducible for fixed inputs and `config.seed`.
pub fn fit_lda(streams: &[Vec<u32>], vocab_size: usize, config: &LdaConfig) -> Result<TopicModel, FitError> {
    fit_lda_observed(streams, vocab_size, config, |_, _| {})
}

/// Like [`fit_lda`], calling `observe(sweep, state)` after every sweep.
pub fn fit_lda_observed(
    streams: &[Vec<u32>],
    vocab_size: usize,
    config: &LdaConfig,
    mut observe: impl FnMut(usize, &LdaState),
) -> Result<TopicModel, FitError> {
    config.validate()?;
    if vocab_size == 0 {
        return Err(FitError::EmptyVocabulary);
    }
    for (doc, s) in streams.iter().enumerate() {
        if let Some(&token) = s.iter().find(|&&t| t as usize >= vocab_size) {
            return Err(FitError::TokenOutOfRange { doc, token, vocab_size });
        }
    }
    let fitted: Vec<bool> = streams.iter().map(|s| !s.is_empty()).collect();
    let active: Vec<usize> = (0..streams.len()).filter(|&d| fitted[d]).collect();
    if active.is_empty() {
        return Err(FitError::AllEmpty);
    }
    let skipped = streams.len() - active.len();
    if skipped > 0 {
        log::warn!("{skipped} empty documents excluded from fitting");
    }

    let k = config.topics;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let docs: Vec<Vec<u32>> = active.iter().map(|&d| streams[d].clone()).collect();
    let mut state = LdaState::random(docs, vocab_size, k, &mut rng);
    if (k as u64) > state.total_tokens() {
        log::warn!("more topics ({k}) than tokens ({}); proceeding", state.total_tokens());
    }

    let mut phi_sum = vec![0.0; k * vocab_size];
    let mut theta_sum = vec![0.0; active.len() * k];
    let mut row = vec![0.0; vocab_size.max(k)];
    let mut samples = 0usize;
    for sweep in 1..=config.sweeps {
        gibbs_sweep(&mut state, config, &mut rng);
        observe(sweep, &state);
        if sweep > config.burn_in && (sweep - config.burn_in).is_multiple_of(config.sample_lag) {
            for t in 0..k {
                state.phi_row(t, config.beta, &mut row[..vocab_size]);
                for (acc, p) in phi_sum[t * vocab_size..(t + 1) * vocab_size].iter_mut().zip(&row) {
                    *acc += p;
                }
            }
            for d in 0..active.len() {
                state.theta_row(d, config.alpha, &mut row[..k]);
                for (acc, p) in theta_sum[d * k..(d + 1) * k].iter_mut().zip(&row) {
                    *acc += p;
                }
            }
            samples += 1;
        }
    }

    let n = samples as f64;
    let phi: Vec<f64> = phi_sum.into_iter().map(|s| s / n).collect();
    let uniform = 1.0 / k as f64;
    let mut theta = vec![uniform; streams.len() * k];
    for (i, &d) in active.iter().enumerate() {
        for t in 0..k {
            theta[d * k + t] = theta_sum[i * k + t] / n;
        }
    }
    Ok(TopicModel {
        config: config.clone(),
        vocab_size,
        phi,
        theta,
        fitted,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn short(topics: usize) -> LdaConfig {
        LdaConfig::new(topics, 11).with_schedule(30, 20, 2)
    }

    #[test]
    fn single_topic_collapse() {
        let streams = vec![vec![0, 1, 1, 2], vec![2, 2], vec![0]];
        let cfg = short(1);
        let m = fit_lda(&streams, 3, &cfg).unwrap();
        for d in 0..3 {
            assert_eq!(m.theta(d), &[1.0]);
        }
        let counts = [2.0, 2.0, 3.0];
        let total = 7.0;
        for w in 0..3 {
            let expect = (counts[w] + cfg.beta) / (total + 3.0 * cfg.beta);
            assert!((m.phi(0)[w] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn single_word_vocabulary() {
        let streams = vec![vec![0, 0, 0], vec![0]];
        let m = fit_lda(&streams, 1, &short(4)).unwrap();
        for k in 0..4 {
            assert_eq!(m.phi(k), &[1.0]);
        }
    }

    #[test]
    fn rows_are_normalized_and_positive() {
        let streams: Vec<Vec<u32>> = (0..20)
            .map(|d| (0..15).map(|i| ((d * 7 + i * 3) % 11) as u32).collect())
            .collect();
        let m = fit_lda(&streams, 11, &short(3)).unwrap();
        for k in 0..3 {
            assert!((m.phi(k).iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert!(m.phi(k).iter().all(|&p| p > 0.0 && p < 1.0));
        }
        for d in 0..20 {
            assert!((m.theta(d).iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        assert_eq!(m.samples(), 5);
    }

    #[test]
    fn empty_documents_get_uniform_theta() {
        let streams = vec![vec![0, 1], vec![], vec![1, 1]];
        let m = fit_lda(&streams, 2, &short(4)).unwrap();
        assert!(!m.is_fitted(1));
        assert_eq!(m.theta(1), &[0.25; 4]);
        assert!(m.is_fitted(0));
    }

    #[test]
    fn errors() {
        assert_eq!(
            fit_lda(&[vec![], vec![]], 3, &short(2)).unwrap_err(),
            FitError::AllEmpty
        );
        assert!(matches!(
            fit_lda(&[vec![5]], 3, &short(2)).unwrap_err(),
            FitError::TokenOutOfRange { token: 5, .. }
        ));
        assert_eq!(
            fit_lda(&[vec![0]], 0, &short(2)).unwrap_err(),
            FitError::EmptyVocabulary
        );
        assert!(matches!(
            fit_lda(&[vec![0]], 1, &short(0)).unwrap_err(),
            FitError::Config(_)
        ));
    }

    #[test]
    fn deterministic_given_seed() {
        let streams: Vec<Vec<u32>> = (0..10)
            .map(|d| (0..8).map(|i| ((d + i * 5) % 9) as u32).collect())
            .collect();
        let a = fit_lda(&streams, 9, &short(3)).unwrap();
        let b = fit_lda(&streams, 9, &short(3)).unwrap();
        assert_eq!(a, b);
        let mut other = short(3);
        other.seed = 12;
        assert_ne!(a, fit_lda(&streams, 9, &other).unwrap());
    }

    #[test]
    fn top_words_order_and_ties() {
        let cfg = LdaConfig::new(1, 1).with_schedule(2, 1, 1);
        let phi = vec![0.2, 0.4, 0.2, 0.2];
        let m = TopicModel::from_parts(cfg, 4, phi, vec![1.0], vec![true], 1).unwrap();
        assert_eq!(m.top_word_ids(0, 4).unwrap(), vec![1, 0, 2, 3]);
        assert_eq!(
            m.top_word_ids(1, 2).unwrap_err(),
            TopWordsError::TopicOutOfRange { topic: 1, topics: 1 }
        );
        assert!(matches!(m.top_word_ids(0, 5), Err(TopWordsError::TooManyWords { .. })));
        let vocab = Vocabulary::from_parts(
            ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect(),
            ["aa", "bb", "cc", "dd"].iter().map(|s| s.to_string()).collect(),
            vec![1; 4],
            vec![1; 4],
        )
        .unwrap();
        assert_eq!(m.top_words(&vocab, 0, 2).unwrap(), vec!["bb", "aa"]);
    }

    #[test]
    fn from_parts_rejects_bad_rows() {
        let cfg = LdaConfig::new(1, 1).with_schedule(2, 1, 1);
        assert!(TopicModel::from_parts(cfg.clone(), 2, vec![0.5, 0.6], vec![1.0], vec![true], 1).is_err());
        assert!(TopicModel::from_parts(cfg, 2, vec![0.5, 0.5], vec![1.0, 1.0], vec![true], 1).is_err());
    }
}
