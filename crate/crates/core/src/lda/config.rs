use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("topic count must be at least 1")]
    NoTopics,
    #[error("alpha and beta must be positive and finite (alpha = {alpha}, beta = {beta})")]
    BadPrior { alpha: f64, beta: f64 },
    #[error("burn_in ({burn_in}) must be smaller than sweeps ({sweeps})")]
    BurnIn { burn_in: usize, sweeps: usize },
    #[error("sample_lag ({lag}) must be in 1..={window} so at least one post-burn-in sample is taken")]
    SampleLag { lag: usize, window: usize },
}

/// Sampler settings. Only the topic count and seed have no default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub topics: usize,
    /// Symmetric document-topic prior.
    pub alpha: f64,
    /// Symmetric topic-word prior.
    pub beta: f64,
    pub sweeps: usize,
    pub burn_in: usize,
    pub sample_lag: usize,
    pub seed: u64,
}

impl LdaConfig {
    /// `alpha = 50 / topics`, `beta = 0.01`, 1000 sweeps, 800 burn-in, lag 10.
    pub fn new(topics: usize, seed: u64) -> Self {
        Self {
            topics,
            alpha: 50.0 / topics.max(1) as f64,
            beta: 0.01,
            sweeps: 1000,
            burn_in: 800,
            sample_lag: 10,
            seed,
        }
    }

    pub fn with_schedule(mut self, sweeps: usize, burn_in: usize, sample_lag: usize) -> Self {
        self.sweeps = sweeps;
        self.burn_in = burn_in;
        self.sample_lag = sample_lag;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.topics == 0 {
            return Err(ConfigError::NoTopics);
        }
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !ok(self.alpha) || !ok(self.beta) {
            return Err(ConfigError::BadPrior {
                alpha: self.alpha,
                beta: self.beta,
            });
        }
        if self.burn_in >= self.sweeps {
            return Err(ConfigError::BurnIn {
                burn_in: self.burn_in,
                sweeps: self.sweeps,
            });
        }
        let window = self.sweeps - self.burn_in;
        if self.sample_lag == 0 || self.sample_lag > window {
            return Err(ConfigError::SampleLag {
                lag: self.sample_lag,
                window,
            });
        }
        Ok(())
    }

    /// Sweep numbers (1-based) whose state is averaged into the estimates.
    pub fn sample_sweeps(&self) -> impl Iterator<Item = usize> + '_ {
        (self.burn_in + 1..=self.sweeps).filter(move |s| (s - self.burn_in).is_multiple_of(self.sample_lag))
    }
}
