//! Latent Dirichlet allocation fitted by collapsed Gibbs sampling.

mod config;
mod model;
mod state;

pub use config::{ConfigError, LdaConfig};
pub use model::{fit_lda, fit_lda_observed, FitError, ModelShapeError, TopWordsError, TopicModel};
pub use state::{gibbs_sweep, log_likelihood, LdaState};

/// Uniform draw in `[0, 1)` with 53 random bits.
pub(crate) fn uniform(rng: &mut impl rand_core::RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
