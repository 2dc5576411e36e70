use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use super::{uniform, LdaConfig};
use crate::special::ln_gamma;

/// Topic assignments and the count tables derived from them.
///
/// Count tables are dense and row-major: `n_dk` is documents × topics and
/// `n_kw` is topics × words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdaState {
    topics: usize,
    vocab_size: usize,
    docs: Vec<Vec<u32>>,
    z: Vec<Vec<u32>>,
    n_dk: Vec<u32>,
    n_kw: Vec<u32>,
    n_k: Vec<u32>,
    n_d: Vec<u32>,
    total: u64,
}

impl LdaState {
    /// Assigns every token a uniformly random topic.
    pub fn random(docs: Vec<Vec<u32>>, vocab_size: usize, topics: usize, rng: &mut impl RngCore) -> Self {
        let z = docs
            .iter()
            .map(|d| {
                d.iter()
                    .map(|_| ((uniform(rng) * topics as f64) as usize).min(topics - 1) as u32)
                    .collect()
            })
            .collect();
        Self::from_assignments(docs, z, vocab_size, topics)
    }

    /// Builds the count tables from explicit assignments.
    ///
    /// Panics if shapes disagree or an id is out of range.
    pub fn from_assignments(docs: Vec<Vec<u32>>, z: Vec<Vec<u32>>, vocab_size: usize, topics: usize) -> Self {
        assert_eq!(docs.len(), z.len(), "one assignment vector per document");
        let mut s = Self {
            topics,
            vocab_size,
            n_dk: vec![0; docs.len() * topics],
            n_kw: vec![0; topics * vocab_size],
            n_k: vec![0; topics],
            n_d: vec![0; docs.len()],
            total: 0,
            docs,
            z,
        };
        for d in 0..s.docs.len() {
            assert_eq!(s.docs[d].len(), s.z[d].len(), "assignment length of doc {d}");
            for i in 0..s.docs[d].len() {
                let (w, k) = (s.docs[d][i] as usize, s.z[d][i] as usize);
                assert!(w < vocab_size && k < topics, "token or topic out of range");
                s.n_dk[d * topics + k] += 1;
                s.n_kw[k * vocab_size + w] += 1;
                s.n_k[k] += 1;
            }
            s.n_d[d] = s.docs[d].len() as u32;
            s.total += s.docs[d].len() as u64;
        }
        s
    }

    pub fn topics(&self) -> usize {
        self.topics
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn docs(&self) -> &[Vec<u32>] {
        &self.docs
    }

    pub fn assignments(&self) -> &[Vec<u32>] {
        &self.z
    }

    pub fn n_dk(&self, d: usize, k: usize) -> u32 {
        self.n_dk[d * self.topics + k]
    }

    pub fn n_kw(&self, k: usize, w: usize) -> u32 {
        self.n_kw[k * self.vocab_size + w]
    }

    pub fn n_k(&self, k: usize) -> u32 {
        self.n_k[k]
    }

    pub fn n_d(&self, d: usize) -> u32 {
        self.n_d[d]
    }

    pub fn total_tokens(&self) -> u64 {
        self.total
    }

    /// Checks the three count-conservation identities.
    pub fn check_invariants(&self) -> Result<(), &'static str> {
        let k = self.topics;
        for d in 0..self.docs.len() {
            let row: u64 = self.n_dk[d * k..(d + 1) * k].iter().map(|&c| c as u64).sum();
            if row != self.n_d[d] as u64 {
                return Err("sum over topics of n_dk differs from document length");
            }
        }
        for t in 0..k {
            let row: u64 = self.n_kw[t * self.vocab_size..(t + 1) * self.vocab_size]
                .iter()
                .map(|&c| c as u64)
                .sum();
            if row != self.n_k[t] as u64 {
                return Err("sum over words of n_kw differs from n_k");
            }
        }
        if self.n_d.iter().map(|&n| n as u64).sum::<u64>() != self.total {
            return Err("total token count changed");
        }
        Ok(())
    }

    /// Smoothed topic-word estimate `(n_kw + beta) / (n_k + V beta)` for row `k`.
    pub(crate) fn phi_row(&self, k: usize, beta: f64, out: &mut [f64]) {
        let denom = self.n_k[k] as f64 + self.vocab_size as f64 * beta;
        let row = &self.n_kw[k * self.vocab_size..(k + 1) * self.vocab_size];
        for (o, &c) in out.iter_mut().zip(row) {
            *o = (c as f64 + beta) / denom;
        }
    }

    /// Smoothed document-topic estimate `(n_dk + alpha) / (n_d + K alpha)` for doc `d`.
    pub(crate) fn theta_row(&self, d: usize, alpha: f64, out: &mut [f64]) {
        let denom = self.n_d[d] as f64 + self.topics as f64 * alpha;
        let row = &self.n_dk[d * self.topics..(d + 1) * self.topics];
        for (o, &c) in out.iter_mut().zip(row) {
            *o = (c as f64 + alpha) / denom;
        }
    }
}

/// Resamples every token's topic once, in document order.
///
/// `P(z = k | rest) ∝ (n_dk + α)(n_kw + β) / (n_k + Vβ)` with the token's own
/// assignment removed from the counts.
pub fn gibbs_sweep(state: &mut LdaState, config: &LdaConfig, rng: &mut impl RngCore) {
    let k_count = state.topics;
    let v = state.vocab_size;
    let v_beta = v as f64 * config.beta;
    let mut cumulative = vec![0.0f64; k_count];
    for d in 0..state.docs.len() {
        let dk = d * k_count;
        for i in 0..state.docs[d].len() {
            let w = state.docs[d][i] as usize;
            let old = state.z[d][i] as usize;
            state.n_dk[dk + old] -= 1;
            state.n_kw[old * v + w] -= 1;
            state.n_k[old] -= 1;

            let mut acc = 0.0;
            for (k, slot) in cumulative.iter_mut().enumerate() {
                acc += (state.n_dk[dk + k] as f64 + config.alpha) * (state.n_kw[k * v + w] as f64 + config.beta)
                    / (state.n_k[k] as f64 + v_beta);
                *slot = acc;
            }
            let u = uniform(rng) * acc;
            let new = cumulative.iter().position(|&c| u < c).unwrap_or(k_count - 1);

            state.z[d][i] = new as u32;
            state.n_dk[dk + new] += 1;
            state.n_kw[new * v + w] += 1;
            state.n_k[new] += 1;
        }
    }
    debug_assert_eq!(state.check_invariants(), Ok(()));
}

/// Collapsed joint log-likelihood `log p(w, z | α, β)`.
pub fn log_likelihood(state: &LdaState, config: &LdaConfig) -> f64 {
    let k = state.topics as f64;
    let v = state.vocab_size as f64;
    let (alpha, beta) = (config.alpha, config.beta);

    let lg_beta = ln_gamma(beta);
    // zero counts contribute lnΓ(β) - lnΓ(β) = 0, so only observed cells are summed
    let mut ll = state.topics as f64 * ln_gamma(v * beta);
    for t in 0..state.topics {
        for w in 0..state.vocab_size {
            let c = state.n_kw(t, w);
            if c > 0 {
                ll += ln_gamma(c as f64 + beta) - lg_beta;
            }
        }
        ll -= ln_gamma(state.n_k[t] as f64 + v * beta);
    }

    let lg_alpha = ln_gamma(alpha);
    for d in 0..state.docs.len() {
        ll += ln_gamma(k * alpha) - ln_gamma(state.n_d[d] as f64 + k * alpha);
        for t in 0..state.topics {
            let c = state.n_dk(d, t);
            if c > 0 {
                ll += ln_gamma(c as f64 + alpha) - lg_alpha;
            }
        }
    }
    ll
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    fn random_docs(rng: &mut ChaCha8Rng, docs: usize, v: usize) -> Vec<Vec<u32>> {
        (0..docs)
            .map(|_| {
                let len = (rng.next_u32() % 12) as usize;
                (0..len).map(|_| rng.next_u32() % v as u32).collect()
            })
            .collect()
    }

    #[test]
    fn empty_state_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = LdaState::random(Vec::new(), 5, 3, &mut rng);
        let before = s.clone();
        gibbs_sweep(&mut s, &LdaConfig::new(3, 1), &mut rng);
        assert_eq!(s, before);
    }

    #[test]
    fn single_topic_keeps_assignments() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let docs = random_docs(&mut rng, 10, 7);
        let mut s = LdaState::random(docs, 7, 1, &mut rng);
        let before = s.assignments().to_vec();
        gibbs_sweep(&mut s, &LdaConfig::new(1, 1), &mut rng);
        assert_eq!(s.assignments(), &before[..]);
    }

    #[test]
    fn incremental_counts_match_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let docs = random_docs(&mut rng, 25, 9);
        let cfg = LdaConfig::new(4, 3);
        let mut s = LdaState::random(docs, 9, 4, &mut rng);
        for _ in 0..5 {
            gibbs_sweep(&mut s, &cfg, &mut rng);
            let recount = LdaState::from_assignments(s.docs().to_vec(), s.assignments().to_vec(), 9, 4);
            assert_eq!(recount, s);
        }
    }

    /// lnΓ(x + n) = lnΓ(x) + Σ_{i<n} ln(x + i)
    fn ln_gamma_shift(x: f64, n: u32) -> f64 {
        ln_gamma(x) + (0..n).map(|i| libm::log(x + i as f64)).sum::<f64>()
    }

    fn naive_ll(s: &LdaState, cfg: &LdaConfig) -> f64 {
        let (k, v) = (s.topics(), s.vocab_size());
        let (a, b) = (cfg.alpha, cfg.beta);
        let mut ll = 0.0;
        for t in 0..k {
            ll += ln_gamma(v as f64 * b);
            for w in 0..v {
                ll += ln_gamma_shift(b, s.n_kw(t, w)) - ln_gamma(b);
            }
            ll -= ln_gamma_shift(v as f64 * b, s.n_k(t));
        }
        for d in 0..s.num_docs() {
            ll += ln_gamma(k as f64 * a);
            for t in 0..k {
                ll += ln_gamma_shift(a, s.n_dk(d, t)) - ln_gamma(a);
            }
            ll -= ln_gamma_shift(k as f64 * a, s.n_d(d));
        }
        ll
    }

    #[test]
    fn log_likelihood_matches_direct_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let docs = random_docs(&mut rng, 8, 6);
        let mut cfg = LdaConfig::new(3, 4);
        cfg.alpha = 0.7;
        cfg.beta = 0.3;
        let s = LdaState::random(docs, 6, 3, &mut rng);
        let fast = log_likelihood(&s, &cfg);
        let slow = naive_ll(&s, &cfg);
        assert!((fast - slow).abs() < 1e-9 * slow.abs().max(1.0), "{fast} vs {slow}");
        assert_eq!(fast, log_likelihood(&s.clone(), &cfg));
    }

    #[test]
    fn log_likelihood_of_empty_corpus_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = LdaState::random(vec![Vec::new(), Vec::new()], 4, 2, &mut rng);
        assert!(log_likelihood(&s, &LdaConfig::new(2, 1)).abs() < 1e-12);
    }
}
