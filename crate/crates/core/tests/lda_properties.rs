use std::time::Instant;

use diachron_core::lda::{fit_lda_observed, gibbs_sweep, log_likelihood};
use diachron_core::{fit_lda, LdaConfig, LdaState};
use diachron_testkit::{matched_cosine, planted_lda, random_streams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn recount(state: &LdaState) -> Vec<String> {
    let k = state.topics();
    let mut violations = Vec::new();
    let mut total = 0u64;
    for d in 0..state.num_docs() {
        let s: u32 = (0..k).map(|t| state.n_dk(d, t)).sum();
        if s != state.n_d(d) {
            violations.push(format!("doc {d}: {s} != {}", state.n_d(d)));
        }
        total += u64::from(state.n_d(d));
    }
    for t in 0..k {
        let s: u32 = (0..state.vocab_size()).map(|w| state.n_kw(t, w)).sum();
        if s != state.n_k(t) {
            violations.push(format!("topic {t}: {s} != {}", state.n_k(t)));
        }
    }
    if total != state.total_tokens() {
        violations.push(format!("total {total} != {}", state.total_tokens()));
    }
    violations
}

#[test]
fn count_invariants_hold_after_every_sweep() {
    let streams = random_streams(1, 200, 300, 80);
    let n: usize = streams.iter().map(Vec::len).sum();
    let config = LdaConfig::new(10, 4).with_schedule(100, 50, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let started = Instant::now();
    let mut state = LdaState::random(streams, 300, 10, &mut rng);
    let mut violations = Vec::new();
    for sweep in 0..100 {
        gibbs_sweep(&mut state, &config, &mut rng);
        assert_eq!(state.total_tokens() as usize, n);
        violations.extend(recount(&state).into_iter().map(|v| format!("sweep {sweep}: {v}")));
    }
    assert!(violations.is_empty(), "{violations:?}");
    assert!(started.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn single_topic_collapses_to_unigram() {
    let streams = random_streams(2, 40, 25, 30);
    let config = LdaConfig::new(1, 1).with_schedule(30, 10, 5);
    let model = fit_lda(&streams, 25, &config).unwrap();
    for d in 0..streams.len() {
        assert_eq!(model.theta(d), &[1.0]);
    }
    let n: usize = streams.iter().map(Vec::len).sum();
    let mut counts = [0usize; 25];
    for &w in streams.iter().flatten() {
        counts[w as usize] += 1;
    }
    let beta = config.beta;
    for (w, &c) in counts.iter().enumerate() {
        let unigram = (c as f64 + beta) / (n as f64 + 25.0 * beta);
        assert!((model.phi(0)[w] - unigram).abs() < 1e-12);
    }
}

#[test]
fn single_word_vocabulary() {
    let streams = vec![vec![0u32; 5], vec![0; 3]];
    let model = fit_lda(&streams, 1, &LdaConfig::new(4, 0).with_schedule(20, 10, 2)).unwrap();
    for k in 0..4 {
        assert_eq!(model.phi(k), &[1.0]);
    }
}

#[test]
fn recovers_planted_topics() {
    let planted = planted_lda(5, 500, 60, 3, 60, 0.1);
    let started = Instant::now();
    let config = LdaConfig::new(3, 17).with_schedule(300, 200, 10);
    let model = fit_lda(&planted.streams, 60, &config).unwrap();
    let recovered: Vec<Vec<f64>> = (0..3).map(|k| model.phi(k).to_vec()).collect();
    let (score, _) = matched_cosine(&recovered, &planted.phi);
    assert!(score >= 0.8, "mean matched cosine {score}");
    assert!(started.elapsed().as_secs_f64() < 60.0);
}

#[test]
fn fixed_seed_is_bit_reproducible() {
    let streams = random_streams(3, 60, 40, 25);
    let config = LdaConfig::new(5, 99).with_schedule(60, 40, 5);
    let a = fit_lda(&streams, 40, &config).unwrap();
    let b = fit_lda(&streams, 40, &config).unwrap();
    assert_eq!(a, b);
    let c = fit_lda(&streams, 40, &LdaConfig::new(5, 100).with_schedule(60, 40, 5)).unwrap();
    assert_ne!(a, c);
}

#[test]
fn document_order_and_seed_do_not_change_topics() {
    let planted = planted_lda(8, 300, 60, 3, 60, 0.1);
    let config = LdaConfig::new(3, 1).with_schedule(200, 150, 10);
    let a = fit_lda(&planted.streams, 60, &config).unwrap();
    let mut shuffled = planted.streams.clone();
    shuffled.reverse();
    shuffled.rotate_left(77);
    let b = fit_lda(&shuffled, 60, &LdaConfig::new(3, 2).with_schedule(200, 150, 10)).unwrap();
    let phi = |m: &diachron_core::TopicModel| (0..3).map(|k| m.phi(k).to_vec()).collect::<Vec<_>>();
    let (score, _) = matched_cosine(&phi(&b), &phi(&a));
    assert!(score > 0.95, "{score}");
}

#[test]
fn likelihood_rises_during_burn_in() {
    let planted = planted_lda(4, 200, 50, 3, 60, 0.1);
    let config = LdaConfig::new(3, 5).with_schedule(100, 80, 10);
    let mut trace = Vec::new();
    fit_lda_observed(&planted.streams, 60, &config, |_, s| {
        trace.push(log_likelihood(s, &config))
    })
    .unwrap();
    assert_eq!(trace.len(), 100);
    assert!(trace.iter().all(|v| v.is_finite()));
    let early = trace[0];
    let late: f64 = trace[70..80].iter().sum::<f64>() / 10.0;
    assert!(late > early, "{early} -> {late}");
}

#[test]
fn rows_are_normalized_and_positive() {
    let planted = planted_lda(6, 100, 40, 3, 60, 0.1);
    let model = fit_lda(&planted.streams, 60, &LdaConfig::new(4, 3).with_schedule(50, 30, 5)).unwrap();
    for k in 0..4 {
        assert!((model.phi(k).iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(model.phi(k).iter().all(|&p| p > 0.0 && p < 1.0));
    }
    for d in 0..100 {
        assert!((model.theta(d).iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}
