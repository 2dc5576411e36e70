//! Reference implementations and data generators used only by tests.
//!
//! Every oracle here is written from the textbook definition, without sharing
//! code paths with `diachron-core`, so agreement between the two is evidence
//! rather than tautology.

use std::collections::BTreeMap;

use diachron_core::{Corpus, Document, TopicModel, YearRange};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

/// Pascal's triangle in exact integers.
pub struct Binomials {
    rows: Vec<Vec<u128>>,
}

impl Binomials {
    pub fn up_to(n: usize) -> Self {
        let mut rows: Vec<Vec<u128>> = vec![vec![1]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![1u128; i + 1];
            for k in 1..i {
                row[k] = prev[k - 1] + prev[k];
            }
            rows.push(row);
        }
        Self { rows }
    }

    pub fn choose(&self, n: u64, k: u64) -> u128 {
        if k > n {
            0
        } else {
            self.rows[n as usize][k as usize]
        }
    }
}

/// Two-sided Fisher p-value by enumerating every table with the observed
/// margins in exact integer arithmetic.
pub fn fisher_enumeration(bin: &Binomials, a: u64, b: u64, c: u64, d: u64) -> f64 {
    let n = a + b + c + d;
    if n == 0 {
        return 1.0;
    }
    let (r1, r2, c1) = (a + b, c + d, a + c);
    let weight = |x: u64| bin.choose(r1, x) * bin.choose(r2, c1 - x);
    let observed = weight(a);
    // x is as extreme as the observed table when weight(x) <= observed * (1 + 1e-7)
    let bound = observed + observed / 10_000_000;
    let lo = c1.saturating_sub(r2);
    let hi = r1.min(c1);
    let mut num: u128 = 0;
    for x in lo..=hi {
        let w = weight(x);
        if w <= bound {
            num += w;
        }
    }
    num as f64 / bin.choose(n, c1) as f64
}

/// Two-sided Fisher p-value from the hypergeometric ratio recurrence,
/// scaled to the mode so large margins neither overflow nor need log-gamma.
pub fn fisher_recurrence(a: u64, b: u64, c: u64, d: u64) -> f64 {
    let (r1, r2, c1) = ((a + b) as f64, (c + d) as f64, (a + c) as f64);
    let lo = (a + c).saturating_sub(c + d);
    let hi = (a + b).min(a + c);
    let len = (hi - lo + 1) as usize;
    // w[i + 1] / w[i] for x = lo + i
    let ratio = |x: f64| (r1 - x) * (c1 - x) / ((x + 1.0) * (r2 - c1 + x + 1.0));
    let mode = ((r1 + 1.0) * (c1 + 1.0) / (r1 + r2 + 2.0)).floor() as u64;
    let k = (mode.clamp(lo, hi) - lo) as usize;
    let mut w = vec![1.0f64; len];
    for i in (k + 1)..len {
        w[i] = w[i - 1] * ratio((lo + i as u64 - 1) as f64);
    }
    for i in (0..k).rev() {
        w[i] = w[i + 1] / ratio((lo + i as u64) as f64);
    }
    let total: f64 = w.iter().sum();
    let observed = w[(a - lo) as usize];
    let p: f64 = w.iter().filter(|&&v| v <= observed * (1.0 + 1e-7)).sum();
    (p / total).min(1.0)
}

/// Local linear fit at `x0` by solving the 2×2 weighted normal equations.
///
/// The neighbourhood is the `floor(span * n)` nearest points and weights are
/// tricube in the distance divided by the largest of those distances.
pub fn loess_naive(points: &[(f64, f64)], span: f64, x0: f64) -> f64 {
    // the epsilon keeps products like 0.3 * 10 from flooring to 2
    let q = ((span * points.len() as f64 + 1e-9).floor() as usize)
        .max(3)
        .min(points.len());
    let mut dists: Vec<f64> = points.iter().map(|p| (p.0 - x0).abs()).collect();
    dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = dists[q - 1];
    let (mut s0, mut s1, mut s2, mut t0, mut t1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let u = (x - x0).abs() / h;
        let w = if u < 1.0 { (1.0 - u.powi(3)).powi(3) } else { 0.0 };
        s0 += w;
        s1 += w * x;
        s2 += w * x * x;
        t0 += w * y;
        t1 += w * x * y;
    }
    let det = s0 * s2 - s1 * s1;
    let intercept = (t0 * s2 - s1 * t1) / det;
    let slope = (s0 * t1 - s1 * t0) / det;
    intercept + slope * x0
}

/// Mean theta per `(source, year)` and topic, by a single pass over the
/// documents. Only fitted documents contribute.
pub fn naive_prevalence(model: &TopicModel, corpus: &Corpus) -> BTreeMap<(String, i32), Vec<f64>> {
    let mut sums: BTreeMap<(String, i32), (Vec<f64>, usize)> = BTreeMap::new();
    for (d, doc) in corpus.documents().iter().enumerate() {
        if !model.is_fitted(d) {
            continue;
        }
        let entry = sums
            .entry((doc.source.clone(), doc.year))
            .or_insert_with(|| (vec![0.0; model.topics()], 0));
        for (acc, p) in entry.0.iter_mut().zip(model.theta(d)) {
            *acc += p;
        }
        entry.1 += 1;
    }
    sums.into_iter()
        .map(|(k, (s, n))| (k, s.into_iter().map(|v| v / n as f64).collect()))
        .collect()
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// Best one-to-one assignment of true topics to recovered topics by
/// exhaustive search, returning `(mean cosine, recovered index per true topic)`.
///
/// Exact for the handful of topics used in tests; requires
/// `recovered.len() >= truth.len()`.
pub fn matched_cosine(recovered: &[Vec<f64>], truth: &[Vec<f64>]) -> (f64, Vec<usize>) {
    assert!(recovered.len() >= truth.len());
    let sim: Vec<Vec<f64>> = truth
        .iter()
        .map(|t| recovered.iter().map(|r| cosine(r, t)).collect())
        .collect();
    fn search(sim: &[Vec<f64>], i: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, best: &mut (f64, Vec<usize>)) {
        if i == sim.len() {
            let total: f64 = cur.iter().enumerate().map(|(t, &r)| sim[t][r]).sum();
            if total > best.0 {
                *best = (total, cur.clone());
            }
            return;
        }
        for r in 0..used.len() {
            if !used[r] {
                used[r] = true;
                cur.push(r);
                search(sim, i + 1, used, cur, best);
                cur.pop();
                used[r] = false;
            }
        }
    }
    let mut best = (f64::NEG_INFINITY, Vec::new());
    search(&sim, 0, &mut vec![false; recovered.len()], &mut Vec::new(), &mut best);
    (best.0 / truth.len() as f64, best.1)
}

/// Draw from a symmetric or general Dirichlet.
pub fn dirichlet(rng: &mut impl Rng, alpha: &[f64]) -> Vec<f64> {
    let draws: Vec<f64> = alpha
        .iter()
        .map(|&a| Gamma::new(a, 1.0).unwrap().sample(rng).max(1e-300))
        .collect();
    let s: f64 = draws.iter().sum();
    draws.into_iter().map(|g| g / s).collect()
}

/// Index drawn from a probability vector.
pub fn categorical(rng: &mut impl Rng, p: &[f64]) -> usize {
    let u: f64 = rng.random::<f64>() * p.iter().sum::<f64>();
    let mut acc = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        acc += pi;
        if u < acc {
            return i;
        }
    }
    p.len() - 1
}

/// Documents drawn from the LDA generative process with fixed topics.
pub struct PlantedCorpus {
    pub phi: Vec<Vec<f64>>,
    pub streams: Vec<Vec<u32>>,
}

/// `topics` sharp topics over `vocab` words: topic k puts 90% of its mass
/// uniformly on its own block of `vocab / topics` words and spreads the rest
/// over the whole vocabulary.
pub fn planted_lda(seed: u64, docs: usize, doc_len: usize, topics: usize, vocab: usize, alpha: f64) -> PlantedCorpus {
    let block = vocab / topics;
    let phi: Vec<Vec<f64>> = (0..topics)
        .map(|k| {
            (0..vocab)
                .map(|w| {
                    let own = if w / block == k { 0.9 / block as f64 } else { 0.0 };
                    own + 0.1 / vocab as f64
                })
                .collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let streams = (0..docs)
        .map(|_| {
            let theta = dirichlet(&mut rng, &vec![alpha; topics]);
            (0..doc_len)
                .map(|_| {
                    let k = categorical(&mut rng, &theta);
                    categorical(&mut rng, &phi[k]) as u32
                })
                .collect()
        })
        .collect();
    PlantedCorpus { phi, streams }
}

/// `n` distinct lowercase ASCII pseudo-words of the form CVCVk.
///
/// No Spanish suffix ends in `k`, so each word is its own stem and survives
/// tokenization unchanged.
pub fn pseudo_words(n: usize) -> Vec<String> {
    const C: &[u8] = b"bcdfgjlmnprstvz";
    const V: &[u8] = b"aeiou";
    let cap = C.len() * V.len() * C.len() * V.len();
    assert!(n <= cap, "at most {cap} pseudo-words");
    (0..n)
        .map(|i| {
            // stride through the space so neighbouring indices differ early
            let j = (i * 7919) % cap;
            let (c1, r) = (j % C.len(), j / C.len());
            let (v1, r) = (r % V.len(), r / V.len());
            let (c2, r) = (r % C.len(), r / C.len());
            let v2 = r % V.len();
            String::from_utf8(vec![C[c1], V[v1], C[c2], V[v2], b'k']).unwrap()
        })
        .collect()
}

/// Streams of uniform random word ids with lengths in `1..=max_len`.
pub fn random_streams(seed: u64, docs: usize, vocab: u32, max_len: usize) -> Vec<Vec<u32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..docs)
        .map(|_| {
            let len = rng.random_range(1..=max_len);
            (0..len).map(|_| rng.random_range(0..vocab)).collect()
        })
        .collect()
}

/// `n` points of a jittered sine with uniform noise.
pub fn noisy_sine(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let x = i as f64 * 0.2 + rng.random::<f64>() * 0.05;
            (x, x.sin() + 0.3 * (rng.random::<f64>() - 0.5))
        })
        .collect()
}

const BAG: &[&str] = &[
    "madre", "padre", "casa", "ciencia", "moda", "estilo", "empresa", "familia", "niños", "colegio", "ropa", "mundo",
    "vida", "tiempo", "ciudad", "amor",
];

/// Random bag-of-words Spanish corpus over sources `a`/`b` and 2010..=2014.
/// Every 23rd document (from index 7) holds only `de la`, so it is empty
/// once those two words are filtered.
pub fn bag_corpus(seed: u64, docs: usize) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let docs = (0..docs)
        .map(|i| {
            let source = if rng.random_bool(0.5) { "a" } else { "b" };
            let year = 2010 + rng.random_range(0..5);
            let text = if i % 23 == 7 {
                String::from("de la")
            } else {
                let n = rng.random_range(3..30);
                (0..n)
                    .map(|_| BAG[rng.random_range(0..BAG.len())])
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            Document::new(format!("d{i}"), source, year, text)
        })
        .collect();
    Corpus::from_documents(docs, YearRange::default()).unwrap().0
}

/// Twelve short documents whose list counts are small enough to check by hand.
pub fn twelve_docs() -> Corpus {
    let docs = [
        ("a", 2010, "La madre y el padre."),
        ("a", 2010, "Mamá compró ropa."),
        ("a", 2010, "Hijos, hijos, HIJOS de la casa"),
        ("a", 2011, "Ciencia y tecnología"),
        ("a", 2011, "El bebé duerme"),
        ("a", 2011, "Una familia con su papá"),
        ("b", 2010, "Moda, estilo y diseño"),
        ("b", 2010, "Padres e hijas"),
        ("b", 2010, "Madres"),
        ("b", 2011, "La familia, la familia"),
        ("b", 2011, "Niños en el colegio"),
        ("b", 2011, "mamá MAMÁ Mama"),
    ];
    let docs = docs
        .iter()
        .enumerate()
        .map(|(i, (s, y, t))| Document::new(format!("d{i}"), *s, *y, *t))
        .collect();
    Corpus::from_documents(docs, YearRange::default()).unwrap().0
}

/// One record of a generated corpus.
#[derive(Clone, Debug)]
pub struct Record {
    pub id: String,
    pub source: String,
    pub year: i32,
    pub text: String,
}

/// Two-source corpus in which one planted topic's prevalence gap closes
/// linearly and one word list keeps a constant frequency ratio.
pub struct GapStudy {
    pub records: Vec<Record>,
    pub sources: [String; 2],
    pub years: Vec<i32>,
    /// Words of the planted topic.
    pub planted_words: Vec<String>,
    /// Words of the constant-ratio list.
    pub list_words: Vec<String>,
    /// Planted prevalence gap (first source minus second) per year.
    pub planted_gap: Vec<f64>,
}

pub struct GapStudyParams {
    pub seed: u64,
    pub first_year: i32,
    pub last_year: i32,
    pub docs_per_cell: usize,
    pub tokens_per_doc: usize,
    /// Background topics besides the planted one.
    pub background_topics: usize,
    pub words_per_topic: usize,
    /// Planted-topic share in the second source, every year.
    pub base_share: f64,
    pub gap_start: f64,
    pub gap_end: f64,
    /// Per-token probability of a list word in the second source.
    pub list_rate: f64,
    /// First-source list rate over second-source list rate.
    pub list_ratio: f64,
}

impl Default for GapStudyParams {
    fn default() -> Self {
        Self {
            seed: 7,
            first_year: 2008,
            last_year: 2018,
            docs_per_cell: 50,
            tokens_per_doc: 200,
            background_topics: 4,
            words_per_topic: 25,
            base_share: 0.05,
            gap_start: 0.30,
            gap_end: 0.0,
            list_rate: 0.002,
            list_ratio: 3.0,
        }
    }
}

pub fn gap_study(p: &GapStudyParams) -> GapStudy {
    let topics = p.background_topics + 1;
    let words = pseudo_words(topics * p.words_per_topic + 3);
    let topic_words: Vec<&[String]> = words[..topics * p.words_per_topic].chunks(p.words_per_topic).collect();
    let list_words = words[topics * p.words_per_topic..].to_vec();
    let sources = [String::from("alfa"), String::from("beta")];
    let years: Vec<i32> = (p.first_year..=p.last_year).collect();
    let span = (years.len().max(2) - 1) as f64;
    let planted_gap: Vec<f64> = (0..years.len())
        .map(|i| p.gap_start + (p.gap_end - p.gap_start) * i as f64 / span)
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut records = Vec::new();
    for (yi, &year) in years.iter().enumerate() {
        for (si, source) in sources.iter().enumerate() {
            let share = p.base_share + if si == 0 { planted_gap[yi] } else { 0.0 };
            let list_rate = p.list_rate * if si == 0 { p.list_ratio } else { 1.0 };
            for n in 0..p.docs_per_cell {
                let rest = dirichlet(&mut rng, &vec![1.0; p.background_topics]);
                let mut theta = vec![share];
                theta.extend(rest.iter().map(|r| r * (1.0 - share)));
                let tokens: Vec<&str> = (0..p.tokens_per_doc)
                    .map(|_| {
                        if rng.random::<f64>() < list_rate {
                            list_words[rng.random_range(0..list_words.len())].as_str()
                        } else {
                            let k = categorical(&mut rng, &theta);
                            topic_words[k][rng.random_range(0..p.words_per_topic)].as_str()
                        }
                    })
                    .collect();
                records.push(Record {
                    id: format!("{source}-{year}-{n:03}"),
                    source: source.clone(),
                    year,
                    text: tokens.join(" "),
                });
            }
        }
    }
    GapStudy {
        records,
        sources,
        years,
        planted_words: topic_words[0].to_vec(),
        list_words,
        planted_gap,
    }
}
