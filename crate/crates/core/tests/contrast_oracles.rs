use std::collections::{BTreeMap, BTreeSet};

use diachron_core::lda::fit_lda;
use diachron_core::{
    build_vocabulary, stem, tokenize, topic_prevalence, word_frequency, CellKey, CellTokenCounts, Corpus, Denominator,
    Document, FilterLists, LdaConfig, TokenizerRules, WordList, YearRange,
};
use diachron_testkit::{bag_corpus, naive_prevalence, twelve_docs};
use proptest::prelude::*;

#[test]
fn prevalence_matches_naive_mean() {
    let mut corpus = bag_corpus(1, 100);
    let rules = TokenizerRules::default();
    let filters = FilterLists::new(["de", "la"], [], [], &rules);
    let vocab = build_vocabulary(&mut corpus, &rules, &filters, 1).unwrap();
    let k = 6;
    let model = fit_lda(
        &corpus.token_streams(),
        vocab.len(),
        &LdaConfig::new(k, 3).with_schedule(60, 40, 5),
    )
    .unwrap();
    let naive = naive_prevalence(&model, &corpus);
    let mut per_cell: BTreeMap<(String, i32), f64> = BTreeMap::new();
    let mut points = 0;
    for topic in 0..k {
        for p in topic_prevalence(&model, &corpus, topic, false).unwrap() {
            let expected = naive[&(p.source.clone(), p.year)][topic];
            assert!((p.value - expected).abs() < 1e-12, "{p:?} vs {expected}");
            *per_cell.entry((p.source, p.year)).or_default() += p.value;
            points += 1;
        }
    }
    assert_eq!(points, k * naive.len());
    for (cell, sum) in per_cell {
        assert!((sum - 1.0).abs() < 1e-9, "{cell:?}: {sum}");
    }
    // the unfitted documents carry a uniform theta and keep sums at one
    for topic in 0..k {
        let with_empty = topic_prevalence(&model, &corpus, topic, true).unwrap();
        assert_eq!(with_empty.len(), corpus.doc_counts().len());
    }
}

#[test]
fn frequency_matches_hand_counts() {
    let corpus = twelve_docs();
    let rules = TokenizerRules::default();
    let filters = FilterLists::new(["el", "la", "los", "las", "y", "de", "en", "su", "con"], [], [], &rules);
    let family = WordList::new(
        "family",
        ["hijos", "madre", "mamá", "padre", "bebé", "familia", "papá"],
        None,
        &rules,
    )
    .unwrap();
    let children = WordList::new("children", ["niños", "adulto", "colegio"], None, &rules).unwrap();

    let got = |list: &WordList, denom| {
        word_frequency(&corpus, list, &rules, &filters, denom)
            .into_iter()
            .map(|p| ((p.source.clone(), p.year), (p.hits, p.total, p.value)))
            .collect::<BTreeMap<_, _>>()
    };
    let key = |s: &str, y| (String::from(s), y);
    // (hits, filtered total) counted by hand from the texts above
    let expected = [
        (key("a", 2010), 6, 9),
        (key("a", 2011), 3, 7),
        (key("b", 2010), 0, 7),
        (key("b", 2011), 5, 7),
    ];
    let family_f = got(&family, Denominator::Filtered);
    for (cell, hits, total) in &expected {
        assert_eq!(
            family_f[cell],
            (*hits, *total, *hits as f64 / *total as f64),
            "{cell:?}"
        );
    }
    let raw_totals = [14u64, 11, 8, 11];
    let family_r = got(&family, Denominator::Raw);
    for ((cell, hits, _), raw) in expected.iter().zip(raw_totals) {
        assert_eq!(family_r[cell].0, *hits);
        assert_eq!(family_r[cell].1, raw);
    }
    let children_f = got(&children, Denominator::Filtered);
    assert_eq!(children_f[&key("b", 2011)], (2, 7, 2.0 / 7.0));
    assert_eq!(children_f.values().map(|v| v.0).sum::<u64>(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn frequency_bounds(
        texts in proptest::collection::vec(("[ab]", 2008i32..2012, "[a-eñ ]{1,40}"), 1..12),
        words in proptest::collection::btree_set("[a-eñ]{1,3}", 1..6),
        stop in proptest::collection::btree_set("[a-e]{1,2}", 0..4),
    ) {
        let docs: Vec<Document> = texts
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.2.trim().is_empty())
            .map(|(i, (s, y, t))| Document::new(format!("d{i}"), s.as_str(), *y, t.as_str()))
            .collect();
        prop_assume!(!docs.is_empty());
        let corpus = Corpus::from_documents(docs, YearRange::default()).unwrap().0;
        let rules = TokenizerRules::default();
        let filters = FilterLists::new(stop.iter().map(String::as_str), [], [], &rules);
        let list = WordList::new("l", words.iter().map(String::as_str), None, &rules).unwrap();
        let counts = CellTokenCounts::from_corpus(&corpus, &rules, &filters);
        for denom in [Denominator::Filtered, Denominator::Raw] {
            for p in counts.frequency(&list, denom) {
                prop_assert!(p.total > 0);
                prop_assert!(p.hits <= p.total);
                prop_assert!((0.0..=1.0).contains(&p.value));
                prop_assert_eq!(p.value, p.hits as f64 / p.total as f64);
            }
        }
    }
}

#[test]
fn partition_recount_and_completeness() {
    let corpus = bag_corpus(2, 100);
    let mut scan: BTreeMap<CellKey, usize> = BTreeMap::new();
    for d in corpus.documents() {
        *scan.entry(CellKey::new(d.source.as_str(), d.year)).or_default() += 1;
    }
    assert_eq!(&scan, corpus.doc_counts());
    let mut union = BTreeSet::new();
    for key in scan.keys() {
        let part = corpus.partition(&key.source, key.year);
        assert_eq!(part.len(), scan[key]);
        for d in part {
            assert!(union.insert(d.id.clone()), "{} in two cells", d.id);
        }
    }
    let all: BTreeSet<String> = corpus.documents().iter().map(|d| d.id.clone()).collect();
    assert_eq!(union, all);
    assert_eq!(corpus.doc_counts().values().sum::<usize>(), corpus.len());
    assert!(corpus.partition("zzz", 2010).is_empty());
}

#[test]
fn vocabulary_is_consistent_and_destems_to_the_mode() {
    let mut corpus = bag_corpus(3, 100);
    let docs = corpus.documents().to_vec();
    let rules = TokenizerRules::default();
    let filters = FilterLists::new(["de", "la"], [], [], &rules);
    let vocab = build_vocabulary(&mut corpus, &rules, &filters, 1).unwrap();

    // surface counts per stem by direct scan
    let mut by_stem: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
    for d in &docs {
        for t in tokenize(&d.text, &rules) {
            if !filters.contains(&t) {
                *by_stem.entry(stem(&t)).or_default().entry(t).or_default() += 1;
            }
        }
    }
    assert_eq!(vocab.len(), by_stem.len());
    for (id, term) in vocab.terms().iter().enumerate() {
        let id = id as u32;
        assert_eq!(vocab.id(term), Some(id));
        let surfaces = &by_stem[term];
        let best = surfaces.values().max().unwrap();
        let modal = surfaces.iter().find(|(_, c)| *c == best).unwrap().0;
        assert_eq!(vocab.destem(id), Some(modal.as_str()));
        assert_eq!(stem(vocab.destem(id).unwrap()), *term);
        assert_eq!(vocab.term_freq(id), Some(surfaces.values().sum()));
    }
    // streams hold exactly the kept tokens
    let kept: usize = by_stem.values().flat_map(|m| m.values()).sum::<u64>() as usize;
    assert_eq!(corpus.token_streams().iter().map(Vec::len).sum::<usize>(), kept);
}

#[test]
fn destem_picks_the_frequent_form_of_the_family() {
    let docs = vec![
        Document::new("1", "a", 2010, "niños niña niños"),
        Document::new("2", "a", 2011, "niño niñas niños"),
    ];
    let mut corpus = Corpus::from_documents(docs, YearRange::default()).unwrap().0;
    let vocab = build_vocabulary(&mut corpus, &TokenizerRules::default(), &FilterLists::empty(), 1).unwrap();
    let id = vocab.id(&stem("niños")).unwrap();
    assert_eq!(vocab.destem(id), Some("niños"));
}
