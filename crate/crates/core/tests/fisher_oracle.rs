use diachron_core::{compare_sources, fisher_exact_two_sided, FrequencyPoint};
use diachron_testkit::{fisher_enumeration, fisher_recurrence, Binomials};

#[test]
fn matches_enumeration_for_margins_up_to_30() {
    let bin = Binomials::up_to(60);
    let mut worst = 0.0f64;
    let mut tables = 0;
    for r1 in 0..=30u64 {
        for a in 0..=r1 {
            let b = r1 - a;
            for c in 0..=(30 - a) {
                for d in 0..=(30 - b).min(30 - c) {
                    let p = fisher_exact_two_sided(a, b, c, d);
                    let q = fisher_enumeration(&bin, a, b, c, d);
                    worst = worst.max((p - q).abs());
                    assert!((p - q).abs() < 1e-10, "({a},{b},{c},{d}): {p} vs {q}");
                    assert!((0.0..=1.0).contains(&p));
                    tables += 1;
                }
            }
        }
    }
    assert!(tables > 100_000, "{tables}");
    assert!(worst < 1e-10);
}

#[test]
fn symmetry_identities_are_exact() {
    for a in 0..12u64 {
        for b in 0..12 {
            for (c, d) in [(0u64, 5u64), (3, 3), (9, 1), (11, 7)] {
                let p = fisher_exact_two_sided(a, b, c, d);
                assert_eq!(p.to_bits(), fisher_exact_two_sided(c, d, a, b).to_bits());
                assert_eq!(p.to_bits(), fisher_exact_two_sided(b, a, d, c).to_bits());
            }
        }
    }
}

#[test]
fn known_values() {
    assert_eq!(fisher_exact_two_sided(5, 5, 5, 5), 1.0);
    let bin = Binomials::up_to(20);
    let p = fisher_exact_two_sided(0, 10, 10, 0);
    assert!((p - fisher_enumeration(&bin, 0, 10, 10, 0)).abs() < 1e-12);
}

#[test]
fn hundred_versus_ten_per_thousand_is_significant() {
    let point = |source: &str, hits| FrequencyPoint {
        source: source.into(),
        year: 2012,
        list_label: "l".into(),
        hits,
        total: 1000,
        value: hits as f64 / 1000.0,
    };
    let r = compare_sources(&[point("a", 100)], &[point("b", 10)], 0.05);
    let oracle = fisher_recurrence(100, 900, 10, 990);
    assert!(oracle < 0.05);
    assert!(r[0].significant);
    assert!((r[0].p_value - oracle).abs() <= 1e-10 + 1e-6 * oracle);
}

#[test]
fn recurrence_oracle_agrees_on_large_tables() {
    let bin = Binomials::up_to(120);
    for t in [[3u64, 9, 14, 2], [0, 60, 60, 0], [30, 30, 29, 31]] {
        let [a, b, c, d] = t;
        assert!((fisher_recurrence(a, b, c, d) - fisher_enumeration(&bin, a, b, c, d)).abs() < 1e-12);
    }
    for t in [
        [1200u64, 998_800, 400, 999_600],
        [500, 9_500, 510, 9_490],
        [40, 4000, 70, 4100],
    ] {
        let [a, b, c, d] = t;
        let p = fisher_exact_two_sided(a, b, c, d);
        let q = fisher_recurrence(a, b, c, d);
        assert!((p - q).abs() <= 1e-10 + 1e-8 * q, "{t:?}: {p} vs {q}");
    }
}
