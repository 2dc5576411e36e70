use diachron_core::{loess_eval, loess_fit, SmoothConfig};
use diachron_testkit::{loess_naive, noisy_sine};

fn cfg(span: f64) -> SmoothConfig {
    SmoothConfig {
        span,
        ..SmoothConfig::default()
    }
}

#[test]
fn exact_on_collinear_data() {
    let years: Vec<(f64, f64)> = (2008..=2018).map(|y| (y as f64, 2.0 * y as f64 + 1.0)).collect();
    let irregular: Vec<(f64, f64)> = [0.0, 0.3, 1.7, 2.0, 4.5, 4.6, 9.0]
        .iter()
        .map(|&x| (x, 1.0 - 0.5 * x))
        .collect();
    for pts in [&years, &irregular] {
        for span in [0.5, 0.75, 1.0] {
            let mut c = cfg(span);
            c.densify = true;
            let s = loess_fit(pts, &c).unwrap();
            let (a, b) = (pts[1].1 - pts[0].1, pts[1].0 - pts[0].0);
            for (x, f) in s.x.iter().zip(&s.fitted) {
                let truth = pts[0].1 + a / b * (x - pts[0].0);
                assert!((f - truth).abs() < 1e-9, "span {span} at {x}: {f} vs {truth}");
            }
            assert!(s.sigma < 1e-6);
        }
    }
}

#[test]
fn matches_naive_normal_equations_on_noisy_sine() {
    let pts = noisy_sine(50, 11);
    for span in [0.3, 0.5, 0.75] {
        let s = loess_fit(&pts, &cfg(span)).unwrap();
        assert!(s.fallback.is_empty());
        for (x, f) in s.x.iter().zip(&s.fitted) {
            let oracle = loess_naive(&pts, span, *x);
            assert!((f - oracle).abs() < 1e-9, "span {span} at {x}: {f} vs {oracle}");
        }
    }
    // off-sample evaluation points as well
    let grid: Vec<f64> = (0..40).map(|i| 0.13 + i as f64 * 0.24).collect();
    let s = loess_eval(&pts, &cfg(0.5), Some(&grid)).unwrap();
    for (x, f) in grid.iter().zip(&s.fitted) {
        assert!((f - loess_naive(&pts, 0.5, *x)).abs() < 1e-9);
    }
}

#[test]
fn translation_and_scale_equivariance() {
    let pts = noisy_sine(50, 3);
    let base = loess_fit(&pts, &cfg(0.5)).unwrap();
    let shifted: Vec<_> = pts.iter().map(|&(x, y)| (x, y + 3.5)).collect();
    let s = loess_fit(&shifted, &cfg(0.5)).unwrap();
    for i in 0..pts.len() {
        assert!((s.fitted[i] - base.fitted[i] - 3.5).abs() < 1e-9);
        assert!(((s.upper[i] - s.lower[i]) - (base.upper[i] - base.lower[i])).abs() < 1e-9);
    }
    for a in [-2.0, 0.01, 40.0] {
        let scaled: Vec<_> = pts.iter().map(|&(x, y)| (x, a * y)).collect();
        let s = loess_fit(&scaled, &cfg(0.5)).unwrap();
        for i in 0..pts.len() {
            assert!((s.fitted[i] - a * base.fitted[i]).abs() < 1e-9);
            let w = s.upper[i] - s.lower[i];
            assert!((w - a.abs() * (base.upper[i] - base.lower[i])).abs() < 1e-9);
        }
    }
}

#[test]
fn fit_depends_only_on_the_window() {
    let pts = noisy_sine(30, 5);
    let span = 0.3;
    let q = (span * 30.0_f64 + 1e-9).floor() as usize;
    let x0 = pts[4].0;
    let mut by_dist: Vec<usize> = (0..pts.len()).collect();
    by_dist.sort_by(|&a, &b| (pts[a].0 - x0).abs().total_cmp(&(pts[b].0 - x0).abs()));
    let before = loess_eval(&pts, &cfg(span), Some(&[x0])).unwrap().fitted[0];
    let mut moved = pts.clone();
    for &i in &by_dist[q..] {
        moved[i].1 += 100.0;
    }
    let after = loess_eval(&moved, &cfg(span), Some(&[x0])).unwrap().fitted[0];
    assert_eq!(before, after);
    let mut inside = pts.clone();
    inside[by_dist[0]].1 += 1.0;
    assert_ne!(before, loess_eval(&inside, &cfg(span), Some(&[x0])).unwrap().fitted[0]);
}

#[test]
fn constant_series_has_zero_width_band() {
    let pts: Vec<_> = (2008..=2018).map(|y| (y as f64, 0.125)).collect();
    let s = loess_fit(&pts, &SmoothConfig::default()).unwrap();
    for i in 0..pts.len() {
        assert!((s.fitted[i] - 0.125).abs() < 1e-12);
        assert!(s.upper[i] - s.lower[i] < 1e-9);
    }
}

#[test]
fn band_brackets_fit() {
    let pts = noisy_sine(11, 9);
    let c = SmoothConfig {
        densify: true,
        ..SmoothConfig::default()
    };
    let s = loess_fit(&pts, &c).unwrap();
    assert_eq!(s.x.len(), 101);
    for i in 0..s.x.len() {
        assert!(s.lower[i] <= s.fitted[i] && s.fitted[i] <= s.upper[i]);
    }
    assert!(s.upper.iter().zip(&s.lower).any(|(u, l)| u > l));
}
