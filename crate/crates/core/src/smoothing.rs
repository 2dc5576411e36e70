//! Local linear regression (LOESS) with pointwise confidence bands.
//!
//! Each evaluation point gets a weighted least-squares line through its
//! `floor(span * n)` nearest observations, weighted by the tricube kernel of
//! the distance scaled to the farthest of them. There are no robustness
//! iterations. Bands use the linear-smoother variance `σ² Σ l_i²` with
//! `σ² = RSS / δ1` and a t quantile with `δ1² / δ2` degrees of freedom, where
//! `δ1 = tr((I-L)ᵀ(I-L))` and `δ2 = tr([(I-L)ᵀ(I-L)]²)`.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::special::student_t_quantile;

/// Degree of the local polynomial.
pub const DEGREE: usize = 1;

/// Points added between consecutive observations on the densified grid.
pub const DENSIFY_FACTOR: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SmoothConfig {
    /// Fraction of the observations used in each local fit, in `(0, 1]`.
    pub span: f64,
    pub ci_level: f64,
    /// Evaluate on a grid ten times finer than the observations.
    pub densify: bool,
}

impl Default for SmoothConfig {
    fn default() -> Self {
        Self {
            span: 0.75,
            ci_level: 0.95,
            densify: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SmoothError {
    #[error("LOESS needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("x value {0} appears more than once")]
    DuplicateX(f64),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("span {0} outside (0, 1]")]
    BadSpan(f64),
    #[error("confidence level {0} outside (0, 1)")]
    BadLevel(f64),
    #[error("span keeps {window} of {n} points; each local fit needs at least {min}")]
    WindowTooSmall { window: usize, n: usize, min: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothedSeries {
    pub x: Vec<f64>,
    pub fitted: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Residual scale estimate.
    pub sigma: f64,
    /// Degrees of freedom of the t quantile.
    pub df: f64,
    /// Evaluation indices where the local design was degenerate and a
    /// weighted mean was used instead of a line.
    pub fallback: Vec<usize>,
}

fn tricube(u: f64) -> f64 {
    if u >= 1.0 {
        0.0
    } else {
        let t = 1.0 - u * u * u;
        t * t * t
    }
}

struct Smoother {
    xs: Vec<f64>,
    window: usize,
}

impl Smoother {
    /// Weights `l` such that the fit at `x0` is `Σ l_i y_i`; the flag marks a
    /// weighted-mean fallback.
    fn row(&self, x0: f64) -> (Vec<f64>, bool) {
        let dist: Vec<f64> = self.xs.iter().map(|x| (x - x0).abs()).collect();
        let mut sorted = dist.clone();
        sorted.sort_by(f64::total_cmp);
        let h = sorted[self.window - 1];
        let w: Vec<f64> = dist
            .iter()
            .map(|&d| if h > 0.0 { tricube(d / h) } else { f64::from(d == 0.0) })
            .collect();
        // work in offsets from x0 so large abscissae (years) do not cancel
        let dx: Vec<f64> = self.xs.iter().map(|x| x - x0).collect();
        let sw: f64 = w.iter().sum();
        let xm = w.iter().zip(&dx).map(|(w, x)| w * x).sum::<f64>() / sw;
        let sxx: f64 = w.iter().zip(&dx).map(|(w, x)| w * (x - xm) * (x - xm)).sum();
        let positive = w.iter().filter(|&&w| w > 0.0).count();
        if positive <= DEGREE || sxx <= f64::EPSILON * h * h * sw {
            return (w.iter().map(|w| w / sw).collect(), true);
        }
        let row = w
            .iter()
            .zip(&dx)
            .map(|(w, x)| w * (1.0 / sw - xm * (x - xm) / sxx))
            .collect();
        (row, false)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(a, b)| a * b).sum()
}

/// Observed abscissae with `DENSIFY_FACTOR - 1` evenly spaced points between neighbours.
pub fn densified_grid(sorted_x: &[f64]) -> Vec<f64> {
    let mut grid = Vec::with_capacity(sorted_x.len() * DENSIFY_FACTOR);
    for pair in sorted_x.windows(2) {
        for j in 0..DENSIFY_FACTOR {
            grid.push(pair[0] + (pair[1] - pair[0]) * j as f64 / DENSIFY_FACTOR as f64);
        }
    }
    grid.extend(sorted_x.last());
    grid
}

/// Smooths `points`, evaluating at the sorted observed x values (or the
/// densified grid when `config.densify` is set).
pub fn loess_fit(points: &[(f64, f64)], config: &SmoothConfig) -> Result<SmoothedSeries, SmoothError> {
    loess_eval(points, config, None)
}

/// Smooths `points` and evaluates at `at` when given.
pub fn loess_eval(
    points: &[(f64, f64)],
    config: &SmoothConfig,
    at: Option<&[f64]>,
) -> Result<SmoothedSeries, SmoothError> {
    let n = points.len();
    if n < 3 {
        return Err(SmoothError::TooFewPoints(n));
    }
    if !(config.span > 0.0 && config.span <= 1.0) {
        return Err(SmoothError::BadSpan(config.span));
    }
    if !(config.ci_level > 0.0 && config.ci_level < 1.0) {
        return Err(SmoothError::BadLevel(config.ci_level));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(SmoothError::NonFinite);
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(w) = pts.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(SmoothError::DuplicateX(w[0].0));
    }
    let window = ((config.span * n as f64) + 1e-10) as usize;
    let window = window.min(n);
    if window < DEGREE + 2 {
        return Err(SmoothError::WindowTooSmall {
            window,
            n,
            min: DEGREE + 2,
        });
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let smoother = Smoother { xs, window };

    // operator at the observations
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        let (row, _) = smoother.row(smoother.xs[i]);
        l[i * n..(i + 1) * n].copy_from_slice(&row);
    }
    let rss: f64 = (0..n)
        .map(|i| {
            let r = ys[i] - dot(&l[i * n..(i + 1) * n], &ys);
            r * r
        })
        .sum();
    // M = (I - L)ᵀ (I - L)
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let mut s = 0.0;
            for r in 0..n {
                let a = f64::from(r == i) - l[r * n + i];
                let b = f64::from(r == j) - l[r * n + j];
                s += a * b;
            }
            m[i * n + j] = s;
            m[j * n + i] = s;
        }
    }
    let delta1: f64 = (0..n).map(|i| m[i * n + i]).sum();
    let delta2: f64 = m.iter().map(|v| v * v).sum();

    let (sigma, df) = if delta1 <= 1e-10 {
        log::warn!("LOESS smoother interpolates the data; confidence band collapsed");
        (0.0, f64::INFINITY)
    } else {
        let df = if delta2 > 0.0 {
            delta1 * delta1 / delta2
        } else {
            f64::INFINITY
        };
        (libm::sqrt(rss / delta1), df)
    };
    let t = if sigma > 0.0 {
        student_t_quantile(0.5 + config.ci_level / 2.0, df)
    } else {
        0.0
    };

    let eval_x: Vec<f64> = match at {
        Some(at) => at.to_vec(),
        None if config.densify => densified_grid(&smoother.xs),
        None => smoother.xs.clone(),
    };
    let mut out = SmoothedSeries {
        x: Vec::with_capacity(eval_x.len()),
        fitted: Vec::with_capacity(eval_x.len()),
        lower: Vec::with_capacity(eval_x.len()),
        upper: Vec::with_capacity(eval_x.len()),
        sigma,
        df,
        fallback: Vec::new(),
    };
    for (i, &x0) in eval_x.iter().enumerate() {
        let (row, fallback) = smoother.row(x0);
        if fallback {
            log::warn!("degenerate local design at x = {x0}; using weighted mean");
            out.fallback.push(i);
        }
        let fit = dot(&row, &ys);
        let half = t * sigma * libm::sqrt(dot(&row, &row));
        out.x.push(x0);
        out.fitted.push(fit);
        out.lower.push(fit - half);
        out.upper.push(fit + half);
    }
    Ok(out)
}
