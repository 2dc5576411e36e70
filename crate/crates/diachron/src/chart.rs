//! Standalone SVG time-series charts.
//!
//! Each chart shows the observed value per source and year, a LOESS curve
//! with its confidence band per source, and a grey band behind every year
//! whose between-source difference was not significant.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use diachron_core::{loess_fit, SmoothConfig};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 4] = ["#1b6ca8", "#c0392b", "#27ae60", "#8e44ad"];

/// Observations of one source.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceSeries {
    pub source: String,
    /// `(year, proportion)`, any order.
    pub points: Vec<(i32, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartSpec {
    pub title: String,
    pub y_label: String,
    pub series: Vec<SourceSeries>,
    /// Years shaded as not significant.
    pub nonsig_years: BTreeSet<i32>,
    pub smoothing: SmoothConfig,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Round tick step covering `max` in about five steps.
fn tick_step(max: f64) -> f64 {
    let raw = max / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag)
}

struct Frame {
    x0: f64,
    x1: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, year: f64) -> f64 {
        LEFT + (year - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    /// `v` in percent.
    fn y(&self, v: f64) -> f64 {
        let v = v.clamp(0.0, self.y_max);
        HEIGHT - BOTTOM - v / self.y_max * (HEIGHT - TOP - BOTTOM)
    }
}

/// Renders the chart. Values are proportions and are drawn in percent.
pub fn render(spec: &ChartSpec) -> String {
    let years: BTreeSet<i32> = spec
        .series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .chain(spec.nonsig_years.iter().copied())
        .collect();
    let (first, last) = match (years.first(), years.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (0, 0),
    };

    let mut curves = Vec::new();
    for s in &spec.series {
        let mut pts: Vec<(f64, f64)> = s.points.iter().map(|&(y, v)| (f64::from(y), v * 100.0)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let curve = if pts.len() >= 3 {
            match loess_fit(&pts, &spec.smoothing) {
                Ok(c) => Some(c),
                Err(e) => {
                    log::warn!("{}: no smoothed curve for `{}`: {e}", spec.title, s.source);
                    None
                }
            }
        } else {
            log::warn!(
                "{}: `{}` has {} points; no smoothed curve",
                spec.title,
                s.source,
                pts.len()
            );
            None
        };
        curves.push((pts, curve));
    }
    let top = curves
        .iter()
        .flat_map(|(pts, c)| {
            pts.iter()
                .map(|p| p.1)
                .chain(c.iter().flat_map(|c| c.upper.iter().copied()))
        })
        .fold(0.0f64, f64::max);
    let step = tick_step(if top > 0.0 { top * 1.05 } else { 1.0 });
    let frame = Frame {
        x0: f64::from(first) - 0.5,
        x1: f64::from(last) + 0.5,
        y_max: (top * 1.05 / step).ceil().max(1.0) * step,
    };
    let plot_bottom = HEIGHT - BOTTOM;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, "<title>{}</title>", escape(&spec.title));
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    for &year in &spec.nonsig_years {
        let (a, b) = (frame.x(f64::from(year) - 0.5), frame.x(f64::from(year) + 0.5));
        let _ = writeln!(
            svg,
            r##"<rect class="nonsig-band" data-year="{year}" x="{a:.3}" y="{TOP}" width="{:.3}" height="{:.3}" fill="#999999" fill-opacity="0.25"/>"##,
            b - a,
            plot_bottom - TOP
        );
    }

    // axes, ticks and grid
    let _ = writeln!(
        svg,
        r#"<g class="axes" stroke="black" fill="none"><line x1="{LEFT}" y1="{plot_bottom}" x2="{:.3}" y2="{plot_bottom}"/><line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{plot_bottom}"/></g>"#,
        WIDTH - RIGHT
    );
    let _ = writeln!(svg, r#"<g class="x-ticks" text-anchor="middle">"#);
    for year in first..=last {
        let x = frame.x(f64::from(year));
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.3}" y1="{plot_bottom}" x2="{x:.3}" y2="{:.3}" stroke="black"/><text x="{x:.3}" y="{:.3}">{year}</text>"#,
            plot_bottom + 5.0,
            plot_bottom + 20.0
        );
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, r#"<g class="y-ticks" text-anchor="end">"#);
    let n_ticks = (frame.y_max / step).round() as usize;
    for i in 0..=n_ticks {
        let v = step * i as f64;
        let y = frame.y(v);
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}" stroke="#dddddd"/><text x="{:.3}" y="{:.3}">{}</text>"##,
            WIDTH - RIGHT,
            LEFT - 6.0,
            y + 4.0,
            trim_number(v)
        );
    }
    let _ = writeln!(svg, "</g>");

    for (i, (s, (pts, curve))) in spec.series.iter().zip(&curves).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let source = escape(&s.source);
        let _ = writeln!(svg, r#"<g class="series" data-source="{source}">"#);
        if let Some(c) = curve {
            let mut band = String::new();
            for (x, u) in c.x.iter().zip(&c.upper) {
                let _ = write!(band, "{:.3},{:.3} ", frame.x(*x), frame.y(*u));
            }
            for (x, l) in c.x.iter().zip(&c.lower).rev() {
                let _ = write!(band, "{:.3},{:.3} ", frame.x(*x), frame.y(*l));
            }
            let _ = writeln!(
                svg,
                r#"<polygon class="ci-band" points="{}" fill="{color}" fill-opacity="0.15" stroke="none"/>"#,
                band.trim_end()
            );
            let mut line = String::new();
            for (j, (x, f)) in c.x.iter().zip(&c.fitted).enumerate() {
                let _ = write!(
                    line,
                    "{}{:.3},{:.3}",
                    if j == 0 { "M" } else { " L" },
                    frame.x(*x),
                    frame.y(*f)
                );
            }
            let _ = writeln!(
                svg,
                r#"<path class="loess" d="{line}" fill="none" stroke="{color}" stroke-width="2"/>"#
            );
        }
        for &(x, v) in pts {
            let _ = writeln!(
                svg,
                r#"<circle class="point" data-year="{}" data-value="{}" cx="{:.3}" cy="{:.3}" r="3.5" fill="{color}"/>"#,
                x as i32,
                v / 100.0,
                frame.x(x),
                frame.y(v)
            );
        }
        let ly = TOP + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<rect class="legend" x="{lx}" y="{:.3}" width="12" height="12" fill="{color}"/><text x="{:.3}" y="{:.3}">{source}</text>"#,
            ly,
            lx + 18.0,
            ly + 10.0
        );
        let _ = writeln!(svg, "</g>");
    }
    if !spec.nonsig_years.is_empty() {
        let ly = TOP + 20.0 * spec.series.len() as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r##"<rect x="{lx}" y="{ly:.3}" width="12" height="12" fill="#999999" fill-opacity="0.25"/><text x="{:.3}" y="{:.3}">not significant</text>"##,
            lx + 18.0,
            ly + 10.0
        );
    }

    let _ = writeln!(
        svg,
        r#"<text class="title" x="{:.3}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        escape(&spec.title)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">year</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text transform="translate(20 {:.3}) rotate(-90)" text-anchor="middle">{}</text>"#,
        (TOP + plot_bottom) / 2.0,
        escape(&spec.y_label)
    );
    svg.push_str("</svg>\n");
    svg
}

fn trim_number(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() {
        "0".into()
    } else {
        s.into()
    }
}
