//! Minimal self-contained SVG scatter plots.

use std::fmt::Write;

use crate::format::sig6;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;

pub struct Point<'a> {
    pub label: &'a str,
    pub x: f64,
    pub y: f64,
}

pub struct Scatter<'a> {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<Point<'a>>,
    pub trend: [(f64, f64); 2],
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn nice_step(span: f64, target: usize) -> f64 {
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let frac = raw / mag;
    let nice = if frac <= 1.0 {
        1.0
    } else if frac <= 2.0 {
        2.0
    } else if frac <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

/// Axis range padded to whole tick steps, with the ticks inside it.
fn axis(lo: f64, hi: f64) -> (f64, f64, Vec<f64>) {
    let (lo, hi) = if hi > lo {
        (lo, hi)
    } else {
        let pad = lo.abs().max(1.0) * 0.5;
        (lo - pad, hi + pad)
    };
    let step = nice_step(hi - lo, 5);
    let start = (lo / step).floor() * step;
    let end = (hi / step).ceil() * step;
    let n = ((end - start) / step).round() as usize;
    let ticks = (0..=n).map(|i| start + step * i as f64).collect();
    (start, end, ticks)
}

impl Scatter<'_> {
    pub fn render(&self) -> String {
        let xs = self
            .points
            .iter()
            .map(|p| p.x)
            .chain(self.trend.iter().map(|t| t.0));
        let ys = self
            .points
            .iter()
            .map(|p| p.y)
            .chain(self.trend.iter().map(|t| t.1));
        let (x_min, x_max) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
        let (y_min, y_max) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
        let (x0, x1, x_ticks) = axis(x_min, x_max);
        let (y0, y1, y_ticks) = axis(y_min, y_max);

        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
        let py = |y: f64| TOP + (y1 - y) / (y1 - y0) * plot_h;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="28" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );

        let _ = writeln!(s, r##"<g stroke="#ccc" stroke-width="0.5">"##);
        for &t in &x_ticks {
            let _ = writeln!(
                s,
                r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}"/>"#,
                px(t),
                TOP,
                TOP + plot_h
            );
        }
        for &t in &y_ticks {
            let _ = writeln!(
                s,
                r#"<line x1="{1:.2}" y1="{0:.2}" x2="{2:.2}" y2="{0:.2}"/>"#,
                py(t),
                LEFT,
                LEFT + plot_w
            );
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
        );
        for &t in &x_ticks {
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                px(t),
                TOP + plot_h + 18.0,
                sig6(t)
            );
        }
        for &t in &y_ticks {
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                LEFT - 6.0,
                py(t) + 4.0,
                sig6(t)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 20.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text transform="translate(22 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
            TOP + plot_h / 2.0,
            escape(&self.y_label)
        );

        let [(tx0, ty0), (tx1, ty1)] = self.trend;
        let _ = writeln!(
            s,
            r#"<line class="trendline" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="firebrick" stroke-width="1.5"/>"#,
            px(tx0),
            py(ty0),
            px(tx1),
            py(ty1)
        );
        for p in &self.points {
            let (cx, cy) = (px(p.x), py(p.y));
            let _ = writeln!(
                s,
                r#"<g class="point"><circle cx="{cx:.2}" cy="{cy:.2}" r="3.5" fill="steelblue"/><text x="{:.2}" y="{:.2}" font-size="10">{}</text></g>"#,
                cx + 5.0,
                cy - 5.0,
                escape(p.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}
