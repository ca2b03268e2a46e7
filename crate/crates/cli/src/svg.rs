//! Static SVG rendering of sampled boundary values.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt::Write;

use discforge::{Complex64, MembershipCertificate};

pub const WIDTH: f64 = 1000.0;
pub const HEIGHT: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 40.0;
const MAX_MARKERS: usize = 400;

const TICK_LABELS: [&str; 5] = ["0", "π/2", "π", "3π/2", "2π"];

struct Frame {
    lo: f64,
    hi: f64,
}

impl Frame {
    fn x(&self, theta: f64) -> f64 {
        LEFT + theta / TAU * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        let h = HEIGHT - TOP - BOTTOM;
        TOP + (self.hi - v) / (self.hi - self.lo) * h
    }
}

/// Polyline points. Long inputs keep the min and max of each pixel column
/// so that the rendered envelope is unchanged.
fn polyline(frame: &Frame, values: &[f64]) -> String {
    let n = values.len();
    let columns = (WIDTH - LEFT - RIGHT) as usize;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    if n <= 2 * columns {
        pts.extend(values.iter().enumerate().map(|(j, &v)| (TAU * j as f64 / n as f64, v)));
    } else {
        for c in 0..columns {
            let (a, b) = (c * n / columns, (c + 1) * n / columns);
            let slice = &values[a..b];
            let (imin, imax) = slice.iter().enumerate().fold((0, 0), |(lo, hi), (i, &v)| {
                (if v < slice[lo] { i } else { lo }, if v > slice[hi] { i } else { hi })
            });
            let (first, second) = if imin <= imax { (imin, imax) } else { (imax, imin) };
            for i in [first, second] {
                pts.push((TAU * (a + i) as f64 / n as f64, slice[i]));
            }
        }
    }
    // close the period
    pts.push((TAU, values[0]));
    let mut out = String::with_capacity(pts.len() * 16);
    for (t, v) in pts {
        let _ = write!(out, "{:.2},{:.2} ", frame.x(t), frame.y(v));
    }
    out.pop();
    out
}

/// Renders `Re` and `Im` of `samples`, taken at `θ_j = 2πj/len`, with
/// optional witness segments from `cert` drawn on the real part.
pub fn render(samples: &[Complex64], cert: Option<&MembershipCertificate>, title: &str) -> String {
    assert!(!samples.is_empty(), "nothing to plot");
    let re: Vec<f64> = samples.iter().map(|c| c.re).collect();
    let im: Vec<f64> = samples.iter().map(|c| c.im).collect();
    let (mut lo, mut hi) = re
        .iter()
        .chain(&im)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if hi - lo < 1e-12 {
        lo -= 1.0;
        hi += 1.0;
    }
    let pad = 0.05 * (hi - lo);
    let frame = Frame { lo: lo - pad, hi: hi + pad };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    let (x0, x1) = (frame.x(0.0), frame.x(TAU));
    let (yb, yt) = (HEIGHT - BOTTOM, TOP);
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1">"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{yb}" x2="{x1}" y2="{yb}"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{yb}" x2="{x0}" y2="{yt}"/>"#);
    for j in 0..TICK_LABELS.len() {
        let x = frame.x(j as f64 * FRAC_PI_2);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{yb}" x2="{x:.2}" y2="{}"/>"#, yb + 5.0);
    }
    let _ = writeln!(s, "</g>");
    for (j, label) in TICK_LABELS.iter().enumerate() {
        let x = frame.x(j as f64 * FRAC_PI_2);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{label}</text>"#, yb + 20.0);
    }
    for v in [lo, hi] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            frame.y(v) + 4.0,
            format_tick(v)
        );
    }

    let _ = writeln!(
        s,
        r##"<polyline fill="none" stroke="#1f77b4" stroke-width="1" points="{}"/>"##,
        polyline(&frame, &re)
    );
    let _ = writeln!(
        s,
        r##"<polyline fill="none" stroke="#ff7f0e" stroke-width="1" points="{}"/>"##,
        polyline(&frame, &im)
    );

    if let Some(cert) = cert {
        let n = re.len();
        let at = |t: f64| re[((t.rem_euclid(TAU) / TAU * n as f64).round() as usize) % n];
        let step = cert.witnesses.len().div_ceil(MAX_MARKERS).max(1);
        let _ = writeln!(s, r##"<g stroke="#d62728" fill="#d62728">"##);
        for w in cert.witnesses.iter().step_by(step) {
            let (xa, ya) = (frame.x(w.theta), frame.y(at(w.theta)));
            let (xb, yb) = (frame.x(w.y.min(TAU)), frame.y(at(w.y)));
            let _ = writeln!(
                s,
                r#"<line x1="{xa:.2}" y1="{ya:.2}" x2="{xb:.2}" y2="{yb:.2}"/><circle cx="{xa:.2}" cy="{ya:.2}" r="2"/>"#
            );
        }
        let _ = writeln!(s, "</g>");
    }

    let legend_x = WIDTH - RIGHT - 120.0;
    let _ = writeln!(s, r##"<text x="{legend_x}" y="{}" fill="#1f77b4">Re</text>"##, TOP + 12.0);
    let _ = writeln!(s, r##"<text x="{}" y="{}" fill="#ff7f0e">Im</text>"##, legend_x + 40.0, TOP + 12.0);
    s.push_str("</svg>\n");
    s
}

fn format_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
