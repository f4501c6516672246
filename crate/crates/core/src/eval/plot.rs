//! Static SVG figures: bar charts with confidence whiskers, curves with
//! confidence bands, and before/after trajectory panels.

use std::fmt::Write as _;

use crate::landmarks::LandmarkSequence;

const W: f64 = 720.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 110.0;
const PALETTE: [&str; 6] = ["#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, w: f64, h: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        w / 2.0,
        escape(title)
    );
}

/// Padded value range covering every `mean ± half` extent.
fn value_range(vals: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (a, b) in vals {
        lo = lo.min(a);
        hi = hi.max(b);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.1).max(1e-3);
    (lo - pad, hi + pad)
}

fn y_axis(out: &mut String, lo: f64, hi: f64, y: &dyn Fn(f64) -> f64, label: &str) {
    let _ = writeln!(
        out,
        r##"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.1}" stroke="#333"/>"##,
        H - BOTTOM
    );
    for i in 0..=5 {
        let v = lo + (hi - lo) * i as f64 / 5.0;
        let py = y(v);
        let _ = writeln!(
            out,
            r##"<line x1="{:.1}" y1="{py:.1}" x2="{:.1}" y2="{py:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{v:.3}</text>"##,
            LEFT,
            W - RIGHT,
            LEFT - 6.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" transform="rotate(-90 16 {:.1})" text-anchor="middle">{}</text>"#,
        (TOP + H - BOTTOM) / 2.0,
        (TOP + H - BOTTOM) / 2.0,
        escape(label)
    );
}

/// Bars at `mean` with `± half` whiskers; `None` draws no whisker.
pub fn bar_chart(title: &str, y_label: &str, bars: &[(String, f64, Option<f64>)]) -> String {
    let mut out = String::new();
    header(&mut out, W, H, title);
    let (lo, hi) = value_range(bars.iter().map(|(_, m, h)| {
        let h = h.unwrap_or(0.0);
        (m - h, m + h)
    }));
    let lo = lo.max(0.0).min(hi - 1e-3);
    let y = |v: f64| TOP + (hi - v) / (hi - lo) * (H - TOP - BOTTOM);
    y_axis(&mut out, lo, hi, &y, y_label);
    let slot = (W - LEFT - RIGHT) / bars.len().max(1) as f64;
    for (i, (name, mean, half)) in bars.iter().enumerate() {
        let x = LEFT + slot * i as f64 + slot * 0.15;
        let bw = slot * 0.7;
        let top = y(*mean);
        let _ = writeln!(
            out,
            r#"<rect x="{x:.1}" y="{top:.1}" width="{bw:.1}" height="{:.1}" fill="{}"/>"#,
            (H - BOTTOM - top).max(0.0),
            PALETTE[i % PALETTE.len()]
        );
        let cx = x + bw / 2.0;
        if let Some(h) = half {
            let (a, b) = (y(mean + h), y(mean - h));
            let _ = writeln!(
                out,
                r##"<path d="M{cx:.1} {a:.1}V{b:.1}M{:.1} {a:.1}H{:.1}M{:.1} {b:.1}H{:.1}" stroke="#111" fill="none"/>"##,
                cx - 6.0,
                cx + 6.0,
                cx - 6.0,
                cx + 6.0
            );
        }
        let ly = H - BOTTOM + 14.0;
        let _ = writeln!(
            out,
            r#"<text x="{cx:.1}" y="{ly:.1}" text-anchor="end" transform="rotate(-35 {cx:.1} {ly:.1})">{}</text>"#,
            escape(name)
        );
        let _ = writeln!(
            out,
            r#"<text x="{cx:.1}" y="{:.1}" text-anchor="middle" font-size="10">{mean:.3}</text>"#,
            top - 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Curve through `(x, mean)` with a shaded `± half` band.
pub fn curve_with_band(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64, Option<f64>)]) -> String {
    let mut out = String::new();
    header(&mut out, W, H, title);
    let (lo, hi) = value_range(points.iter().map(|(_, m, h)| {
        let h = h.unwrap_or(0.0);
        (m - h, m + h)
    }));
    let (x0, x1) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let x1 = if x1 > x0 { x1 } else { x0 + 1.0 };
    let x = |v: f64| LEFT + (v - x0) / (x1 - x0) * (W - LEFT - RIGHT - 20.0) + 10.0;
    let y = |v: f64| TOP + (hi - v) / (hi - lo) * (H - TOP - BOTTOM);
    y_axis(&mut out, lo, hi, &y, y_label);
    let band: Vec<String> = points
        .iter()
        .map(|p| format!("{:.1},{:.1}", x(p.0), y(p.1 + p.2.unwrap_or(0.0))))
        .chain(points.iter().rev().map(|p| format!("{:.1},{:.1}", x(p.0), y(p.1 - p.2.unwrap_or(0.0)))))
        .collect();
    let _ = writeln!(out, r##"<polygon points="{}" fill="#4c72b0" fill-opacity="0.2"/>"##, band.join(" "));
    let line: Vec<String> = points.iter().map(|p| format!("{:.1},{:.1}", x(p.0), y(p.1))).collect();
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#4c72b0" stroke-width="2"/>"##,
        line.join(" ")
    );
    for p in points {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.1}" cy="{:.1}" r="3" fill="#4c72b0"/><text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"##,
            x(p.0),
            y(p.1),
            x(p.0),
            H - BOTTOM + 18.0,
            p.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        H - BOTTOM + 40.0,
        escape(x_label)
    );
    out.push_str("</svg>\n");
    out
}

/// Three panels (x, y, z over time) of joint `joint`, original dashed and
/// transformed solid.
pub fn trajectory_comparison(title: &str, before: &LandmarkSequence, after: &LandmarkSequence, joint: usize) -> String {
    let (pw, ph) = (260.0, 220.0);
    let (w, h) = (3.0 * pw + 40.0, ph + 80.0);
    let mut out = String::new();
    header(&mut out, w, h, title);
    for (axis, name) in ["x", "y", "z"].iter().enumerate() {
        let series = |s: &LandmarkSequence| -> Vec<(usize, f64)> {
            s.real_indices().map(|t| (t, s.point(t, joint)[axis])).collect()
        };
        let (a, b) = (series(before), series(after));
        let (lo, hi) = value_range(a.iter().chain(&b).map(|&(_, v)| (v, v)));
        let len = before.len().max(after.len()).max(2) as f64 - 1.0;
        let ox = 20.0 + axis as f64 * (pw + 10.0);
        let oy = 40.0;
        let px = |t: usize| ox + 30.0 + t as f64 / len * (pw - 40.0);
        let py = |v: f64| oy + (hi - v) / (hi - lo) * (ph - 30.0);
        let _ = writeln!(
            out,
            r##"<rect x="{ox:.1}" y="{oy:.1}" width="{pw:.1}" height="{ph:.1}" fill="none" stroke="#999"/><text x="{:.1}" y="{:.1}" text-anchor="middle">{name}(t)</text>"##,
            ox + pw / 2.0,
            oy + ph + 16.0
        );
        for (pts, style) in [(&a, r##"stroke="#888" stroke-dasharray="4 3""##), (&b, r##"stroke="#c44e52""##)] {
            let line: Vec<String> = pts.iter().map(|&(t, v)| format!("{:.1},{:.1}", px(t), py(v))).collect();
            let _ = writeln!(out, r#"<polyline points="{}" fill="none" {style} stroke-width="1.5"/>"#, line.join(" "));
        }
    }
    let _ = writeln!(
        out,
        r##"<text x="20" y="{:.1}">dashed: original, solid: transformed (joint {joint})</text>"##,
        h - 8.0
    );
    out.push_str("</svg>\n");
    out
}
