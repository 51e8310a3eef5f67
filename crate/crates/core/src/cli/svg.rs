//! Minimal SVG rendering: polyline plots and rectangle heatmaps.
//!
//! Heatmap colour ramps linearly in |I′| from `LOW` (grid minimum) to
//! `HIGH` (grid maximum); failed or infinite cells are `MISSING`.

use std::fmt::Write;

use crate::steady_state::TransmissionReport;
use crate::sweep::{PlotKind, SweepResult};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

pub const LOW: [u8; 3] = [0x1f, 0x3b, 0x73];
pub const HIGH: [u8; 3] = [0xf2, 0xc1, 0x4e];
pub const MISSING: &str = "#bbbbbb";
const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

pub fn render(result: &SweepResult, kind: PlotKind, title: &str) -> String {
    match kind {
        PlotKind::Heatmap if result.axes.len() == 2 => heatmap(result, title),
        PlotKind::Transmissions => {
            let pick = |f: fn(&TransmissionReport) -> f64, label: &str| Series {
                label: label.into(),
                points: result
                    .points
                    .iter()
                    .filter_map(|p| p.report().map(|r| (p.coords[0], f(r))))
                    .collect(),
            };
            let series = vec![pick(|r| r.t12, "T12"), pick(|r| r.t21, "T21")];
            lines(result, &series, "T", title)
        }
        PlotKind::IsolationSigned => lines(
            result,
            &curves(result, |r| r.i_signed_db),
            "I_signed (dB)",
            title,
        ),
        _ => lines(result, &curves(result, |r| r.i_abs_db), "I_abs (dB)", title),
    }
}

/// One curve per value of axis 2 (a single curve for one-axis sweeps).
fn curves(result: &SweepResult, f: fn(&TransmissionReport) -> f64) -> Vec<Series> {
    let (n0, n1) = result.shape();
    (0..n1)
        .map(|j| Series {
            label: result
                .axes
                .get(1)
                .map_or_else(String::new, |a| format!("{} = {}", a.label(), a.value(j))),
            points: (0..n0)
                .filter_map(|i| {
                    let p = result.point(i, j);
                    p.report().map(|r| (p.coords[0], f(r)))
                })
                .collect(),
        })
        .collect()
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes_frame(out: &mut String, x: (f64, f64), y: (f64, f64), x_label: &str, y_label: &str) {
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN / 2.0 + 10.0, HEIGHT - MARGIN);
    let _ = writeln!(
        out,
        r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    let _ = writeln!(
        out,
        r#"<text x="{left}" y="{}" text-anchor="middle">{}</text>"#,
        bottom + 16.0,
        tick(x.0)
    );
    let _ = writeln!(
        out,
        r#"<text x="{right}" y="{}" text-anchor="middle">{}</text>"#,
        bottom + 16.0,
        tick(x.1)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{bottom}" text-anchor="end">{}</text>"#,
        left - 4.0,
        tick(y.0)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        left - 4.0,
        top + 10.0,
        tick(y.1)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (left + right) / 2.0,
        HEIGHT - 20.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        (top + bottom) / 2.0,
        (top + bottom) / 2.0,
        escape(y_label)
    );
}

fn lines(result: &SweepResult, series: &[Series], y_label: &str, title: &str) -> String {
    let x = (result.axes[0].min, result.axes[0].max);
    let ys = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .filter(|v| v.is_finite());
    let y = padded(ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    }));

    let mut out = String::new();
    header(&mut out, title);
    axes_frame(&mut out, x, y, &result.axes[0].label(), y_label);
    let map = |px: f64, py: f64| {
        (
            MARGIN + (px - x.0) / (x.1 - x.0) * (WIDTH - 2.0 * MARGIN),
            HEIGHT - MARGIN - (py - y.0) / (y.1 - y.0) * (HEIGHT - 1.5 * MARGIN - 10.0),
        )
    };
    for (k, s) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        // non-finite values split the curve
        for run in s.points.split(|p| !p.1.is_finite()).filter(|r| r.len() > 1) {
            let pts: Vec<String> = run
                .iter()
                .map(|&(px, py)| {
                    let (sx, sy) = map(px, py);
                    format!("{sx:.2},{sy:.2}")
                })
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
        }
        if !s.label.is_empty() {
            let ly = MARGIN / 2.0 + 26.0 + 14.0 * k as f64;
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{ly}" fill="{colour}" text-anchor="end">{}</text>"#,
                WIDTH - MARGIN - 6.0,
                escape(&s.label)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn heatmap(result: &SweepResult, title: &str) -> String {
    let (n0, n1) = result.shape();
    let (a0, a1) = (&result.axes[0], &result.axes[1]);
    let finite = result
        .points
        .iter()
        .filter_map(|p| p.report())
        .map(|r| r.i_abs_db)
        .filter(|v| v.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    let span = if hi > lo { hi - lo } else { 1.0 };

    let mut out = String::new();
    header(&mut out, title);
    let (cw, ch) = (
        (WIDTH - 2.0 * MARGIN) / n0 as f64,
        (HEIGHT - 1.5 * MARGIN - 10.0) / n1 as f64,
    );
    for i in 0..n0 {
        for j in 0..n1 {
            let v = result
                .point(i, j)
                .report()
                .map(|r| r.i_abs_db)
                .filter(|v| v.is_finite());
            let fill = v.map_or_else(|| MISSING.to_string(), |v| ramp((v - lo) / span));
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
                MARGIN + i as f64 * cw,
                HEIGHT - MARGIN - (j + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05
            );
        }
    }
    axes_frame(
        &mut out,
        (a0.min, a0.max),
        (a1.min, a1.max),
        &a0.label(),
        &a1.label(),
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">|I| {} .. {} dB</text>"#,
        WIDTH - MARGIN,
        HEIGHT - 20.0,
        tick(lo),
        tick(hi)
    );
    out.push_str("</svg>\n");
    out
}

fn ramp(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let c: Vec<u8> = LOW
        .iter()
        .zip(HIGH)
        .map(|(&a, b)| (a as f64 + (b as f64 - a as f64) * t).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn padded((lo, hi): (f64, f64)) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        (0.0, 1.0)
    } else if hi > lo {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
