//! Self-contained SVG line plot of mean QFI against channel strength.

use std::fmt::Write as _;
use std::path::Path;

use super::SweepRow;
use crate::error::{QfiError, Result};
use crate::qfi::SummationMode;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

/// Rows for one channel, drawn as one curve per summation mode.
#[derive(Clone, Debug)]
pub struct CurveGroup<'a> {
    pub label: &'a str,
    pub rows: &'a [SweepRow],
}

fn color_for(label: &str, idx: usize) -> &'static str {
    match label {
        "dpc" => "green",
        "adc" => "blue",
        "pdc" => "red",
        _ => ["purple", "orange", "teal", "brown"][idx % 4],
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders the plot. The first mode present is drawn as a solid
/// `<polyline>` per channel; when both modes are present the full-spectrum
/// curves are overlaid as dashed `<path>` elements. `pure_value`, when
/// given, is marked by a black dot at p = 0.
pub fn svg_string(groups: &[CurveGroup<'_>], pure_value: Option<f64>) -> Result<String> {
    if groups.is_empty() || groups.iter().all(|g| g.rows.is_empty()) {
        return Err(QfiError::EmptyResult);
    }
    let data_max = groups
        .iter()
        .flat_map(|g| g.rows.iter().map(|r| r.mean_f))
        .chain(pure_value)
        .filter(|v| v.is_finite())
        .fold(0.0_f64, f64::max);
    let y_max = if data_max <= 2.5 {
        2.5
    } else {
        (data_max * 2.0).ceil() / 2.0
    };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |p: f64| LEFT + p.clamp(0.0, 1.0) * plot_w;
    let sy = |v: f64| TOP + plot_h * (1.0 - (v / y_max).clamp(0.0, 1.0));

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // axes and ticks
    let (x0, x1, y0, y1) = (sx(0.0), sx(1.0), sy(0.0), sy(y_max));
    let _ = writeln!(
        s,
        r#"<g stroke="black" stroke-width="1"><line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/></g>"#
    );
    for k in 0..=5 {
        let p = k as f64 / 5.0;
        let x = sx(p);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{p:.1}</text>"#,
            y0 + 5.0,
            y0 + 20.0
        );
    }
    let n_yticks = (y_max / 0.5).round() as usize;
    for k in 0..=n_yticks {
        let v = k as f64 * 0.5;
        let y = sy(v);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">decoherence strength p</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">mean QFI</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let primary = groups
        .iter()
        .flat_map(|g| g.rows.iter().map(|r| r.mode))
        .min()
        .unwrap_or(SummationMode::PaperSupport);

    for (idx, g) in groups.iter().enumerate() {
        let color = color_for(g.label, idx);
        let points = |mode: SummationMode| -> Vec<(f64, f64)> {
            g.rows
                .iter()
                .filter(|r| r.mode == mode)
                .map(|r| (sx(r.p), sy(r.mean_f)))
                .collect()
        };
        let solid = points(primary);
        if !solid.is_empty() {
            let pts: Vec<String> = solid
                .iter()
                .map(|(x, y)| format!("{x:.3},{y:.3}"))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline data-channel="{}" data-mode="{}" fill="none" stroke="{color}" stroke-width="2" stroke-linecap="round" points="{}"/>"#,
                escape(g.label),
                primary.label(),
                pts.join(" ")
            );
        }
        if primary == SummationMode::PaperSupport {
            let dashed = points(SummationMode::FullSpectrum);
            if !dashed.is_empty() {
                let mut d = String::new();
                for (k, (x, y)) in dashed.iter().enumerate() {
                    let _ = write!(d, "{}{x:.3},{y:.3}", if k == 0 { "M" } else { " L" });
                }
                let _ = writeln!(
                    s,
                    r#"<path data-channel="{}" data-mode="full" fill="none" stroke="{color}" stroke-width="1.5" stroke-dasharray="6 4" d="{d}"/>"#,
                    escape(g.label)
                );
            }
        }

        let ly = TOP + 20.0 + 20.0 * idx as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{:.1}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 25.0,
            lx + 30.0,
            ly + 4.0,
            escape(g.label)
        );
    }
    if groups
        .iter()
        .any(|g| g.rows.iter().any(|r| r.mode != primary))
    {
        let ly = TOP + 20.0 + 20.0 * groups.len() as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{:.1}" y2="{ly}" stroke="gray" stroke-dasharray="6 4"/><text x="{:.1}" y="{:.1}">full spectrum</text>"#,
            lx + 25.0,
            lx + 30.0,
            ly + 4.0
        );
    }
    if let Some(v) = pure_value {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="black"/>"#,
            sx(0.0),
            sy(v)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_svg(groups: &[CurveGroup<'_>], pure_value: Option<f64>, path: &Path) -> Result<()> {
    let text = svg_string(groups, pure_value)?;
    std::fs::write(path, text).map_err(|e| QfiError::io(path, e))
}
