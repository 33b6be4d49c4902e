//! CSV, SVG and metadata writers.

use crate::error::{LabError, Result};
use crate::result::{ExperimentResult, LineStyle, Plot, Table};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub const SVG_WIDTH: f64 = 800.0;
pub const SVG_HEIGHT: f64 = 600.0;

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> LabError + '_ {
    move |source| LabError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes every table as CSV (and SVG when it has a nonempty plot) plus
/// `<experiment>.meta.json`. Returns the written paths.
pub fn emit(result: &ExperimentResult, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io(dir))?;
    let mut written = Vec::new();
    for table in &result.tables {
        let csv_path = dir.join(format!("{}.csv", table.name));
        write_csv(table, &csv_path)?;
        written.push(csv_path);
        if let Some(plot) = &table.plot {
            if !table.rows.is_empty() && plot.series.iter().any(|s| !s.points.is_empty()) {
                let svg_path = dir.join(format!("{}.svg", table.name));
                fs::write(&svg_path, render_svg(plot)).map_err(io(&svg_path))?;
                written.push(svg_path);
            }
        }
    }
    let meta_path = dir.join(format!("{}.meta.json", result.meta.experiment));
    let meta = serde_json::json!({
        "meta": result.meta,
        "controls": result.controls,
    });
    let text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    fs::write(&meta_path, text + "\n").map_err(io(&meta_path))?;
    written.push(meta_path);
    Ok(written)
}

pub fn write_csv(table: &Table, path: &Path) -> Result<()> {
    let wrap = |source| LabError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(wrap)?;
    w.write_record(&table.columns).map_err(wrap)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|c| c.render())).map_err(wrap)?;
    }
    w.flush().map_err(io(path))?;
    Ok(())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
    "#7f7f7f", "#bcbd22",
];

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|k| k * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * span {
        out.push(if t.abs() < 1e-12 * span { 0.0 } else { t });
        t += step;
    }
    out
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

/// Standalone 800×600 SVG line chart.
pub fn render_svg(plot: &Plot) -> String {
    let (left, right, top, bottom) = (80.0, 200.0, 30.0, 70.0);
    let (w, h) = (SVG_WIDTH - left - right, SVG_HEIGHT - top - bottom);
    let tx = |x: f64| if plot.log_x { x.log10() } else { x };
    let pts: Vec<(f64, f64)> = plot
        .series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|(x, y)| x.is_finite() && y.is_finite() && (!plot.log_x || *x > 0.0))
        .map(|(x, y)| (tx(x), y))
        .collect();
    let bounds = |f: fn(&(f64, f64)) -> f64| {
        let lo = pts.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi - lo < 1e-12 {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        }
    };
    let (x0, x1) = bounds(|p| p.0);
    let (y0, y1) = bounds(|p| p.1);
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * w;
    let sy = |y: f64| top + (1.0 - (y - y0) / (y1 - y0)) * h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>
<rect x="{left}" y="{top}" width="{w}" height="{h}" fill="none" stroke="black"/>"#
    );
    for t in nice_ticks(y0, y1) {
        let y = sy(t);
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            left + w,
            left - 6.0,
            y + 4.0,
            fmt_tick(t)
        );
    }
    for t in nice_ticks(x0, x1) {
        let x = sx(t);
        let label = if plot.log_x { fmt_tick(10f64.powf(t)) } else { fmt_tick(t) };
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{top}" x2="{x:.2}" y2="{:.2}" stroke="#dddddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            top + h,
            top + h + 18.0,
            label
        );
    }
    let x_label = if plot.log_x { format!("{} (log scale)", plot.x_label) } else { plot.x_label.clone() };
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{}</text>"#,
        left + w / 2.0,
        SVG_HEIGHT - 20.0,
        escape(&x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {:.2})">{}</text>"#,
        top + h / 2.0,
        top + h / 2.0,
        escape(&plot.y_label)
    );
    for (k, series) in plot.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let dash = match series.style {
            LineStyle::Solid => "",
            LineStyle::Dotted => r#" stroke-dasharray="2,4""#,
        };
        let coords: Vec<String> = series
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite() && (!plot.log_x || *x > 0.0))
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(tx(x)), sy(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
            coords.join(" ")
        );
        let ly = top + 10.0 + 18.0 * k as f64;
        let lx = left + w + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.5"{dash}/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 25.0,
            lx + 30.0,
            ly + 4.0,
            escape(&series.label)
        );
    }
    s.push_str("</svg>\n");
    s
}
