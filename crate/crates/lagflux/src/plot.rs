//! Deterministic SVG line plots of snapshot columns.
//!
//! Everything is rendered by hand onto a fixed 720x480 canvas: axis ranges
//! come only from the data, ticks follow a 1-2-5 ladder, and there are no
//! timestamps or random ids, so identical inputs yield byte-identical files.

use crate::output::{CsvTable, OutputError};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 46.0;
const MARGIN_BOTTOM: f64 = 56.0;

/// One curve: x/y must be the same length and finite.
pub struct PlotSeries<'a> {
    pub label: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
    pub color: &'a str,
    pub dashed: bool,
}

/// Spreads a degenerate or empty data range into something drawable.
fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if lo == hi {
        let pad = if lo == 0.0 { 0.5 } else { lo.abs() * 0.1 };
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

/// Tick positions on a 1-2-5 ladder, aiming for roughly `target` intervals.
fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    debug_assert!(span > 0.0);
    let raw_step = span / target as f64;
    let magnitude = 10f64.powf(raw_step.log10().floor());
    let normalized = raw_step / magnitude;
    let factor = if normalized <= 1.0 {
        1.0
    } else if normalized <= 2.0 {
        2.0
    } else if normalized <= 5.0 {
        5.0
    } else {
        10.0
    };
    let step = factor * magnitude;
    let first = (lo / step).ceil() * step;
    let mut ticks = Vec::new();
    let mut k = 0;
    loop {
        let t = first + k as f64 * step;
        if t > hi + step * 1e-9 {
            break;
        }
        // Snap values that should be zero (e.g. -1.2e-17 from the arithmetic).
        ticks.push(if t.abs() < step * 1e-9 { 0.0 } else { t });
        k += 1;
    }
    ticks
}

/// Formats a tick label with just enough decimals for the step size.
fn tick_label(value: f64, step: f64) -> String {
    if step >= 1.0 || step <= 0.0 {
        return format!("{value:.0}");
    }
    let decimals = ((-step.log10().floor()) as usize).min(9);
    format!("{value:.decimals$}")
}

fn scale_x(x: f64, lo: f64, hi: f64) -> f64 {
    MARGIN_LEFT + (x - lo) / (hi - lo) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
}

fn scale_y(y: f64, lo: f64, hi: f64) -> f64 {
    HEIGHT - MARGIN_BOTTOM - (y - lo) / (hi - lo) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
}

/// Renders a complete standalone SVG document.
pub fn render_line_plot(title: &str, y_label: &str, series: &[PlotSeries]) -> String {
    let (x_lo, x_hi) = padded_range(series.iter().flat_map(|s| s.x.iter().copied()));
    let (y_lo, y_hi) = padded_range(series.iter().flat_map(|s| s.y.iter().copied()));
    let x_ticks = nice_ticks(x_lo, x_hi, 8);
    let y_ticks = nice_ticks(y_lo, y_hi, 6);
    let x_step = if x_ticks.len() >= 2 { x_ticks[1] - x_ticks[0] } else { x_hi - x_lo };
    let y_step = if y_ticks.len() >= 2 { y_ticks[1] - y_ticks[0] } else { y_hi - y_lo };

    let plot_left = MARGIN_LEFT;
    let plot_right = WIDTH - MARGIN_RIGHT;
    let plot_top = MARGIN_TOP;
    let plot_bottom = HEIGHT - MARGIN_BOTTOM;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        (plot_left + plot_right) / 2.0,
        title
    );

    // Gridlines and ticks.
    for &t in &y_ticks {
        let sy = scale_y(t, y_lo, y_hi);
        let _ = writeln!(
            svg,
            r##"<line x1="{plot_left:.2}" y1="{sy:.2}" x2="{plot_right:.2}" y2="{sy:.2}" stroke="#dddddd" stroke-width="1"/>"##
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
            plot_left - 8.0,
            sy + 4.0,
            tick_label(t, y_step)
        );
    }
    for &t in &x_ticks {
        let sx = scale_x(t, x_lo, x_hi);
        let _ = writeln!(
            svg,
            r#"<line x1="{sx:.2}" y1="{plot_bottom:.2}" x2="{sx:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
            plot_bottom + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{sx:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            plot_bottom + 20.0,
            tick_label(t, x_step)
        );
    }

    // Axes on top of the grid.
    let _ = writeln!(
        svg,
        r#"<rect x="{plot_left:.2}" y="{plot_top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black" stroke-width="1"/>"#,
        plot_right - plot_left,
        plot_bottom - plot_top
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle">x</text>"#,
        (plot_left + plot_right) / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="start">{}</text>"#,
        plot_top - 10.0,
        y_label
    );

    for s in series {
        assert_eq!(s.x.len(), s.y.len(), "series '{}' x/y length mismatch", s.label);
        let mut points = String::new();
        for (&px, &py) in s.x.iter().zip(s.y) {
            let _ = write!(points, "{:.2},{:.2} ", scale_x(px, x_lo, x_hi), scale_y(py, y_lo, y_hi));
        }
        let dash = if s.dashed { r#" stroke-dasharray="7 4""# } else { "" };
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{}/>"#,
            points.trim_end(),
            s.color,
            dash
        );
    }

    // Legend (only useful with more than one curve).
    if series.len() > 1 {
        for (i, s) in series.iter().enumerate() {
            let ly = plot_top + 16.0 + 18.0 * i as f64;
            let dash = if s.dashed { r#" stroke-dasharray="7 4""# } else { "" };
            let _ = writeln!(
                svg,
                r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="1.5"{}/>"#,
                plot_right - 150.0,
                plot_right - 110.0,
                s.color,
                dash
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="start">{}</text>"#,
                plot_right - 102.0,
                ly + 4.0,
                s.label
            );
        }
    }

    svg.push_str("</svg>\n");
    svg
}

const NUMERICAL_COLOR: &str = "#1f77b4";
const REFERENCE_COLOR: &str = "#d62728";

/// Renders the four standard snapshot plots (`rho`, `u`, `p`, `Pi` against x)
/// from a parsed snapshot table, overlaying the exact solution wherever the
/// table carries `*_ref` columns. Returns the paths written, in plot order.
pub fn emit_snapshot_plots(prefix: &Path, table: &CsvTable) -> Result<Vec<PathBuf>, OutputError> {
    let x = table.column("x").ok_or_else(|| OutputError::Parse {
        path: prefix.to_path_buf(),
        line: 1,
        message: "snapshot table lacks an 'x' column".into(),
    })?;

    let panels = [
        ("rho", "density rho"),
        ("u", "velocity u"),
        ("p", "pressure p"),
        ("Pi", "entropy residual Pi"),
    ];
    let mut written = Vec::new();
    for (column, y_label) in panels {
        let y = table.column(column).ok_or_else(|| OutputError::Parse {
            path: prefix.to_path_buf(),
            line: 1,
            message: format!("snapshot table lacks a '{column}' column"),
        })?;
        let mut series = vec![PlotSeries {
            label: "numerical",
            x,
            y,
            color: NUMERICAL_COLOR,
            dashed: false,
        }];
        let ref_name = format!("{column}_ref");
        if let Some(y_ref) = table.column(&ref_name) {
            series.push(PlotSeries {
                label: "exact",
                x,
                y: y_ref,
                color: REFERENCE_COLOR,
                dashed: true,
            });
        }
        let title = format!("{y_label} at output time");
        let svg = render_line_plot(&title, y_label, &series);

        let mut file_name = prefix
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        file_name.push('_');
        file_name.push_str(&column.to_lowercase());
        file_name.push_str(".svg");
        let path = prefix.with_file_name(file_name);
        std::fs::write(&path, &svg).map_err(|e| OutputError::Io {
            path: path.clone(),
            source: e,
        })?;
        written.push(path);
    }
    Ok(written)
}
