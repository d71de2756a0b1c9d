//! Minimal self-contained SVG charts: a line chart for series and a heatmap
//! for matrices.

use std::fmt::Write;

use super::envelope::{Layer, Payload};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn label(v: f64) -> String {
    if v.abs() >= 1000.0 || v == v.trunc() {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

fn extent(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo > hi {
        None
    } else if lo == hi {
        Some((lo - 0.5, hi + 0.5))
    } else {
        Some((lo, hi))
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, x_label: &str, y_label: &str) {
    let (x0, y0, x1) = (LEFT, HEIGHT - BOTTOM, WIDTH - RIGHT);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{TOP}" x2="{x0}" y2="{y0}" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{y}" text-anchor="middle" transform="rotate(-90 20 {y})">{}</text>"#,
        escape(y_label),
        y = (TOP + y0) / 2.0
    );
}

pub fn render(title: &str, payload: &Payload) -> String {
    let mut out = String::new();
    header(&mut out, title);
    match payload {
        Payload::Series { x, x_values, lines } => {
            let y_unit = lines.first().map(|l| l.column.unit.as_str()).unwrap_or("");
            let plotted: Vec<_> = lines.iter().filter(|l| l.column.unit == y_unit).collect();
            let y_label = plotted
                .first()
                .map(|l| {
                    if plotted.len() == 1 {
                        l.column.name.clone()
                    } else {
                        y_unit.to_string()
                    }
                })
                .unwrap_or_default();
            axes(&mut out, &x.name, &y_label);
            line_chart(&mut out, x_values, &plotted);
        }
        Payload::Matrix {
            row_axis,
            row_values,
            col_axis,
            col_values,
            layers,
        } => {
            axes(&mut out, &col_axis.name, &row_axis.name);
            if let Some(layer) = layers.first() {
                heatmap(&mut out, row_values, col_values, layer);
            }
        }
        Payload::Table { .. } => {}
    }
    out.push_str("</svg>\n");
    out
}

fn line_chart(out: &mut String, xs: &[f64], lines: &[&super::envelope::Line]) {
    let Some((x_lo, x_hi)) = extent(xs.iter().copied()) else {
        return;
    };
    let Some((y_lo, y_hi)) = extent(lines.iter().flat_map(|l| l.values.iter().copied())) else {
        return;
    };
    let (plot_w, plot_h) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |y: f64| HEIGHT - BOTTOM - (y - y_lo) / (y_hi - y_lo) * plot_h;

    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let (xv, yv) = (x_lo + f * (x_hi - x_lo), y_lo + f * (y_hi - y_lo));
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            px(xv),
            HEIGHT - BOTTOM + 18.0,
            label(xv)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py(yv) + 4.0,
            label(yv)
        );
    }
    for (i, line) in lines.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(&line.values)
            .filter(|(_, y)| y.is_finite())
            .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
        let ly = TOP + 16.0 * i as f64 + 10.0;
        let lx = WIDTH - RIGHT + 10.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 18.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">{}</text>"#,
            lx + 22.0,
            ly + 4.0,
            escape(&line.column.name)
        );
    }
}

fn heatmap(out: &mut String, rows: &[f64], cols: &[f64], layer: &Layer) {
    if rows.is_empty() || cols.is_empty() {
        return;
    }
    let Some((lo, hi)) = extent(layer.values.iter().flatten().filter_map(|v| *v)) else {
        return;
    };
    let cw = (WIDTH - LEFT - RIGHT) / cols.len() as f64;
    let ch = (HEIGHT - TOP - BOTTOM) / rows.len() as f64;
    for (r, rv) in rows.iter().enumerate() {
        // first row at the bottom
        let y = HEIGHT - BOTTOM - (r + 1) as f64 * ch;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + ch / 2.0 + 4.0,
            label(*rv)
        );
        for (c, _) in cols.iter().enumerate() {
            let x = LEFT + c as f64 * cw;
            let (fill, text) = match layer.values[r][c] {
                Some(v) => {
                    let t = (v - lo) / (hi - lo);
                    // light yellow (low) to dark red (high)
                    let g = (230.0 - 200.0 * t).round() as u8;
                    let b = (150.0 - 150.0 * t).round() as u8;
                    (format!("rgb(250,{g},{b})"), format!("{v:.2}"))
                }
                None => ("#cccccc".to_string(), "n/a".to_string()),
            };
            let _ = writeln!(
                out,
                r#"<rect x="{x:.1}" y="{y:.1}" width="{cw:.1}" height="{ch:.1}" fill="{fill}" stroke="white"/>"#
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10">{text}</text>"#,
                x + cw / 2.0,
                y + ch / 2.0 + 4.0
            );
        }
    }
    for (c, cv) in cols.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + (c as f64 + 0.5) * cw,
            HEIGHT - BOTTOM + 18.0,
            label(*cv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}">{}</text>"#,
        WIDTH - RIGHT + 10.0,
        TOP + 10.0,
        escape(&layer.column.name)
    );
}
