// SPDX-License-Identifier: Apache-2.0

//! Static SVG charts with fixed geometry, so the same data always renders to
//! the same bytes.

use std::fmt::Write;

const FONT: &str = "font-family=\"monospace\" font-size=\"11\"";
const PALETTE: [&str; 6] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#b07aa1"];

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn open(out: &mut String, width: u32, height: u32, title: &str) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(out, "<rect width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>");
    let _ = writeln!(out, "<text x=\"10\" y=\"18\" {FONT} font-weight=\"bold\">{}</text>", escape(title));
}

fn legend(out: &mut String, series: &[String], x: u32, y: u32) {
    for (i, name) in series.iter().enumerate() {
        let yy = y + 16 * i as u32;
        let _ = writeln!(
            out,
            "<rect x=\"{x}\" y=\"{yy}\" width=\"10\" height=\"10\" fill=\"{}\"/><text x=\"{}\" y=\"{}\" {FONT}>{}</text>",
            PALETTE[i % PALETTE.len()],
            x + 14,
            yy + 9,
            escape(name)
        );
    }
}

/// Horizontal grouped bars. `values[row][series]` in `[0, 1]` (fractions),
/// labeled as percentages.
pub fn grouped_bars(title: &str, rows: &[String], series: &[String], values: &[Vec<f64>]) -> String {
    let label_w = 150;
    let bar_w = 480.0;
    let bar_h = 10;
    let group_h = bar_h * series.len().max(1) as u32 + 8;
    let top = 34;
    let height = top + group_h * rows.len() as u32 + 20;
    let width = label_w + bar_w as u32 + 200;
    let mut out = String::new();
    open(&mut out, width, height.max(top + 16 * series.len() as u32 + 20), title);
    for (r, row) in rows.iter().enumerate() {
        let gy = top + group_h * r as u32;
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" {FONT} text-anchor=\"end\">{}</text>",
            label_w - 6,
            gy + group_h / 2 + 3,
            escape(row)
        );
        for (s, v) in values[r].iter().enumerate() {
            let y = gy + bar_h * s as u32;
            let w = (v.clamp(0.0, 1.0) * bar_w).round();
            let _ = writeln!(
                out,
                "<rect x=\"{label_w}\" y=\"{y}\" width=\"{w}\" height=\"{}\" fill=\"{}\"/><text x=\"{}\" y=\"{}\" {FONT}>{:.1}%</text>",
                bar_h - 1,
                PALETTE[s % PALETTE.len()],
                label_w + w as u32 + 4,
                y + bar_h - 1,
                v * 100.0
            );
        }
    }
    legend(&mut out, series, label_w + bar_w as u32 + 80, top);
    out.push_str("</svg>\n");
    out
}

/// Grid heatmap of values in `[0, 1]`; `None` cells are drawn grey.
pub fn grid(title: &str, rows: &[String], cols: &[String], cells: &[Vec<Option<f64>>]) -> String {
    let cell = 56;
    let label_w = 220;
    let top = 60;
    let width = label_w + cell * cols.len() as u32 + 20;
    let height = top + cell * rows.len() as u32 + 20;
    let mut out = String::new();
    open(&mut out, width, height, title);
    for (c, name) in cols.iter().enumerate() {
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" {FONT} text-anchor=\"middle\">{}</text>",
            label_w + cell * c as u32 + cell / 2,
            top - 8,
            escape(name)
        );
    }
    for (r, name) in rows.iter().enumerate() {
        let y = top + cell * r as u32;
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" {FONT} text-anchor=\"end\">{}</text>",
            label_w - 6,
            y + cell / 2 + 4,
            escape(name)
        );
        for (c, v) in cells[r].iter().enumerate() {
            let x = label_w + cell * c as u32;
            let (fill, text) = match v {
                Some(v) => (blue(*v), format!("{:.1}%", v * 100.0)),
                None => ("#dddddd".to_string(), "n/a".to_string()),
            };
            let ink = if v.is_some_and(|v| v > 0.6) { "#ffffff" } else { "#000000" };
            let _ = writeln!(
                out,
                "<rect x=\"{x}\" y=\"{y}\" width=\"{cell}\" height=\"{cell}\" fill=\"{fill}\" stroke=\"#ffffff\"/><text x=\"{}\" y=\"{}\" {FONT} fill=\"{ink}\" text-anchor=\"middle\">{text}</text>",
                x + cell / 2,
                y + cell / 2 + 4
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// White to dark blue.
fn blue(v: f64) -> String {
    let t = v.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(247.0, 8.0), lerp(251.0, 48.0), lerp(255.0, 107.0))
}

/// Vertical grouped bars over histogram bins; bar height is
/// `log10(1 + count)` when `log_scale` is set.
pub fn histogram_bars(title: &str, bin_labels: &[String], series: &[String], counts: &[Vec<u64>], log_scale: bool) -> String {
    let plot_h = 240.0;
    let left = 50;
    let top = 40;
    let group_w = 8 * series.len().max(1) as u32 + 6;
    let width = left + group_w * bin_labels.len() as u32 + 170;
    let height = top + plot_h as u32 + 60;
    let scale = |c: u64| if log_scale { (1.0 + c as f64).log10() } else { c as f64 };
    let max = counts.iter().flatten().map(|&c| scale(c)).fold(0.0, f64::max);
    let mut out = String::new();
    open(&mut out, width, height, title);
    let base = top + plot_h as u32;
    let _ = writeln!(
        out,
        "<line x1=\"{left}\" y1=\"{base}\" x2=\"{}\" y2=\"{base}\" stroke=\"#000000\"/>",
        left + group_w * bin_labels.len() as u32
    );
    let _ = writeln!(
        out,
        "<text x=\"10\" y=\"{}\" {FONT}>{}</text>",
        top - 6,
        if log_scale { "log10(1+count)" } else { "count" }
    );
    for (b, label) in bin_labels.iter().enumerate() {
        let gx = left + group_w * b as u32;
        for (s, series_counts) in counts.iter().enumerate() {
            let c = series_counts.get(b).copied().unwrap_or(0);
            let h = if max > 0.0 { (scale(c) / max * plot_h).round() } else { 0.0 };
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"7\" height=\"{h}\" fill=\"{}\"><title>{}: {c}</title></rect>",
                gx + 8 * s as u32,
                base as f64 - h,
                PALETTE[s % PALETTE.len()],
                escape(&series[s])
            );
        }
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" {FONT} transform=\"rotate(60 {} {})\">{}</text>",
            gx,
            base + 12,
            gx,
            base + 12,
            escape(label)
        );
    }
    legend(&mut out, series, width - 150, top);
    out.push_str("</svg>\n");
    out
}
