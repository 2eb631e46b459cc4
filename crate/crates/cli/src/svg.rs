//! SVG charts of a page, drawn from its JSON form.
//!
//! Stem `t` runs to the right and Chow weight `c` upwards. Several classes
//! in one bidegree are spread out horizontally. Output depends only on the
//! input and the style, so repeated runs give identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::json::PageJson;

#[derive(Debug, Clone, PartialEq)]
pub struct ChartStyle {
    /// Pixels per unit in both directions.
    pub unit: f64,
    pub margin: f64,
    pub dot_radius: f64,
    /// Horizontal gap between classes sharing a bidegree.
    pub spread: f64,
    /// Largest `t_max` or `c_max` the layout accepts.
    pub max_extent: i32,
}

impl Default for ChartStyle {
    fn default() -> Self {
        ChartStyle { unit: 30.0, margin: 40.0, dot_radius: 3.5, spread: 7.0, max_extent: 256 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("window {t_max} x {c_max} exceeds the layout limit of {limit}")]
pub struct SizeError {
    pub t_max: i32,
    pub c_max: i32,
    pub limit: i32,
}

fn fill(color: &str) -> &'static str {
    match color {
        "blue" => "#1f4fd6",
        "red" => "#d62020",
        "green" => "#1d9a3c",
        _ => "#000000",
    }
}

/// Stroke colour of a `d_r` line.
fn differential_color(r: u32) -> &'static str {
    match r {
        1 => "#8c564b",
        2 => "#d62020",
        3 => "#1f4fd6",
        4 => "#1d9a3c",
        5 => "#e377c2",
        7 => "#ff7f0e",
        _ => "#7f7f7f",
    }
}

pub fn emit_chart(page: &PageJson, style: &ChartStyle) -> Result<String, SizeError> {
    let (tm, cm) = (page.window.t_max, page.window.c_max);
    if tm > style.max_extent || cm > style.max_extent {
        return Err(SizeError { t_max: tm, c_max: cm, limit: style.max_extent });
    }
    let width = 2.0 * style.margin + style.unit * f64::from(tm + 1);
    let height = 2.0 * style.margin + style.unit * f64::from(cm + 1);
    let x0 = style.margin + style.unit / 2.0;
    let y0 = height - style.margin - style.unit / 2.0;

    // position of every class
    let mut per_cell: BTreeMap<(i32, i32), usize> = BTreeMap::new();
    for c in &page.classes {
        *per_cell.entry((c.t, c.c)).or_default() += 1;
    }
    let mut seen: BTreeMap<(i32, i32), usize> = BTreeMap::new();
    let pos: Vec<(f64, f64)> = page
        .classes
        .iter()
        .map(|c| {
            let n = per_cell[&(c.t, c.c)];
            let k = seen.entry((c.t, c.c)).or_default();
            let dx = (*k as f64 - (n as f64 - 1.0) / 2.0) * style.spread;
            *k += 1;
            (x0 + style.unit * f64::from(c.t) + dx, y0 - style.unit * f64::from(c.c))
        })
        .collect();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let title = format!("{} {} E_{}", page.field, page.ss, match &page.page {
        crate::json::PageLabel::Finite(r) => r.to_string(),
        crate::json::PageLabel::Text(t) => t.clone(),
    });
    let _ = writeln!(s, "<title>{}</title>", escape(&title));
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);

    // axes and grid
    let _ = writeln!(s, r##"<g class="axes" stroke="#bbbbbb" stroke-width="0.5" font-family="sans-serif" font-size="10">"##);
    for t in 0..=tm {
        let x = x0 + style.unit * f64::from(t);
        let _ = writeln!(s, r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}"/>"#, style.margin, height - style.margin);
        let _ = writeln!(s, r##"<text x="{x:.1}" y="{:.1}" text-anchor="middle" stroke="none" fill="#333333">{t}</text>"##, height - style.margin + 14.0);
    }
    for c in 0..=cm {
        let y = y0 - style.unit * f64::from(c);
        let _ = writeln!(s, r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}"/>"#, style.margin, width - style.margin);
        let _ = writeln!(s, r##"<text x="{:.1}" y="{:.1}" text-anchor="end" stroke="none" fill="#333333">{c}</text>"##, style.margin - 6.0, y + 3.0);
    }
    let _ = writeln!(s, r##"<text x="{:.1}" y="{:.1}" text-anchor="middle" stroke="none" fill="#000000">t</text>"##, width / 2.0, height - 8.0);
    let _ = writeln!(s, r##"<text x="12" y="{:.1}" text-anchor="middle" stroke="none" fill="#000000">c</text>"##, height / 2.0);
    s.push_str("</g>\n");

    // multiplication lines, then differentials, then dots on top
    let _ = writeln!(s, r#"<g class="edges" stroke-width="1.2" fill="none">"#);
    for e in &page.edges {
        let ((x1, y1), (x2, y2)) = (pos[e.from], pos[e.to]);
        let (stroke, extra) = match (e.kind.as_str(), e.r) {
            ("rho", _) => ("#000000", String::new()),
            ("v2", _) => ("#555555", r#" stroke-dasharray="4 2""#.to_string()),
            (_, r) => (differential_color(r.unwrap_or(0)), format!(r#" data-r="{}""#, r.unwrap_or(0))),
        };
        let _ = writeln!(
            s,
            r#"<line class="{}" x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" stroke="{stroke}"{extra}/>"#,
            e.kind
        );
    }
    s.push_str("</g>\n");
    let _ = writeln!(s, r#"<g class="classes">"#);
    for (c, (x, y)) in page.classes.iter().zip(&pos) {
        let _ = writeln!(
            s,
            r#"<circle class="dot" cx="{x:.1}" cy="{y:.1}" r="{:.1}" fill="{}" data-t="{}" data-c="{}"><title>{}</title></circle>"#,
            style.dot_radius,
            fill(&c.color),
            c.t,
            c.c,
            escape(&c.repr)
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
