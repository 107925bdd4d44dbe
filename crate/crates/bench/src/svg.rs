//! Heatmap rendering of a score matrix.
//!
//! Rows and columns follow the matrix order (best mean score first). Each cell
//! is a `rect` whose gray level is `round(255 * w)`: a win frequency of 0 is
//! black and 1 is white. Cells carry `data-row`, `data-col` and `data-value`
//! attributes holding the optimizer names and the exact value as written to
//! the CSV.

use std::fmt::Write;

use crate::score::ScoreMatrix;

const CELL: usize = 48;
const MARGIN: usize = 170;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn gray_level(w: f64) -> u8 {
    (255.0 * w.clamp(0.0, 1.0)).round() as u8
}

pub fn render(m: &ScoreMatrix) -> String {
    let k = m.optimizers.len();
    let size = MARGIN + k * CELL + 10;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}" font-family="sans-serif" font-size="11">"#
    );
    for (j, name) in m.optimizers.iter().enumerate() {
        let x = MARGIN + j * CELL + CELL / 2;
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{}" transform="rotate(-60 {x} {})">{}</text>"#,
            MARGIN - 6,
            MARGIN - 6,
            escape(name)
        );
    }
    for (i, row) in m.optimizers.iter().enumerate() {
        let y = MARGIN + i * CELL;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{} ({:.3})</text>"#,
            MARGIN - 6,
            y + CELL / 2 + 4,
            escape(row),
            m.mean[i]
        );
        for (j, col) in m.optimizers.iter().enumerate() {
            let w = m.win[i][j];
            let g = gray_level(w);
            let ink = if g < 128 { "white" } else { "black" };
            let x = MARGIN + j * CELL;
            let _ = writeln!(
                s,
                r#"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="rgb({g},{g},{g})" data-row="{}" data-col="{}" data-value="{w}"/>"#,
                escape(row),
                escape(col)
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="middle" fill="{ink}">{:.2}</text>"#,
                x + CELL / 2,
                y + CELL / 2 + 4,
                w
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Reads back the `(row, col, value)` annotations of a rendered heatmap.
pub fn parse_annotations(svg: &str) -> Vec<(String, String, f64)> {
    fn attr<'a>(tag: &'a str, name: &str) -> Option<&'a str> {
        let start = tag.find(&format!(" {name}=\""))? + name.len() + 3;
        let len = tag[start..].find('"')?;
        Some(&tag[start..start + len])
    }
    fn unescape(s: &str) -> String {
        s.replace("&quot;", "\"").replace("&gt;", ">").replace("&lt;", "<").replace("&amp;", "&")
    }
    svg.lines()
        .filter(|l| l.starts_with("<rect"))
        .filter_map(|tag| {
            Some((
                unescape(attr(tag, "data-row")?),
                unescape(attr(tag, "data-col")?),
                attr(tag, "data-value")?.parse().ok()?,
            ))
        })
        .collect()
}
