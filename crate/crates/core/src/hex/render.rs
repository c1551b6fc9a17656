use std::fmt::Write;

use super::{Cell, GaleTour, HexBoard, InfiniteHexPosition, Stone};

/// Rows printed North first, each shifted half a cell East of the one below.
pub fn board_to_ascii(b: &HexBoard) -> String {
    let mut out = String::new();
    for (i, row) in b.to_rows().iter().enumerate() {
        let r = b.rows() - 1 - i;
        out.push_str(&" ".repeat(r));
        let cells: Vec<String> = row.chars().map(|c| c.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

const SIZE: f64 = 14.0;

fn centre(c: Cell) -> (f64, f64) {
    let x = SIZE * 3f64.sqrt() * (c.0 as f64 + c.1 as f64 / 2.0);
    let y = -SIZE * 1.5 * c.1 as f64;
    (x, y)
}

fn hexagon(out: &mut String, c: Cell, fill: &str, stroke: &str) {
    let (x, y) = centre(c);
    let pts: Vec<String> = (0..6)
        .map(|k| {
            let a = std::f64::consts::PI / 180.0 * (60.0 * k as f64 - 30.0);
            format!("{:.1},{:.1}", x + SIZE * a.cos(), y + SIZE * a.sin())
        })
        .collect();
    let _ = writeln!(
        out,
        r##"<polygon points="{}" fill="{fill}" stroke="{stroke}"/>"##,
        pts.join(" ")
    );
}

fn fill(s: Option<Stone>) -> &'static str {
    match s {
        Some(Stone::Red) => "#d33",
        Some(Stone::Blue) => "#36c",
        None => "#eee",
    }
}

fn wrap(body: String, cells: impl Iterator<Item = Cell>) -> String {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for c in cells {
        let (x, y) = centre(c);
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let pad = 2.0 * SIZE;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.1} {:.1} {:.1} {:.1}\">\n{body}</svg>\n",
        x0 - pad,
        y0 - pad,
        x1 - x0 + 2.0 * pad,
        y1 - y0 + 2.0 * pad
    )
}

/// SVG of a board, optionally with the tour and its winning chain.
pub fn board_to_svg(b: &HexBoard, tour: Option<&GaleTour>) -> String {
    let mut body = String::new();
    for i in 0..b.len() {
        hexagon(&mut body, b.cell(i), fill(b.at(i)), "#444");
    }
    if let Some(t) = tour {
        for &c in &t.chain {
            hexagon(&mut body, c, "none", "#fc0");
        }
        let pts: Vec<String> = t
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (centre(e.red), centre(e.blue));
                format!("{:.1},{:.1}", (a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0)
            })
            .collect();
        let _ = writeln!(
            body,
            r##"<polyline points="{}" fill="none" stroke="#000" stroke-width="2"/>"##,
            pts.join(" ")
        );
    }
    wrap(body, (0..b.len()).map(|i| b.cell(i)))
}

/// SVG of the cells of an infinite position within `radius` of the origin.
pub fn infinite_to_svg(p: &InfiniteHexPosition, radius: i32) -> String {
    let cells: Vec<Cell> = (-radius..=radius)
        .flat_map(|c| (-radius..=radius).map(move |r| (c, r)))
        .collect();
    let mut body = String::new();
    for &c in &cells {
        hexagon(&mut body, c, fill(p.color_at(c)), "#999");
    }
    wrap(body, cells.into_iter())
}
