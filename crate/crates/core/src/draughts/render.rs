use std::fmt::Write;

use super::{sq, Color, DSquare, DraughtsPosition, Kind, Piece};

fn glyph(p: Piece) -> char {
    match (p.color, p.kind) {
        (Color::White, Kind::King) => '♔',
        (Color::Black, Kind::King) => '♚',
        (Color::White, Kind::Pawn) => '♙',
        (Color::Black, Kind::Pawn) => '♟',
    }
}

/// Files (`u - v`) and ranks (`u + v`) covering the explicit pieces, the
/// first two squares of each ladder, and a one-square border.
fn extent(p: &DraughtsPosition) -> (i64, i64, i64, i64) {
    let sqs: Vec<DSquare> = p
        .pieces
        .keys()
        .copied()
        .chain(p.ladders.iter().flat_map(|l| [l.square(0), l.square(1)]))
        .collect();
    if sqs.is_empty() {
        return (-2, 2, -2, 2);
    }
    let files = sqs.iter().map(|s| s.u - s.v);
    let ranks = sqs.iter().map(|s| s.u + s.v);
    (
        files.clone().min().unwrap() - 1,
        files.max().unwrap() + 1,
        ranks.clone().min().unwrap() - 1,
        ranks.max().unwrap() + 1,
    )
}

/// The square on `file`, `rank`, if it is a playing square.
fn square(file: i64, rank: i64) -> Option<DSquare> {
    ((file + rank) % 2 == 0).then(|| sq((file + rank) / 2, (rank - file) / 2))
}

/// The board as text, North up: kings ♔/♚, pawns ♙/♟, `.` for an empty
/// playing square. Ladders are drawn as far as the picture reaches and
/// listed underneath.
pub fn position_to_ascii(p: &DraughtsPosition) -> String {
    let (f0, f1, r0, r1) = extent(p);
    let mut out = String::new();
    for rank in (r0..=r1).rev() {
        let mut line = String::new();
        for file in f0..=f1 {
            line.push(match square(file, rank) {
                Some(s) => p.at(s).map(glyph).unwrap_or('.'),
                None => ' ',
            });
        }
        let _ = writeln!(out, "{:>4} {}", rank, line.trim_end());
    }
    for l in &p.ladders {
        let _ = writeln!(
            out,
            "ladder from {} towards {:?}, {:?} kings",
            l.start, l.dir, l.color
        );
    }
    let _ = writeln!(out, "{:?} to move", p.turn);
    out
}

/// Checkerboard SVG with the pieces as discs; kings carry a ring.
pub fn position_to_svg(p: &DraughtsPosition) -> String {
    const S: i64 = 24;
    let (f0, f1, r0, r1) = extent(p);
    let (w, h) = ((f1 - f0 + 1) * S, (r1 - r0 + 1) * S);
    let mut body = String::new();
    for rank in r0..=r1 {
        for file in f0..=f1 {
            let (x, y) = ((file - f0) * S, (r1 - rank) * S);
            let playing = square(file, rank);
            let fill = if playing.is_some() {
                "#f4ecd8"
            } else {
                "#7a5c3e"
            };
            let _ = writeln!(
                body,
                r#"<rect x="{x}" y="{y}" width="{S}" height="{S}" fill="{fill}"/>"#
            );
            let Some(piece) = playing.and_then(|s| p.at(s)) else {
                continue;
            };
            let (cx, cy) = (x + S / 2, y + S / 2);
            let (disc, edge) = if piece.color == Color::White {
                ("#fff", "#000")
            } else {
                ("#222", "#000")
            };
            let _ = writeln!(
                body,
                r#"<circle cx="{cx}" cy="{cy}" r="{}" fill="{disc}" stroke="{edge}"/>"#,
                S * 2 / 5
            );
            if piece.kind == Kind::King {
                let _ = writeln!(
                    body,
                    r##"<circle cx="{cx}" cy="{cy}" r="{}" fill="none" stroke="#c90" stroke-width="2"/>"##,
                    S / 5
                );
            }
        }
    }
    format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">{}{body}</svg>"#,
        "\n"
    )
}
