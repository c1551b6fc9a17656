//! Infinite Draughts on the white squares of an unbounded board.
//!
//! Squares use diagonal coordinates `(u, v)`: the four diagonal neighbours
//! of `(u, v)` are `(u ± 1, v)` and `(u, v ± 1)`. North is increasing
//! `u + v`; on a standard diagram `(1, 0)` points North-East, `(0, 1)`
//! North-West, `(-1, 0)` South-West and `(0, -1)` South-East. The chessboard
//! square of `(u, v)` has file `u - v` and rank `u + v`.

mod kingtree;
mod minimax;
mod moves;
mod render;
mod templates;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

pub use kingtree::{
    build_king_tree, check_omega_branches, embed_binary_tree, king_tree_value, play_strategy,
    strategy_transfer, trace_playout, validate_king_tree, validate_king_tree_with, BlackStrategy,
    Embedding, KingTree, KingTreeOptions, KingTreeReport, Playout, StructureReport,
    TreeNodeSquares,
};
pub use minimax::{minimax_value, Window};
pub use moves::{apply_move, legal_moves, Move};
pub use render::{position_to_ascii, position_to_svg};
pub use templates::{
    extended_node_templates, ladder_figure, multi_jump_figure, reachable_exits, simple_jump_figure,
    value_one_figure, white_wins_within, MultiJumpFigure, Template, TemplateCheck,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DSquare {
    pub u: i64,
    pub v: i64,
}

pub const fn sq(u: i64, v: i64) -> DSquare {
    DSquare { u, v }
}

/// North-East, North-West, South-West, South-East.
pub const DIRECTIONS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

impl DSquare {
    pub fn step(self, d: (i64, i64), k: i64) -> DSquare {
        DSquare {
            u: self.u + d.0 * k,
            v: self.v + d.1 * k,
        }
    }

    /// Distance North.
    pub fn level(self) -> i64 {
        self.u + self.v
    }
}

impl fmt::Display for DSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }

    /// Directions a pawn of this colour moves in.
    pub fn forward(self) -> [(i64, i64); 2] {
        match self {
            Color::Black => [(1, 0), (0, 1)],
            Color::White => [(-1, 0), (0, -1)],
        }
    }

    fn letter(self) -> &'static str {
        match self {
            Color::White => "W",
            Color::Black => "B",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    Pawn,
    King,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Piece {
    pub color: Color,
    pub kind: Kind,
}

impl Piece {
    pub const fn king(color: Color) -> Piece {
        Piece {
            color,
            kind: Kind::King,
        }
    }

    pub const fn pawn(color: Color) -> Piece {
        Piece {
            color,
            kind: Kind::Pawn,
        }
    }

    pub fn directions(self) -> Vec<(i64, i64)> {
        match self.kind {
            Kind::King => DIRECTIONS.to_vec(),
            Kind::Pawn => self.color.forward().to_vec(),
        }
    }
}

/// Kings of one colour on `start + 2k * dir` for every `k >= 0`, with the
/// squares between them empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ladder {
    pub start: DSquare,
    pub dir: (i64, i64),
    pub color: Color,
}

impl Ladder {
    /// Index `k` of the ladder piece on `s`, if any.
    pub fn index_of(&self, s: DSquare) -> Option<i64> {
        let (du, dv) = (s.u - self.start.u, s.v - self.start.v);
        let k2 = if self.dir.0 != 0 {
            (dv == 0).then_some(du * self.dir.0)?
        } else {
            (du == 0).then_some(dv * self.dir.1)?
        };
        (k2 >= 0 && k2 % 2 == 0).then_some(k2 / 2)
    }

    pub fn square(&self, k: i64) -> DSquare {
        self.start.step(self.dir, 2 * k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Iteration {
    ForcedMaximalFinite,
    FiniteOptional,
    ForcedMaximalIncludingInfinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleSet {
    pub forced_jump: bool,
    pub iteration: Iteration,
}

impl RuleSet {
    /// Jumps are compulsory and must be maximal and finite.
    pub const A: RuleSet = RuleSet {
        forced_jump: true,
        iteration: Iteration::ForcedMaximalFinite,
    };
    /// Jumps are optional and may stop after any finite number of captures.
    pub const B: RuleSet = RuleSet {
        forced_jump: false,
        iteration: Iteration::FiniteOptional,
    };
    /// Jumps are optional but must be maximal, infinite ones included.
    pub const C: RuleSet = RuleSet {
        forced_jump: false,
        iteration: Iteration::ForcedMaximalIncludingInfinite,
    };

    pub fn name(&self) -> &'static str {
        match *self {
            RuleSet::A => "RS-A",
            RuleSet::B => "RS-B",
            RuleSet::C => "RS-C",
            _ => "custom",
        }
    }

    pub fn parse(s: &str) -> Result<RuleSet, DraughtsError> {
        match s.to_ascii_uppercase().as_str() {
            "RS-A" | "A" => Ok(RuleSet::A),
            "RS-B" | "B" => Ok(RuleSet::B),
            "RS-C" | "C" => Ok(RuleSet::C),
            _ => Err(DraughtsError::Malformed(format!("unknown rule set {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DraughtsError {
    #[error("malformed position: {0}")]
    Malformed(String),
    #[error("unsupported rule set {0}")]
    UnsupportedRuleSet(&'static str),
    #[error("embedding needs a {needed}x{needed} box, more than {limit}")]
    EmbeddingOverflow { needed: i64, limit: i64 },
    #[error("{states} states exceed the budget of {budget}")]
    BudgetExceeded { states: usize, budget: usize },
    #[error("rule set mismatch: built for {built}, asked for {asked}")]
    RuleSetMismatch {
        built: &'static str,
        asked: &'static str,
    },
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
}

/// Pawns promote on reaching these levels (`u + v`); without it the board
/// has no last row and pawns never promote.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Promotion {
    pub black_at: i64,
    pub white_at: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DraughtsPosition {
    pub pieces: BTreeMap<DSquare, Piece>,
    pub ladders: Vec<Ladder>,
    pub turn: Color,
    pub promotion: Option<Promotion>,
}

impl DraughtsPosition {
    pub fn new(turn: Color) -> Self {
        DraughtsPosition {
            pieces: BTreeMap::new(),
            ladders: Vec::new(),
            turn,
            promotion: None,
        }
    }

    pub fn with(mut self, s: DSquare, p: Piece) -> Self {
        self.pieces.insert(s, p);
        self
    }

    pub fn at(&self, s: DSquare) -> Option<Piece> {
        if let Some(&p) = self.pieces.get(&s) {
            return Some(p);
        }
        self.ladders
            .iter()
            .find(|l| l.index_of(s).is_some())
            .map(|l| Piece::king(l.color))
    }

    pub fn count(&self, c: Color) -> usize {
        self.pieces.values().filter(|p| p.color == c).count()
    }

    pub fn has_ladders(&self) -> bool {
        !self.ladders.is_empty()
    }

    /// Smallest and largest `u` and `v` over explicit pieces and ladder starts.
    pub fn bounds(&self) -> Option<(i64, i64, i64, i64)> {
        let sqs = self
            .pieces
            .keys()
            .copied()
            .chain(self.ladders.iter().map(|l| l.start));
        sqs.fold(None, |b, s| {
            Some(match b {
                None => (s.u, s.u, s.v, s.v),
                Some((a, b, c, d)) => (a.min(s.u), b.max(s.u), c.min(s.v), d.max(s.v)),
            })
        })
    }

    pub fn validate(&self) -> Result<(), DraughtsError> {
        if self.ladders.len() > 4 {
            return Err(DraughtsError::Malformed("at most 4 ladders".into()));
        }
        for l in &self.ladders {
            if !DIRECTIONS.contains(&l.dir) {
                return Err(DraughtsError::Malformed(format!(
                    "ladder direction {:?} is not diagonal",
                    l.dir
                )));
            }
            if let Some(s) = self.pieces.keys().find(|&&s| l.index_of(s).is_some()) {
                return Err(DraughtsError::Malformed(format!(
                    "piece on ladder square {s}"
                )));
            }
        }
        Ok(())
    }

    /// Pieces as `[u, v, "W|B", "K|P"]`, ladders as `{start, dir, color}`.
    pub fn to_json(&self, rules: Option<RuleSet>) -> Value {
        let pieces: Vec<Value> = self
            .pieces
            .iter()
            .map(|(s, p)| {
                json!([
                    s.u,
                    s.v,
                    p.color.letter(),
                    if p.kind == Kind::King { "K" } else { "P" }
                ])
            })
            .collect();
        let ladders: Vec<Value> = self
            .ladders
            .iter()
            .map(|l| json!({"start": [l.start.u, l.start.v], "dir": [l.dir.0, l.dir.1], "color": l.color.letter()}))
            .collect();
        let mut v = json!({"pieces": pieces, "ladders": ladders, "turn": self.turn.letter()});
        if let Some(r) = rules {
            v["rules"] = json!(r.name());
        }
        if let Some(p) = self.promotion {
            v["promotion"] = json!([p.black_at, p.white_at]);
        }
        v
    }

    /// Reads the format of [`DraughtsPosition::to_json`]; returns the rule
    /// set too when one is given.
    pub fn from_json(v: &Value) -> Result<(Self, Option<RuleSet>), DraughtsError> {
        let bad = |m: &str| DraughtsError::Malformed(m.to_string());
        let color = |x: &Value| match x.as_str() {
            Some("W") | Some("w") | Some("white") => Ok(Color::White),
            Some("B") | Some("b") | Some("black") => Ok(Color::Black),
            _ => Err(bad("colour must be W or B")),
        };
        let pair = |x: &Value| -> Result<(i64, i64), DraughtsError> {
            match x.as_array().map(|a| a.as_slice()) {
                Some([a, b]) => Ok((
                    a.as_i64().ok_or_else(|| bad("bad integer"))?,
                    b.as_i64().ok_or_else(|| bad("bad integer"))?,
                )),
                _ => Err(bad("expected a pair")),
            }
        };
        let turn = color(v.get("turn").unwrap_or(&json!("B")))?;
        let mut p = DraughtsPosition::new(turn);
        for e in v
            .get("pieces")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing pieces"))?
        {
            let a = e
                .as_array()
                .filter(|a| a.len() == 4)
                .ok_or_else(|| bad("piece must be [u, v, colour, kind]"))?;
            let s = sq(
                a[0].as_i64().ok_or_else(|| bad("bad u"))?,
                a[1].as_i64().ok_or_else(|| bad("bad v"))?,
            );
            let kind = match a[3].as_str() {
                Some("K") | Some("k") => Kind::King,
                Some("P") | Some("p") => Kind::Pawn,
                _ => return Err(bad("kind must be K or P")),
            };
            if p.pieces
                .insert(
                    s,
                    Piece {
                        color: color(&a[2])?,
                        kind,
                    },
                )
                .is_some()
            {
                return Err(DraughtsError::Malformed(format!("two pieces on {s}")));
            }
        }
        if let Some(ls) = v.get("ladders").and_then(Value::as_array) {
            for l in ls {
                let (u, w) = pair(l.get("start").ok_or_else(|| bad("ladder needs start"))?)?;
                let dir = pair(l.get("dir").ok_or_else(|| bad("ladder needs dir"))?)?;
                let c = color(l.get("color").ok_or_else(|| bad("ladder needs color"))?)?;
                p.ladders.push(Ladder {
                    start: sq(u, w),
                    dir,
                    color: c,
                });
            }
        }
        if let Some(pr) = v.get("promotion") {
            let (b, w) = pair(pr)?;
            p.promotion = Some(Promotion {
                black_at: b,
                white_at: w,
            });
        }
        let rules = match v.get("rules").and_then(Value::as_str) {
            Some(r) => Some(RuleSet::parse(r)?),
            None => None,
        };
        p.validate()?;
        Ok((p, rules))
    }
}

impl Serialize for DraughtsPosition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json(None).serialize(s)
    }
}
