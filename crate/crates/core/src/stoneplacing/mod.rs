//! Stone-placing games on hypergraphs: players alternately mark unmarked
//! vertices, and whoever first owns all of one of their winning sets wins.
//! Winning sets are kept as their minimal elements; any superset also wins.

mod dual;
mod steal;
mod value;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

pub use dual::{has_finite_basis, maker_breaker_dual, Dual, SetDescriptor};
pub use steal::{
    breaker_to_2coloring, check_breaker_wins, mirror_playouts, mirroring_draw,
    strategy_steal_check, Involution, MakerBreakerSolver, MirrorStrategy, PairingBreaker,
    StealCertificate, StonePolicy, TwoColouring,
};
pub use value::{
    dead_region, gift, random_game, stone_value, verify_plan, DeadRegion, Plan, PlanCheck,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::First => "first",
            Side::Second => "second",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Ongoing,
    FirstWins,
    SecondWins,
    Tie,
}

impl Outcome {
    pub fn won_by(s: Side) -> Outcome {
        match s {
            Side::First => Outcome::FirstWins,
            Side::Second => Outcome::SecondWins,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StoneError {
    #[error("vertex {0} is already marked")]
    Occupied(usize),
    #[error("vertex {0} is not on the board")]
    OutOfRange(usize),
    #[error("the game is over")]
    GameOver,
    #[error("empty winning set")]
    EmptySet,
    #[error("{size} vertices exceed the budget of {budget}")]
    BudgetExceeded { size: usize, budget: usize },
    #[error("the game has no value for that player")]
    NoValue,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("the strategy loses along {0:?}")]
    NotWinning(Vec<usize>),
    #[error("second player's winning set {0:?} is finite")]
    NotStrictlyNotOpen(SetDescriptor),
    #[error("invalid input: {0}")]
    Input(String),
}

/// A marked vertex: who took it and at which move (counting from 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mark {
    pub side: Side,
    pub index: u32,
}

/// Keeps only the minimal sets, each sorted, in a canonical order.
pub fn minimal_sets(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut sets: Vec<Vec<usize>> = sets
        .iter()
        .map(|s| {
            s.iter()
                .copied()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        })
        .collect();
    sets.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in sets {
        if !out
            .iter()
            .any(|m| m.iter().all(|v| s.binary_search(v).is_ok()))
        {
            out.push(s);
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StonePlacingGame {
    labels: Vec<String>,
    first_win: Vec<Vec<usize>>,
    second_win: Vec<Vec<usize>>,
    marks: Vec<Option<Mark>>,
    turn: Side,
    moves: u32,
}

impl StonePlacingGame {
    pub fn new(
        n: usize,
        first_win: &[Vec<usize>],
        second_win: &[Vec<usize>],
    ) -> Result<Self, StoneError> {
        for s in first_win.iter().chain(second_win) {
            if s.is_empty() {
                return Err(StoneError::EmptySet);
            }
            if let Some(&v) = s.iter().find(|&&v| v >= n) {
                return Err(StoneError::OutOfRange(v));
            }
        }
        Ok(StonePlacingGame {
            labels: (0..n).map(|i| i.to_string()).collect(),
            first_win: minimal_sets(first_win),
            second_win: minimal_sets(second_win),
            marks: vec![None; n],
            turn: Side::First,
            moves: 0,
        })
    }

    /// Both players share the winning sets.
    pub fn positional(n: usize, sets: &[Vec<usize>]) -> Result<Self, StoneError> {
        Self::new(n, sets, sets)
    }

    /// Maker moves first and wins on a set of `sets`; Breaker wins on a
    /// set meeting all of them.
    pub fn maker_breaker(n: usize, sets: &[Vec<usize>]) -> Result<Self, StoneError> {
        let dual = maker_breaker_dual(n, sets)?;
        Self::new(n, sets, &dual.sets)
    }

    /// Cells numbered row by row from the top left.
    pub fn tic_tac_toe() -> Self {
        let lines = [
            [0, 1, 2],
            [3, 4, 5],
            [6, 7, 8],
            [0, 3, 6],
            [1, 4, 7],
            [2, 5, 8],
            [0, 4, 8],
            [2, 4, 6],
        ];
        let sets: Vec<Vec<usize>> = lines.iter().map(|l| l.to_vec()).collect();
        Self::positional(9, &sets).unwrap()
    }

    pub fn with_turn(mut self, turn: Side) -> Self {
        self.turn = turn;
        self
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn wins(&self, s: Side) -> &[Vec<usize>] {
        match s {
            Side::First => &self.first_win,
            Side::Second => &self.second_win,
        }
    }

    pub fn turn(&self) -> Side {
        self.turn
    }

    pub fn mark(&self, v: usize) -> Option<Mark> {
        self.marks[v]
    }

    pub fn marks(&self) -> Vec<Option<Side>> {
        self.marks.iter().map(|m| m.map(|m| m.side)).collect()
    }

    pub fn unmarked(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| self.marks[v].is_none())
            .collect()
    }

    /// Bit masks of each side's vertices.
    pub(crate) fn masks(&self) -> (u64, u64) {
        let mut f = 0;
        let mut s = 0;
        for (v, m) in self.marks.iter().enumerate() {
            match m.map(|m| m.side) {
                Some(Side::First) => f |= 1 << v,
                Some(Side::Second) => s |= 1 << v,
                None => {}
            }
        }
        (f, s)
    }

    /// Move index at which `side` first owned one of its sets.
    fn completion(&self, side: Side) -> Option<u32> {
        self.wins(side)
            .iter()
            .filter_map(|set| {
                set.iter()
                    .map(|&v| self.marks[v].filter(|m| m.side == side).map(|m| m.index))
                    .try_fold(0, |acc, i| i.map(|i| acc.max(i)))
            })
            .min()
    }

    /// The earlier of the two completions wins, even if both players own a
    /// winning set on the board.
    pub fn outcome(&self) -> Outcome {
        match (self.completion(Side::First), self.completion(Side::Second)) {
            (Some(a), Some(b)) => Outcome::won_by(if a <= b { Side::First } else { Side::Second }),
            (Some(_), None) => Outcome::FirstWins,
            (None, Some(_)) => Outcome::SecondWins,
            (None, None) if self.marks.iter().all(Option::is_some) => Outcome::Tie,
            (None, None) => Outcome::Ongoing,
        }
    }

    pub fn play_move(&mut self, v: usize) -> Result<Outcome, StoneError> {
        if v >= self.len() {
            return Err(StoneError::OutOfRange(v));
        }
        if self.marks[v].is_some() {
            return Err(StoneError::Occupied(v));
        }
        if self.outcome() != Outcome::Ongoing {
            return Err(StoneError::GameOver);
        }
        self.moves += 1;
        self.marks[v] = Some(Mark {
            side: self.turn,
            index: self.moves,
        });
        self.turn = self.turn.other();
        Ok(self.outcome())
    }

    /// Marks a vertex without playing a move, e.g. to set up a position.
    pub fn place(&mut self, v: usize, side: Side) -> Result<(), StoneError> {
        if v >= self.len() {
            return Err(StoneError::OutOfRange(v));
        }
        if self.marks[v].is_some() {
            return Err(StoneError::Occupied(v));
        }
        self.moves += 1;
        self.marks[v] = Some(Mark {
            side,
            index: self.moves,
        });
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let sets = |s: &[Vec<usize>]| -> Vec<Vec<&str>> {
            s.iter()
                .map(|set| set.iter().map(|&v| self.labels[v].as_str()).collect())
                .collect()
        };
        let mut marks: Vec<(usize, Mark)> = self
            .marks
            .iter()
            .enumerate()
            .filter_map(|(v, m)| m.map(|m| (v, m)))
            .collect();
        marks.sort_by_key(|(_, m)| m.index);
        json!({
            "board": self.labels,
            "first_win_minimal": sets(&self.first_win),
            "second_win_minimal": sets(&self.second_win),
            "turn": self.turn,
            "moves": marks.iter().map(|(v, m)| json!({"vertex": self.labels[*v], "side": m.side})).collect::<Vec<_>>(),
        })
    }

    /// Reads `board`, `first_win_minimal`, `second_win_minimal`, `turn` and
    /// an optional `moves` list in play order. Board entries may be strings
    /// or numbers.
    pub fn from_json(v: &Value) -> Result<Self, StoneError> {
        let label = |x: &Value| -> Result<String, StoneError> {
            match x {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                other => Err(StoneError::Input(format!("bad vertex {other}"))),
            }
        };
        let board = v
            .get("board")
            .and_then(Value::as_array)
            .ok_or_else(|| StoneError::Input("missing board".into()))?;
        let labels: Vec<String> = board.iter().map(label).collect::<Result<_, _>>()?;
        let index = |x: &Value| -> Result<usize, StoneError> {
            let l = label(x)?;
            labels
                .iter()
                .position(|m| *m == l)
                .ok_or_else(|| StoneError::Input(format!("unknown vertex {l}")))
        };
        let sets = |key: &str| -> Result<Vec<Vec<usize>>, StoneError> {
            let Some(arr) = v.get(key) else {
                return Ok(Vec::new());
            };
            let arr = arr
                .as_array()
                .ok_or_else(|| StoneError::Input(format!("{key} must be a list")))?;
            arr.iter()
                .map(|s| {
                    s.as_array()
                        .ok_or_else(|| StoneError::Input(format!("{key} entries must be lists")))?
                        .iter()
                        .map(index)
                        .collect()
                })
                .collect()
        };
        let mut g = Self::new(
            labels.len(),
            &sets("first_win_minimal")?,
            &sets("second_win_minimal")?,
        )?;
        g.labels = labels.clone();
        let turn: Side = match v.get("turn") {
            Some(t) => {
                serde_json::from_value(t.clone()).map_err(|e| StoneError::Input(e.to_string()))?
            }
            None => Side::First,
        };
        if let Some(moves) = v.get("moves").and_then(Value::as_array) {
            for m in moves {
                let vert = index(
                    m.get("vertex")
                        .ok_or_else(|| StoneError::Input("move needs a vertex".into()))?,
                )?;
                let side: Side =
                    serde_json::from_value(m.get("side").cloned().unwrap_or(Value::Null))
                        .map_err(|e| StoneError::Input(e.to_string()))?;
                g.place(vert, side)?;
            }
        }
        g.turn = turn;
        Ok(g)
    }
}

#[cfg(test)]
mod tests;
