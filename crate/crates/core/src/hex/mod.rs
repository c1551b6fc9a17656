//! Hex on finite boards and on the infinite board.
//!
//! Cells use axial coordinates `(col, row)`; the six neighbours of `(c, r)`
//! are `(c±1, r)`, `(c, r±1)`, `(c+1, r-1)` and `(c-1, r+1)`. Columns run
//! West to East and rows South to North, with the North-South columns
//! zig-zagging so that `(c, r)` sits half a cell East of `(c, r-1)`.
//!
//! On an `m × n` board (m rows, n columns) Red joins row 0 (the SW side)
//! to row m-1 (the NE side) and Blue joins column 0 (NW) to column n-1 (SE).

mod infinite;
mod render;
mod solve;

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use infinite::{
    bounded_minimax, bridge_window, decide_winning, has_periodic_winning_path, is_winning_wrt,
    make_bridge_chain, mirror_cell, mirroring_playout, window_to_stone_game, InfiniteHexPosition,
    MirrorReport, MirroringStrategy, PeriodicPath, PeriodicRegion, Tail,
};
pub use render::{board_to_ascii, board_to_svg, infinite_to_svg};
pub use solve::{
    asymmetric_pairing, check_pairing, play_game, solve, FirstCellPolicy, HexPolicy, Pairing,
    PairingPolicy, Solution, SolvedPolicy, StealPolicy,
};

/// Axial directions in cyclic order around a cell.
pub const DIRECTIONS: [(i32, i32); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

pub type Cell = (i32, i32);

pub fn neighbours(c: Cell) -> impl Iterator<Item = Cell> {
    DIRECTIONS.iter().map(move |d| (c.0 + d.0, c.1 + d.1))
}

pub fn adjacent(a: Cell, b: Cell) -> bool {
    DIRECTIONS.contains(&(b.0 - a.0, b.1 - a.1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stone {
    Red,
    Blue,
}

impl Stone {
    pub fn other(self) -> Stone {
        match self {
            Stone::Red => Stone::Blue,
            Stone::Blue => Stone::Red,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Stone::Red => 'R',
            Stone::Blue => 'B',
        }
    }
}

impl fmt::Display for Stone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stone::Red => "red",
            Stone::Blue => "blue",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HexError {
    #[error("board has empty cells")]
    NotFull,
    #[error("{empty} empty cells exceed the search budget of {budget}")]
    BudgetExceeded { empty: usize, budget: usize },
    #[error("board is {rows}x{cols}; strategy stealing needs a square board")]
    AsymmetricBoard { rows: usize, cols: usize },
    #[error("cell ({0}, {1}) is occupied or off the board")]
    IllegalMove(i32, i32),
    #[error("the mirroring strategy needs an empty starting board")]
    NonEmptyStart,
    #[error("invalid position: {0}")]
    Invalid(String),
    #[error("hex invariant violated: {0}")]
    Invariant(String),
}

/// A finite Hex board.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HexBoard {
    rows: usize,
    cols: usize,
    cells: Vec<Option<Stone>>,
    first: Stone,
}

impl HexBoard {
    pub fn new(rows: usize, cols: usize, first: Stone) -> Self {
        assert!(rows >= 1 && cols >= 1);
        HexBoard {
            rows,
            cols,
            cells: vec![None; rows * cols],
            first,
        }
    }

    pub fn square(n: usize) -> Self {
        Self::new(n, n, Stone::Red)
    }

    /// Parses rows given North first, e.g. `["B.", "RR"]`; `R`, `B` and `.`.
    pub fn from_rows(rows_north_first: &[&str], first: Stone) -> Result<Self, HexError> {
        let rows = rows_north_first.len();
        let cols = rows_north_first.first().map_or(0, |r| r.chars().count());
        if rows == 0 || cols == 0 {
            return Err(HexError::Invalid("empty board".into()));
        }
        let mut b = HexBoard::new(rows, cols, first);
        for (i, line) in rows_north_first.iter().enumerate() {
            let r = rows - 1 - i;
            let chars: Vec<char> = line.chars().collect();
            if chars.len() != cols {
                return Err(HexError::Invalid(format!(
                    "row {r} has {} cells, expected {cols}",
                    chars.len()
                )));
            }
            for (c, ch) in chars.into_iter().enumerate() {
                let v = match ch {
                    'R' | 'r' => Some(Stone::Red),
                    'B' | 'b' => Some(Stone::Blue),
                    '.' => None,
                    other => return Err(HexError::Invalid(format!("unexpected {other:?}"))),
                };
                b.cells[r * cols + c] = v;
            }
        }
        Ok(b)
    }

    /// Rows North first, as accepted by [`HexBoard::from_rows`].
    pub fn to_rows(&self) -> Vec<String> {
        (0..self.rows)
            .rev()
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.cells[r * self.cols + c].map_or('.', Stone::letter))
                    .collect()
            })
            .collect()
    }

    /// Full colouring from a bit mask: bit i set means cell i is Red.
    pub fn from_mask(rows: usize, cols: usize, mask: u64) -> Self {
        let mut b = HexBoard::new(rows, cols, Stone::Red);
        for i in 0..rows * cols {
            b.cells[i] = Some(if mask >> i & 1 == 1 {
                Stone::Red
            } else {
                Stone::Blue
            });
        }
        b
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn first(&self) -> Stone {
        self.first
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(Option::is_none)
    }

    pub fn index(&self, c: Cell) -> Option<usize> {
        let (col, row) = c;
        (col >= 0 && row >= 0 && (col as usize) < self.cols && (row as usize) < self.rows)
            .then(|| row as usize * self.cols + col as usize)
    }

    pub fn cell(&self, i: usize) -> Cell {
        ((i % self.cols) as i32, (i / self.cols) as i32)
    }

    pub fn get(&self, c: Cell) -> Option<Stone> {
        self.index(c).and_then(|i| self.cells[i])
    }

    pub fn at(&self, i: usize) -> Option<Stone> {
        self.cells[i]
    }

    pub fn set(&mut self, i: usize, v: Option<Stone>) {
        self.cells[i] = v;
    }

    pub fn count(&self, s: Stone) -> usize {
        self.cells.iter().filter(|&&v| v == Some(s)).count()
    }

    pub fn empty_cells(&self) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| self.cells[i].is_none())
            .collect()
    }

    pub fn is_full(&self) -> bool {
        self.cells.iter().all(Option::is_some)
    }

    /// The player to move, from stone counts and the first player.
    pub fn to_move(&self) -> Stone {
        let mine = self.count(self.first);
        let theirs = self.count(self.first.other());
        if mine > theirs {
            self.first.other()
        } else {
            self.first
        }
    }

    /// Stone counts consistent with alternating play from `first`.
    pub fn legal_parity(&self) -> bool {
        let mine = self.count(self.first);
        let theirs = self.count(self.first.other());
        mine == theirs || mine == theirs + 1
    }

    pub fn play(&mut self, i: usize) -> Result<Stone, HexError> {
        if i >= self.cells.len() || self.cells[i].is_some() {
            let (c, r) = if i < self.cells.len() {
                self.cell(i)
            } else {
                (-1, -1)
            };
            return Err(HexError::IllegalMove(c, r));
        }
        let s = self.to_move();
        self.cells[i] = Some(s);
        Ok(s)
    }

    pub fn board_neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        neighbours(self.cell(i)).filter_map(move |c| self.index(c))
    }

    /// True iff `s` has a chain joining its two sides (flood fill).
    pub fn connects(&self, s: Stone) -> bool {
        let starts: Vec<usize> = match s {
            Stone::Red => (0..self.cols).collect(),
            Stone::Blue => (0..self.rows).map(|r| r * self.cols).collect(),
        };
        let at_goal = |i: usize| match s {
            Stone::Red => i / self.cols == self.rows - 1,
            Stone::Blue => i % self.cols == self.cols - 1,
        };
        let mut seen = vec![false; self.cells.len()];
        let mut queue = VecDeque::new();
        for i in starts {
            if self.cells[i] == Some(s) {
                seen[i] = true;
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            if at_goal(i) {
                return true;
            }
            for j in self.board_neighbours(i) {
                if !seen[j] && self.cells[j] == Some(s) {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        false
    }

    /// Red if Red connects its sides, Blue likewise, None otherwise. On a
    /// legal board at most one player connects.
    pub fn winner_by_connectivity(&self) -> Option<Stone> {
        if self.connects(Stone::Red) {
            Some(Stone::Red)
        } else if self.connects(Stone::Blue) {
            Some(Stone::Blue)
        } else {
            None
        }
    }

    /// The colour of a cell on the board extended by the four outer
    /// regions: rows below 0 and above m-1 are Red, remaining columns
    /// outside are Blue.
    fn padded(&self, c: Cell) -> Stone {
        if let Some(i) = self.index(c) {
            return self.cells[i].expect("padded lookup on a full board");
        }
        if c.1 < 0 || c.1 >= self.rows as i32 {
            Stone::Red
        } else {
            Stone::Blue
        }
    }

    fn outside(&self, c: Cell) -> bool {
        self.index(c).is_none()
    }
}

/// One edge of the tour: the cells on its Red and Blue sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TourEdge {
    pub red: Cell,
    pub blue: Cell,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaleTour {
    pub winner: Stone,
    /// A winning chain of board cells, side to side.
    pub chain: Vec<Cell>,
    /// Consecutive edges walked, each a Red/Blue boundary.
    pub edges: Vec<TourEdge>,
    /// Tour vertices, each the three cells meeting there (sorted).
    pub vertices: Vec<[Cell; 3]>,
}

/// Walks the boundary between Red and Blue starting from the corner where
/// the SW Red region meets the NW Blue region, always keeping Red on one
/// side and Blue on the other, until the walk leaves the board at another
/// corner. The Red cells along the walk join the SW side to wherever the
/// walk ends, and likewise for Blue, so the exit corner names the winner.
pub fn gale_tour(b: &HexBoard) -> Result<GaleTour, HexError> {
    if !b.is_full() {
        return Err(HexError::NotFull);
    }
    let mut red: Cell = (0, -1);
    let mut blue: Cell = (-1, 0);
    let ahead = |red: Cell, blue: Cell, sense: usize| -> Cell {
        let d = (blue.0 - red.0, blue.1 - red.1);
        let i = DIRECTIONS
            .iter()
            .position(|&x| x == d)
            .expect("tour edge joins adjacent cells");
        let e = DIRECTIONS[(i + sense) % 6];
        (red.0 + e.0, red.1 + e.1)
    };
    // Orient the walk into the board.
    let sense = if ahead(red, blue, 1) == (0, 0) { 1 } else { 5 };
    debug_assert_eq!(ahead(red, blue, sense), (0, 0));
    let mut edges = vec![TourEdge { red, blue }];
    let mut vertices = Vec::new();
    let limit = 4 * (b.rows + 2) * (b.cols + 2);
    loop {
        let x = ahead(red, blue, sense);
        let mut v = [red, blue, x];
        v.sort();
        vertices.push(v);
        match b.padded(x) {
            Stone::Red => red = x,
            Stone::Blue => blue = x,
        }
        edges.push(TourEdge { red, blue });
        if b.outside(red) && b.outside(blue) {
            break;
        }
        if edges.len() > limit {
            return Err(HexError::Invariant("tour did not terminate".into()));
        }
    }
    let red_wins = red.1 >= b.rows as i32;
    let blue_wins = blue.0 >= b.cols as i32;
    let winner = match (red_wins, blue_wins) {
        (true, false) => Stone::Red,
        (false, true) => Stone::Blue,
        _ => {
            return Err(HexError::Invariant(format!(
                "tour ended between {red:?} and {blue:?}, not naming exactly one winner"
            )))
        }
    };
    let side: Vec<Cell> = edges
        .iter()
        .map(|e| if winner == Stone::Red { e.red } else { e.blue })
        .filter(|&c| !b.outside(c))
        .collect();
    let chain = chain_within(b, winner, &side).ok_or_else(|| {
        HexError::Invariant("tour cells of the winner do not join its sides".into())
    })?;
    Ok(GaleTour {
        winner,
        chain,
        edges,
        vertices,
    })
}

/// Shortest side-to-side chain for `s` using only the given cells.
fn chain_within(b: &HexBoard, s: Stone, cells: &[Cell]) -> Option<Vec<Cell>> {
    let allowed: std::collections::HashSet<Cell> = cells.iter().copied().collect();
    let is_start = |c: Cell| match s {
        Stone::Red => c.1 == 0,
        Stone::Blue => c.0 == 0,
    };
    let is_goal = |c: Cell| match s {
        Stone::Red => c.1 == b.rows as i32 - 1,
        Stone::Blue => c.0 == b.cols as i32 - 1,
    };
    let mut prev: std::collections::HashMap<Cell, Option<Cell>> = std::collections::HashMap::new();
    let mut queue = VecDeque::new();
    for &c in &allowed {
        if is_start(c) && b.get(c) == Some(s) {
            prev.insert(c, None);
            queue.push_back(c);
        }
    }
    // Deterministic order regardless of hash iteration.
    let mut q: Vec<Cell> = queue.drain(..).collect();
    q.sort();
    queue.extend(q);
    while let Some(c) = queue.pop_front() {
        if is_goal(c) {
            let mut out = vec![c];
            let mut cur = c;
            while let Some(Some(p)) = prev.get(&cur) {
                out.push(*p);
                cur = *p;
            }
            out.reverse();
            return Some(out);
        }
        for n in neighbours(c) {
            if allowed.contains(&n) && !prev.contains_key(&n) && b.get(n) == Some(s) {
                prev.insert(n, Some(c));
                queue.push_back(n);
            }
        }
    }
    None
}

/// True iff `chain` is a chain of `s` stones joining the sides of `s`.
pub fn is_winning_chain(b: &HexBoard, s: Stone, chain: &[Cell]) -> bool {
    let (Some(first), Some(last)) = (chain.first(), chain.last()) else {
        return false;
    };
    let ends_ok = match s {
        Stone::Red => first.1 == 0 && last.1 == b.rows() as i32 - 1,
        Stone::Blue => first.0 == 0 && last.0 == b.cols() as i32 - 1,
    };
    ends_ok
        && chain.iter().all(|&c| b.get(c) == Some(s))
        && chain.windows(2).all(|w| adjacent(w[0], w[1]))
}

#[cfg(test)]
mod tests;
