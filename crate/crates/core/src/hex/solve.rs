use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use super::{HexBoard, HexError, Stone};

/// Exact minimax result for a finite position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub winner: Stone,
    /// Plies until the game ends when the winner hurries and the loser stalls.
    pub plies: u32,
    /// A best move for the player to move, if the game is not over.
    pub best_move: Option<usize>,
    pub positions: usize,
}

#[derive(Default)]
struct Solver {
    memo: HashMap<u128, (Stone, u32)>,
}

fn key(b: &HexBoard) -> u128 {
    (0..b.len()).fold(0u128, |k, i| {
        k * 3
            + match b.at(i) {
                None => 0,
                Some(Stone::Red) => 1,
                Some(Stone::Blue) => 2,
            }
    })
}

/// Is `(w, p)` better than `(bw, bp)` for `me`?
fn better(me: Stone, w: Stone, p: u32, bw: Stone, bp: u32) -> bool {
    match (w == me, bw == me) {
        (true, false) => true,
        (false, true) => false,
        (true, true) => p < bp,
        (false, false) => p > bp,
    }
}

impl Solver {
    fn value(&mut self, b: &mut HexBoard) -> Result<(Stone, u32), HexError> {
        if let Some(w) = b.winner_by_connectivity() {
            return Ok((w, 0));
        }
        let k = key(b);
        if let Some(&v) = self.memo.get(&k) {
            return Ok(v);
        }
        let (_, w, p) = self.best(b)?;
        self.memo.insert(k, (w, p));
        Ok((w, p))
    }

    /// Best move at an unfinished position, with the resulting outcome.
    fn best(&mut self, b: &mut HexBoard) -> Result<(usize, Stone, u32), HexError> {
        let me = b.to_move();
        let mut best: Option<(usize, Stone, u32)> = None;
        for i in b.empty_cells() {
            b.set(i, Some(me));
            let r = self.value(b);
            b.set(i, None);
            let (w, p) = r?;
            let p = p + 1;
            if best.map_or(true, |(_, bw, bp)| better(me, w, p, bw, bp)) {
                best = Some((i, w, p));
            }
        }
        best.ok_or_else(|| HexError::Invariant("full board with no winner".into()))
    }
}

/// Solves a finite position by exhaustive minimax. Positions with more than
/// `max_empty` empty cells are refused.
pub fn solve(board: &HexBoard, max_empty: usize) -> Result<Solution, HexError> {
    let empty = board.empty_cells().len();
    if empty > max_empty {
        return Err(HexError::BudgetExceeded {
            empty,
            budget: max_empty,
        });
    }
    if !board.legal_parity() {
        return Err(HexError::Invalid(
            "stone counts do not fit alternating play".into(),
        ));
    }
    if board.connects(Stone::Red) && board.connects(Stone::Blue) {
        return Err(HexError::Invalid("both players connect".into()));
    }
    let mut s = Solver::default();
    let mut b = board.clone();
    if let Some(w) = b.winner_by_connectivity() {
        return Ok(Solution {
            winner: w,
            plies: 0,
            best_move: None,
            positions: 0,
        });
    }
    let (m, w, p) = s.best(&mut b)?;
    Ok(Solution {
        winner: w,
        plies: p,
        best_move: Some(m),
        positions: s.memo.len(),
    })
}

/// A way of choosing moves. `last` is the opponent's previous move.
pub trait HexPolicy {
    fn choose(&mut self, board: &HexBoard, last: Option<usize>) -> usize;
}

/// Plays the lowest-numbered empty cell.
pub struct FirstCellPolicy;

impl HexPolicy for FirstCellPolicy {
    fn choose(&mut self, board: &HexBoard, _last: Option<usize>) -> usize {
        board.empty_cells()[0]
    }
}

/// Optimal play from exhaustive search, memoised across calls. Clones
/// share the memo.
#[derive(Clone, Default)]
pub struct SolvedPolicy {
    solver: Arc<Mutex<Solver>>,
}

impl SolvedPolicy {
    pub fn new() -> Self {
        Self::default()
    }
}

impl HexPolicy for SolvedPolicy {
    fn choose(&mut self, board: &HexBoard, _last: Option<usize>) -> usize {
        let mut b = board.clone();
        let mut solver = self.solver.lock().unwrap_or_else(|e| e.into_inner());
        match solver.best(&mut b) {
            Ok((m, _, _)) => m,
            Err(_) => board.empty_cells()[0],
        }
    }
}

/// Plays a game to the end. Returns the winner and the move list.
pub fn play_game(
    start: &HexBoard,
    red: &mut dyn HexPolicy,
    blue: &mut dyn HexPolicy,
) -> Result<(Stone, Vec<usize>), HexError> {
    let mut b = start.clone();
    let mut moves = Vec::new();
    let mut last = None;
    loop {
        if let Some(w) = b.winner_by_connectivity() {
            return Ok((w, moves));
        }
        if b.is_full() {
            return Err(HexError::Invariant("full board with no winner".into()));
        }
        let m = match b.to_move() {
            Stone::Red => red.choose(&b, last),
            Stone::Blue => blue.choose(&b, last),
        };
        b.play(m)?;
        moves.push(m);
        last = Some(m);
    }
}

/// A perfect matching of the cells of the `(n+1) × n` board (n+1 rows,
/// n columns) that lets Blue, whose sides are the long edges, always win.
#[derive(Clone, Debug, PartialEq)]
pub struct Pairing {
    pub rows: usize,
    pub cols: usize,
    pub mate: Vec<usize>,
}

/// Cell `(c, r)` with `r <= c` is paired with `(r, c + 1)`. Any Red chain
/// from row 0 to row n has to pass a pair on its way up, and holding one
/// cell of every pair is enough to block it.
pub fn asymmetric_pairing(n: usize) -> Pairing {
    assert!(n >= 1);
    let board = HexBoard::new(n + 1, n, Stone::Red);
    let mut mate = vec![usize::MAX; board.len()];
    for c in 0..n as i32 {
        for r in 0..=c {
            let a = board.index((c, r)).unwrap();
            let b = board.index((r, c + 1)).unwrap();
            mate[a] = b;
            mate[b] = a;
        }
    }
    debug_assert!(mate.iter().all(|&m| m != usize::MAX));
    Pairing {
        rows: n + 1,
        cols: n,
        mate,
    }
}

impl Pairing {
    pub fn board(&self, first: Stone) -> HexBoard {
        HexBoard::new(self.rows, self.cols, first)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.mate.len())
            .filter(|&i| i < self.mate[i])
            .map(|i| (i, self.mate[i]))
            .collect()
    }
}

/// Blue answers each Red move with its mate, or any empty cell when the
/// mate is taken (only possible after Blue's own free moves).
pub struct PairingPolicy {
    pub mate: Vec<usize>,
}

impl HexPolicy for PairingPolicy {
    fn choose(&mut self, board: &HexBoard, last: Option<usize>) -> usize {
        match last {
            Some(m) if board.at(self.mate[m]).is_none() => self.mate[m],
            _ => board.empty_cells()[0],
        }
    }
}

/// Plays the pairing strategy for Blue against every Red line, with Red
/// moving first and then with Blue moving first from every opening.
/// Returns the number of distinct positions explored, or a losing line.
pub fn check_pairing(n: usize) -> Result<usize, Vec<usize>> {
    let p = asymmetric_pairing(n);
    let mut seen = HashSet::new();
    let mut line = Vec::new();
    explore_pairing(&p, &mut p.board(Stone::Red), &mut seen, &mut line)?;
    for open in 0..p.mate.len() {
        let mut b = p.board(Stone::Blue);
        b.play(open).unwrap();
        let mut line = vec![open];
        explore_pairing(&p, &mut b, &mut seen, &mut line)?;
    }
    Ok(seen.len())
}

fn explore_pairing(
    p: &Pairing,
    b: &mut HexBoard,
    seen: &mut HashSet<(u128, Stone)>,
    line: &mut Vec<usize>,
) -> Result<(), Vec<usize>> {
    if !seen.insert((key(b), b.first())) {
        return Ok(());
    }
    match b.winner_by_connectivity() {
        Some(Stone::Blue) => return Ok(()),
        Some(Stone::Red) => return Err(line.clone()),
        None => {}
    }
    let mut policy = PairingPolicy {
        mate: p.mate.clone(),
    };
    for m in b.empty_cells() {
        let mut next = b.clone();
        next.play(m).unwrap();
        line.push(m);
        if next.connects(Stone::Red) {
            return Err(line.clone());
        }
        if !next.is_full() {
            let reply = policy.choose(&next, Some(m));
            next.play(reply).unwrap();
            line.push(reply);
            explore_pairing(p, &mut next, seen, line)?;
            line.pop();
        } else if next.winner_by_connectivity() != Some(Stone::Blue) {
            return Err(line.clone());
        }
        line.pop();
    }
    Ok(())
}

/// The first player on a square board borrowing a second-player strategy.
///
/// Red opens anywhere and then pretends that opening stone is not there.
/// Transposing the board swaps the two players' sides, so the Blue stones
/// seen transposed form a position in which Red is the first player; the
/// borrowed strategy, playing Blue there, picks a reply which Red plays
/// transposed back. When that cell holds the ignored stone, Red plays any
/// empty cell instead and ignores that one from then on.
pub struct StealPolicy {
    sigma: Box<dyn HexPolicy>,
    opening: usize,
    extra: Option<usize>,
}

impl StealPolicy {
    pub fn new(
        board: &HexBoard,
        sigma: Box<dyn HexPolicy>,
        opening: usize,
    ) -> Result<Self, HexError> {
        if board.rows() != board.cols() {
            return Err(HexError::AsymmetricBoard {
                rows: board.rows(),
                cols: board.cols(),
            });
        }
        if !board.is_empty() || board.first() != Stone::Red {
            return Err(HexError::Invalid(
                "strategy stealing starts from an empty board with Red first".into(),
            ));
        }
        Ok(StealPolicy {
            sigma,
            opening,
            extra: None,
        })
    }

    fn transpose(board: &HexBoard, i: usize) -> usize {
        let (c, r) = board.cell(i);
        board.index((r, c)).unwrap()
    }

    /// The position the borrowed strategy sees.
    pub fn imagined(&self, board: &HexBoard) -> HexBoard {
        let mut img = HexBoard::new(board.rows(), board.cols(), Stone::Red);
        for i in 0..board.len() {
            let v = match board.at(i) {
                Some(Stone::Blue) => Some(Stone::Red),
                Some(Stone::Red) if Some(i) != self.extra => Some(Stone::Blue),
                _ => None,
            };
            img.set(Self::transpose(board, i), v);
        }
        img
    }
}

impl HexPolicy for StealPolicy {
    fn choose(&mut self, board: &HexBoard, last: Option<usize>) -> usize {
        if self.extra.is_none() {
            self.extra = Some(self.opening);
            return self.opening;
        }
        let img = self.imagined(board);
        let reply = self
            .sigma
            .choose(&img, last.map(|m| Self::transpose(board, m)));
        let real = Self::transpose(board, reply);
        if board.at(real).is_none() {
            return real;
        }
        // The borrowed reply is the ignored stone: place a new one.
        let fresh = board.empty_cells()[0];
        self.extra = Some(fresh);
        fresh
    }
}
