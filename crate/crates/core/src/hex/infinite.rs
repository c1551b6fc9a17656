//! The infinite board: periodic paths, positions with periodic regions,
//! the mirroring strategy and bounded evaluation of windowed positions.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{adjacent, neighbours, Cell, HexError, Stone, DIRECTIONS};
use crate::gamecore::arena::{explore, Expansion};
use crate::gamecore::{GameValue, Player};

/// The mirror image used by Blue's drawing strategy. It swaps the upper
/// half plane `r >= 0` with the lower half `r < 0` and has no fixed cells.
pub fn mirror_cell(c: Cell) -> Cell {
    let (col, row) = c;
    if row >= 0 {
        (col + row, -1 - row)
    } else {
        (col + row + 1, -1 - row)
    }
}

/// Signs a tail must eventually have, per coordinate, relative to an origin.
fn tail_signs(s: Stone, positive: bool) -> (i32, i32) {
    let (c, r) = match s {
        Stone::Red => (1, 1),
        Stone::Blue => (-1, 1),
    };
    if positive {
        (c, r)
    } else {
        (-c, -r)
    }
}

/// Steps repeated forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tail {
    pub steps: Vec<Cell>,
}

impl Tail {
    pub fn new(steps: Vec<Cell>) -> Self {
        Tail { steps }
    }

    pub fn period(&self) -> Cell {
        self.steps
            .iter()
            .fold((0, 0), |a, s| (a.0 + s.0, a.1 + s.1))
    }

    /// The j-th cell after `from`, for j >= 1.
    fn cell(&self, from: Cell, j: i64) -> Cell {
        let len = self.steps.len() as i64;
        let (q, rem) = ((j - 1) / len, (j - 1) % len);
        let p = self.period();
        let mut c = (
            from.0 + (q * p.0 as i64) as i32,
            from.1 + (q * p.1 as i64) as i32,
        );
        for s in &self.steps[..=rem as usize] {
            c = (c.0 + s.0, c.1 + s.1);
        }
        c
    }
}

/// A two-way infinite path: a finite core extended forwards from its last
/// cell and backwards from its first cell by periodic tails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicPath {
    pub color: Stone,
    pub core: Vec<Cell>,
    pub forward: Tail,
    pub backward: Tail,
}

impl PeriodicPath {
    /// Cell at position `i`; the core occupies `0..core.len()`.
    pub fn cell(&self, i: i64) -> Cell {
        let len = self.core.len() as i64;
        if i < 0 {
            self.backward.cell(self.core[0], -i)
        } else if i < len {
            self.core[i as usize]
        } else {
            self.forward.cell(self.core[len as usize - 1], i - len + 1)
        }
    }

    /// The core plus `reps` periods of each tail.
    pub fn unroll(&self, reps: usize) -> Vec<Cell> {
        let back = (reps * self.backward.steps.len()) as i64;
        let fwd = (reps * self.forward.steps.len()) as i64;
        (-back..self.core.len() as i64 + fwd)
            .map(|i| self.cell(i))
            .collect()
    }

    /// Unit steps, nonzero periods, and no repeated cell within a generous
    /// unrolling. The repeat check is bounded: two tails running off in
    /// parallel at a distance could in principle meet beyond it.
    pub fn validate(&self) -> Result<(), HexError> {
        if self.core.is_empty() || self.forward.steps.is_empty() || self.backward.steps.is_empty() {
            return Err(HexError::Invalid(
                "path needs a core and two nonempty tails".into(),
            ));
        }
        for s in self.forward.steps.iter().chain(&self.backward.steps) {
            if !DIRECTIONS.contains(s) {
                return Err(HexError::Invalid(format!("{s:?} is not a unit step")));
            }
        }
        if self.forward.period() == (0, 0) || self.backward.period() == (0, 0) {
            return Err(HexError::Invalid("tail with zero period".into()));
        }
        if !self.core.windows(2).all(|w| adjacent(w[0], w[1])) {
            return Err(HexError::Invalid("core is not a path".into()));
        }
        let cells = self.unroll(self.check_reps());
        let mut seen = HashSet::new();
        for c in &cells {
            if !seen.insert(*c) {
                return Err(HexError::Invalid(format!("path repeats cell {c:?}")));
            }
        }
        Ok(())
    }

    pub(crate) fn check_reps(&self) -> usize {
        let span = self
            .core
            .iter()
            .map(|c| c.0.abs().max(c.1.abs()) as usize)
            .max()
            .unwrap_or(0);
        4 * (span + self.core.len() + self.forward.steps.len() + self.backward.steps.len()) + 8
    }
}

fn tail_ok(tail: &Tail, from: Cell, signs: (i32, i32), origin: Cell) -> bool {
    let p = tail.period();
    let comp = |c: Cell, k: usize| if k == 0 { c.0 } else { c.1 };
    let sign = |k: usize| if k == 0 { signs.0 } else { signs.1 };
    (0..2).all(|k| {
        let drift = comp(p, k) * sign(k);
        if drift != 0 {
            return drift > 0;
        }
        // No drift: the coordinate cycles through one period's values.
        (1..=tail.steps.len() as i64)
            .all(|j| (comp(tail.cell(from, j), k) - comp(origin, k)) * sign(k) > 0)
    })
}

/// Whether the path eventually stays in the two open quadrants of its
/// colour around `origin`: North-East going forwards and South-West going
/// backwards for Red, North-West and South-East for Blue.
pub fn is_winning_wrt(path: &PeriodicPath, origin: Cell) -> bool {
    let last = *path.core.last().expect("nonempty core");
    tail_ok(&path.forward, last, tail_signs(path.color, true), origin)
        && tail_ok(
            &path.backward,
            path.core[0],
            tail_signs(path.color, false),
            origin,
        )
}

/// Whether the path is winning with respect to every origin: both tail
/// periods must point strictly into the right quadrants.
pub fn decide_winning(path: &PeriodicPath) -> bool {
    let strictly = |p: Cell, s: (i32, i32)| p.0 * s.0 > 0 && p.1 * s.1 > 0;
    strictly(path.forward.period(), tail_signs(path.color, true))
        && strictly(path.backward.period(), tail_signs(path.color, false))
}

/// Cells `start + m + k * step` for every motif offset `m` and `k >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicRegion {
    pub color: Stone,
    pub start: Cell,
    pub motif: Vec<Cell>,
    pub step: Cell,
}

impl PeriodicRegion {
    pub fn contains(&self, c: Cell) -> bool {
        self.motif.iter().any(|m| {
            let d = (c.0 - self.start.0 - m.0, c.1 - self.start.1 - m.1);
            let along = |d: i32, s: i32| -> Option<Option<i32>> {
                if s == 0 {
                    (d == 0).then_some(None)
                } else {
                    (d % s == 0 && d / s >= 0).then_some(Some(d / s))
                }
            };
            match (along(d.0, self.step.0), along(d.1, self.step.1)) {
                (Some(a), Some(b)) => match (a, b) {
                    (Some(x), Some(y)) => x == y,
                    _ => true,
                },
                _ => false,
            }
        })
    }

    /// Cells of repetitions `0..reps`.
    pub fn cells(&self, reps: usize) -> Vec<Cell> {
        let mut out = Vec::new();
        for k in 0..reps as i32 {
            for m in &self.motif {
                out.push((
                    self.start.0 + m.0 + k * self.step.0,
                    self.start.1 + m.1 + k * self.step.1,
                ));
            }
        }
        out
    }

    /// The region is a single connected ray.
    fn is_ray(&self) -> bool {
        let two: Vec<Cell> = self.cells(2);
        let mut seen = HashSet::from([two[0]]);
        let mut queue = VecDeque::from([two[0]]);
        while let Some(c) = queue.pop_front() {
            for &d in &two {
                if adjacent(c, d) && seen.insert(d) {
                    queue.push_back(d);
                }
            }
        }
        let set: HashSet<Cell> = two.iter().copied().collect();
        seen.len() == set.len()
    }

    fn heads(&self, s: Stone, forward: bool) -> bool {
        let want = tail_signs(s, forward);
        self.color == s && self.step.0 * want.0 > 0 && self.step.1 * want.1 > 0 && self.is_ray()
    }
}

/// A position on the infinite board: finitely many stones plus periodic
/// regions, and the player to move. Every other cell is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PositionRepr", into = "PositionRepr")]
pub struct InfiniteHexPosition {
    pub cells: BTreeMap<Cell, Stone>,
    pub regions: Vec<PeriodicRegion>,
    pub turn: Stone,
}

#[derive(Serialize, Deserialize)]
struct PositionRepr {
    cells: Vec<(i32, i32, Stone)>,
    #[serde(rename = "periodicRegions", default)]
    periodic_regions: Vec<PeriodicRegion>,
    turn: Stone,
}

impl TryFrom<PositionRepr> for InfiniteHexPosition {
    type Error = HexError;

    fn try_from(r: PositionRepr) -> Result<Self, HexError> {
        let mut cells = BTreeMap::new();
        for (c, row, s) in r.cells {
            if cells.insert((c, row), s).is_some_and(|old| old != s) {
                return Err(HexError::Invalid(format!("cell ({c}, {row}) given twice")));
            }
        }
        let p = InfiniteHexPosition {
            cells,
            regions: r.periodic_regions,
            turn: r.turn,
        };
        p.validate()?;
        Ok(p)
    }
}

impl From<InfiniteHexPosition> for PositionRepr {
    fn from(p: InfiniteHexPosition) -> Self {
        PositionRepr {
            cells: p.cells.into_iter().map(|((c, r), s)| (c, r, s)).collect(),
            periodic_regions: p.regions,
            turn: p.turn,
        }
    }
}

impl InfiniteHexPosition {
    pub fn color_at(&self, c: Cell) -> Option<Stone> {
        self.cells
            .get(&c)
            .copied()
            .or_else(|| self.regions.iter().find(|r| r.contains(c)).map(|r| r.color))
    }

    /// Smallest box holding the stones and two repetitions of each region,
    /// widened by `margin`.
    fn bounds(&self, extra: &[Cell], margin: i32) -> (Cell, Cell) {
        let mut lo = (i32::MAX, i32::MAX);
        let mut hi = (i32::MIN, i32::MIN);
        let all = self
            .cells
            .keys()
            .copied()
            .chain(self.regions.iter().flat_map(|r| r.cells(2)))
            .chain(extra.iter().copied());
        for c in all {
            lo = (lo.0.min(c.0), lo.1.min(c.1));
            hi = (hi.0.max(c.0), hi.1.max(c.1));
        }
        if lo.0 > hi.0 {
            return ((-margin, -margin), (margin, margin));
        }
        (
            (lo.0 - margin, lo.1 - margin),
            (hi.0 + margin, hi.1 + margin),
        )
    }

    /// Regions need a nonzero step and a motif, and must agree with each
    /// other and with the stones. Agreement is checked while the regions
    /// stay within reach of the stones and of each other's starts.
    pub fn validate(&self) -> Result<(), HexError> {
        for r in &self.regions {
            if r.step == (0, 0) || r.motif.is_empty() {
                return Err(HexError::Invalid(
                    "region needs a motif and a nonzero step".into(),
                ));
            }
        }
        let (lo, hi) = self.bounds(&[], 2);
        let reach = (hi.0 - lo.0).max(hi.1 - lo.1) as usize + 2;
        let mut seen: HashMap<Cell, Stone> = self.cells.iter().map(|(&c, &s)| (c, s)).collect();
        for r in &self.regions {
            for c in r.cells(reach) {
                if let Some(&s) = seen.get(&c) {
                    if s != r.color {
                        return Err(HexError::Invalid(format!("region conflicts at {c:?}")));
                    }
                }
                seen.insert(c, r.color);
            }
        }
        Ok(())
    }

    /// Empty cells next to two stones of `s` that are not yet joined near
    /// the stones; for a chain of bridges these are the bridge cells.
    pub fn bridge_cells(&self, s: Stone) -> Vec<Cell> {
        let (lo, hi) = self.bounds(&[], 1);
        let inside = |c: Cell| c.0 >= lo.0 && c.0 <= hi.0 && c.1 >= lo.1 && c.1 <= hi.1;
        // Components of s within the box.
        let mut comp: HashMap<Cell, usize> = HashMap::new();
        let mut next = 0;
        for c0 in (lo.0..=hi.0).flat_map(|c| (lo.1..=hi.1).map(move |r| (c, r))) {
            if self.color_at(c0) != Some(s) || comp.contains_key(&c0) {
                continue;
            }
            comp.insert(c0, next);
            let mut queue = VecDeque::from([c0]);
            while let Some(c) = queue.pop_front() {
                for n in neighbours(c) {
                    if inside(n) && self.color_at(n) == Some(s) && !comp.contains_key(&n) {
                        comp.insert(n, next);
                        queue.push_back(n);
                    }
                }
            }
            next += 1;
        }
        let mut out = Vec::new();
        for c in (lo.0..=hi.0).flat_map(|c| (lo.1..=hi.1).map(move |r| (c, r))) {
            if self.color_at(c).is_some() {
                continue;
            }
            let ids: HashSet<usize> = neighbours(c)
                .filter_map(|n| comp.get(&n).copied())
                .collect();
            if ids.len() >= 2 {
                out.push(c);
            }
        }
        out
    }
}

/// Whether `s` already owns an infinite path heading into both of its
/// quadrants. Decided for the fragment where the path is made of one ray
/// region per direction joined through stones near the finite part; the
/// overlay adds stones without changing the position.
pub fn has_periodic_winning_path(
    pos: &InfiniteHexPosition,
    s: Stone,
    overlay: &HashMap<Cell, Stone>,
) -> bool {
    let fwd: Vec<&PeriodicRegion> = pos.regions.iter().filter(|r| r.heads(s, true)).collect();
    let back: Vec<&PeriodicRegion> = pos.regions.iter().filter(|r| r.heads(s, false)).collect();
    if fwd.is_empty() || back.is_empty() {
        return false;
    }
    let extra: Vec<Cell> = overlay.keys().copied().collect();
    let (lo, hi) = pos.bounds(&extra, 2);
    let inside = |c: Cell| c.0 >= lo.0 && c.0 <= hi.0 && c.1 >= lo.1 && c.1 <= hi.1;
    let color = |c: Cell| overlay.get(&c).copied().or_else(|| pos.color_at(c));
    let goal: HashSet<Cell> = back.iter().flat_map(|r| r.cells(2)).collect();
    let mut seen: HashSet<Cell> = fwd.iter().flat_map(|r| r.cells(2)).collect();
    let mut queue: VecDeque<Cell> = seen.iter().copied().collect();
    while let Some(c) = queue.pop_front() {
        if goal.contains(&c) {
            return true;
        }
        for n in neighbours(c) {
            if inside(n) && color(n) == Some(s) && seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    false
}

/// Red stones on the diagonal `(i, i)` for `0 <= i <= k`, joined by bridges,
/// with a ray leaving `(0, 0)` to the South-West and one leaving `(k, k)`
/// to the North-East. Blue is to move.
pub fn make_bridge_chain(k: usize) -> InfiniteHexPosition {
    let k = k as i32;
    let cells = (0..=k).map(|i| ((i, i), Stone::Red)).collect();
    let regions = vec![
        PeriodicRegion {
            color: Stone::Red,
            start: (0, 0),
            motif: vec![(0, 0), (0, -1)],
            step: (-1, -1),
        },
        PeriodicRegion {
            color: Stone::Red,
            start: (k, k),
            motif: vec![(0, 0), (0, 1)],
            step: (1, 1),
        },
    ];
    InfiniteHexPosition {
        cells,
        regions,
        turn: Stone::Blue,
    }
}

/// The two cells of each bridge of [`make_bridge_chain`].
pub fn bridge_window(k: usize) -> Vec<Cell> {
    (0..k as i32)
        .flat_map(|i| [(i + 1, i), (i, i + 1)])
        .collect()
}

/// Value of the position for `open`, as a game played only on `window`:
/// every empty cell outside it is handed to the other player. The open
/// player wins on completing a path; a full window without one is a loss.
pub fn bounded_minimax(
    pos: &InfiniteHexPosition,
    window: &[Cell],
    open: Stone,
    budget: usize,
) -> Result<GameValue, HexError> {
    check_window(pos, window)?;
    type State = (Vec<Option<Stone>>, Stone);
    let root: State = (vec![None; window.len()], pos.turn);
    let (arena, _) = explore(root, budget, |(w, turn): &State| {
        let overlay: HashMap<Cell, Stone> = window
            .iter()
            .zip(w)
            .filter_map(|(&c, s)| s.map(|s| (c, s)))
            .collect();
        let won = has_periodic_winning_path(pos, open, &overlay);
        let next: Vec<State> = (0..w.len())
            .filter(|&i| w[i].is_none())
            .map(|i| {
                let mut w2 = w.clone();
                w2[i] = Some(*turn);
                (w2, turn.other())
            })
            .collect();
        // A stuck closed player is treated as a dead end for the open one.
        let mover = if *turn == open || next.is_empty() {
            Player::Open
        } else {
            Player::Closed
        };
        Ok(Expansion { mover, won, next })
    })
    .map_err(|e| HexError::Invariant(e.to_string()))?;
    let sol = arena
        .solve()
        .map_err(|e| HexError::Invariant(e.to_string()))?;
    Ok(sol.value(0))
}

fn check_window(pos: &InfiniteHexPosition, window: &[Cell]) -> Result<(), HexError> {
    let mut seen = HashSet::new();
    for &c in window {
        if pos.color_at(c).is_some() {
            return Err(HexError::Invalid(format!("window cell {c:?} is occupied")));
        }
        if !seen.insert(c) {
            return Err(HexError::Invalid(format!("window cell {c:?} repeated")));
        }
    }
    Ok(())
}

/// The windowed game as sets of window indices: the minimal sets whose
/// capture by `open` completes a winning path.
pub fn window_to_stone_game(
    pos: &InfiniteHexPosition,
    window: &[Cell],
    open: Stone,
) -> Result<Vec<Vec<usize>>, HexError> {
    check_window(pos, window)?;
    if window.len() > 20 {
        return Err(HexError::BudgetExceeded {
            empty: window.len(),
            budget: 20,
        });
    }
    let wins = |mask: u32| {
        let overlay: HashMap<Cell, Stone> = (0..window.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (window[i], open))
            .collect();
        has_periodic_winning_path(pos, open, &overlay)
    };
    let mut minimal: Vec<u32> = Vec::new();
    let mut masks: Vec<u32> = (0..1u32 << window.len()).collect();
    masks.sort_by_key(|m| m.count_ones());
    for m in masks {
        if minimal.iter().any(|&x| x & m == x) {
            continue;
        }
        if wins(m) {
            minimal.push(m);
        }
    }
    Ok(minimal
        .into_iter()
        .map(|m| (0..window.len()).filter(|i| m >> i & 1 == 1).collect())
        .collect())
}

/// Blue's answer to every Red move is its mirror image.
#[derive(Clone, Copy, Debug, Default)]
pub struct MirroringStrategy;

impl MirroringStrategy {
    pub fn new(start: &InfiniteHexPosition) -> Result<Self, HexError> {
        if !start.cells.is_empty() || !start.regions.is_empty() {
            return Err(HexError::NonEmptyStart);
        }
        Ok(MirroringStrategy)
    }

    pub fn reply(&self, red_move: Cell) -> Cell {
        mirror_cell(red_move)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MirrorReport {
    pub moves: usize,
    /// Times the mirror cell of Red's move was already taken.
    pub blocked_replies: usize,
    /// Marked cells whose mirror image did not hold the other colour.
    pub broken_pairs: usize,
    /// Pairs with both cells Red.
    pub red_pairs: usize,
}

/// Random play against the mirroring strategy from the empty board: Red
/// picks `moves` random empty cells within `radius` of the origin, and
/// Blue answers each with its mirror image.
pub fn mirroring_playout(rng: &mut impl Rng, moves: usize, radius: i32) -> MirrorReport {
    let mu = MirroringStrategy;
    let mut board: HashMap<Cell, Stone> = HashMap::new();
    let mut report = MirrorReport::default();
    for _ in 0..moves {
        let x = loop {
            let c = (
                rng.gen_range(-radius..=radius),
                rng.gen_range(-radius..=radius),
            );
            if !board.contains_key(&c) {
                break c;
            }
        };
        board.insert(x, Stone::Red);
        let y = mu.reply(x);
        if board.contains_key(&y) {
            report.blocked_replies += 1;
        } else {
            board.insert(y, Stone::Blue);
        }
        report.moves += 1;
        // Cells never change once taken, so checking the new pair suffices.
        for c in [x, y] {
            match (board.get(&c), board.get(&mirror_cell(c))) {
                (Some(&s), Some(&t)) if t == s.other() => {}
                (Some(Stone::Red), Some(Stone::Red)) => report.red_pairs += 1,
                _ => report.broken_pairs += 1,
            }
        }
    }
    report
}
