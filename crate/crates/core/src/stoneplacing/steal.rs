use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Outcome, SetDescriptor, Side, StoneError, StonePlacingGame};

/// A pairing of vertices, given as explicit pairs or as the reflection
/// `v -> centre - v` of the integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Involution {
    Pairs(Vec<(i64, i64)>),
    Reflect { reflect: i64 },
}

impl Involution {
    pub fn apply(&self, v: i64) -> Option<i64> {
        match self {
            Involution::Pairs(p) => p.iter().find_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            }),
            Involution::Reflect { reflect } => Some(reflect - v),
        }
    }

    /// Rejects fixed points and vertices paired twice.
    pub fn validate(&self) -> Result<(), StoneError> {
        match self {
            Involution::Pairs(p) => {
                let mut seen = HashSet::new();
                for &(a, b) in p {
                    if a == b {
                        return Err(StoneError::PreconditionFailed(format!(
                            "{a} is a fixed point"
                        )));
                    }
                    if !seen.insert(a) || !seen.insert(b) {
                        return Err(StoneError::PreconditionFailed(format!(
                            "pair ({a}, {b}) reuses a vertex"
                        )));
                    }
                }
                Ok(())
            }
            Involution::Reflect { reflect } => {
                if reflect % 2 == 0 {
                    Err(StoneError::PreconditionFailed(format!(
                        "{} is a fixed point",
                        reflect / 2
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// As a permutation of `0..n`, which it must cover.
    pub fn on_board(&self, n: usize) -> Result<Vec<usize>, StoneError> {
        self.validate()?;
        (0..n)
            .map(|v| match self.apply(v as i64) {
                Some(w) if w >= 0 && (w as usize) < n => Ok(w as usize),
                _ => Err(StoneError::PreconditionFailed(format!(
                    "vertex {v} has no mate on the board"
                ))),
            })
            .collect()
    }

    fn image(&self, s: &SetDescriptor) -> Option<SetDescriptor> {
        match s {
            SetDescriptor::Finite { vertices } => vertices
                .iter()
                .map(|&v| self.apply(v))
                .collect::<Option<Vec<_>>>()
                .map(|vertices| SetDescriptor::Finite { vertices }),
            SetDescriptor::Periodic { base, step } => match self {
                Involution::Reflect { reflect } => Some(SetDescriptor::Periodic {
                    base: base.iter().map(|b| reflect - b).collect(),
                    step: -step,
                }),
                Involution::Pairs(_) => None,
            },
        }
    }
}

/// Chooses a move given every vertex's owner, its own side and the
/// opponent's previous move.
pub trait StonePolicy {
    fn choose(&mut self, marks: &[Option<Side>], me: Side, last: Option<usize>) -> usize;
}

fn first_empty(marks: &[Option<Side>]) -> usize {
    marks
        .iter()
        .position(Option::is_none)
        .expect("an unmarked vertex")
}

/// Answers every move with its mate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MirrorStrategy {
    pub mate: Vec<usize>,
    /// `|f ∩ mate[f]|` for each first-player winning set.
    pub overlaps: Vec<usize>,
}

impl StonePolicy for MirrorStrategy {
    fn choose(&mut self, marks: &[Option<Side>], _me: Side, last: Option<usize>) -> usize {
        match last {
            Some(v) if marks[self.mate[v]].is_none() => self.mate[v],
            _ => first_empty(marks),
        }
    }
}

/// The second player's drawing strategy from a pairing that meets every
/// first-player winning set in itself.
pub fn mirroring_draw(
    g: &StonePlacingGame,
    theta: &Involution,
) -> Result<MirrorStrategy, StoneError> {
    let mate = theta.on_board(g.len())?;
    let mut overlaps = Vec::new();
    for f in g.wins(Side::First) {
        let image: HashSet<usize> = f.iter().map(|&v| mate[v]).collect();
        let common = f.iter().filter(|v| image.contains(v)).count();
        if common == 0 {
            return Err(StoneError::PreconditionFailed(format!(
                "winning set {f:?} misses its own image"
            )));
        }
        if common % 2 != 0 {
            return Err(StoneError::PreconditionFailed(format!(
                "odd overlap for {f:?}"
            )));
        }
        overlaps.push(common);
    }
    Ok(MirrorStrategy { mate, overlaps })
}

/// Random first-player play against the mirror strategy from the start of
/// `g`. Returns the number of games, or a line the first player won.
pub fn mirror_playouts(
    g: &StonePlacingGame,
    strategy: &MirrorStrategy,
    rng: &mut impl Rng,
    games: usize,
) -> Result<usize, StoneError> {
    for _ in 0..games {
        let mut h = g.clone();
        let mut line = Vec::new();
        let mut mu = strategy.clone();
        while h.outcome() == Outcome::Ongoing {
            let v = if h.turn() == Side::First {
                let e = h.unmarked();
                e[rng.gen_range(0..e.len())]
            } else {
                mu.choose(&h.marks(), Side::Second, line.last().copied())
            };
            h.play_move(v)?;
            line.push(v);
        }
        if h.outcome() == Outcome::FirstWins {
            return Err(StoneError::NotWinning(line));
        }
    }
    Ok(games)
}

/// Exact Maker-Breaker search with Maker moving first; Maker wins by
/// owning a set, Breaker by preventing that until the board is full.
#[derive(Clone, Debug)]
pub struct MakerBreakerSolver {
    n: usize,
    sets: Vec<u32>,
    memo: HashMap<(u32, u32), bool>,
}

impl MakerBreakerSolver {
    pub fn new(n: usize, sets: &[Vec<usize>]) -> Self {
        assert!(n <= 24);
        let sets = sets
            .iter()
            .map(|s| s.iter().fold(0u32, |m, &v| m | 1 << v))
            .collect();
        MakerBreakerSolver {
            n,
            sets,
            memo: HashMap::new(),
        }
    }

    /// Whether Maker wins from this position with `maker_to_move`.
    pub fn maker_wins(&mut self, maker: u32, breaker: u32) -> bool {
        if self.sets.iter().any(|&s| s & maker == s) {
            return true;
        }
        let full = (1u32 << self.n) - 1;
        if maker | breaker == full {
            return false;
        }
        if let Some(&w) = self.memo.get(&(maker, breaker)) {
            return w;
        }
        let maker_to_move = maker.count_ones() == breaker.count_ones();
        let free = (0..self.n).filter(|v| (maker | breaker) >> v & 1 == 0);
        let w = if maker_to_move {
            free.into_iter()
                .any(|v| self.maker_wins(maker | 1 << v, breaker))
        } else {
            let moves: Vec<usize> = free.collect();
            moves
                .into_iter()
                .all(|v| self.maker_wins(maker, breaker | 1 << v))
        };
        self.memo.insert((maker, breaker), w);
        w
    }

    fn masks(marks: &[Option<Side>]) -> (u32, u32) {
        marks
            .iter()
            .enumerate()
            .fold((0, 0), |(m, b), (v, s)| match s {
                Some(Side::First) => (m | 1 << v, b),
                Some(Side::Second) => (m, b | 1 << v),
                None => (m, b),
            })
    }
}

impl StonePolicy for MakerBreakerSolver {
    /// Plays Breaker (the second player): a move keeping Maker from winning.
    fn choose(&mut self, marks: &[Option<Side>], _me: Side, _last: Option<usize>) -> usize {
        let (m, b) = Self::masks(marks);
        (0..self.n)
            .filter(|&v| marks[v].is_none())
            .find(|&v| !self.maker_wins(m, b | 1 << v))
            .unwrap_or_else(|| first_empty(marks))
    }
}

/// Breaker answers each Maker move with its mate.
#[derive(Clone, Debug)]
pub struct PairingBreaker {
    pub mate: Vec<usize>,
}

impl StonePolicy for PairingBreaker {
    fn choose(&mut self, marks: &[Option<Side>], _me: Side, last: Option<usize>) -> usize {
        match last {
            Some(v) if marks[self.mate[v]].is_none() => self.mate[v],
            _ => first_empty(marks),
        }
    }
}

fn maker_completes(sets: &[Vec<usize>], marks: &[Option<Side>]) -> bool {
    sets.iter()
        .any(|s| s.iter().all(|&v| marks[v] == Some(Side::First)))
}

/// Every Maker line against the Breaker policy. Returns the number of
/// distinct positions visited or a line Maker wins.
pub fn check_breaker_wins(
    n: usize,
    sets: &[Vec<usize>],
    breaker: &mut dyn StonePolicy,
) -> Result<usize, StoneError> {
    fn go(
        sets: &[Vec<usize>],
        marks: &mut Vec<Option<Side>>,
        breaker: &mut dyn StonePolicy,
        seen: &mut HashSet<Vec<Option<Side>>>,
        line: &mut Vec<usize>,
    ) -> Result<(), StoneError> {
        if !seen.insert(marks.clone()) {
            return Ok(());
        }
        for v in 0..marks.len() {
            if marks[v].is_some() {
                continue;
            }
            marks[v] = Some(Side::First);
            line.push(v);
            if maker_completes(sets, marks) {
                return Err(StoneError::NotWinning(line.clone()));
            }
            if marks.iter().any(Option::is_none) {
                let r = breaker.choose(marks, Side::Second, Some(v));
                if marks[r].is_some() {
                    return Err(StoneError::PreconditionFailed(format!(
                        "Breaker chose marked vertex {r}"
                    )));
                }
                marks[r] = Some(Side::Second);
                line.push(r);
                go(sets, marks, breaker, seen, line)?;
                line.pop();
                marks[r] = None;
            }
            line.pop();
            marks[v] = None;
        }
        Ok(())
    }
    let mut marks = vec![None; n];
    let mut seen = HashSet::new();
    go(sets, &mut marks, breaker, &mut seen, &mut Vec::new())?;
    Ok(seen.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoColouring {
    /// Maker's vertices.
    pub white: Vec<usize>,
    /// Breaker's vertices and any left unmarked.
    pub black: Vec<usize>,
}

/// A proper 2-colouring from a winning Breaker strategy. Breaker plays the
/// strategy; Maker makes an arbitrary first move and then plays the same
/// strategy from Breaker's seat, ignoring that extra stone (and moving it
/// when the strategy asks for its cell). Both then meet every winning set.
pub fn breaker_to_2coloring(
    n: usize,
    sets: &[Vec<usize>],
    make_breaker: &dyn Fn() -> Box<dyn StonePolicy>,
) -> Result<TwoColouring, StoneError> {
    check_breaker_wins(n, sets, make_breaker().as_mut())?;
    let mut breaker = make_breaker();
    let mut stolen = make_breaker();
    let mut marks: Vec<Option<Side>> = vec![None; n];
    let mut extra = 0usize;
    marks[extra] = Some(Side::First);
    let mut last_maker = extra;
    loop {
        if marks.iter().all(Option::is_some) {
            break;
        }
        let b = breaker.choose(&marks, Side::Second, Some(last_maker));
        marks[b] = Some(Side::Second);
        if marks.iter().all(Option::is_some) {
            break;
        }
        // Maker's turn: Breaker's stones are the imagined Maker's, Maker's
        // own stones other than the extra are the imagined Breaker's.
        let imagined: Vec<Option<Side>> = marks
            .iter()
            .enumerate()
            .map(|(v, m)| match m {
                Some(Side::Second) => Some(Side::First),
                Some(Side::First) if v != extra => Some(Side::Second),
                _ => None,
            })
            .collect();
        let m = stolen.choose(&imagined, Side::Second, Some(b));
        if m == extra {
            extra = first_empty(&marks);
            last_maker = extra;
        } else {
            last_maker = m;
        }
        debug_assert!(marks[last_maker].is_none());
        marks[last_maker] = Some(Side::First);
    }
    let white: Vec<usize> = (0..n).filter(|&v| marks[v] == Some(Side::First)).collect();
    let black: Vec<usize> = (0..n).filter(|&v| marks[v] != Some(Side::First)).collect();
    for s in sets {
        if s.iter().all(|v| white.contains(v)) || s.iter().all(|v| black.contains(v)) {
            return Err(StoneError::PreconditionFailed(format!(
                "set {s:?} is monochromatic"
            )));
        }
    }
    Ok(TwoColouring { white, black })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StealCertificate {
    /// For each second-player set, a first-player set inside its image.
    pub witnesses: Vec<(SetDescriptor, SetDescriptor)>,
    pub playouts: usize,
    pub moves_checked: usize,
}

/// Checks that the first player can echo the second through `g`: every
/// winning set of either player must be infinite, `g` a fixed-point-free
/// involution, and each second-player set's image must contain a
/// first-player set. Then plays random bounded games in which the first
/// player opens arbitrarily and answers each move `v` with `g(v)`, checking
/// after every reply that each second-player vertex has its image owned by
/// the first player. A finite set in either family is reported as such.
pub fn strategy_steal_check(
    first: &[SetDescriptor],
    second: &[SetDescriptor],
    g: &Involution,
    rng: &mut impl Rng,
    playouts: usize,
    horizon: usize,
) -> Result<StealCertificate, StoneError> {
    for s in second.iter().chain(first) {
        if s.is_finite() {
            return Err(StoneError::NotStrictlyNotOpen(s.clone()));
        }
    }
    g.validate()?;
    let mut witnesses = Vec::new();
    for s in second {
        let image = g.image(s).ok_or_else(|| {
            StoneError::PreconditionFailed(format!("the involution does not map {s:?}"))
        })?;
        let f = first.iter().find(|f| f.subset_of(&image)).ok_or_else(|| {
            StoneError::PreconditionFailed(format!("no first-player set inside the image of {s:?}"))
        })?;
        witnesses.push((s.clone(), f.clone()));
    }
    // Vertices the random second player draws from.
    let reps = horizon.max(1);
    let mut pool: Vec<i64> = second
        .iter()
        .chain(first)
        .flat_map(|s| s.prefix(reps))
        .collect();
    pool.sort();
    pool.dedup();
    let mut moves_checked = 0;
    for _ in 0..playouts {
        let mut owner: HashMap<i64, Side> = HashMap::new();
        let pick = |owner: &HashMap<i64, Side>, rng: &mut dyn rand::RngCore| -> Option<i64> {
            let free: Vec<i64> = pool
                .iter()
                .copied()
                .filter(|v| !owner.contains_key(v))
                .collect();
            (!free.is_empty()).then(|| free[rng.gen_range(0..free.len())])
        };
        let Some(t) = pick(&owner, rng) else { break };
        owner.insert(t, Side::First);
        for _ in 0..horizon {
            let Some(v) = pick(&owner, rng) else { break };
            owner.insert(v, Side::Second);
            let echo = g.apply(v).expect("validated involution");
            match owner.get(&echo) {
                None => {
                    owner.insert(echo, Side::First);
                }
                Some(Side::First) => {
                    // The echo is already ours: make an arbitrary move instead.
                    let w = (0..)
                        .map(|i: i64| echo + i + 1)
                        .find(|w| !owner.contains_key(w))
                        .expect("unbounded board");
                    owner.insert(w, Side::First);
                }
                Some(Side::Second) => {
                    return Err(StoneError::PreconditionFailed(format!(
                        "echo of {v} held by the second player"
                    )));
                }
            }
            for (&u, &side) in &owner {
                if side == Side::Second && owner.get(&g.apply(u).unwrap()) != Some(&Side::First) {
                    return Err(StoneError::PreconditionFailed(format!(
                        "image of {u} not held by the first player"
                    )));
                }
            }
            moves_checked += 1;
        }
    }
    Ok(StealCertificate {
        witnesses,
        playouts,
        moves_checked,
    })
}
