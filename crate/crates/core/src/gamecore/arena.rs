//! Backward induction on finite game graphs.
//!
//! Nodes where the open player has won get value 0. Values are then
//! propagated in increasing order: an open-player node takes `k + 1` from
//! its first successor to reach value `k`; a closed-player node takes `k`
//! once its last successor is valued. Nodes never reached (including every
//! node that can cycle forever away from a win) have no value.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::{GameChildren, GameError, GameNode, GameValue, Player, Status};

#[derive(Clone, Debug, Default)]
pub struct Arena {
    mover: Vec<Player>,
    won: Vec<bool>,
    succ: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct ArenaSolution {
    pub values: Vec<Option<u64>>,
    succ: Vec<Vec<u32>>,
    mover: Vec<Player>,
}

impl Arena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.mover.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mover.is_empty()
    }

    pub fn add_node(&mut self, mover: Player, won: bool) -> u32 {
        self.mover.push(mover);
        self.won.push(won);
        self.succ.push(Vec::new());
        (self.mover.len() - 1) as u32
    }

    pub fn add_edge(&mut self, from: u32, to: u32) {
        self.succ[from as usize].push(to);
    }

    pub fn successors(&self, v: u32) -> &[u32] {
        &self.succ[v as usize]
    }

    pub fn solve(&self) -> Result<ArenaSolution, GameError> {
        let n = self.len();
        let mut pred: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (v, out) in self.succ.iter().enumerate() {
            if !self.won[v] && self.mover[v] == Player::Closed && out.is_empty() {
                return Err(GameError::InvalidNode(format!(
                    "arena node {v}: closed player to move with no moves"
                )));
            }
            for &w in out {
                pred[w as usize].push(v as u32);
            }
        }
        let mut remaining: Vec<usize> = self.succ.iter().map(|s| s.len()).collect();
        let mut values: Vec<Option<u64>> = vec![None; n];
        let mut level: VecDeque<u32> = VecDeque::new();
        for v in 0..n {
            if self.won[v] {
                values[v] = Some(0);
                level.push_back(v as u32);
            }
        }
        let mut k = 0u64;
        while !level.is_empty() {
            let mut next = VecDeque::new();
            while let Some(v) = level.pop_front() {
                for &p in &pred[v as usize] {
                    let p = p as usize;
                    if values[p].is_some() {
                        continue;
                    }
                    match self.mover[p] {
                        Player::Open => {
                            values[p] = Some(k + 1);
                            next.push_back(p as u32);
                        }
                        Player::Closed => {
                            remaining[p] -= 1;
                            if remaining[p] == 0 {
                                values[p] = Some(k);
                                level.push_back(p as u32);
                            }
                        }
                    }
                }
            }
            level = next;
            k += 1;
        }
        Ok(ArenaSolution {
            values,
            succ: self.succ.clone(),
            mover: self.mover.clone(),
        })
    }

    /// The finite explicit game as an arena (node 0 is the root).
    /// Endless nodes become a two-node cycle.
    pub fn from_game(g: &GameNode) -> Result<Arena, GameError> {
        let mut a = Arena::new();
        a.push_game(g)?;
        Ok(a)
    }

    fn push_game(&mut self, g: &GameNode) -> Result<u32, GameError> {
        let won = g.status == Status::OpenHasWon;
        let id = self.add_node(g.mover, won);
        if won {
            return Ok(id);
        }
        match &g.children {
            GameChildren::Explicit(cs) => {
                for c in cs {
                    let cid = self.push_game(c)?;
                    self.add_edge(id, cid);
                }
            }
            GameChildren::Endless => {
                let other = self.add_node(g.mover.other(), false);
                self.add_edge(id, other);
                self.add_edge(other, id);
            }
            GameChildren::Family(_) => {
                return Err(GameError::Input(
                    "infinitely branching positions cannot be put in a finite arena".into(),
                ))
            }
        }
        Ok(id)
    }
}

impl ArenaSolution {
    pub fn value(&self, v: u32) -> GameValue {
        match self.values[v as usize] {
            Some(k) => GameValue::nat(k),
            None => GameValue::Undefined,
        }
    }

    /// For an open-player node of value `k > 0`, the first successor of
    /// value `k - 1`.
    pub fn reducing_move(&self, v: u32) -> Option<u32> {
        let k = self.values[v as usize]?;
        if self.mover[v as usize] != Player::Open || k == 0 {
            return None;
        }
        self.succ[v as usize]
            .iter()
            .copied()
            .find(|&w| self.values[w as usize] == Some(k - 1))
    }

    /// For a valueless closed-player node, a successor that stays valueless.
    pub fn maintaining_move(&self, v: u32) -> Option<u32> {
        if self.values[v as usize].is_some() || self.mover[v as usize] != Player::Closed {
            return None;
        }
        self.succ[v as usize]
            .iter()
            .copied()
            .find(|&w| self.values[w as usize].is_none())
    }
}

/// Description of one state, returned by the expansion callback of [`explore`].
pub struct Expansion<S> {
    pub mover: Player,
    pub won: bool,
    pub next: Vec<S>,
}

/// Reachable-state arena from `root`, built breadth first. Node ids index
/// the returned state list; the root is node 0.
pub fn explore<S, F>(root: S, budget: usize, mut expand: F) -> Result<(Arena, Vec<S>), GameError>
where
    S: Clone + Eq + Hash,
    F: FnMut(&S) -> Result<Expansion<S>, GameError>,
{
    let mut arena = Arena::new();
    let mut ids: HashMap<S, u32> = HashMap::new();
    let mut states: Vec<S> = Vec::new();
    let mut queue = VecDeque::new();
    ids.insert(root.clone(), 0);
    states.push(root);
    queue.push_back(0u32);
    let mut pending_edges: Vec<Vec<S>> = Vec::new();
    // First pass: assign ids and collect successor states.
    while let Some(v) = queue.pop_front() {
        let e = expand(&states[v as usize])?;
        let id = arena.add_node(e.mover, e.won);
        debug_assert_eq!(id, v);
        let next = if e.won { Vec::new() } else { e.next };
        for s in &next {
            if !ids.contains_key(s) {
                if states.len() >= budget {
                    return Err(GameError::BudgetExceeded(budget));
                }
                ids.insert(s.clone(), states.len() as u32);
                states.push(s.clone());
                queue.push_back((states.len() - 1) as u32);
            }
        }
        pending_edges.push(next);
    }
    for (v, next) in pending_edges.into_iter().enumerate() {
        for s in next {
            arena.add_edge(v as u32, ids[&s]);
        }
    }
    Ok((arena, states))
}
