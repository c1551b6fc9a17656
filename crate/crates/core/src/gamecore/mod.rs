//! Open games, ordinal game values, well-founded trees and their ranks.
//!
//! Two engines live here. [`Evaluator`] evaluates game values by direct
//! recursion over [`GameNode`]s, including symbolic w-branching families
//! whose per-child values are declared and checked up to a sampling cutoff.
//! [`arena`] solves finite state graphs (possibly cyclic) by backward
//! induction; the stone-placing and draughts modules use it.

pub mod arena;
mod families;
mod json;
mod strategy;

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::Ordinal;

pub use families::{ChainFamily, ClimbFamily, DeclaredFamily, RankFamily};
pub use json::{game_from_json, game_to_json, tree_from_json, tree_to_json};
pub use strategy::Strategy;

pub const DEFAULT_CUTOFF: u64 = 12;
pub const DEFAULT_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GameValue {
    Defined(Ordinal),
    Undefined,
}

impl GameValue {
    pub fn nat(n: u64) -> Self {
        GameValue::Defined(Ordinal::nat(n))
    }

    pub fn defined(&self) -> Option<&Ordinal> {
        match self {
            GameValue::Defined(a) => Some(a),
            GameValue::Undefined => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, GameValue::Defined(_))
    }
}

impl fmt::Display for GameValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameValue::Defined(a) => write!(f, "{a}"),
            GameValue::Undefined => write!(f, "undefined"),
        }
    }
}

impl Serialize for GameValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GameValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "undefined" {
            return Ok(GameValue::Undefined);
        }
        Ordinal::parse(&s)
            .map(GameValue::Defined)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("family {family}: child {index} declared {declared} but evaluates to {actual}")]
    DeclaredRankMismatch {
        family: String,
        index: u64,
        declared: Ordinal,
        actual: GameValue,
    },
    #[error("family {family}: {msg}")]
    BadFamily { family: String, msg: String },
    #[error("node budget of {0} exceeded (possible ill-founded input)")]
    BudgetExceeded(usize),
    #[error("game has no value")]
    NoValue,
    #[error("game has value {0}")]
    HasValue(Ordinal),
    #[error("{beta} exceeds the game value {value}")]
    OutOfRange { beta: Ordinal, value: Ordinal },
    #[error("closed player has infinitely many moves at path {0:?}")]
    NotFinitelyBranching(Vec<usize>),
    #[error("invalid node: {0}")]
    InvalidNode(String),
    #[error("engine invariant violated: {0}")]
    Invariant(String),
    #[error("unknown family schema {0:?}")]
    UnknownSchema(String),
    #[error("bad input: {0}")]
    Input(String),
}

/// A rooted tree with finite explicit branching, symbolic w-branching,
/// or a marker for an infinite branch.
#[derive(Clone, Debug)]
pub struct WfTree {
    pub label: Option<String>,
    pub children: TreeChildren,
}

#[derive(Clone, Debug)]
pub enum TreeChildren {
    Explicit(Vec<WfTree>),
    Family(Arc<dyn TreeFamily>),
    InfiniteBranch,
}

/// Children indexed by all naturals, generated on demand.
///
/// Declared ranks must be nondecreasing in `n`; `declared_sup` is their
/// supremum. The node carrying the family has rank `sup + 1` if the sup is
/// attained and `sup` otherwise.
pub trait TreeFamily: Send + Sync + fmt::Debug {
    fn sample(&self, n: u64) -> WfTree;
    fn declared_rank(&self, n: u64) -> Ordinal;
    fn declared_sup(&self) -> Ordinal;
    fn schema(&self) -> &str;
    fn params(&self) -> serde_json::Value;
    /// Declared ranks as an ordinal expression in `n`.
    fn ranks_pattern(&self) -> String;

    fn key(&self) -> String {
        format!(
            "{}{}|{}|{}",
            self.schema(),
            self.params(),
            self.ranks_pattern(),
            self.declared_sup()
        )
    }
}

impl WfTree {
    pub fn leaf() -> Self {
        WfTree {
            label: None,
            children: TreeChildren::Explicit(Vec::new()),
        }
    }

    pub fn node(children: Vec<WfTree>) -> Self {
        WfTree {
            label: None,
            children: TreeChildren::Explicit(children),
        }
    }

    pub fn family(f: Arc<dyn TreeFamily>) -> Self {
        WfTree {
            label: None,
            children: TreeChildren::Family(f),
        }
    }

    pub fn infinite_branch() -> Self {
        WfTree {
            label: None,
            children: TreeChildren::InfiniteBranch,
        }
    }

    /// A path with `len` edges (rank `len`).
    pub fn chain(len: u64) -> Self {
        let mut t = WfTree::leaf();
        for _ in 0..len {
            t = WfTree::node(vec![t]);
        }
        t
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn explicit_children(&self) -> Option<&[WfTree]> {
        match &self.children {
            TreeChildren::Explicit(cs) => Some(cs),
            _ => None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(&self.children, TreeChildren::Explicit(cs) if cs.is_empty())
    }

    /// Number of explicit nodes, not descending into families.
    pub fn explicit_size(&self) -> usize {
        match &self.children {
            TreeChildren::Explicit(cs) => 1 + cs.iter().map(|c| c.explicit_size()).sum::<usize>(),
            _ => 1,
        }
    }

    /// True when every node is explicit (no families, no infinite markers).
    pub fn is_finite(&self) -> bool {
        match &self.children {
            TreeChildren::Explicit(cs) => cs.iter().all(|c| c.is_finite()),
            _ => false,
        }
    }

    /// Child subtree along a path of indices; families are sampled.
    pub fn descend(&self, path: &[usize]) -> Option<WfTree> {
        let mut cur = Cow::Borrowed(self);
        for &i in path {
            let next = match &cur.children {
                TreeChildren::Explicit(cs) => cs.get(i)?.clone(),
                TreeChildren::Family(f) => f.sample(i as u64),
                TreeChildren::InfiniteBranch => {
                    if i != 0 {
                        return None;
                    }
                    WfTree::infinite_branch()
                }
            };
            cur = Cow::Owned(next);
        }
        Some(cur.into_owned())
    }
}

impl PartialEq for WfTree {
    fn eq(&self, other: &Self) -> bool {
        match (&self.children, &other.children) {
            (TreeChildren::Explicit(a), TreeChildren::Explicit(b)) => a == b,
            (TreeChildren::Family(a), TreeChildren::Family(b)) => a.key() == b.key(),
            (TreeChildren::InfiniteBranch, TreeChildren::InfiniteBranch) => true,
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Open,
    Closed,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Open => Player::Closed,
            Player::Closed => Player::Open,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    OpenHasWon,
    Ongoing,
}

/// A position of an open game: who moves, whether the open player has
/// already won, and the available moves.
#[derive(Clone, Debug)]
pub struct GameNode {
    pub mover: Player,
    pub status: Status,
    pub children: GameChildren,
    pub label: Option<String>,
}

#[derive(Clone, Debug)]
pub enum GameChildren {
    Explicit(Vec<GameNode>),
    Family(Arc<dyn GameFamily>),
    /// Play that never reaches a win for the open player: a single move to
    /// another endless node with the other player to move.
    Endless,
}

/// Moves indexed by all naturals with declared, nondecreasing values.
/// `declared_sup` is the supremum of the child values.
pub trait GameFamily: Send + Sync + fmt::Debug {
    fn sample(&self, n: u64) -> GameNode;
    fn declared_value(&self, n: u64) -> Ordinal;
    fn declared_sup(&self) -> Ordinal;
    fn key(&self) -> String;
    /// The tree when the family is the move set of a climbing game.
    fn climbing_tree(&self) -> Option<WfTree> {
        None
    }
}

impl GameNode {
    pub fn won(mover: Player) -> Self {
        GameNode {
            mover,
            status: Status::OpenHasWon,
            children: GameChildren::Explicit(Vec::new()),
            label: None,
        }
    }

    /// An ongoing position. A closed player with no moves is rejected:
    /// losing by being stuck has to be encoded as an explicit win.
    pub fn new(mover: Player, children: Vec<GameNode>) -> Result<Self, GameError> {
        if mover == Player::Closed && children.is_empty() {
            return Err(GameError::InvalidNode(
                "closed player to move with no moves; mark the position as won instead".into(),
            ));
        }
        Ok(GameNode {
            mover,
            status: Status::Ongoing,
            children: GameChildren::Explicit(children),
            label: None,
        })
    }

    pub fn family(mover: Player, f: Arc<dyn GameFamily>) -> Self {
        GameNode {
            mover,
            status: Status::Ongoing,
            children: GameChildren::Family(f),
            label: None,
        }
    }

    pub fn endless(mover: Player) -> Self {
        GameNode {
            mover,
            status: Status::Ongoing,
            children: GameChildren::Endless,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Move `i`, if it exists. Families are sampled on demand.
    pub fn child(&self, i: usize) -> Option<Cow<'_, GameNode>> {
        if self.status == Status::OpenHasWon {
            return None;
        }
        match &self.children {
            GameChildren::Explicit(cs) => cs.get(i).map(Cow::Borrowed),
            GameChildren::Family(f) => Some(Cow::Owned(f.sample(i as u64))),
            GameChildren::Endless => {
                (i == 0).then(|| Cow::Owned(GameNode::endless(self.mover.other())))
            }
        }
    }

    /// Number of moves, `None` when infinite.
    pub fn move_count(&self) -> Option<usize> {
        if self.status == Status::OpenHasWon {
            return Some(0);
        }
        match &self.children {
            GameChildren::Explicit(cs) => Some(cs.len()),
            GameChildren::Family(_) => None,
            GameChildren::Endless => Some(1),
        }
    }

    pub fn descend(&self, path: &[usize]) -> Option<GameNode> {
        let mut cur = Cow::Borrowed(self);
        for &i in path {
            let next = cur.child(i)?.into_owned();
            cur = Cow::Owned(next);
        }
        Some(cur.into_owned())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum FamilyState {
    InProgress,
    Valid,
    Invalid(GameError),
}

/// Evaluates ranks and game values.
///
/// Families are checked against their declarations for every index up to
/// `cutoff` and then trusted. Validation results are cached by family key.
/// `budget` bounds the number of nodes visited by one top-level call.
#[derive(Debug)]
pub struct Evaluator {
    pub cutoff: u64,
    pub budget: usize,
    visited: AtomicUsize,
    families: Mutex<HashMap<String, FamilyState>>,
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator::new(DEFAULT_CUTOFF, DEFAULT_BUDGET)
    }
}

impl Evaluator {
    pub fn new(cutoff: u64, budget: usize) -> Self {
        Evaluator {
            cutoff,
            budget,
            visited: AtomicUsize::new(0),
            families: Mutex::new(HashMap::new()),
        }
    }

    fn tick(&self) -> Result<(), GameError> {
        let n = self.visited.fetch_add(1, AtomicOrdering::Relaxed);
        if n >= self.budget {
            Err(GameError::BudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    fn reset(&self) {
        self.visited.store(0, AtomicOrdering::Relaxed);
    }

    /// rank(u) = sup { rank(v) + 1 : v child of u }; Undefined below an
    /// infinite-branch marker.
    pub fn rank(&self, t: &WfTree) -> Result<GameValue, GameError> {
        self.reset();
        self.rank_node(t)
    }

    fn rank_node(&self, t: &WfTree) -> Result<GameValue, GameError> {
        self.tick()?;
        match &t.children {
            TreeChildren::InfiniteBranch => Ok(GameValue::Undefined),
            TreeChildren::Explicit(cs) => {
                let mut best = Ordinal::zero();
                let mut undefined = false;
                for c in cs {
                    match self.rank_node(c)? {
                        GameValue::Defined(r) => best = best.max(r.successor()),
                        GameValue::Undefined => undefined = true,
                    }
                }
                Ok(if undefined {
                    GameValue::Undefined
                } else {
                    GameValue::Defined(best)
                })
            }
            TreeChildren::Family(f) => {
                self.check_tree_family(f.as_ref())?;
                Ok(GameValue::Defined(family_node_rank(
                    f.as_ref(),
                    self.cutoff,
                )?))
            }
        }
    }

    fn cached(&self, key: &str) -> Option<FamilyState> {
        self.families.lock().unwrap().get(key).cloned()
    }

    fn set_state(&self, key: String, state: FamilyState) {
        self.families.lock().unwrap().insert(key, state);
    }

    fn check_tree_family(&self, f: &dyn TreeFamily) -> Result<(), GameError> {
        let key = f.key();
        match self.cached(&key) {
            Some(FamilyState::Valid) | Some(FamilyState::InProgress) => return Ok(()),
            Some(FamilyState::Invalid(e)) => return Err(e),
            None => {}
        }
        self.set_state(key.clone(), FamilyState::InProgress);
        let result = self.validate_tree_family(f, &key);
        match &result {
            Ok(()) => self.set_state(key, FamilyState::Valid),
            Err(GameError::BudgetExceeded(_)) => {
                self.families.lock().unwrap().remove(&key);
            }
            Err(e) => self.set_state(key, FamilyState::Invalid(e.clone())),
        }
        result
    }

    fn validate_tree_family(&self, f: &dyn TreeFamily, key: &str) -> Result<(), GameError> {
        let sup = f.declared_sup();
        let mut prev: Option<Ordinal> = None;
        for n in 0..=self.cutoff {
            let declared = f.declared_rank(n);
            check_declared(key, n, &declared, prev.as_ref(), &sup)?;
            let actual = self.rank_node(&f.sample(n))?;
            if actual != GameValue::Defined(declared.clone()) {
                return Err(GameError::DeclaredRankMismatch {
                    family: key.to_string(),
                    index: n,
                    declared,
                    actual,
                });
            }
            prev = Some(declared);
        }
        family_node_rank(f, self.cutoff).map(|_| ())
    }

    /// Game value by the defining recursion: 0 once the open player has
    /// won; successor of the least child value when the open player moves;
    /// supremum of the child values when the closed player moves, provided
    /// all of them are defined.
    pub fn game_value(&self, g: &GameNode) -> Result<GameValue, GameError> {
        self.reset();
        self.value_node(g)
    }

    fn value_node(&self, g: &GameNode) -> Result<GameValue, GameError> {
        self.tick()?;
        if g.status == Status::OpenHasWon {
            return Ok(GameValue::Defined(Ordinal::zero()));
        }
        match &g.children {
            GameChildren::Endless => Ok(GameValue::Undefined),
            GameChildren::Explicit(cs) => {
                if cs.is_empty() && g.mover == Player::Closed {
                    return Err(GameError::InvalidNode(
                        "closed player to move with no moves".into(),
                    ));
                }
                match g.mover {
                    Player::Open => {
                        let mut best: Option<Ordinal> = None;
                        for c in cs {
                            if let GameValue::Defined(v) = self.value_node(c)? {
                                if best.as_ref().is_none_or(|b| v < *b) {
                                    best = Some(v);
                                }
                            }
                        }
                        Ok(
                            best.map_or(GameValue::Undefined, |b| {
                                GameValue::Defined(b.successor())
                            }),
                        )
                    }
                    Player::Closed => {
                        let mut best = Ordinal::zero();
                        let mut undefined = false;
                        for c in cs {
                            match self.value_node(c)? {
                                GameValue::Defined(v) => best = best.max(v),
                                GameValue::Undefined => undefined = true,
                            }
                        }
                        Ok(if undefined {
                            GameValue::Undefined
                        } else {
                            GameValue::Defined(best)
                        })
                    }
                }
            }
            GameChildren::Family(f) => {
                self.check_game_family(f.as_ref())?;
                Ok(GameValue::Defined(match g.mover {
                    Player::Open => f.declared_value(0).successor(),
                    Player::Closed => f.declared_sup(),
                }))
            }
        }
    }

    fn check_game_family(&self, f: &dyn GameFamily) -> Result<(), GameError> {
        let key = f.key();
        match self.cached(&key) {
            Some(FamilyState::Valid) | Some(FamilyState::InProgress) => return Ok(()),
            Some(FamilyState::Invalid(e)) => return Err(e),
            None => {}
        }
        self.set_state(key.clone(), FamilyState::InProgress);
        let result = self.validate_game_family(f, &key);
        match &result {
            Ok(()) => self.set_state(key, FamilyState::Valid),
            Err(GameError::BudgetExceeded(_)) => {
                self.families.lock().unwrap().remove(&key);
            }
            Err(e) => self.set_state(key, FamilyState::Invalid(e.clone())),
        }
        result
    }

    fn validate_game_family(&self, f: &dyn GameFamily, key: &str) -> Result<(), GameError> {
        let sup = f.declared_sup();
        let mut prev: Option<Ordinal> = None;
        for n in 0..=self.cutoff {
            let declared = f.declared_value(n);
            check_declared(key, n, &declared, prev.as_ref(), &sup)?;
            let actual = self.value_node(&f.sample(n))?;
            if actual != GameValue::Defined(declared.clone()) {
                return Err(GameError::DeclaredRankMismatch {
                    family: key.to_string(),
                    index: n,
                    declared,
                    actual,
                });
            }
            prev = Some(declared);
        }
        let last = f.declared_value(self.cutoff);
        if last != sup && !sup.is_limit() {
            return Err(GameError::BadFamily {
                family: key.to_string(),
                msg: format!(
                    "supremum {sup} is not a limit and is not reached by index {}",
                    self.cutoff
                ),
            });
        }
        Ok(())
    }

    /// Value of the child reached by move `i` (sampling families).
    pub fn child_value(&self, g: &GameNode, i: usize) -> Result<Option<GameValue>, GameError> {
        match g.child(i) {
            Some(c) => self.value_node(&c).map(Some),
            None => Ok(None),
        }
    }

    /// A strategy for the open player that moves to a child of strictly
    /// smaller value at every reachable open-player position.
    pub fn value_reducing_strategy(&self, g: &GameNode) -> Result<Strategy, GameError> {
        self.reset();
        if !self.value_node(g)?.is_defined() {
            return Err(GameError::NoValue);
        }
        let mut s = Strategy::default();
        let mut path = Vec::new();
        self.reducing_walk(g, &mut path, &mut s)?;
        Ok(s)
    }

    fn reducing_walk(
        &self,
        g: &GameNode,
        path: &mut Vec<usize>,
        s: &mut Strategy,
    ) -> Result<(), GameError> {
        if g.status == Status::OpenHasWon {
            return Ok(());
        }
        match g.mover {
            Player::Open => {
                let (i, _) = self.min_child(g)?.ok_or(GameError::NoValue)?;
                s.insert(path.clone(), i);
                let c = g.child(i).unwrap();
                path.push(i);
                self.reducing_walk(&c, path, s)?;
                path.pop();
            }
            Player::Closed => {
                for i in 0..self.branching_limit(g) {
                    let c = g.child(i).unwrap();
                    path.push(i);
                    self.reducing_walk(&c, path, s)?;
                    path.pop();
                }
            }
        }
        Ok(())
    }

    /// Explicit move count, or `cutoff + 1` sampled moves for families.
    fn branching_limit(&self, g: &GameNode) -> usize {
        g.move_count().unwrap_or(self.cutoff as usize + 1)
    }

    /// Index and value of the first child of least defined value.
    fn min_child(&self, g: &GameNode) -> Result<Option<(usize, Ordinal)>, GameError> {
        if let GameChildren::Family(f) = &g.children {
            self.check_game_family(f.as_ref())?;
            return Ok(Some((0, f.declared_value(0))));
        }
        let mut best: Option<(usize, Ordinal)> = None;
        for i in 0..self.branching_limit(g) {
            if let Some(GameValue::Defined(v)) = self.child_value(g, i)? {
                if best.as_ref().is_none_or(|(_, b)| v < *b) {
                    best = Some((i, v));
                }
            }
        }
        Ok(best)
    }

    /// A strategy for the closed player that keeps every reached position
    /// valueless. Tabulated to `depth` moves; endless stretches use the
    /// strategy's fallback move 0.
    pub fn value_maintaining_strategy(
        &self,
        g: &GameNode,
        depth: usize,
    ) -> Result<Strategy, GameError> {
        self.reset();
        if let GameValue::Defined(v) = self.value_node(g)? {
            return Err(GameError::HasValue(v));
        }
        let mut s = Strategy::default();
        let mut path = Vec::new();
        self.maintaining_walk(g, &mut path, depth, &mut s)?;
        Ok(s)
    }

    fn maintaining_walk(
        &self,
        g: &GameNode,
        path: &mut Vec<usize>,
        depth: usize,
        s: &mut Strategy,
    ) -> Result<(), GameError> {
        if path.len() >= depth {
            return Ok(());
        }
        if matches!(g.children, GameChildren::Endless) {
            s.fallback = Some(0);
            return Ok(());
        }
        match g.mover {
            Player::Closed => {
                let mut chosen = None;
                for i in 0..self.branching_limit(g) {
                    if self.child_value(g, i)? == Some(GameValue::Undefined) {
                        chosen = Some(i);
                        break;
                    }
                }
                let i = chosen.ok_or_else(|| {
                    GameError::Invariant("valueless closed node with all children valued".into())
                })?;
                s.insert(path.clone(), i);
                let c = g.child(i).unwrap();
                path.push(i);
                self.maintaining_walk(&c, path, depth, s)?;
                path.pop();
            }
            Player::Open => {
                for i in 0..self.branching_limit(g) {
                    let c = g.child(i).unwrap();
                    path.push(i);
                    self.maintaining_walk(&c, path, depth, s)?;
                    path.pop();
                }
            }
        }
        Ok(())
    }

    /// A path from `g` to a position of value exactly `beta`, for any
    /// `beta` at most the value of `g`. The open player steps to a least
    /// child; the closed player steps to the first child of value at least
    /// `beta`.
    pub fn find_position_with_value(
        &self,
        g: &GameNode,
        beta: &Ordinal,
    ) -> Result<Vec<usize>, GameError> {
        self.reset();
        let alpha = match self.value_node(g)? {
            GameValue::Defined(a) => a,
            GameValue::Undefined => return Err(GameError::NoValue),
        };
        if *beta > alpha {
            return Err(GameError::OutOfRange {
                beta: beta.clone(),
                value: alpha,
            });
        }
        let mut path = Vec::new();
        let mut cur = g.clone();
        let mut value = alpha;
        while value != *beta {
            let (i, v) = match cur.mover {
                Player::Open => self.min_child(&cur)?.ok_or(GameError::NoValue)?,
                Player::Closed => self.first_child_at_least(&cur, beta)?,
            };
            cur = cur.child(i).unwrap().into_owned();
            path.push(i);
            value = v;
        }
        Ok(path)
    }

    fn first_child_at_least(
        &self,
        g: &GameNode,
        beta: &Ordinal,
    ) -> Result<(usize, Ordinal), GameError> {
        if let GameChildren::Family(f) = &g.children {
            self.check_game_family(f.as_ref())?;
            // Declared values are nondecreasing and their sup exceeds beta,
            // so the scan stops.
            let mut n = 0u64;
            loop {
                let d = f.declared_value(n);
                if d >= *beta {
                    let actual = self.value_node(&f.sample(n))?;
                    if actual != GameValue::Defined(d.clone()) {
                        return Err(GameError::DeclaredRankMismatch {
                            family: f.key(),
                            index: n,
                            declared: d,
                            actual,
                        });
                    }
                    return Ok((n as usize, d));
                }
                n += 1;
            }
        }
        for i in 0..self.branching_limit(g) {
            if let Some(GameValue::Defined(v)) = self.child_value(g, i)? {
                if v >= *beta {
                    return Ok((i, v));
                }
            }
        }
        Err(GameError::Invariant(
            "no child reaches the requested value".into(),
        ))
    }

    /// Checks that every closed-player position has finitely many moves and
    /// that the value is then finite or undefined.
    pub fn assert_finite_value_if_closed_finitely_branching(
        &self,
        g: &GameNode,
    ) -> Result<FiniteReport, GameError> {
        let mut closed_positions = 0;
        let mut path = Vec::new();
        self.check_closed_branching(g, &mut path, &mut closed_positions)?;
        let value = self.game_value(g)?;
        if let GameValue::Defined(v) = &value {
            if !v.is_finite() {
                return Err(GameError::Invariant(format!(
                    "closed player branches finitely but the value is {v}"
                )));
            }
        }
        Ok(FiniteReport {
            value,
            closed_positions,
        })
    }

    fn check_closed_branching(
        &self,
        g: &GameNode,
        path: &mut Vec<usize>,
        count: &mut usize,
    ) -> Result<(), GameError> {
        if g.status == Status::OpenHasWon {
            return Ok(());
        }
        if g.mover == Player::Closed {
            *count += 1;
            if matches!(g.children, GameChildren::Family(_)) {
                return Err(GameError::NotFinitelyBranching(path.clone()));
            }
        }
        if matches!(g.children, GameChildren::Endless) {
            return Ok(());
        }
        for i in 0..self.branching_limit(g) {
            let c = g.child(i).unwrap();
            path.push(i);
            self.check_closed_branching(&c, path, count)?;
            path.pop();
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiniteReport {
    pub value: GameValue,
    pub closed_positions: usize,
}

fn check_declared(
    key: &str,
    n: u64,
    declared: &Ordinal,
    prev: Option<&Ordinal>,
    sup: &Ordinal,
) -> Result<(), GameError> {
    if prev.is_some_and(|p| declared < p) {
        return Err(GameError::BadFamily {
            family: key.to_string(),
            msg: format!("declared value decreases at index {n}"),
        });
    }
    if declared > sup || (sup.is_limit() && declared == sup) {
        return Err(GameError::BadFamily {
            family: key.to_string(),
            msg: format!(
                "declared value {declared} at index {n} is not below the declared supremum {sup}"
            ),
        });
    }
    Ok(())
}

/// Rank of a node whose children form the family. A limit sup is never
/// attained by the children (declared ranks stay strictly below it), so the
/// node's rank is the sup itself; a successor sup must be attained, giving
/// `sup + 1`.
fn family_node_rank(f: &dyn TreeFamily, cutoff: u64) -> Result<Ordinal, GameError> {
    let sup = f.declared_sup();
    if sup.is_limit() {
        return Ok(sup);
    }
    if f.declared_rank(cutoff) == sup {
        Ok(sup.successor())
    } else {
        Err(GameError::BadFamily {
            family: f.key(),
            msg: format!("supremum {sup} is not a limit and is not reached by index {cutoff}"),
        })
    }
}

/// A tree of the given rank. Successors add a root above a single child;
/// limits branch over the canonical fundamental sequence.
pub fn build_tree_of_rank(alpha: &Ordinal) -> WfTree {
    if alpha.is_zero() {
        WfTree::leaf()
    } else if let Some(p) = alpha.predecessor() {
        // Unroll the finite part iteratively.
        let mut base = p;
        let mut extra = 1u64;
        while let Some(q) = base.predecessor() {
            base = q;
            extra += 1;
        }
        let mut t = build_tree_of_rank(&base);
        for _ in 0..extra {
            t = WfTree::node(vec![t]);
        }
        t
    } else {
        WfTree::family(Arc::new(RankFamily::new(alpha.clone())))
    }
}

/// Climbing through `t`: the closed player (Climber) picks a child of the
/// current node, the open player (Observer) can only answer "OK". Climber
/// loses when stuck on a leaf.
pub fn climbing_game(t: &WfTree) -> GameNode {
    let node = match &t.children {
        TreeChildren::InfiniteBranch => GameNode::endless(Player::Closed),
        TreeChildren::Explicit(cs) if cs.is_empty() => GameNode::won(Player::Closed),
        TreeChildren::Explicit(cs) => GameNode {
            mover: Player::Closed,
            status: Status::Ongoing,
            children: GameChildren::Explicit(cs.iter().map(observer_step).collect()),
            label: None,
        },
        TreeChildren::Family(f) => {
            GameNode::family(Player::Closed, Arc::new(ClimbFamily::new(f.clone())))
        }
    };
    GameNode {
        label: t.label.clone(),
        ..node
    }
}

/// The Observer's position after Climber moved to `child`.
pub fn observer_step(child: &WfTree) -> GameNode {
    GameNode {
        mover: Player::Open,
        status: Status::Ongoing,
        children: GameChildren::Explicit(vec![climbing_game(child)]),
        label: None,
    }
}

/// The tree of rank w+3 whose nodes are labelled by their ranks:
/// the root has children of rank w+2, 0 and 2; below w+2 sit children of
/// rank w+1 and 1; below w+1 a single node of rank w, whose children are
/// chains of every finite length.
pub fn omega_plus_three_tree() -> WfTree {
    let omega = WfTree::family(Arc::new(ChainFamily::new(0))).with_label("w");
    let w1 = WfTree::node(vec![omega]).with_label("w+1");
    let r1 = WfTree::chain(1).with_label("1");
    let w2 = WfTree::node(vec![w1, r1]).with_label("w+2");
    let r2 = WfTree::node(vec![WfTree::chain(1), WfTree::leaf()]).with_label("2");
    WfTree::node(vec![w2, WfTree::leaf().with_label("0"), r2]).with_label("w+3")
}

/// A random finite tree with exactly `nodes` nodes: each new node hangs
/// below a uniformly chosen earlier node.
pub fn random_finite_tree<R: Rng>(rng: &mut R, nodes: usize) -> WfTree {
    assert!(nodes >= 1);
    let mut parent = vec![usize::MAX; nodes];
    for (i, p) in parent.iter_mut().enumerate().skip(1) {
        *p = rng.gen_range(0..i);
    }
    fn build(i: usize, parent: &[usize]) -> WfTree {
        let kids = (i + 1..parent.len())
            .filter(|&j| parent[j] == i)
            .map(|j| build(j, parent))
            .collect();
        WfTree::node(kids)
    }
    build(0, &parent)
}

/// Every ordered tree with exactly `nodes` nodes.
pub fn plane_trees(nodes: usize) -> Vec<WfTree> {
    fn forests(n: usize) -> Vec<Vec<WfTree>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 1..=n {
            for head in plane_trees(first) {
                for mut rest in forests(n - first) {
                    rest.insert(0, head.clone());
                    out.push(rest);
                }
            }
        }
        out
    }
    if nodes == 0 {
        return vec![];
    }
    forests(nodes - 1).into_iter().map(WfTree::node).collect()
}

/// Convenience wrappers using a default evaluator.
pub fn rank(t: &WfTree) -> Result<GameValue, GameError> {
    Evaluator::default().rank(t)
}

pub fn game_value(g: &GameNode) -> Result<GameValue, GameError> {
    Evaluator::default().game_value(g)
}

#[cfg(test)]
mod tests;
