//! Compiling a well-founded tree into a Draughts position whose value for
//! White is the rank of the tree.
//!
//! Layout works on a coarse grid: coarse cell `(x, y)` is the square
//! `(2x, 2y)`, and the square between two adjacent cells is the sum of
//! their coordinates. Every square of the layout's bounding box holds a
//! White king except the corridor cells (empty), the Black king on the
//! root and three Black pawns per inner node. The Black king can only move
//! by jumping from cell to adjacent cell, capturing the king between them.
//!
//! An inner node with entry cell `P` (reached from below) has its resting
//! square `R = P + (0, 1)`. The king ends a jump on `R` because the pawns
//! `B1 = 2P + (0, 3)` and `B2 = 2P + (0, 4)` block the way on and shield it
//! from capture. White must then take the pawn `Q = 2P + (-1, 1)` with the
//! king `Z = 2P + (-2, 1)`, which lands on the spur square between `P` and
//! `R`. That gives the Black king a jump back to `P` and on along the exit
//! `P + (1, 0)`, a horizontal bus with one branch per child. Leaves are dead
//! ends where the arriving king is captured from the square beyond.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::{
    apply_move, legal_moves, minimax_value, sq, Color, DSquare, DraughtsError, DraughtsPosition,
    Ladder, Move, Piece, RuleSet, Window,
};
use crate::gamecore::{rank, GameValue, Strategy, TreeChildren, WfTree};

type Cell = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KingTreeOptions {
    /// Sampled children of an omega-node before its ladder.
    pub omega_cutoff: u64,
    /// Largest allowed width or height of the layout, in squares.
    pub max_extent: i64,
}

impl Default for KingTreeOptions {
    fn default() -> Self {
        KingTreeOptions {
            omega_cutoff: 5,
            max_extent: 4096,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TreeNodeSquares {
    /// Child indices from the root; sampled children of an omega-node use
    /// their sample index.
    pub path: Vec<usize>,
    /// Where the Black king stops for this node: the starting square of the
    /// root, the resting square of an inner node, the trap of a leaf.
    pub square: DSquare,
    /// Entry cell of an inner non-root node.
    pub entry: Option<DSquare>,
    pub leaf: bool,
    pub children: Vec<usize>,
    /// The node continues into a ladder after its sampled children.
    pub ladder: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KingTree {
    pub rules: RuleSet,
    pub position: DraughtsPosition,
    /// Preorder; the root comes first.
    pub nodes: Vec<TreeNodeSquares>,
    /// White kings the Black king can capture from the root.
    pub tree_kings: Vec<DSquare>,
    /// Black pawns backing resting squares and the ones White must capture.
    pub pawns: Vec<DSquare>,
    /// Extra White kings punishing deviations (none under RS-A).
    pub guardians: Vec<DSquare>,
    /// Squares per coarse cell.
    pub stretch: i64,
    /// Square of the root cell.
    pub offset: DSquare,
}

fn fine(c: Cell) -> DSquare {
    sq(2 * c.0, 2 * c.1)
}

fn between(a: Cell, b: Cell) -> DSquare {
    sq(a.0 + b.0, a.1 + b.1)
}

fn has_family(t: &WfTree) -> Result<bool, DraughtsError> {
    match &t.children {
        TreeChildren::Explicit(cs) => {
            let mut any = false;
            for c in cs {
                any |= has_family(c)?;
            }
            Ok(any)
        }
        TreeChildren::Family(_) => Ok(true),
        TreeChildren::InfiniteBranch => Err(DraughtsError::InvalidTree(
            "the tree has an infinite branch".into(),
        )),
    }
}

struct Builder {
    cutoff: u64,
    cells: BTreeSet<Cell>,
    edges: Vec<(Cell, Cell)>,
    pawns: Vec<DSquare>,
    nodes: Vec<TreeNodeSquares>,
    ladder: Option<Ladder>,
}

impl Builder {
    fn link(&mut self, a: Cell, b: Cell) {
        self.cells.insert(a);
        self.cells.insert(b);
        self.edges.push((a, b));
    }

    /// Places the subtree `t` with its entry (or root) cell at `at`; the
    /// caller has laid the corridor up to `at`. Returns the node index and
    /// the number of columns used.
    fn place(
        &mut self,
        t: &WfTree,
        path: Vec<usize>,
        at: Cell,
    ) -> Result<(usize, i64), DraughtsError> {
        let root = path.is_empty();
        let id = self.nodes.len();
        self.cells.insert(at);
        if t.is_leaf() {
            self.nodes.push(TreeNodeSquares {
                path,
                square: fine(at),
                entry: None,
                leaf: true,
                children: vec![],
                ladder: false,
            });
            return Ok((id, 1));
        }
        let square = if root {
            fine(at)
        } else {
            let r = (at.0, at.1 + 1);
            self.link(at, r);
            let p = fine(at);
            self.pawns
                .extend([p.step((0, 1), 3), p.step((0, 1), 4), sq(p.u - 1, p.v + 1)]);
            fine(r)
        };
        self.nodes.push(TreeNodeSquares {
            path: path.clone(),
            square,
            entry: (!root).then(|| fine(at)),
            leaf: false,
            children: vec![],
            ladder: false,
        });
        let (kids, ladder): (Vec<(usize, WfTree)>, bool) = match &t.children {
            TreeChildren::Explicit(cs) => {
                let mut kids: Vec<(usize, WfTree)> = cs.iter().cloned().enumerate().collect();
                let mut infinite = Vec::new();
                for (i, c) in &kids {
                    if has_family(c)? {
                        infinite.push(*i);
                    }
                }
                if infinite.len() > 1 {
                    return Err(DraughtsError::InvalidTree(
                        "omega-nodes in two different branches".into(),
                    ));
                }
                kids.sort_by_key(|(i, _)| infinite.contains(i));
                (kids, false)
            }
            TreeChildren::Family(f) => {
                let mut kids = Vec::new();
                for n in 0..=self.cutoff {
                    let c = f.sample(n);
                    if !c.is_finite() {
                        return Err(DraughtsError::InvalidTree(format!(
                            "sample {n} of an omega-node is not finite"
                        )));
                    }
                    kids.push((n as usize, c));
                }
                (kids, true)
            }
            TreeChildren::InfiniteBranch => unreachable!("rejected by has_family"),
        };
        let mut prev = at;
        let mut x = at.0 + 2;
        let mut width = 1;
        for (i, child) in &kids {
            for cx in prev.0 + 1..=x {
                self.link((cx - 1, at.1), (cx, at.1));
            }
            prev = (x, at.1);
            let up = (x, at.1 + 1);
            self.link(prev, up);
            let mut child_path = path.clone();
            child_path.push(*i);
            let (cid, w) = if child.is_leaf() {
                self.place(child, child_path, up)?
            } else {
                let entry = (x, at.1 + 2);
                self.link(up, entry);
                self.place(child, child_path, entry)?
            };
            self.nodes[id].children.push(cid);
            width = x + w - at.0;
            x += w + 1;
        }
        if ladder {
            if self.ladder.is_some() {
                return Err(DraughtsError::InvalidTree(
                    "at most one omega-node is supported".into(),
                ));
            }
            let s = fine(prev);
            self.ladder = Some(Ladder {
                start: sq(s.u + 1, s.v),
                dir: (1, 0),
                color: Color::White,
            });
            self.nodes[id].ladder = true;
        }
        Ok((id, width))
    }
}

/// Compiles `t` into a king-tree position: Black king on the root, Black to
/// move, value for White equal to the rank of `t`. A leaf compiles to the
/// empty board (Black cannot move, value 0). One omega-node is allowed; it
/// becomes its sampled children `0..=omega_cutoff` followed by a White
/// ladder, which no RS-A jump can use.
pub fn build_king_tree(
    t: &WfTree,
    rs: RuleSet,
    opts: KingTreeOptions,
) -> Result<KingTree, DraughtsError> {
    if rs != RuleSet::A {
        return Err(DraughtsError::UnsupportedRuleSet(rs.name()));
    }
    has_family(t)?;
    let mut b = Builder {
        cutoff: opts.omega_cutoff,
        cells: BTreeSet::new(),
        edges: vec![],
        pawns: vec![],
        nodes: vec![],
        ladder: None,
    };
    let root = (0, 0);
    if t.is_leaf() {
        b.nodes.push(TreeNodeSquares {
            path: vec![],
            square: fine(root),
            entry: None,
            leaf: true,
            children: vec![],
            ladder: false,
        });
        return Ok(KingTree {
            rules: rs,
            position: DraughtsPosition::new(Color::Black),
            nodes: b.nodes,
            tree_kings: vec![],
            pawns: vec![],
            guardians: vec![],
            stretch: 2,
            offset: fine(root),
        });
    }
    b.place(t, vec![], root)?;
    check_layout(&b)?;

    let tree_kings: Vec<DSquare> = b.edges.iter().map(|&(a, c)| between(a, c)).collect();
    let empty: BTreeSet<DSquare> = b.cells.iter().map(|&c| fine(c)).collect();
    let marked = empty.iter().chain(&tree_kings).chain(&b.pawns);
    let (u0, u1, v0, v1) = marked.fold(
        (i64::MAX, i64::MIN, i64::MAX, i64::MIN),
        |(a, bb, c, d), s| (a.min(s.u), bb.max(s.u), c.min(s.v), d.max(s.v)),
    );
    let (u0, u1, v0, v1) = (u0 - 2, u1 + 2, v0 - 2, v1 + 2);
    let needed = (u1 - u0 + 1).max(v1 - v0 + 1);
    if needed > opts.max_extent {
        return Err(DraughtsError::EmbeddingOverflow {
            needed,
            limit: opts.max_extent,
        });
    }
    let k = fine(root);
    let first = k.step((1, 0), 1);
    let pawns: BTreeSet<DSquare> = b.pawns.iter().copied().collect();
    let on_ladder_line = |s: DSquare| {
        b.ladder
            .is_some_and(|l| s.v == l.start.v && s.u >= l.start.u)
    };
    let mut pos = DraughtsPosition::new(Color::Black);
    for u in u0..=u1 {
        for v in v0..=v1 {
            let s = sq(u, v);
            // Nothing south of the root except its first capture.
            if (s.level() < k.level() + 2 && s != first) || empty.contains(&s) || on_ladder_line(s)
            {
                continue;
            }
            let piece = if pawns.contains(&s) {
                Piece::pawn(Color::Black)
            } else {
                Piece::king(Color::White)
            };
            pos.pieces.insert(s, piece);
        }
    }
    pos.pieces.insert(k, Piece::king(Color::Black));
    pos.ladders.extend(b.ladder);
    pos.validate()?;
    Ok(KingTree {
        rules: rs,
        position: pos,
        nodes: b.nodes,
        tree_kings,
        pawns: b.pawns,
        guardians: vec![],
        stretch: 2,
        offset: k,
    })
}

/// Coarse-adjacent corridor cells must be joined by a corridor edge, and
/// the squares around each inner node must be clear of corridors.
fn check_layout(b: &Builder) -> Result<(), DraughtsError> {
    let linked: BTreeSet<(Cell, Cell)> = b
        .edges
        .iter()
        .flat_map(|&(a, c)| [(a, c), (c, a)])
        .collect();
    for &a in &b.cells {
        for d in [(1, 0), (0, 1)] {
            let c = (a.0 + d.0, a.1 + d.1);
            if b.cells.contains(&c) && !linked.contains(&(a, c)) {
                return Err(DraughtsError::InvalidTree(format!(
                    "layout conflict between cells {a:?} and {c:?}"
                )));
            }
        }
    }
    let squares: BTreeSet<DSquare> = b
        .cells
        .iter()
        .map(|&c| fine(c))
        .chain(b.pawns.iter().copied())
        .collect();
    if squares.len() != b.cells.len() + b.pawns.len() {
        return Err(DraughtsError::InvalidTree(
            "a pawn sits on a corridor cell".into(),
        ));
    }
    Ok(())
}

impl KingTree {
    pub fn root(&self) -> DSquare {
        self.nodes[0].square
    }

    /// Squares of inner nodes, root included.
    pub fn resting_squares(&self) -> Vec<DSquare> {
        self.nodes
            .iter()
            .filter(|n| !n.leaf)
            .map(|n| n.square)
            .collect()
    }

    pub fn leaf_squares(&self) -> Vec<DSquare> {
        self.nodes
            .iter()
            .filter(|n| n.leaf)
            .map(|n| n.square)
            .collect()
    }

    pub fn node_at(&self, s: DSquare) -> Option<usize> {
        self.nodes.iter().position(|n| n.square == s)
    }

    fn is_descendant(&self, node: usize, of: usize) -> bool {
        let n = &self.nodes[node].path;
        let a = &self.nodes[of].path;
        n.len() > a.len() && n.starts_with(a)
    }

    pub fn validate(&self) -> KingTreeReport {
        validate_king_tree_with(&self.position, Some(&self.tree_kings))
    }

    /// Positions with Black to move and the king on each inner node's
    /// square, reached by the main line; also checks along the way that
    /// Black's moves from there end on the children's squares (one move
    /// each) or deeper, that White's only answer to a resting king is the
    /// planned capture and that a king on a leaf is captured for good.
    pub fn check_structure(&self, budget: usize) -> Result<StructureReport, DraughtsError> {
        let mut report = StructureReport {
            states: BTreeMap::new(),
            skip_moves: 0,
            leaf_traps: 0,
        };
        if self.nodes[0].leaf {
            return Ok(report);
        }
        let mut queue = VecDeque::from([(0usize, self.position.clone())]);
        let mut seen = 0;
        while let Some((id, pos)) = queue.pop_front() {
            seen += 1;
            if seen > budget {
                return Err(DraughtsError::BudgetExceeded {
                    states: seen,
                    budget,
                });
            }
            let node = &self.nodes[id];
            let moves = legal_moves(&pos, self.rules)?;
            let mut hits: BTreeMap<usize, Vec<&Move>> = BTreeMap::new();
            for m in &moves {
                let end = m.to().and_then(|s| self.node_at(s));
                match end {
                    Some(e) if node.children.contains(&e) => hits.entry(e).or_default().push(m),
                    Some(e) if self.is_descendant(e, id) => report.skip_moves += 1,
                    _ => {
                        return Err(DraughtsError::InvalidTree(format!(
                            "from {} Black can end a move off the tree: {:?}",
                            node.square, m.path
                        )))
                    }
                }
            }
            for &c in &node.children {
                let ms = hits.get(&c).map(Vec::as_slice).unwrap_or(&[]);
                if ms.len() != 1 {
                    return Err(DraughtsError::InvalidTree(format!(
                        "{} moves from {} reach child square {}",
                        ms.len(),
                        node.square,
                        self.nodes[c].square
                    )));
                }
                let after = apply_move(&pos, ms[0])?;
                let replies = legal_moves(&after, self.rules)?;
                if replies.len() != 1 {
                    return Err(DraughtsError::InvalidTree(format!(
                        "White has {} answers to the king on {}",
                        replies.len(),
                        self.nodes[c].square
                    )));
                }
                let next = apply_move(&after, &replies[0])?;
                if self.nodes[c].leaf {
                    if next
                        .pieces
                        .values()
                        .any(|p| *p == Piece::king(Color::Black))
                        || !legal_moves(&next, self.rules)?.is_empty()
                    {
                        return Err(DraughtsError::InvalidTree(format!(
                            "leaf trap at {} does not end the game",
                            self.nodes[c].square
                        )));
                    }
                    report.leaf_traps += 1;
                } else {
                    queue.push_back((c, next));
                }
            }
            report.states.insert(id, pos);
        }
        Ok(report)
    }
}

#[derive(Clone, Debug)]
pub struct StructureReport {
    /// Inner node index to the position with Black to move from its square.
    pub states: BTreeMap<usize, DraughtsPosition>,
    /// Moves that pass a child's resting square and stop further up.
    pub skip_moves: usize,
    pub leaf_traps: usize,
}

/// Outcome of the king-tree checks; each list names the offending squares.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct KingTreeReport {
    pub root: Option<DSquare>,
    /// Empty squares the Black king reaches by jumping from the root.
    pub nodes: usize,
    pub tree_kings: usize,
    /// The root touches this many capturable kings (should be one).
    pub root_degree: usize,
    /// Declared kings no jump from the root captures.
    pub uncapturable: Vec<DSquare>,
    /// Squares reached by two different jumps.
    pub ambiguous: Vec<DSquare>,
    /// Empty squares next to four tree kings.
    pub crowded: Vec<DSquare>,
    /// The search stopped at the edge of the explicit pieces (ladders).
    pub truncated: bool,
    /// The board is empty: the compiled form of a single-node tree.
    pub empty: bool,
    pub problems: Vec<String>,
}

impl KingTreeReport {
    pub fn capturable(&self) -> bool {
        self.root.is_some() && self.root_degree == 1 && self.uncapturable.is_empty()
    }

    pub fn unique_paths(&self) -> bool {
        self.ambiguous.is_empty()
    }

    pub fn degree_bounded(&self) -> bool {
        self.crowded.is_empty()
    }

    pub fn ok(&self) -> bool {
        if self.empty {
            return self.problems.is_empty();
        }
        self.capturable()
            && self.unique_paths()
            && self.degree_bounded()
            && self.problems.is_empty()
    }
}

pub fn validate_king_tree(p: &DraughtsPosition) -> KingTreeReport {
    validate_king_tree_with(p, None)
}

/// Searches the jumps of a lone Black king from its square over White
/// pieces (the board otherwise unchanged) and checks that each reachable
/// square is reached by one jump only, that the root touches a single
/// capturable king, that every `declared` king gets captured and that no
/// empty square touches four captured kings.
pub fn validate_king_tree_with(
    p: &DraughtsPosition,
    declared: Option<&[DSquare]>,
) -> KingTreeReport {
    let mut r = KingTreeReport::default();
    if p.pieces.is_empty() && p.ladders.is_empty() {
        r.empty = true;
        return r;
    }
    let kings: Vec<DSquare> = p
        .pieces
        .iter()
        .filter(|(_, q)| **q == Piece::king(Color::Black))
        .map(|(&s, _)| s)
        .collect();
    let [root] = kings.as_slice() else {
        r.problems
            .push(format!("expected one Black king, found {}", kings.len()));
        return r;
    };
    let root = *root;
    r.root = Some(root);
    let window = Window::around(p, 2);
    let white = |s: DSquare| p.at(s).is_some_and(|q| q.color == Color::White);
    let free = |s: DSquare| s == root || p.at(s).is_none();
    // Node -> the king jumped to reach it.
    let mut via: HashMap<DSquare, DSquare> = HashMap::from([(root, root)]);
    let mut kings_seen = BTreeSet::new();
    let mut queue = VecDeque::from([root]);
    while let Some(s) = queue.pop_front() {
        for d in super::DIRECTIONS {
            let (w, t) = (s.step(d, 1), s.step(d, 2));
            if !white(w) || !free(t) || via[&s] == w {
                continue;
            }
            if s == root {
                r.root_degree += 1;
            }
            kings_seen.insert(w);
            if !window.contains(t) {
                r.truncated = true;
                continue;
            }
            match via.get(&t) {
                Some(&k) if k != w => {
                    if !r.ambiguous.contains(&t) {
                        r.ambiguous.push(t);
                    }
                }
                Some(_) => {}
                None => {
                    via.insert(t, w);
                    queue.push_back(t);
                }
            }
        }
    }
    r.nodes = via.len();
    r.tree_kings = kings_seen.len();
    if let Some(ds) = declared {
        r.uncapturable = ds
            .iter()
            .copied()
            .filter(|s| !kings_seen.contains(s))
            .collect();
    }
    for u in window.u_min..=window.u_max {
        for v in window.v_min..=window.v_max {
            let s = sq(u, v);
            if free(s)
                && super::DIRECTIONS
                    .iter()
                    .all(|&d| kings_seen.contains(&s.step(d, 1)))
            {
                r.crowded.push(s);
            }
        }
    }
    r
}

/// Black's strategy in a king-tree position: the move to play with the
/// king on each inner node's square.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BlackStrategy {
    pub moves: BTreeMap<DSquare, Move>,
}

impl Serialize for BlackStrategy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            at: DSquare,
            #[serde(rename = "move")]
            mv: &'a Move,
        }
        s.collect_seq(self.moves.iter().map(|(&at, mv)| Entry { at, mv }))
    }
}

/// Turns a Climber strategy (child index per tree path, root path `[]`)
/// into Black's jumps in the king-tree position. Nodes where the strategy has no answer are
/// left out.
pub fn strategy_transfer(
    kt: &KingTree,
    climber: &Strategy,
    budget: usize,
) -> Result<BlackStrategy, DraughtsError> {
    if kt.rules != RuleSet::A {
        return Err(DraughtsError::RuleSetMismatch {
            built: kt.rules.name(),
            asked: RuleSet::A.name(),
        });
    }
    let st = kt.check_structure(budget)?;
    let mut out = BlackStrategy::default();
    for (&id, pos) in &st.states {
        let node = &kt.nodes[id];
        let Some(choice) = climber.choose(&node.path) else {
            continue;
        };
        let Some(&child) = node
            .children
            .iter()
            .find(|&&c| kt.nodes[c].path.last() == Some(&choice))
        else {
            return Err(DraughtsError::IllegalMove(format!(
                "node {:?} has no child {choice}",
                node.path
            )));
        };
        let target = kt.nodes[child].square;
        let m = legal_moves(pos, kt.rules)?
            .into_iter()
            .find(|m| m.to() == Some(target))
            .ok_or_else(|| DraughtsError::IllegalMove(format!("no jump reaches {target}")))?;
        out.moves.insert(node.square, m);
    }
    Ok(out)
}

/// One complete game from a king-tree position.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Playout {
    /// Where each Black move ended.
    pub stops: Vec<DSquare>,
    pub white_moves: usize,
    pub black_lost: bool,
}

/// Plays Black's strategy against every White reply, up to `max_plies`
/// plies per game.
pub fn play_strategy(
    kt: &KingTree,
    black: &BlackStrategy,
    max_plies: usize,
) -> Result<Vec<Playout>, DraughtsError> {
    let mut out = Vec::new();
    let start = Playout {
        stops: vec![],
        white_moves: 0,
        black_lost: false,
    };
    let mut stack = vec![(kt.position.clone(), start)];
    while let Some((pos, mut line)) = stack.pop() {
        if line.stops.len() + line.white_moves > max_plies {
            return Err(DraughtsError::BudgetExceeded {
                states: max_plies + 1,
                budget: max_plies,
            });
        }
        let moves = legal_moves(&pos, kt.rules)?;
        if pos.turn == Color::White {
            if moves.is_empty() {
                out.push(line);
                continue;
            }
            line.white_moves += 1;
            for m in &moves {
                stack.push((apply_move(&pos, m)?, line.clone()));
            }
            continue;
        }
        if moves.is_empty() {
            line.black_lost = true;
            out.push(line);
            continue;
        }
        let king = pos
            .pieces
            .iter()
            .find(|(_, q)| **q == Piece::king(Color::Black))
            .map(|(&s, _)| s);
        let m = king.and_then(|k| black.moves.get(&k)).ok_or_else(|| {
            DraughtsError::IllegalMove(format!("strategy has no move with the king on {king:?}"))
        })?;
        if !moves.contains(m) {
            return Err(DraughtsError::IllegalMove(format!(
                "strategy move {:?} is not legal",
                m.path
            )));
        }
        line.stops.push(m.to().expect("finite jump"));
        stack.push((apply_move(&pos, m)?, line));
    }
    Ok(out)
}

/// Reads a sequence of Black stops back as a Climber path of child
/// indices. Fails if a stop is not a node square below the previous one.
pub fn trace_playout(kt: &KingTree, stops: &[DSquare]) -> Result<Vec<usize>, DraughtsError> {
    let mut cur = 0;
    for &s in stops {
        let n = kt
            .node_at(s)
            .ok_or_else(|| DraughtsError::IllegalMove(format!("{s} is not a node square")))?;
        if !kt.is_descendant(n, cur) {
            return Err(DraughtsError::IllegalMove(format!(
                "{s} is not above {}",
                kt.nodes[cur].square
            )));
        }
        cur = n;
    }
    Ok(kt.nodes[cur].path.clone())
}

/// Minimax value of the king-tree position for White; the window is the layout with a margin.
pub fn king_tree_value(kt: &KingTree, budget: usize) -> Result<GameValue, DraughtsError> {
    minimax_value(
        &kt.position,
        kt.rules,
        Window::around(&kt.position, 2),
        budget,
    )
}

/// For a tree with an omega-node, rebuilds it with that node cut down to
/// each sampled child `n <= cutoff` in turn and returns `(n, rank of the
/// cut tree, minimax value of its king-tree position)`.
pub fn check_omega_branches(
    t: &WfTree,
    cutoff: u64,
    budget: usize,
) -> Result<Vec<(u64, GameValue, GameValue)>, DraughtsError> {
    fn cut(t: &WfTree, n: u64) -> WfTree {
        match &t.children {
            TreeChildren::Family(f) => WfTree::node(vec![f.sample(n)]),
            TreeChildren::Explicit(cs) => WfTree::node(cs.iter().map(|c| cut(c, n)).collect()),
            TreeChildren::InfiniteBranch => t.clone(),
        }
    }
    if !has_family(t)? {
        return Err(DraughtsError::InvalidTree(
            "the tree has no omega-node".into(),
        ));
    }
    let mut out = Vec::new();
    for n in 0..=cutoff {
        let c = cut(t, n);
        let r = rank(&c).map_err(|e| DraughtsError::InvalidTree(e.to_string()))?;
        let kt = build_king_tree(
            &c,
            RuleSet::A,
            KingTreeOptions {
                omega_cutoff: cutoff,
                ..Default::default()
            },
        )?;
        out.push((n, r, king_tree_value(&kt, budget)?));
    }
    Ok(out)
}

/// A binary tree laid out in the positive quadrant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Embedding {
    /// Tree path and square of each node, preorder.
    pub nodes: Vec<(Vec<usize>, DSquare)>,
    /// Squares from a parent to a child, both ends included, in the order
    /// of `nodes` (the root has none).
    pub corridors: Vec<Vec<DSquare>>,
    pub node_width: i64,
    pub stretch: i64,
}

impl Embedding {
    /// Largest `|u - v| / (u + v)` over non-root nodes: the whole tree
    /// lies in the cone of that slope around the North axis.
    pub fn cone_slope(&self) -> f64 {
        self.nodes
            .iter()
            .map(|(_, s)| s)
            .filter(|s| s.u + s.v > 0)
            .map(|s| (s.u - s.v).abs() as f64 / (s.u + s.v) as f64)
            .fold(0.0, f64::max)
    }
}

/// Stacks the two child subtrees side by side: the first child's corridor
/// runs North-East then North-West, the second's North-West then
/// North-East, each finishing with a northward staircase whose length is
/// `stretch` times the first leg. Larger `stretch` squeezes the tree into
/// a narrower cone.
pub fn embed_binary_tree(
    t: &WfTree,
    node_width: i64,
    stretch: i64,
) -> Result<Embedding, DraughtsError> {
    fn height(t: &WfTree) -> Result<u32, DraughtsError> {
        let cs = t
            .explicit_children()
            .ok_or_else(|| DraughtsError::InvalidTree("only finite trees embed".into()))?;
        if cs.len() > 2 {
            return Err(DraughtsError::InvalidTree("only binary trees embed".into()));
        }
        let mut h = 0;
        for c in cs {
            h = h.max(1 + height(c)?);
        }
        Ok(h)
    }
    fn span(h: u32, w: i64, stretch: i64) -> i64 {
        if h == 0 {
            return 0;
        }
        let s = span(h - 1, w, stretch);
        let d = s + 2 * w;
        d + stretch * d + s
    }
    fn go(t: &WfTree, path: Vec<usize>, at: DSquare, w: i64, stretch: i64, e: &mut Embedding) {
        e.nodes.push((path.clone(), at));
        let cs = t.explicit_children().unwrap_or(&[]);
        let h = cs.iter().map(|c| height(c).unwrap_or(0)).max().unwrap_or(0);
        let d = span(h, w, stretch) + 2 * w;
        let lead = stretch * d;
        for (i, c) in cs.iter().enumerate() {
            let (first, second) = if i == 0 {
                ((1, 0), (0, 1))
            } else {
                ((0, 1), (1, 0))
            };
            let mut cur = at;
            let mut cor = vec![cur];
            for _ in 0..d {
                cur = cur.step(first, 1);
                cor.push(cur);
            }
            for _ in 0..w {
                cur = cur.step(second, 1);
                cor.push(cur);
            }
            for k in 0..2 * lead {
                cur = cur.step(if k % 2 == 0 { (1, 0) } else { (0, 1) }, 1);
                cor.push(cur);
            }
            e.corridors.push(cor);
            let mut p = path.clone();
            p.push(i);
            go(c, p, cur, w, stretch, e);
        }
    }
    height(t)?;
    if node_width < 1 || stretch < 0 {
        return Err(DraughtsError::InvalidTree(
            "node width must be positive and stretch non-negative".into(),
        ));
    }
    let mut e = Embedding {
        nodes: vec![],
        corridors: vec![],
        node_width,
        stretch,
    };
    go(t, vec![], sq(0, 0), node_width, stretch, &mut e);
    Ok(e)
}
