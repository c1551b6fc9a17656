//! Small hand-built positions: the basic jump figures and the node pieces
//! used when jumps are optional.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{
    apply_move, legal_moves, sq, validate_king_tree_with, Color, DSquare, DraughtsError,
    DraughtsPosition, Iteration, Ladder, Move, Piece, RuleSet, Window,
};

fn white_king() -> Piece {
    Piece::king(Color::White)
}

fn black_king() -> Piece {
    Piece::king(Color::Black)
}

fn board(black: DSquare, whites: &[DSquare]) -> DraughtsPosition {
    let mut p = DraughtsPosition::new(Color::Black).with(black, black_king());
    for &w in whites {
        p.pieces.insert(w, white_king());
    }
    p
}

/// One Black king, one White king to jump; the single legal RS-A move.
pub fn simple_jump_figure() -> (DraughtsPosition, Move) {
    let p = board(sq(0, 0), &[sq(1, 0)]);
    let m = Move {
        from: sq(0, 0),
        path: vec![sq(2, 0)],
        captured: vec![sq(1, 0)],
        infinite: false,
    };
    (p, m)
}

/// Black must jump to `(2, 0)` and is then captured: value 1 for White.
pub fn value_one_figure() -> DraughtsPosition {
    board(sq(0, 0), &[sq(1, 0), sq(3, 0), sq(4, 0)])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiJumpFigure {
    pub position: DraughtsPosition,
    /// End of the single maximal jump.
    pub dagger: DSquare,
    /// Ends of the two double jumps.
    pub stars: [DSquare; 2],
    /// Where a single jump could stop before a continuation.
    pub circled: DSquare,
}

/// Black has three maximal jumps: one single jump and two double jumps
/// through a shared first landing square.
pub fn multi_jump_figure() -> MultiJumpFigure {
    MultiJumpFigure {
        position: board(sq(0, 0), &[sq(1, 0), sq(0, 1), sq(1, 2), sq(0, 3)]),
        dagger: sq(2, 0),
        stars: [sq(2, 2), sq(0, 4)],
        circled: sq(0, 2),
    }
}

/// A Black king under an endless White ladder running North-East, and a
/// lone White king further South.
pub fn ladder_figure() -> DraughtsPosition {
    let mut p = board(sq(0, 0), &[sq(0, -3)]);
    p.ladders.push(Ladder {
        start: sq(1, 0),
        dir: (1, 0),
        color: Color::White,
    });
    p
}

/// A piece of an extended king tree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Template {
    pub name: &'static str,
    pub rules: RuleSet,
    /// Black to move with the king on the node.
    pub position: DraughtsPosition,
    /// The same piece with the king one jump earlier, for the king-tree checks.
    pub layout: DraughtsPosition,
    pub tree_kings: Vec<DSquare>,
    pub guardians: Vec<DSquare>,
    /// Where the Black king's jumps from the node end; for the unguarded
    /// node also after one non-jump move.
    pub exits: Vec<DSquare>,
}

/// Root of a tree where jumps are optional: the guardians capture the king
/// after any non-jump opening.
fn guarded_root(rules: RuleSet) -> Template {
    let guardians = vec![sq(-1, 1), sq(1, -1)];
    let mut p = board(sq(0, 0), &[sq(1, 0), sq(3, 0)]);
    for &g in &guardians {
        p.pieces.insert(g, white_king());
    }
    Template {
        name: "guarded-root",
        rules,
        layout: p.clone(),
        position: p,
        tree_kings: vec![sq(1, 0), sq(3, 0)],
        guardians,
        exits: if rules.iteration == Iteration::FiniteOptional {
            vec![sq(2, 0), sq(4, 0)]
        } else {
            vec![sq(4, 0)]
        },
    }
}

/// Branching node reached from `(-2, 0)`; the guardians capture the king
/// if it leaves the node without jumping.
fn guarded_branch(rules: RuleSet) -> Template {
    let guardians = vec![sq(-1, 1), sq(1, -1)];
    let tree = [sq(1, 0), sq(0, 1)];
    let mut layout = board(sq(-2, 0), &[sq(-1, 0), tree[0], tree[1]]);
    for &g in &guardians {
        layout.pieces.insert(g, white_king());
    }
    let mut position = layout.clone();
    position.pieces.remove(&sq(-2, 0));
    position.pieces.remove(&sq(-1, 0));
    position.pieces.insert(sq(0, 0), black_king());
    Template {
        name: "guarded-branch",
        rules,
        layout,
        position,
        tree_kings: vec![sq(-1, 0), tree[0], tree[1]],
        guardians,
        exits: vec![sq(2, 0), sq(0, 2)],
    }
}

/// Node reached from `(0, -2)` with seven exits: two jumps from the node
/// itself, three after a step South-West and two after a step South-East.
fn seven_branch(rules: RuleSet) -> Template {
    let whites = [
        sq(0, -1),
        sq(1, 0),
        sq(0, 1),
        sq(-2, 0),
        sq(-1, 1),
        sq(-1, -1),
        sq(1, -1),
        // Ends the jump from (0, -1) over (-1, -1) on (-2, -1).
        sq(-2, 1),
    ];
    let layout = board(sq(0, -2), &whites);
    let mut position = layout.clone();
    position.pieces.remove(&sq(0, -2));
    position.pieces.remove(&sq(0, -1));
    position.pieces.insert(sq(0, 0), black_king());
    Template {
        name: "seven-branch",
        rules,
        layout,
        position,
        tree_kings: vec![sq(0, -1), sq(1, 0), sq(0, 1)],
        guardians: vec![],
        exits: vec![
            sq(2, 0),
            sq(0, 2),
            sq(-3, 0),
            sq(-1, 2),
            sq(-1, -2),
            sq(2, -1),
            sq(-2, -1),
        ],
    }
}

/// Node pieces for the rule sets without forced jumps.
pub fn extended_node_templates(rs: RuleSet) -> Result<Vec<Template>, DraughtsError> {
    match rs {
        RuleSet::B => Ok(vec![guarded_root(rs), guarded_branch(rs)]),
        RuleSet::C => Ok(vec![guarded_root(rs), seven_branch(rs)]),
        _ => Err(DraughtsError::UnsupportedRuleSet(rs.name())),
    }
}

/// Whether White, to move in `p`, can leave Black without a move within
/// `k` of her own moves whatever Black does. Moves leaving `window` are not
/// considered, and a Black escape from it counts against White.
pub fn white_wins_within(
    p: &DraughtsPosition,
    rs: RuleSet,
    window: Window,
    k: usize,
) -> Result<bool, DraughtsError> {
    if k == 0 {
        return Ok(false);
    }
    for m in legal_moves(p, rs)? {
        if m.infinite || !m.path.iter().all(|&s| window.contains(s)) {
            continue;
        }
        let q = apply_move(p, &m)?;
        let replies = legal_moves(&q, rs)?;
        let mut all = true;
        for b in &replies {
            if b.infinite
                || !b.path.iter().all(|&s| window.contains(s))
                || !white_wins_within(&apply_move(&q, b)?, rs, window, k - 1)?
            {
                all = false;
                break;
            }
        }
        if all {
            return Ok(true);
        }
    }
    Ok(false)
}

/// End squares of the Black king's jumps from its square, and from each
/// square one non-jump move away, ignoring White's replies.
pub fn reachable_exits(
    p: &DraughtsPosition,
    rs: RuleSet,
) -> Result<BTreeSet<DSquare>, DraughtsError> {
    let mut out = BTreeSet::new();
    let is_king = |m: &Move, q: &DraughtsPosition| q.pieces.get(&m.from) == Some(&black_king());
    for m in legal_moves(p, rs)? {
        if !is_king(&m, p) {
            continue;
        }
        if m.is_jump() {
            out.extend(m.to());
            continue;
        }
        let mut q = apply_move(p, &m)?;
        q.turn = Color::Black;
        for j in legal_moves(&q, rs)? {
            if j.is_jump() && is_king(&j, &q) {
                out.extend(j.to());
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TemplateCheck {
    pub name: &'static str,
    pub king_tree_ok: bool,
    /// Non-jump moves of the Black king and whether each loses within two
    /// White moves.
    pub deviations: Vec<(DSquare, bool)>,
    /// Guardians without which some deviation stops losing.
    pub needed_guardians: Vec<DSquare>,
    pub exits: BTreeSet<DSquare>,
}

impl TemplateCheck {
    pub fn passed(&self, t: &Template) -> bool {
        self.king_tree_ok
            && self.deviations.iter().all(|d| d.1)
            && self.needed_guardians.len() == t.guardians.len()
            && self.exits == t.exits.iter().copied().collect()
    }
}

fn deviations(p: &DraughtsPosition, rs: RuleSet) -> Result<Vec<(DSquare, bool)>, DraughtsError> {
    let window = Window::around(p, 3);
    let mut out = Vec::new();
    for m in legal_moves(p, rs)? {
        if m.is_jump() || p.pieces.get(&m.from) != Some(&black_king()) {
            continue;
        }
        out.push((
            m.path[0],
            white_wins_within(&apply_move(p, &m)?, rs, window, 2)?,
        ));
    }
    Ok(out)
}

impl Template {
    /// King-tree clauses on the layout, the punishment of every non-jump
    /// king move (for templates with guardians), which guardians that
    /// relies on, and the exits reachable from the node.
    pub fn check(&self) -> Result<TemplateCheck, DraughtsError> {
        let report = validate_king_tree_with(&self.layout, Some(&self.tree_kings));
        let devs = if self.guardians.is_empty() {
            vec![]
        } else {
            deviations(&self.position, self.rules)?
        };
        let mut needed = Vec::new();
        for &g in &self.guardians {
            let mut q = self.position.clone();
            q.pieces.remove(&g);
            if deviations(&q, self.rules)?.iter().any(|d| !d.1) {
                needed.push(g);
            }
        }
        Ok(TemplateCheck {
            name: self.name,
            king_tree_ok: report.ok(),
            deviations: devs,
            needed_guardians: needed,
            exits: if self.guardians.is_empty() {
                reachable_exits(&self.position, self.rules)?
            } else {
                legal_moves(&self.position, self.rules)?
                    .iter()
                    .filter(|m| m.is_jump())
                    .filter_map(Move::to)
                    .collect()
            },
        })
    }
}
