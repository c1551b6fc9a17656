use serde::Serialize;

use super::{
    Color, DSquare, DraughtsError, DraughtsPosition, Iteration, Kind, Ladder, Piece, RuleSet,
};

/// A simple move has one landing square and no captures. A jump lists every
/// landing square in order. An infinite jump climbs a ladder forever: the
/// piece leaves the board together with everything it jumped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Move {
    pub from: DSquare,
    pub path: Vec<DSquare>,
    pub captured: Vec<DSquare>,
    pub infinite: bool,
}

impl Move {
    pub fn is_jump(&self) -> bool {
        !self.captured.is_empty() || self.infinite
    }

    /// Where the piece ends up; `None` after an infinite jump.
    pub fn to(&self) -> Option<DSquare> {
        if self.infinite {
            None
        } else {
            self.path.last().copied()
        }
    }
}

/// Beyond this distance from the origin only ladders remain.
fn reach(p: &DraughtsPosition) -> i64 {
    p.pieces
        .keys()
        .copied()
        .chain(p.ladders.iter().map(|l| l.start))
        .map(|s| s.u.abs().max(s.v.abs()))
        .max()
        .unwrap_or(0)
        + 3
}

fn far(s: DSquare, r: i64) -> bool {
    s.u.abs().max(s.v.abs()) > r
}

struct JumpSearch<'a> {
    p: &'a DraughtsPosition,
    from: DSquare,
    piece: Piece,
    reach: i64,
    /// (path, captures, has a continuation)
    finite: Vec<(Vec<DSquare>, Vec<DSquare>, bool)>,
    infinite: Vec<(Vec<DSquare>, Vec<DSquare>)>,
}

impl JumpSearch<'_> {
    fn occupied(&self, s: DSquare) -> bool {
        s != self.from && self.p.at(s).is_some()
    }

    fn promotes(&self, s: DSquare) -> bool {
        self.piece.kind == Kind::Pawn
            && match (self.p.promotion, self.piece.color) {
                (Some(pr), Color::Black) => s.level() >= pr.black_at,
                (Some(pr), Color::White) => s.level() <= pr.white_at,
                (None, _) => false,
            }
    }

    /// Climbing a ladder past every other piece, which never stops.
    fn on_endless_ladder(&self, at: DSquare, d: (i64, i64)) -> bool {
        far(at, self.reach)
            && self.p.ladders.iter().any(|l| {
                l.dir == d && l.color != self.piece.color && l.index_of(at.step(d, 1)).is_some()
            })
    }

    fn go(&mut self, at: DSquare, path: &mut Vec<DSquare>, caps: &mut Vec<DSquare>) {
        let mut extends = false;
        if !path.is_empty() && self.promotes(at) {
            self.finite.push((path.clone(), caps.clone(), false));
            return;
        }
        for d in self.piece.directions() {
            let over = at.step(d, 1);
            let land = at.step(d, 2);
            let foe =
                self.p.at(over).is_some_and(|q| q.color != self.piece.color) && over != self.from;
            if !foe || caps.contains(&over) || self.occupied(land) {
                continue;
            }
            extends = true;
            path.push(land);
            caps.push(over);
            if self.on_endless_ladder(land, d) {
                self.infinite.push((path.clone(), caps.clone()));
            } else {
                self.go(land, path, caps);
            }
            path.pop();
            caps.pop();
        }
        if !path.is_empty() {
            self.finite.push((path.clone(), caps.clone(), extends));
        }
    }
}

fn pieces_to_move(p: &DraughtsPosition) -> Vec<(DSquare, Piece)> {
    let r = reach(p);
    let mut out: Vec<(DSquare, Piece)> = p
        .pieces
        .iter()
        .filter(|(_, q)| q.color == p.turn)
        .map(|(&s, &q)| (s, q))
        .collect();
    // Only the stretch of a ladder within reach of the other pieces.
    for l in p.ladders.iter().filter(|l| l.color == p.turn) {
        let mut k = 0;
        while !far(l.square(k), r) {
            out.push((l.square(k), Piece::king(l.color)));
            k += 1;
        }
    }
    out
}

/// Every legal move for the player to move. Ladder kings are only moved
/// within reach of the explicit pieces.
pub fn legal_moves(p: &DraughtsPosition, rs: RuleSet) -> Result<Vec<Move>, DraughtsError> {
    p.validate()?;
    let r = reach(p);
    let mut jumps = Vec::new();
    let mut simple = Vec::new();
    for (s, piece) in pieces_to_move(p) {
        let mut js = JumpSearch {
            p,
            from: s,
            piece,
            reach: r,
            finite: Vec::new(),
            infinite: Vec::new(),
        };
        js.go(s, &mut Vec::new(), &mut Vec::new());
        for (path, captured, extends) in js.finite {
            let keep = match rs.iteration {
                Iteration::FiniteOptional => true,
                Iteration::ForcedMaximalFinite | Iteration::ForcedMaximalIncludingInfinite => {
                    !extends
                }
            };
            if keep {
                jumps.push(Move {
                    from: s,
                    path,
                    captured,
                    infinite: false,
                });
            }
        }
        if rs.iteration == Iteration::ForcedMaximalIncludingInfinite {
            for (path, captured) in js.infinite {
                jumps.push(Move {
                    from: s,
                    path,
                    captured,
                    infinite: true,
                });
            }
        }
        for d in piece.directions() {
            let t = s.step(d, 1);
            if p.at(t).is_none() {
                simple.push(Move {
                    from: s,
                    path: vec![t],
                    captured: Vec::new(),
                    infinite: false,
                });
            }
        }
    }
    if rs.forced_jump && !jumps.is_empty() {
        return Ok(jumps);
    }
    jumps.extend(simple);
    Ok(jumps)
}

/// Turns ladder pieces `0..=k` into explicit kings and restarts the ladder
/// after them.
fn materialise(p: &mut DraughtsPosition, li: usize, k: i64) {
    let l = p.ladders[li];
    for i in 0..=k {
        p.pieces.insert(l.square(i), Piece::king(l.color));
    }
    p.ladders[li] = Ladder {
        start: l.square(k + 1),
        ..l
    };
}

fn ladder_at(p: &DraughtsPosition, s: DSquare) -> Option<(usize, i64)> {
    p.ladders
        .iter()
        .enumerate()
        .find_map(|(i, l)| l.index_of(s).map(|k| (i, k)))
}

/// The position after `m`; `m` is assumed legal.
pub fn apply_move(p: &DraughtsPosition, m: &Move) -> Result<DraughtsPosition, DraughtsError> {
    let mut q = p.clone();
    if let Some((li, k)) = ladder_at(&q, m.from) {
        materialise(&mut q, li, k);
    }
    let piece = q
        .pieces
        .remove(&m.from)
        .ok_or_else(|| DraughtsError::IllegalMove(format!("no piece on {}", m.from)))?;
    if m.infinite {
        // The climbed ladder is consumed from the first captured rung on.
        let last = *m
            .captured
            .last()
            .ok_or_else(|| DraughtsError::IllegalMove("empty infinite jump".into()))?;
        let (li, _) = ladder_at(&q, last)
            .ok_or_else(|| DraughtsError::IllegalMove("infinite jump off a ladder".into()))?;
        let first_rung = m
            .captured
            .iter()
            .filter_map(|&c| q.ladders[li].index_of(c))
            .min()
            .unwrap_or(0);
        if first_rung > 0 {
            materialise(&mut q, li, first_rung - 1);
        }
        q.ladders.remove(li);
        for c in &m.captured {
            q.pieces.remove(c);
        }
    } else {
        for &c in &m.captured {
            if let Some((li, k)) = ladder_at(&q, c) {
                materialise(&mut q, li, k);
            }
            if q.pieces.remove(&c).is_none() {
                return Err(DraughtsError::IllegalMove(format!(
                    "nothing to capture on {c}"
                )));
            }
        }
        let to = m.to().unwrap();
        let promoted = piece.kind == Kind::Pawn
            && match (q.promotion, piece.color) {
                (Some(pr), Color::Black) => to.level() >= pr.black_at,
                (Some(pr), Color::White) => to.level() <= pr.white_at,
                (None, _) => false,
            };
        let piece = if promoted {
            Piece::king(piece.color)
        } else {
            piece
        };
        if q.pieces.insert(to, piece).is_some() {
            return Err(DraughtsError::IllegalMove(format!("{to} is occupied")));
        }
    }
    q.turn = q.turn.other();
    Ok(q)
}
