use serde::{Deserialize, Serialize};

use super::{
    apply_move, legal_moves, Color, DSquare, DraughtsError, DraughtsPosition, Move, RuleSet,
};
use crate::gamecore::arena::{explore, Expansion};
use crate::gamecore::{GameError, GameValue, Player};

/// Inclusive box of diagonal coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub u_min: i64,
    pub u_max: i64,
    pub v_min: i64,
    pub v_max: i64,
}

impl Window {
    /// The bounding box of the explicit pieces grown by `margin`.
    pub fn around(p: &DraughtsPosition, margin: i64) -> Window {
        let (a, b, c, d) = p.bounds().unwrap_or((0, 0, 0, 0));
        Window {
            u_min: a - margin,
            u_max: b + margin,
            v_min: c - margin,
            v_max: d + margin,
        }
    }

    pub fn contains(&self, s: DSquare) -> bool {
        (self.u_min..=self.u_max).contains(&s.u) && (self.v_min..=self.v_max).contains(&s.v)
    }

    fn keeps(&self, m: &Move) -> bool {
        !m.infinite && m.path.iter().all(|&s| self.contains(s))
    }
}

/// Value for White (the open player: she wins once Black cannot move) by
/// backward induction over every position reachable inside `window`, at
/// most `budget` of them. Play that never ends leaves the value undefined.
pub fn minimax_value(
    p: &DraughtsPosition,
    rs: RuleSet,
    window: Window,
    budget: usize,
) -> Result<GameValue, DraughtsError> {
    if p.has_ladders() {
        return Err(DraughtsError::Malformed(
            "minimax needs a position without ladders".into(),
        ));
    }
    if let Some(s) = p.pieces.keys().find(|&&s| !window.contains(s)) {
        return Err(DraughtsError::Malformed(format!(
            "piece on {s} lies outside the window"
        )));
    }
    let mut failure = None;
    let explored = explore(p.clone(), budget, |q: &DraughtsPosition| {
        let moves = match legal_moves(q, rs) {
            Ok(ms) => ms,
            Err(e) => {
                failure = Some(e);
                return Err(GameError::Input("move generation failed".into()));
            }
        };
        let won = q.turn == Color::Black && moves.is_empty();
        let mut next = Vec::new();
        for m in moves.iter().filter(|m| window.keeps(m)) {
            match apply_move(q, m) {
                Ok(r) => next.push(r),
                Err(e) => {
                    failure = Some(e);
                    return Err(GameError::Input("move application failed".into()));
                }
            }
        }
        // Black with every move leaving the window counts as a dead end for White.
        let mover = if q.turn == Color::White || next.is_empty() {
            Player::Open
        } else {
            Player::Closed
        };
        Ok(Expansion { mover, won, next })
    });
    let (arena, _) = match explored {
        Ok(x) => x,
        Err(GameError::BudgetExceeded(b)) => {
            return Err(DraughtsError::BudgetExceeded {
                states: b + 1,
                budget: b,
            })
        }
        Err(e) => return Err(failure.unwrap_or_else(|| DraughtsError::Malformed(e.to_string()))),
    };
    let sol = arena
        .solve()
        .map_err(|e| DraughtsError::Malformed(e.to_string()))?;
    Ok(match sol.values[0] {
        Some(k) => GameValue::nat(k),
        None => GameValue::Undefined,
    })
}
