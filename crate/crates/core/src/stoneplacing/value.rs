use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use serde::Serialize;

use super::{Outcome, Side, StoneError, StonePlacingGame};
use crate::gamecore::arena::{explore, Expansion};
use crate::gamecore::{GameValue, Player};

/// First player's vertices, second player's vertices, player to move.
type State = (u64, u64, Side);

struct Table {
    n: usize,
    open: Side,
    open_sets: Vec<u64>,
    closed_sets: Vec<u64>,
    values: HashMap<State, Option<u64>>,
}

fn set_masks(sets: &[Vec<usize>]) -> Vec<u64> {
    sets.iter()
        .map(|s| s.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect()
}

impl Table {
    fn owned(&self, st: &State, side: Side) -> u64 {
        if side == Side::First {
            st.0
        } else {
            st.1
        }
    }

    fn done(&self, st: &State, side: Side) -> bool {
        let sets = if side == self.open {
            &self.open_sets
        } else {
            &self.closed_sets
        };
        let own = self.owned(st, side);
        sets.iter().any(|&m| m & own == m)
    }

    fn empties(&self, st: &State) -> Vec<usize> {
        (0..self.n)
            .filter(|&v| (st.0 | st.1) >> v & 1 == 0)
            .collect()
    }

    fn after(&self, st: &State, v: usize) -> State {
        match st.2 {
            Side::First => (st.0 | 1 << v, st.1, Side::Second),
            Side::Second => (st.0, st.1 | 1 << v, Side::First),
        }
    }

    fn value(&self, st: &State) -> Option<u64> {
        self.values.get(st).copied().flatten()
    }

    fn build(
        g: &StonePlacingGame,
        open: Side,
        budget: usize,
    ) -> Result<(Table, State), StoneError> {
        let n = g.len();
        if n > 64 {
            return Err(StoneError::BudgetExceeded {
                size: n,
                budget: 64,
            });
        }
        let (f, s) = g.masks();
        let root = (f, s, g.turn());
        let mut t = Table {
            n,
            open,
            open_sets: set_masks(g.wins(open)),
            closed_sets: set_masks(g.wins(open.other())),
            values: HashMap::new(),
        };
        match g.outcome() {
            Outcome::Ongoing => {}
            o => {
                let v = (o == Outcome::won_by(open)).then_some(0);
                t.values.insert(root, v);
                return Ok((t, root));
            }
        }
        let (arena, states) = explore(root, budget, |st: &State| {
            let won = t.done(st, open);
            let lost = t.done(st, open.other());
            let next: Vec<State> = if won || lost {
                Vec::new()
            } else {
                t.empties(st).iter().map(|&v| t.after(st, v)).collect()
            };
            // Dead ends (a closed win or a full board) belong to the open player.
            let mover = if st.2 == open || next.is_empty() {
                Player::Open
            } else {
                Player::Closed
            };
            Ok(Expansion { mover, won, next })
        })
        .map_err(|_| StoneError::BudgetExceeded { size: n, budget })?;
        let sol = arena
            .solve()
            .map_err(|e| StoneError::Input(e.to_string()))?;
        t.values = states.into_iter().zip(sol.values).collect();
        Ok((t, root))
    }
}

/// Exact value of the game for `open`, by backward induction over every
/// reachable position (at most `budget` of them). Values of stone-placing
/// games open for a player are finite or undefined, never infinite.
pub fn stone_value(
    g: &StonePlacingGame,
    open: Side,
    budget: usize,
) -> Result<GameValue, StoneError> {
    let (t, root) = Table::build(g, open, budget)?;
    Ok(match t.value(&root) {
        Some(k) => GameValue::nat(k),
        None => GameValue::Undefined,
    })
}

/// How the open player plays within a dead region.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Plan {
    Done,
    Play {
        vertex: usize,
        then: Box<Plan>,
    },
    /// The first branch doubles as the phantom: a closed move matching no
    /// branch is treated as if it were that branch's move.
    Answer {
        branches: Vec<Branch>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Branch {
    pub closed: usize,
    pub reply: usize,
    pub then: Plan,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeadRegion {
    pub value: u64,
    /// Vertices the open player needs; everything else is dead for the
    /// closed player.
    pub region: Vec<usize>,
    pub plan: Plan,
}

fn region_at(
    t: &Table,
    st: &State,
    memo: &mut HashMap<State, (BTreeSet<usize>, Plan)>,
) -> (BTreeSet<usize>, Plan) {
    if let Some(r) = memo.get(st) {
        return r.clone();
    }
    let n = t.value(st).expect("region of a valued position");
    let out = if n == 0 {
        (BTreeSet::new(), Plan::Done)
    } else if st.2 == t.open {
        let v = t
            .empties(st)
            .into_iter()
            .find(|&v| t.value(&t.after(st, v)) == Some(n - 1))
            .expect("a value-reducing move exists");
        let (mut d, plan) = region_at(t, &t.after(st, v), memo);
        d.insert(v);
        (
            d,
            Plan::Play {
                vertex: v,
                then: Box::new(plan),
            },
        )
    } else {
        let branch = |w: usize, memo: &mut HashMap<State, (BTreeSet<usize>, Plan)>| {
            let after_w = t.after(st, w);
            let m = t
                .value(&after_w)
                .expect("closed moves keep the value defined");
            let v = t
                .empties(&after_w)
                .into_iter()
                .find(|&v| t.value(&t.after(&after_w, v)) == Some(m - 1))
                .expect("a value-reducing reply exists");
            let (mut d, plan) = region_at(t, &t.after(&after_w, v), memo);
            d.insert(v);
            d.insert(w);
            (
                d,
                Branch {
                    closed: w,
                    reply: v,
                    then: plan,
                },
            )
        };
        let empties = t.empties(st);
        let w0 = empties[0];
        let (d0, b0) = branch(w0, memo);
        let mut region = d0.clone();
        let mut branches = vec![b0];
        for &w in d0.iter().filter(|&&w| w != w0 && empties.contains(&w)) {
            let (d, b) = branch(w, memo);
            region.extend(d);
            branches.push(b);
        }
        (region, Plan::Answer { branches })
    };
    memo.insert(*st, out.clone());
    out
}

/// A finite region in which the open player wins within the game value,
/// built by induction on the value, with the plan that does it.
pub fn dead_region(
    g: &StonePlacingGame,
    open: Side,
    budget: usize,
) -> Result<DeadRegion, StoneError> {
    let (t, root) = Table::build(g, open, budget)?;
    let value = t.value(&root).ok_or(StoneError::NoValue)?;
    let (d, plan) = region_at(&t, &root, &mut HashMap::new());
    Ok(DeadRegion {
        value,
        region: d.into_iter().collect(),
        plan,
    })
}

/// The game with every unmarked vertex of `region` handed to `to`. The
/// handed vertices block the other player but do not count towards any
/// winning set of `to`.
pub fn gift(
    g: &StonePlacingGame,
    region: &[usize],
    to: Side,
) -> Result<StonePlacingGame, StoneError> {
    let mut h = g.clone();
    let handed: BTreeSet<usize> = region
        .iter()
        .copied()
        .filter(|&v| g.mark(v).is_none())
        .collect();
    let keep = |s: &Vec<usize>| !s.iter().any(|v| handed.contains(v));
    match to {
        Side::First => h.first_win.retain(keep),
        Side::Second => h.second_win.retain(keep),
    }
    for &v in &handed {
        h.place(v, to)?;
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanCheck {
    /// Closed-player lines tried.
    pub lines: usize,
    /// Most open-player moves any line needed.
    pub longest: u64,
}

/// Plays the plan against every line of the closed player, who may move
/// anywhere on the board. Fails with the offending line if the open player
/// ever leaves the region, needs more moves than the value, or does not win.
pub fn verify_plan(
    g: &StonePlacingGame,
    open: Side,
    dr: &DeadRegion,
) -> Result<PlanCheck, StoneError> {
    let region: BTreeSet<usize> = dr.region.iter().copied().collect();
    let mut check = PlanCheck {
        lines: 0,
        longest: 0,
    };
    let mut line = Vec::new();
    walk(
        g, open, &dr.plan, &region, dr.value, 0, &mut line, &mut check,
    )?;
    Ok(check)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    g: &StonePlacingGame,
    open: Side,
    plan: &Plan,
    region: &BTreeSet<usize>,
    limit: u64,
    used: u64,
    line: &mut Vec<usize>,
    check: &mut PlanCheck,
) -> Result<(), StoneError> {
    let fail = |line: &Vec<usize>| Err(StoneError::NotWinning(line.clone()));
    if g.outcome() == Outcome::won_by(open) {
        check.lines += 1;
        check.longest = check.longest.max(used);
        return Ok(());
    }
    if g.outcome() != Outcome::Ongoing {
        return fail(line);
    }
    let play =
        |g: &mut StonePlacingGame, v: usize, line: &mut Vec<usize>| -> Result<(), StoneError> {
            line.push(v);
            if !region.contains(&v) || g.play_move(v).is_err() {
                return Err(StoneError::NotWinning(line.clone()));
            }
            Ok(())
        };
    if g.turn() == open {
        let Plan::Play { vertex, then } = plan else {
            return fail(line);
        };
        if used + 1 > limit {
            return fail(line);
        }
        let mut h = g.clone();
        play(&mut h, *vertex, line)?;
        walk(&h, open, then, region, limit, used + 1, line, check)?;
        line.pop();
        return Ok(());
    }
    let Plan::Answer { branches } = plan else {
        return fail(line);
    };
    for w in g.unmarked() {
        let b = branches
            .iter()
            .find(|b| b.closed == w)
            .unwrap_or(&branches[0]);
        let mut h = g.clone();
        h.play_move(w).expect("unmarked vertex");
        line.push(w);
        if h.outcome() != Outcome::Ongoing {
            return fail(line);
        }
        if used + 1 > limit {
            return fail(line);
        }
        play(&mut h, b.reply, line)?;
        walk(&h, open, &b.then, region, limit, used + 1, line, check)?;
        line.pop();
        line.pop();
    }
    Ok(())
}

/// A random game on `n` vertices with finite winning sets for both sides
/// (so open for both) and a random player to move.
pub fn random_game(rng: &mut impl Rng, n: usize) -> StonePlacingGame {
    let mut sets = |count: usize| -> Vec<Vec<usize>> {
        (0..count)
            .map(|_| {
                let k = rng.gen_range(1..=n.min(4));
                let mut s: Vec<usize> = (0..n).collect();
                for i in 0..k {
                    let j = rng.gen_range(i..n);
                    s.swap(i, j);
                }
                s.truncate(k);
                s
            })
            .collect()
    };
    let first = sets(1 + n / 3);
    let second = sets(n / 4);
    let turn = if rng.gen_bool(0.5) {
        Side::First
    } else {
        Side::Second
    };
    StonePlacingGame::new(n, &first, &second)
        .unwrap()
        .with_turn(turn)
}
