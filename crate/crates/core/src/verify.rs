//! The acceptance suite: ten end-to-end checks across all modules, each
//! pairing a library result with an independent recomputation.

use std::collections::{HashMap, VecDeque};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::draughts::{
    self, apply_move, build_king_tree, extended_node_templates, ladder_figure, legal_moves,
    multi_jump_figure, white_wins_within, Color, KingTreeOptions, RuleSet, Window,
};
use crate::gamecore::{
    climbing_game, game_value, omega_plus_three_tree, plane_trees, random_finite_tree, rank,
    Evaluator, GameValue, WfTree,
};
use crate::hex::{
    bounded_minimax, bridge_window, check_pairing, gale_tour, is_winning_chain, make_bridge_chain,
    mirror_cell, mirroring_playout, solve, window_to_stone_game, HexBoard, Stone,
};
use crate::stoneplacing::{
    breaker_to_2coloring, dead_region, gift, mirror_playouts, mirroring_draw, random_game,
    stone_value, strategy_steal_check, Involution, MakerBreakerSolver, SetDescriptor, Side,
    StoneError, StonePlacingGame, StonePolicy,
};
use crate::Ordinal;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    pub seed: u64,
    /// State budget handed to each search.
    pub budget: usize,
    /// Skips the 4×4 Hex sampling.
    pub quick: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            budget: 2_000_000,
            quick: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// What was checked, or the first failure.
    pub detail: String,
    #[serde(skip)]
    pub millis: u128,
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "hex-theorem"),
    (2, "first-player-win"),
    (3, "asymmetric-pairing"),
    (4, "rank-value"),
    (5, "bridge-chains"),
    (6, "stone-locality"),
    (7, "mirroring"),
    (8, "colouring-and-stealing"),
    (9, "draughts-value"),
    (10, "rule-variants"),
];

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn rng(opts: &VerifyOptions, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(1_000_003).wrapping_add(id as u64))
}

/// Runs one criterion by number.
pub fn run_criterion(id: u8, opts: &VerifyOptions) -> Option<CriterionResult> {
    let name = CRITERIA.iter().find(|c| c.0 == id)?.1;
    let start = Instant::now();
    let out = match id {
        1 => hex_theorem(opts),
        2 => first_player_win(),
        3 => asymmetric_pairing(),
        4 => rank_value(opts),
        5 => bridge_chains(opts),
        6 => stone_locality(opts),
        7 => mirroring(opts),
        8 => colouring_and_stealing(opts),
        9 => draughts_value(opts),
        10 => rule_variants(),
        _ => unreachable!(),
    };
    let (passed, detail) = match out {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CriterionResult {
        id,
        name,
        passed,
        detail,
        millis: start.elapsed().as_millis(),
    })
}

/// All criteria, run on separate threads; results come back in order.
pub fn verify_all(opts: &VerifyOptions) -> Vec<CriterionResult> {
    std::thread::scope(|s| {
        let handles: Vec<_> = CRITERIA
            .iter()
            .map(|&(id, _)| s.spawn(move || run_criterion(id, opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .expect("criterion thread")
                    .expect("known criterion")
            })
            .collect()
    })
}

/// Breadth-first search from one side to the other, per colour.
fn flood_winners(b: &HexBoard) -> (bool, bool) {
    let (rows, cols) = (b.rows() as i32, b.cols() as i32);
    // Red joins row 0 to the last row, Blue column 0 to the last column.
    let side = |s: Stone, c: (i32, i32), far: bool| match (s, far) {
        (Stone::Red, false) => c.1 == 0,
        (Stone::Red, true) => c.1 == rows - 1,
        (Stone::Blue, false) => c.0 == 0,
        (Stone::Blue, true) => c.0 == cols - 1,
    };
    let reaches = |s: Stone| {
        let mut seen: Vec<bool> = (0..b.len())
            .map(|i| b.at(i) == Some(s) && side(s, b.cell(i), false))
            .collect();
        let mut queue: VecDeque<usize> = (0..b.len()).filter(|&i| seen[i]).collect();
        while let Some(i) = queue.pop_front() {
            if side(s, b.cell(i), true) {
                return true;
            }
            let (c, r) = b.cell(i);
            for d in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)] {
                if let Some(j) = b.index((c + d.0, r + d.1)) {
                    if !seen[j] && b.at(j) == Some(s) {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        false
    };
    (reaches(Stone::Red), reaches(Stone::Blue))
}

fn check_colouring(b: &HexBoard) -> Result<(), String> {
    let (red, blue) = flood_winners(b);
    let rows = b.to_rows().join("/");
    ensure!(
        red != blue,
        "flood fill finds {} winners on {rows}",
        red as u8 + blue as u8
    );
    let t = gale_tour(b).map_err(|e| format!("{rows}: {e}"))?;
    ensure!(
        (t.winner == Stone::Red) == red,
        "tour names {:?} on {rows}",
        t.winner
    );
    ensure!(
        is_winning_chain(b, t.winner, &t.chain),
        "tour chain is not winning on {rows}"
    );
    Ok(())
}

fn hex_theorem(opts: &VerifyOptions) -> Check {
    for mask in 0..1u64 << 9 {
        check_colouring(&HexBoard::from_mask(3, 3, mask))?;
    }
    if opts.quick {
        return Ok("512 colourings of 3x3; 4x4 sampling skipped".into());
    }
    let mut rng = rng(opts, 1);
    for _ in 0..2000 {
        check_colouring(&HexBoard::from_mask(4, 4, rng.gen_range(0..1 << 16)))?;
    }
    Ok("512 colourings of 3x3, 2000 sampled 4x4".into())
}

fn first_player_win() -> Check {
    for n in 1..=3 {
        let s = solve(&HexBoard::square(n), 13).map_err(|e| e.to_string())?;
        ensure!(s.winner == Stone::Red, "{n}x{n}: second player wins");
    }
    Ok("1x1, 2x2, 3x3 won by the first player".into())
}

fn asymmetric_pairing() -> Check {
    let mut lines = Vec::new();
    for n in 1..=3 {
        let k = check_pairing(n).map_err(|line| format!("n = {n}: Red wins with {line:?}"))?;
        lines.push(k.to_string());
    }
    Ok(format!(
        "pairing holds for n = 1..3 against {} lines",
        lines.join("/")
    ))
}

fn height(t: &WfTree) -> u64 {
    t.explicit_children()
        .unwrap_or(&[])
        .iter()
        .map(|c| height(c) + 1)
        .max()
        .unwrap_or(0)
}

fn rank_value(opts: &VerifyOptions) -> Check {
    let mut rng = rng(opts, 4);
    let ev = Evaluator::new(8, opts.budget);
    let sample = |rng: &mut ChaCha8Rng, t: &WfTree, betas: Vec<Ordinal>| -> Check {
        let g = climbing_game(t);
        let v = game_value(&g).map_err(|e| e.to_string())?;
        ensure!(
            v == rank(t).map_err(|e| e.to_string())?,
            "value {v} differs from rank"
        );
        for _ in 0..5 {
            let beta = &betas[rng.gen_range(0..betas.len())];
            let path = ev
                .find_position_with_value(&g, beta)
                .map_err(|e| e.to_string())?;
            let node = g.descend(&path).ok_or("path leaves the game")?;
            let got = ev.game_value(&node).map_err(|e| e.to_string())?;
            ensure!(
                got == GameValue::Defined(beta.clone()),
                "position for {beta} has value {got}"
            );
        }
        Ok(String::new())
    };
    for _ in 0..200 {
        let nodes = rng.gen_range(1..=40);
        let t = random_finite_tree(&mut rng, nodes);
        let h = height(&t);
        ensure!(
            rank(&t) == Ok(GameValue::nat(h)),
            "rank of a tree of height {h} is off"
        );
        sample(&mut rng, &t, (0..=h).map(Ordinal::nat).collect())?;
    }
    let w3 = omega_plus_three_tree();
    let omega = Ordinal::omega();
    let betas = (0..8)
        .map(Ordinal::nat)
        .chain((0..=3).map(|k| omega.add_nat(k)))
        .collect();
    sample(&mut rng, &w3, betas)?;
    Ok("200 random trees and the w+3 tree".into())
}

fn bridge_chains(opts: &VerifyOptions) -> Check {
    for k in 0..=3usize {
        let pos = make_bridge_chain(k);
        let window = bridge_window(k);
        let v =
            bounded_minimax(&pos, &window, Stone::Red, opts.budget).map_err(|e| e.to_string())?;
        ensure!(v == GameValue::nat(k as u64), "k = {k}: value {v}");
        if k == 0 {
            continue;
        }
        // The same window as a stone-placing game.
        let sets = window_to_stone_game(&pos, &window, Stone::Red).map_err(|e| e.to_string())?;
        let g = StonePlacingGame::new(window.len(), &[], &sets).map_err(|e| e.to_string())?;
        let w = stone_value(&g, Side::Second, opts.budget).map_err(|e| e.to_string())?;
        ensure!(w == v, "k = {k}: stone-placing value {w}");
    }
    Ok("k = 0..3 have value k".into())
}

fn stone_locality(opts: &VerifyOptions) -> Check {
    let mut rng = rng(opts, 6);
    let mut valued = 0;
    for _ in 0..300 {
        let n = rng.gen_range(1..=10);
        let g = random_game(&mut rng, n);
        for open in [Side::First, Side::Second] {
            let v = stone_value(&g, open, opts.budget).map_err(|e| e.to_string())?;
            let GameValue::Defined(a) = &v else { continue };
            ensure!(a.is_finite(), "infinite value {a} on {}", g.to_json());
            let dr = dead_region(&g, open, opts.budget).map_err(|e| e.to_string())?;
            let rest: Vec<usize> = (0..n).filter(|x| !dr.region.contains(x)).collect();
            let h = gift(&g, &rest, open.other()).map_err(|e| e.to_string())?;
            let w = stone_value(&h, open, opts.budget).map_err(|e| e.to_string())?;
            ensure!(w == v, "gift changes {v} to {w} on {}", g.to_json());
            valued += 1;
        }
    }
    Ok(format!("{valued} valued instances"))
}

fn mirroring(opts: &VerifyOptions) -> Check {
    for c in -20..=20 {
        for r in -20..=20 {
            let m = mirror_cell((c, r));
            ensure!(
                m != (c, r) && mirror_cell(m) == (c, r),
                "mirror fails at {:?}",
                (c, r)
            );
        }
    }
    let mut rng = rng(opts, 7);
    for _ in 0..100 {
        let rep = mirroring_playout(&mut rng, 200, 20);
        ensure!(
            rep.moves == 200 && rep.blocked_replies == 0 && rep.broken_pairs == 0,
            "playout: {rep:?}"
        );
    }
    let mut edges = 0;
    for _ in 0..100 {
        let pairs = rng.gen_range(2..=6);
        let mut verts: Vec<i64> = (0..2 * pairs as i64).collect();
        for i in (1..verts.len()).rev() {
            verts.swap(i, rng.gen_range(0..=i));
        }
        let theta: Vec<(i64, i64)> = verts.chunks(2).map(|c| (c[0], c[1])).collect();
        let sets: Vec<Vec<usize>> = (0..rng.gen_range(1..=4))
            .map(|_| {
                let mut f: Vec<usize> = Vec::new();
                for &(a, b) in &theta {
                    if rng.gen_bool(0.5) || f.is_empty() {
                        f.extend([a as usize, b as usize]);
                    }
                }
                // Sometimes a lone extra vertex outside the pairs taken.
                if rng.gen_bool(0.3) {
                    if let Some(&(a, _)) = theta.iter().find(|p| !f.contains(&(p.0 as usize))) {
                        f.push(a as usize);
                    }
                }
                f.sort();
                f
            })
            .collect();
        let g = StonePlacingGame::positional(2 * pairs, &sets).map_err(|e| e.to_string())?;
        let mu =
            mirroring_draw(&g, &Involution::Pairs(theta.clone())).map_err(|e| e.to_string())?;
        let mate: HashMap<usize, usize> = theta
            .iter()
            .flat_map(|&(a, b)| [(a as usize, b as usize), (b as usize, a as usize)])
            .collect();
        for (f, &o) in g.wins(Side::First).iter().zip(&mu.overlaps) {
            let common = f.iter().filter(|v| f.contains(&mate[v])).count();
            ensure!(
                common == o && common % 2 == 0,
                "overlap of {f:?} is {common}, reported {o}"
            );
            edges += 1;
        }
        mirror_playouts(&g, &mu, &mut rng, 20).map_err(|e| e.to_string())?;
    }
    Ok(format!(
        "41x41 window, 100 playouts, {edges} winning sets with even overlap"
    ))
}

/// Exhaustive Breaker check, written directly over bitmasks.
fn breaker_wins(
    n: usize,
    sets: &[u32],
    maker: u32,
    breaker: u32,
    memo: &mut HashMap<(u32, u32), bool>,
) -> bool {
    if sets.iter().any(|&s| s & maker == s) {
        return false;
    }
    if (maker | breaker).count_ones() as usize == n {
        return true;
    }
    if let Some(&w) = memo.get(&(maker, breaker)) {
        return w;
    }
    let free: Vec<u32> = (0..n as u32)
        .filter(|v| (maker | breaker) >> v & 1 == 0)
        .collect();
    let w = if maker.count_ones() == breaker.count_ones() {
        free.iter()
            .all(|&v| breaker_wins(n, sets, maker | 1 << v, breaker, memo))
    } else {
        free.iter()
            .any(|&v| breaker_wins(n, sets, maker, breaker | 1 << v, memo))
    };
    memo.insert((maker, breaker), w);
    w
}

fn colouring_and_stealing(opts: &VerifyOptions) -> Check {
    let mut rng = rng(opts, 8);
    let mut found = 0;
    let mut tries = 0;
    while found < 100 {
        tries += 1;
        ensure!(tries < 100_000, "only {found} Breaker wins found");
        let n = rng.gen_range(3..=8);
        let sets: Vec<Vec<usize>> = (0..rng.gen_range(1..=5))
            .map(|_| {
                let k = rng.gen_range(2..=n.min(4));
                let mut s: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    s.swap(i, rng.gen_range(0..=i));
                }
                s.truncate(k);
                s.sort();
                s
            })
            .collect();
        let masks: Vec<u32> = sets
            .iter()
            .map(|s| s.iter().fold(0, |m, &v| m | 1 << v))
            .collect();
        if !breaker_wins(n, &masks, 0, 0, &mut HashMap::new()) {
            continue;
        }
        found += 1;
        let fam = sets.clone();
        let mk = move || -> Box<dyn StonePolicy> { Box::new(MakerBreakerSolver::new(n, &fam)) };
        let c = breaker_to_2coloring(n, &sets, &mk).map_err(|e| format!("{sets:?}: {e}"))?;
        ensure!(
            c.white.len() + c.black.len() == n,
            "{sets:?}: colouring does not cover the board"
        );
        for s in &sets {
            let whites = s.iter().filter(|v| c.white.contains(v)).count();
            ensure!(
                whites > 0 && whites < s.len(),
                "{sets:?}: {s:?} is monochromatic"
            );
        }
    }
    let first = vec![SetDescriptor::Periodic {
        base: vec![1, 2],
        step: 2,
    }];
    let rays = vec![SetDescriptor::Periodic {
        base: vec![0, -1],
        step: -2,
    }];
    let g = Involution::Reflect { reflect: 1 };
    strategy_steal_check(&first, &rays, &g, &mut rng, 50, 20).map_err(|e| format!("rays: {e}"))?;
    for _ in 0..20 {
        let v: Vec<i64> = (0..rng.gen_range(1..4))
            .map(|_| rng.gen_range(-20..20))
            .collect();
        let mut second = rays.clone();
        second.insert(rng.gen_range(0..=1), SetDescriptor::Finite { vertices: v });
        let r = strategy_steal_check(&first, &second, &g, &mut rng, 5, 5);
        ensure!(
            matches!(r, Err(StoneError::NotStrictlyNotOpen(_))),
            "finite set accepted: {r:?}"
        );
    }
    Ok(format!(
        "100 Breaker wins coloured ({tries} instances drawn); finite sets rejected"
    ))
}

fn draughts_value(opts: &VerifyOptions) -> Check {
    let mut count = 0;
    for n in 1..=7 {
        for t in plane_trees(n) {
            let r = rank(&t).map_err(|e| e.to_string())?;
            if r > GameValue::nat(3) {
                continue;
            }
            count += 1;
            let kt = build_king_tree(&t, RuleSet::A, KingTreeOptions::default())
                .map_err(|e| e.to_string())?;
            let v = draughts::king_tree_value(&kt, opts.budget).map_err(|e| e.to_string())?;
            ensure!(v == r, "{t:?}: value {v}, rank {r}");
            let rep = kt.validate();
            ensure!(rep.ok(), "{t:?}: {:?}", rep.problems);
            if kt.nodes[0].leaf {
                continue;
            }
            let st = kt
                .check_structure(opts.budget)
                .map_err(|e| format!("{t:?}: {e}"))?;
            let inner = kt.nodes.iter().filter(|n| !n.leaf).count();
            ensure!(
                st.states.len() == inner,
                "{t:?}: {} resting squares for {inner} inner nodes",
                st.states.len()
            );
            ensure!(
                st.leaf_traps == kt.leaf_squares().len(),
                "{t:?}: leaf traps {}",
                st.leaf_traps
            );
        }
    }
    Ok(format!("{count} trees"))
}

fn rule_variants() -> Check {
    let root = extended_node_templates(RuleSet::B)
        .map_err(|e| e.to_string())?
        .remove(0);
    let p = &root.position;
    let mut openings = 0;
    for m in legal_moves(p, RuleSet::B).map_err(|e| e.to_string())? {
        if m.is_jump() {
            continue;
        }
        openings += 1;
        let after = apply_move(p, &m).map_err(|e| e.to_string())?;
        let lost = white_wins_within(&after, RuleSet::B, Window::around(p, 3), 2)
            .map_err(|e| e.to_string())?;
        ensure!(lost, "opening to {:?} is not punished", m.to());
    }
    ensure!(openings > 0, "guarded root has no non-jump opening");

    let l = ladder_figure();
    let ms = legal_moves(&l, RuleSet::C).map_err(|e| e.to_string())?;
    let inf = ms
        .iter()
        .find(|m| m.infinite)
        .ok_or("no infinite jump under RS-C")?;
    let after = apply_move(&l, inf).map_err(|e| e.to_string())?;
    ensure!(
        after.count(Color::Black) == 0,
        "the jumper survives the ladder"
    );
    let white = legal_moves(&after, RuleSet::C).map_err(|e| e.to_string())?;
    let next =
        apply_move(&after, white.first().ok_or("White has no move")?).map_err(|e| e.to_string())?;
    ensure!(
        legal_moves(&next, RuleSet::C)
            .map_err(|e| e.to_string())?
            .is_empty(),
        "Black still has moves"
    );
    ensure!(
        legal_moves(&l, RuleSet::A)
            .map_err(|e| e.to_string())?
            .iter()
            .all(|m| !m.is_jump()),
        "RS-A allows a ladder jump"
    );

    let f = multi_jump_figure();
    let ends = |rs| -> Result<Vec<_>, String> {
        let mut e: Vec<_> = legal_moves(&f.position, rs)
            .map_err(|e| e.to_string())?
            .iter()
            .filter_map(|m| m.to())
            .collect();
        e.sort();
        Ok(e)
    };
    let mut want = vec![f.dagger, f.stars[0], f.stars[1]];
    want.sort();
    ensure!(
        ends(RuleSet::A)? == want,
        "RS-A jump ends {:?}",
        ends(RuleSet::A)?
    );
    ensure!(
        ends(RuleSet::B)?.contains(&f.circled),
        "RS-B cannot stop on the circled square"
    );
    Ok(format!(
        "{openings} openings punished; ladder and multi-jump figures match"
    ))
}
