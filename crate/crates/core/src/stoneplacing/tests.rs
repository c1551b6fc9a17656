use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::*;
use crate::gamecore::{game_value, GameNode, GameValue, Player};
use crate::hex::{bounded_minimax, bridge_window, make_bridge_chain, window_to_stone_game, Stone};

const BUDGET: usize = 2_000_000;

#[test]
fn dual_of_small_path() {
    let d = maker_breaker_dual(3, &[vec![0, 1], vec![1, 2]]).unwrap();
    assert_eq!(d.sets, vec![vec![0, 2], vec![1]]);
    assert!(!d.degenerate);
    let e = maker_breaker_dual(3, &[]).unwrap();
    assert!(e.degenerate);
    assert_eq!(e.sets, vec![Vec::<usize>::new()]);
    assert!(matches!(
        maker_breaker_dual(21, &[vec![0]]),
        Err(StoneError::BudgetExceeded { .. })
    ));
}

/// Transversal check by brute force: every set of the dual meets every
/// original set, and no proper subset does.
#[test]
fn dual_sets_are_minimal_transversals() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let g = random_game(&mut rng, n);
        let fam = g.wins(Side::First).to_vec();
        let d = maker_breaker_dual(n, &fam).unwrap();
        let meets = |t: &[usize]| fam.iter().all(|f| f.iter().any(|v| t.contains(v)));
        for t in &d.sets {
            assert!(meets(t));
            for i in 0..t.len() {
                let mut u = t.clone();
                u.remove(i);
                assert!(!meets(&u));
            }
        }
        // Every transversal contains one of the dual sets.
        for m in 0u32..1 << n {
            let t: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
            if meets(&t) {
                assert!(d.sets.iter().any(|s| s.iter().all(|v| t.contains(v))));
            }
        }
    }
}

#[test]
fn minimal_sets_drop_supersets() {
    assert_eq!(
        minimal_sets(&[vec![2, 1, 0], vec![1, 0], vec![3], vec![3, 1]]),
        vec![vec![0, 1], vec![3]]
    );
}

#[test]
fn earliest_completion_wins() {
    let mut g = StonePlacingGame::new(4, &[vec![0, 1]], &[vec![2]]).unwrap();
    g.play_move(0).unwrap();
    assert_eq!(g.play_move(2).unwrap(), Outcome::SecondWins);
    assert_eq!(g.play_move(1), Err(StoneError::GameOver));

    // Both hold a set: the earlier completion decides.
    let mut h = StonePlacingGame::new(4, &[vec![0]], &[vec![1]]).unwrap();
    h.place(1, Side::Second).unwrap();
    h.place(0, Side::First).unwrap();
    assert_eq!(h.outcome(), Outcome::SecondWins);
    assert_eq!(g.clone().play_move(2), Err(StoneError::Occupied(2)));
}

#[test]
fn tic_tac_toe_has_no_value() {
    let g = StonePlacingGame::tic_tac_toe();
    assert_eq!(
        stone_value(&g, Side::First, BUDGET).unwrap(),
        GameValue::Undefined
    );
    assert_eq!(
        stone_value(&g, Side::Second, BUDGET).unwrap(),
        GameValue::Undefined
    );
    assert!(matches!(
        dead_region(&g, Side::First, BUDGET),
        Err(StoneError::NoValue)
    ));
}

#[test]
fn value_budget_is_enforced() {
    let g = StonePlacingGame::tic_tac_toe();
    assert!(matches!(
        stone_value(&g, Side::First, 100),
        Err(StoneError::BudgetExceeded { .. })
    ));
}

#[test]
fn single_bridge_has_value_one() {
    // Blue to move; Red wins with either of two cells.
    let g = StonePlacingGame::new(2, &[], &[vec![0], vec![1]]).unwrap();
    assert_eq!(
        stone_value(&g, Side::Second, BUDGET).unwrap(),
        GameValue::nat(1)
    );
    let dr = dead_region(&g, Side::Second, BUDGET).unwrap();
    assert_eq!(dr.value, 1);
    assert_eq!(dr.region, vec![0, 1]);
    verify_plan(&g, Side::Second, &dr).unwrap();
}

#[test]
fn bridge_windows_agree_with_hex_minimax() {
    for k in 1..=3 {
        let pos = make_bridge_chain(k);
        let window = bridge_window(k);
        let sets = window_to_stone_game(&pos, &window, Stone::Red).unwrap();
        // Red needs one cell of each bridge.
        assert_eq!(sets.len(), 1 << k);
        let g = StonePlacingGame::new(window.len(), &[], &sets).unwrap();
        let via_sets = stone_value(&g, Side::Second, BUDGET).unwrap();
        let via_hex = bounded_minimax(&pos, &window, Stone::Red, BUDGET).unwrap();
        assert_eq!(via_sets, via_hex, "k = {k}");
        assert_eq!(via_sets, GameValue::nat(k as u64));
    }
}

/// The whole game as an explicit tree.
fn as_tree(g: &StonePlacingGame, open: Side) -> GameNode {
    let mover = if g.turn() == open {
        Player::Open
    } else {
        Player::Closed
    };
    match g.outcome() {
        o if o == Outcome::won_by(open) => GameNode::won(mover),
        Outcome::Ongoing => {
            let children = g
                .unmarked()
                .into_iter()
                .map(|v| {
                    let mut h = g.clone();
                    h.play_move(v).unwrap();
                    as_tree(&h, open)
                })
                .collect();
            GameNode::new(mover, children).unwrap()
        }
        _ => GameNode::new(Player::Open, Vec::new()).unwrap(),
    }
}

#[test]
fn values_match_explicit_trees() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..150 {
        let n = rng.gen_range(1..=6);
        let g = random_game(&mut rng, n);
        for open in [Side::First, Side::Second] {
            let want = game_value(&as_tree(&g, open)).unwrap();
            assert_eq!(
                stone_value(&g, open, BUDGET).unwrap(),
                want,
                "{}",
                g.to_json()
            );
        }
    }
}

#[test]
fn json_round_trip() {
    let mut g = StonePlacingGame::new(4, &[vec![0, 1]], &[vec![2, 3]]).unwrap();
    g.play_move(1).unwrap();
    g.play_move(3).unwrap();
    let h = StonePlacingGame::from_json(&g.to_json()).unwrap();
    assert_eq!(g, h);
    let v = serde_json::json!({"board": ["a", "b", 3], "first_win_minimal": [["a", 3]], "turn": "second"});
    let k = StonePlacingGame::from_json(&v).unwrap();
    assert_eq!(k.wins(Side::First), &[vec![0, 2]]);
    assert_eq!(k.turn(), Side::Second);
    let bad = serde_json::json!({"board": ["a"], "first_win_minimal": [["z"]]});
    assert!(matches!(
        StonePlacingGame::from_json(&bad),
        Err(StoneError::Input(_))
    ));
}

/// Random open games: every defined value is witnessed by a finite dead
/// region, its plan wins within the value, and handing everything outside
/// the region to the other player keeps the value.
#[test]
fn values_are_finite_and_local() {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut valued = 0;
    for _ in 0..300 {
        let n = rng.gen_range(1..=10);
        let g = random_game(&mut rng, n);
        for open in [Side::First, Side::Second] {
            let v = stone_value(&g, open, BUDGET).unwrap();
            assert!(v == GameValue::Undefined || v.defined().unwrap().is_finite());
            let Ok(dr) = dead_region(&g, open, BUDGET) else {
                continue;
            };
            valued += 1;
            assert_eq!(Some(&crate::Ordinal::from(dr.value)), v.defined());
            let check =
                verify_plan(&g, open, &dr).unwrap_or_else(|e| panic!("{e} in {}", g.to_json()));
            assert!(check.longest <= dr.value);
            let rest: Vec<usize> = (0..n).filter(|v| !dr.region.contains(v)).collect();
            let h = gift(&g, &rest, open.other()).unwrap();
            assert_eq!(stone_value(&h, open, BUDGET).unwrap(), v, "{}", g.to_json());
        }
    }
    assert!(valued > 100, "{valued}");
}

#[test]
fn mirroring_draws() {
    // Sets made of mirror pairs are each met twice by their image.
    let sets = vec![vec![0, 1, 2, 3], vec![2, 3, 4, 5], vec![0, 1, 4, 5]];
    let g = StonePlacingGame::positional(6, &sets).unwrap();
    let theta = Involution::Pairs(vec![(0, 1), (2, 3), (4, 5)]);
    let mu = mirroring_draw(&g, &theta).unwrap();
    assert_eq!(mu.overlaps, vec![4, 4, 4]);
    let mut rng = StdRng::seed_from_u64(3);
    assert_eq!(mirror_playouts(&g, &mu, &mut rng, 500).unwrap(), 500);

    let broken = StonePlacingGame::positional(6, &[vec![0, 2]]).unwrap();
    assert!(matches!(
        mirroring_draw(&broken, &theta),
        Err(StoneError::PreconditionFailed(_))
    ));
    assert!(Involution::Pairs(vec![(0, 0)]).validate().is_err());
    assert!(Involution::Pairs(vec![(0, 1), (1, 2)]).validate().is_err());
    assert!(Involution::Reflect { reflect: 4 }.validate().is_err());
    assert_eq!(Involution::Reflect { reflect: 5 }.apply(1), Some(4));
}

#[test]
fn mirror_strategy_blocks_tic_tac_toe_free_game() {
    // Four disjoint pairs, each set a union of two pairs.
    let sets = vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7], vec![0, 1, 6, 7]];
    let g = StonePlacingGame::positional(8, &sets).unwrap();
    let theta = Involution::Pairs(vec![(0, 1), (2, 3), (4, 5), (6, 7)]);
    let mu = mirroring_draw(&g, &theta).unwrap();
    let mut rng = StdRng::seed_from_u64(4);
    mirror_playouts(&g, &mu, &mut rng, 200).unwrap();
    // The mirror pairing is also a Breaker win in the Maker-Breaker game.
    let mate = theta.on_board(8).unwrap();
    check_breaker_wins(8, &sets, &mut PairingBreaker { mate }).unwrap();
}

#[test]
fn breaker_wins_give_two_colourings() {
    let sets = vec![vec![0, 1], vec![2, 3], vec![0, 2, 4, 5], vec![1, 4, 5]];
    let fam = sets.clone();
    let mk = move || -> Box<dyn StonePolicy> { Box::new(MakerBreakerSolver::new(6, &fam)) };
    let c = breaker_to_2coloring(6, &sets, &mk).unwrap();
    for s in &sets {
        assert!(s.iter().any(|v| c.white.contains(v)) && s.iter().any(|v| c.black.contains(v)));
    }

    // A Maker win: the triangle.
    let tri = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
    let fam = tri.clone();
    let mk = move || -> Box<dyn StonePolicy> { Box::new(MakerBreakerSolver::new(3, &fam)) };
    assert!(matches!(
        breaker_to_2coloring(3, &tri, &mk),
        Err(StoneError::NotWinning(_))
    ));
}

#[test]
fn hex_pairing_colours_red_crossings() {
    // Red's crossings of the 3 × 2 board; Blue's pairing is a Breaker win.
    use crate::hex::{asymmetric_pairing, HexBoard};
    let p = asymmetric_pairing(2);
    let n = p.mate.len();
    let mut sets = Vec::new();
    for m in 0u32..1 << n {
        let b = HexBoard::from_mask(p.rows, p.cols, m as u64);
        if b.connects(Stone::Red) {
            sets.push((0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>());
        }
    }
    let sets = minimal_sets(&sets);
    let mate = p.mate.clone();
    let mk = move || -> Box<dyn StonePolicy> { Box::new(PairingBreaker { mate: mate.clone() }) };
    let c = breaker_to_2coloring(n, &sets, &mk).unwrap();
    assert!(!c.white.is_empty() && !c.black.is_empty());
}

#[test]
fn steal_check_on_rays() {
    let mut rng = StdRng::seed_from_u64(8);
    // First wins on any right ray of pairs, second on left rays; the
    // reflection about 1/2 maps each to the other.
    let first = vec![SetDescriptor::Periodic {
        base: vec![1, 2],
        step: 2,
    }];
    let second = vec![SetDescriptor::Periodic {
        base: vec![0, -1],
        step: -2,
    }];
    let g = Involution::Reflect { reflect: 1 };
    let cert = strategy_steal_check(&first, &second, &g, &mut rng, 100, 30).unwrap();
    assert_eq!(cert.playouts, 100);
    assert_eq!(cert.witnesses.len(), 1);

    let finite = vec![SetDescriptor::Finite {
        vertices: vec![0, 1],
    }];
    assert!(matches!(
        strategy_steal_check(&first, &finite, &g, &mut rng, 10, 10),
        Err(StoneError::NotStrictlyNotOpen(_))
    ));
    assert!(matches!(
        strategy_steal_check(
            &first,
            &second,
            &Involution::Reflect { reflect: 0 },
            &mut rng,
            10,
            10
        ),
        Err(StoneError::PreconditionFailed(_))
    ));
}

#[test]
fn periodic_subsets() {
    let a = SetDescriptor::Periodic {
        base: vec![4],
        step: 4,
    };
    let b = SetDescriptor::Periodic {
        base: vec![0],
        step: 2,
    };
    assert!(a.subset_of(&b));
    assert!(!b.subset_of(&a));
    assert!(SetDescriptor::Finite {
        vertices: vec![2, 6]
    }
    .subset_of(&b));
    assert!(!SetDescriptor::Periodic {
        base: vec![0],
        step: -2
    }
    .subset_of(&b));
    let (all, basis) = has_finite_basis(&[a.clone(), SetDescriptor::Finite { vertices: vec![1] }]);
    assert!(!all);
    assert_eq!(basis.len(), 1);
}
