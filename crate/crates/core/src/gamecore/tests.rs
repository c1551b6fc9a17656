use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::arena::Arena;
use super::*;

fn o(s: &str) -> Ordinal {
    Ordinal::parse(s).unwrap()
}

fn def(s: &str) -> GameValue {
    GameValue::Defined(o(s))
}

/// Height of a finite tree by a plain longest-path search.
fn height(t: &WfTree) -> u64 {
    t.explicit_children()
        .unwrap()
        .iter()
        .map(|c| 1 + height(c))
        .max()
        .unwrap_or(0)
}

/// The open player must make `k` forced moves to win.
fn open_chain(k: u64) -> GameNode {
    let mut g = GameNode::won(Player::Open);
    for _ in 0..k {
        g = GameNode::new(Player::Open, vec![g]).unwrap();
    }
    g
}

fn random_game<R: Rng>(rng: &mut R, depth: u32) -> GameNode {
    let mover = if rng.gen_bool(0.5) {
        Player::Open
    } else {
        Player::Closed
    };
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..3) {
            0 if mover == Player::Open => GameNode::new(Player::Open, vec![]).unwrap(),
            1 => GameNode::endless(mover),
            _ => GameNode::won(mover),
        };
    }
    let k = rng.gen_range(1..=3);
    GameNode::new(mover, (0..k).map(|_| random_game(rng, depth - 1)).collect()).unwrap()
}

#[test]
fn rank_examples() {
    let ev = Evaluator::default();
    assert_eq!(ev.rank(&WfTree::leaf()).unwrap(), def("0"));
    assert_eq!(ev.rank(&omega_plus_three_tree()).unwrap(), def("w+3"));
    let chains = WfTree::family(Arc::new(ChainFamily::new(0)));
    assert_eq!(ev.rank(&chains).unwrap(), def("w"));
}

#[test]
fn rank_of_finite_trees_is_height() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let n = rng.gen_range(1..=40);
        let t = random_finite_tree(&mut rng, n);
        assert_eq!(t.explicit_size(), n);
        assert_eq!(rank(&t).unwrap(), GameValue::nat(height(&t)));
    }
}

#[test]
fn build_tree_examples() {
    assert!(build_tree_of_rank(&o("0")).is_leaf());
    let three = build_tree_of_rank(&o("3"));
    assert_eq!(three.explicit_size(), 4);
    assert_eq!(height(&three), 3);
    let w = build_tree_of_rank(&o("w"));
    let TreeChildren::Family(f) = &w.children else {
        panic!("expected a family")
    };
    assert_eq!(f.declared_sup(), o("w"));
    for n in 0..=12 {
        let s = f.sample(n);
        assert_eq!(height(&s), n);
        assert_eq!(f.declared_rank(n), Ordinal::nat(n));
    }
}

#[test]
fn build_rank_round_trip() {
    let ev = Evaluator::default();
    for s in ["0", "1", "5", "w", "w+3", "w*2", "w^2"] {
        assert_eq!(ev.rank(&build_tree_of_rank(&o(s))).unwrap(), def(s), "{s}");
    }
}

#[test]
fn build_rank_round_trip_higher() {
    let ev = Evaluator::new(6, DEFAULT_BUDGET);
    for s in ["w^2+w*3+2", "w^3", "w^w"] {
        assert_eq!(ev.rank(&build_tree_of_rank(&o(s))).unwrap(), def(s), "{s}");
    }
}

#[test]
fn wrong_declarations_are_caught() {
    let inner: Arc<dyn TreeFamily> = Arc::new(ChainFamily::new(0));
    let lying = DeclaredFamily::new(inner.clone(), "n+1".into(), o("w")).unwrap();
    let err = rank(&WfTree::family(Arc::new(lying))).unwrap_err();
    assert!(
        matches!(err, GameError::DeclaredRankMismatch { index: 0, .. }),
        "{err}"
    );

    let bad_sup = DeclaredFamily::new(inner.clone(), "n".into(), o("5")).unwrap();
    assert!(matches!(
        rank(&WfTree::family(Arc::new(bad_sup))),
        Err(GameError::BadFamily { .. })
    ));

    // A wrong declaration past the cutoff is trusted: that is the contract.
    let ev = Evaluator::new(3, DEFAULT_BUDGET);
    let late = DeclaredFamily::new(inner, "n".into(), o("w")).unwrap();
    assert_eq!(ev.rank(&WfTree::family(Arc::new(late))).unwrap(), def("w"));
}

#[test]
fn budget_is_enforced() {
    let ev = Evaluator::new(DEFAULT_CUTOFF, 50);
    assert_eq!(
        ev.rank(&WfTree::chain(100)),
        Err(GameError::BudgetExceeded(50))
    );
    assert_eq!(ev.rank(&WfTree::chain(10)).unwrap(), GameValue::nat(10));
}

#[test]
fn climbing_examples() {
    let ev = Evaluator::default();
    let g = climbing_game(&WfTree::leaf());
    assert_eq!(g.status, Status::OpenHasWon);
    assert_eq!(ev.game_value(&g).unwrap(), def("0"));
    assert_eq!(
        ev.game_value(&climbing_game(&WfTree::chain(1))).unwrap(),
        def("1")
    );
    assert_eq!(
        ev.game_value(&climbing_game(&omega_plus_three_tree()))
            .unwrap(),
        def("w+3")
    );
    for s in ["w", "w*2", "w^2", "w+7"] {
        let t = build_tree_of_rank(&o(s));
        assert_eq!(ev.game_value(&climbing_game(&t)).unwrap(), def(s), "{s}");
    }
}

#[test]
fn game_value_examples() {
    let ev = Evaluator::default();
    assert_eq!(
        ev.game_value(&GameNode::won(Player::Closed)).unwrap(),
        def("0")
    );
    let ill = WfTree::node(vec![WfTree::node(vec![WfTree::infinite_branch()])]);
    assert_eq!(
        ev.game_value(&climbing_game(&ill)).unwrap(),
        GameValue::Undefined
    );
    assert_eq!(ev.rank(&ill).unwrap(), GameValue::Undefined);

    let g = GameNode::new(Player::Closed, vec![open_chain(1), open_chain(4)]).unwrap();
    assert_eq!(ev.game_value(&open_chain(1)).unwrap(), def("1"));
    assert_eq!(ev.game_value(&open_chain(4)).unwrap(), def("4"));
    assert_eq!(ev.game_value(&g).unwrap(), def("4"));
}

#[test]
fn dead_ends() {
    let ev = Evaluator::default();
    assert!(GameNode::new(Player::Closed, vec![]).is_err());
    let stuck_open = GameNode::new(Player::Open, vec![]).unwrap();
    assert_eq!(ev.game_value(&stuck_open).unwrap(), GameValue::Undefined);
    // The open player moving into the closed player's stuck position wins.
    let g = GameNode::new(Player::Open, vec![GameNode::won(Player::Closed)]).unwrap();
    assert_eq!(ev.game_value(&g).unwrap(), def("1"));
}

#[test]
fn recursive_and_arena_engines_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let g = random_game(&mut rng, 6);
        let rec = game_value(&g).unwrap();
        let sol = Arena::from_game(&g).unwrap().solve().unwrap();
        assert_eq!(sol.value(0), rec);
    }
}

#[test]
fn reducing_strategy_examples() {
    let ev = Evaluator::default();
    assert!(ev
        .value_reducing_strategy(&GameNode::won(Player::Open))
        .unwrap()
        .is_empty());
    let g = GameNode::new(
        Player::Open,
        vec![open_chain(1), GameNode::won(Player::Closed)],
    )
    .unwrap();
    assert_eq!(ev.game_value(&g).unwrap(), def("1"));
    let s = ev.value_reducing_strategy(&g).unwrap();
    assert_eq!(s.choose(&[]), Some(1));
    assert!(matches!(
        ev.value_reducing_strategy(&GameNode::endless(Player::Open)),
        Err(GameError::NoValue)
    ));
}

/// Plays `g` with the open player following `s` and the closed player
/// moving at random; returns the open-turn values and whether the open
/// player won.
fn playout(
    ev: &Evaluator,
    g: &GameNode,
    s: &Strategy,
    rng: &mut ChaCha8Rng,
    max_moves: usize,
) -> (Vec<Ordinal>, bool) {
    let mut cur = g.clone();
    let mut path = Vec::new();
    let mut open_values = Vec::new();
    for _ in 0..max_moves {
        if cur.status == Status::OpenHasWon {
            return (open_values, true);
        }
        let i = match cur.mover {
            Player::Open => {
                open_values.push(ev.game_value(&cur).unwrap().defined().unwrap().clone());
                s.choose(&path).expect("strategy defined on its own plays")
            }
            Player::Closed => rng.gen_range(0..cur.move_count().unwrap_or(ev.cutoff as usize + 1)),
        };
        cur = cur.child(i).unwrap().into_owned();
        path.push(i);
    }
    (open_values, false)
}

#[test]
fn reducing_strategy_wins_figure_game() {
    let ev = Evaluator::default();
    let g = climbing_game(&omega_plus_three_tree());
    let s = ev.value_reducing_strategy(&g).unwrap();
    for seed in 0..1000 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (vals, won) = playout(&ev, &g, &s, &mut rng, 200);
        assert!(won, "seed {seed}");
        assert!(
            vals.windows(2).all(|w| w[1] < w[0]),
            "seed {seed}: {vals:?}"
        );
    }
}

#[test]
fn reducing_strategy_on_random_games() {
    let ev = Evaluator::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 200 {
        let g = random_game(&mut rng, 6);
        if !ev.game_value(&g).unwrap().is_defined() {
            continue;
        }
        checked += 1;
        let s = ev.value_reducing_strategy(&g).unwrap();
        for _ in 0..20 {
            let (vals, won) = playout(&ev, &g, &s, &mut rng, 100);
            assert!(won);
            assert!(vals.windows(2).all(|w| w[1] < w[0]));
        }
    }
}

#[test]
fn maintaining_strategy_examples() {
    let ev = Evaluator::default();
    // One infinite branch: Climber follows it.
    let t = WfTree::node(vec![WfTree::node(vec![WfTree::infinite_branch()])]);
    let g = climbing_game(&t);
    let s = ev.value_maintaining_strategy(&g, 16).unwrap();
    assert_eq!(s.choose(&[]), Some(0));
    assert_eq!(s.choose(&[0, 0]), Some(0));

    // Infinite branch next to a leaf: never the leaf.
    let t = WfTree::node(vec![WfTree::leaf(), WfTree::infinite_branch()]);
    let s = ev
        .value_maintaining_strategy(&climbing_game(&t), 16)
        .unwrap();
    assert_eq!(s.choose(&[]), Some(1));

    // Two infinite branches: every prefix stays valueless.
    let t = WfTree::node(vec![
        WfTree::node(vec![WfTree::infinite_branch()]),
        WfTree::node(vec![WfTree::leaf(), WfTree::infinite_branch()]),
    ]);
    let g = climbing_game(&t);
    let s = ev.value_maintaining_strategy(&g, 16).unwrap();
    let mut cur = g.clone();
    let mut path = vec![];
    for _ in 0..12 {
        assert_eq!(ev.game_value(&cur).unwrap(), GameValue::Undefined);
        let i = match cur.mover {
            Player::Closed => s.choose(&path).unwrap(),
            Player::Open => 0,
        };
        cur = cur.child(i).unwrap().into_owned();
        path.push(i);
    }

    assert!(matches!(
        ev.value_maintaining_strategy(&open_chain(2), 8),
        Err(GameError::HasValue(_))
    ));
}

#[test]
fn find_position_examples() {
    let ev = Evaluator::default();
    assert_eq!(
        ev.find_position_with_value(&open_chain(3), &o("3"))
            .unwrap(),
        Vec::<usize>::new()
    );

    let g = climbing_game(&omega_plus_three_tree());
    for b in ["0", "1", "2", "5", "w", "w+1", "w+2", "w+3"] {
        let path = ev.find_position_with_value(&g, &o(b)).unwrap();
        let node = g.descend(&path).unwrap();
        assert_eq!(ev.game_value(&node).unwrap(), def(b), "beta {b}");
        if b == "0" {
            assert_eq!(node.status, Status::OpenHasWon);
        }
    }

    let g = climbing_game(&build_tree_of_rank(&o("w")));
    let path = ev.find_position_with_value(&g, &o("5")).unwrap();
    // Move n lands above the chain sample(n), worth n + 1 to the Observer.
    assert!(path[0] >= 4, "{path:?}");
    assert_eq!(ev.game_value(&g.descend(&path).unwrap()).unwrap(), def("5"));

    assert!(matches!(
        ev.find_position_with_value(&g, &o("w+1")),
        Err(GameError::OutOfRange { .. })
    ));
    let h = GameNode::endless(Player::Closed);
    assert!(matches!(
        ev.find_position_with_value(&h, &o("0")),
        Err(GameError::NoValue)
    ));
}

#[test]
fn find_position_initial_segment_on_random_games() {
    let ev = Evaluator::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 300 {
        let g = random_game(&mut rng, 6);
        let Some(a) = ev
            .game_value(&g)
            .unwrap()
            .defined()
            .and_then(|a| a.as_finite())
        else {
            continue;
        };
        checked += 1;
        for b in 0..=a {
            let path = ev.find_position_with_value(&g, &Ordinal::nat(b)).unwrap();
            assert_eq!(
                ev.game_value(&g.descend(&path).unwrap()).unwrap(),
                GameValue::nat(b)
            );
        }
    }
}

#[test]
fn finite_branching_gives_finite_values() {
    let ev = Evaluator::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let g = random_game(&mut rng, 6);
        let r = ev
            .assert_finite_value_if_closed_finitely_branching(&g)
            .unwrap();
        if let GameValue::Defined(v) = r.value {
            assert!(v.is_finite());
        }
    }
    for _ in 0..100 {
        let t = random_finite_tree(&mut rng, 30);
        let d = height(&t);
        let r = ev
            .assert_finite_value_if_closed_finitely_branching(&climbing_game(&t))
            .unwrap();
        assert!(r.value.defined().unwrap().as_finite().unwrap() <= d);
    }
    fn binary(d: u32) -> WfTree {
        if d == 0 {
            WfTree::leaf()
        } else {
            WfTree::node(vec![binary(d - 1), binary(d - 1)])
        }
    }
    let r = ev
        .assert_finite_value_if_closed_finitely_branching(&climbing_game(&binary(6)))
        .unwrap();
    assert_eq!(r.value, GameValue::nat(6));

    let g = climbing_game(&build_tree_of_rank(&o("w")));
    assert_eq!(
        ev.assert_finite_value_if_closed_finitely_branching(&g),
        Err(GameError::NotFinitelyBranching(vec![]))
    );
}

#[test]
fn json_round_trips() {
    let trees = [
        omega_plus_three_tree(),
        build_tree_of_rank(&o("w^2+1")),
        WfTree::node(vec![WfTree::infinite_branch()]),
    ];
    for t in trees {
        let v = tree_to_json(&t);
        let back = tree_from_json(&v).unwrap();
        assert_eq!(back, t);
        assert_eq!(tree_to_json(&back), v);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let g = random_game(&mut rng, 5);
        let v = game_to_json(&g).unwrap();
        let back = game_from_json(&v).unwrap();
        assert_eq!(game_to_json(&back).unwrap(), v);
        assert_eq!(game_value(&back).unwrap(), game_value(&g).unwrap());
    }
    let g = climbing_game(&omega_plus_three_tree());
    let back = game_from_json(&game_to_json(&g).unwrap()).unwrap();
    assert_eq!(game_value(&back).unwrap(), def("w+3"));
}

#[test]
fn json_declarations_are_checked() {
    let v = serde_json::json!({"omega": {"schema": "chain", "params": {"offset": 0}, "ranks": "n+1", "sup": "w"}});
    let t = tree_from_json(&v).unwrap();
    assert!(matches!(
        rank(&t),
        Err(GameError::DeclaredRankMismatch { .. })
    ));
    let v =
        serde_json::json!({"omega": {"schema": "nope", "params": {}, "ranks": "n", "sup": "w"}});
    assert!(matches!(
        tree_from_json(&v),
        Err(GameError::UnknownSchema(_))
    ));
}
