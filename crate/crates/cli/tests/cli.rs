use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use ordgames::draughts::DraughtsPosition;
use serde_json::Value;

fn og(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_og"))
        .args(args)
        .env_remove("OG_SEED")
        .env_remove("OG_BUDGET")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("og-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn ordinal_comparison() {
    let o = og(&["ordinal", "cmp", "w+1", "w"], "");
    assert_eq!(stdout(&o), "greater\n");
    assert_eq!(stdout(&og(&["ordinal", "cmp", "1+w", "w"], "")), "equal\n");
    assert_eq!(
        stdout(&og(&["ordinal", "eval", "w+w+2"], "")),
        "\"w*2+2\"\n"
    );
}

#[test]
fn tree_of_rank_pipes_into_game_value() {
    let tree = og(&["tree", "build", "--rank", "w+3"], "");
    assert!(tree.status.success());
    let v = og(&["game", "value"], &stdout(&tree));
    assert_eq!(stdout(&v), "\"w+3\"\n");
    assert_eq!(stdout(&og(&["tree", "rank"], &stdout(&tree))), "\"w+3\"\n");
    let reach = og(&["game", "reach", "--beta", "w+1"], &stdout(&tree));
    let r: Value = serde_json::from_str(&stdout(&reach)).unwrap();
    assert!(!r["path"].as_array().unwrap().is_empty());
}

#[test]
fn bridge_chain_pipes_into_solve() {
    let pos = og(&["hex", "bridges", "--k", "2"], "");
    let v = og(&["hex", "solve", "--window", "auto"], &stdout(&pos));
    assert_eq!(stdout(&v), "2\n");
}

#[test]
fn finite_hex() {
    let o = og(&["hex", "solve"], r#"{"rows": ["...", "...", "..."]}"#);
    let s: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(s["winner"], "red");
    let t = og(&["hex", "tour"], r#"{"rows": ["RB", "BR"]}"#);
    let t: Value = serde_json::from_str(&stdout(&t)).unwrap();
    assert_eq!(t["winner"], "red");
    assert!(og(&["hex", "pairing", "--n", "3"], "").status.success());
    let svg = og(&["render", "--format", "svg"], r#"{"rows": ["RB", "BR"]}"#);
    assert!(stdout(&svg).starts_with("<svg"));
}

#[test]
fn exit_codes() {
    // Usage errors name the flag.
    let o = og(&["hex", "bridges"], "");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--k"));
    let o = og(&["draughts", "moves", "--rules", "Z"], "{}");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--rules"));
    // Domain errors.
    assert_eq!(og(&["ordinal", "eval", "w+"], "").status.code(), Some(1));
    assert_eq!(og(&["game", "value"], "not json").status.code(), Some(1));
    assert_eq!(
        og(&["game", "reach", "--beta", "w"], r#"{"children": [{}]}"#)
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn corrupted_king_tree_is_reported_with_squares() {
    let o = og(
        &["draughts", "validate", &fixture("crowded_king_tree.json")],
        "",
    );
    assert_eq!(o.status.code(), Some(1));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["crowded"], serde_json::json!([{"u": 2, "v": 0}]));
}

#[test]
fn draughts_build_round_trips() {
    let tree = tmp("tree.json");
    std::fs::write(&tree, r#"{"children": [{"children": [{}]}, {}]}"#).unwrap();
    let out = tmp("position.json");
    let o = og(
        &[
            "draughts",
            "build",
            "--tree",
            tree.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        "",
    );
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let (p, rules) = DraughtsPosition::from_json(&v).unwrap();
    assert_eq!(serde_json::to_value(p.to_json(rules)).unwrap(), v);
    assert_eq!(stdout(&og(&["draughts", "value"], &text)), "\"2\"\n");
    assert!(og(&["draughts", "validate"], &text).status.success());
    let moves: Value = serde_json::from_str(&stdout(&og(&["draughts", "moves"], &text))).unwrap();
    assert_eq!(moves.as_array().unwrap().len(), 3);
    let tr: Value = serde_json::from_str(&stdout(&og(
        &["draughts", "transfer", "--tree", tree.to_str().unwrap()],
        "",
    )))
    .unwrap();
    assert_eq!(tr["climb"], serde_json::json!([[0, 0]]));
    assert!(stdout(&og(&["render"], &text)).contains('♚'));
    let b = og(
        &[
            "draughts",
            "build",
            "--tree",
            tree.to_str().unwrap(),
            "--rules",
            "B",
        ],
        "",
    );
    assert_eq!(b.status.code(), Some(1));
}

#[test]
fn transfer_follows_a_given_strategy() {
    let tree = tmp("three.json");
    std::fs::write(&tree, r#"{"children": [{}, {}, {}]}"#).unwrap();
    let strat = tmp("strategy.json");
    std::fs::write(&strat, r#"[{"path": [], "choice": 2}]"#).unwrap();
    let o = og(
        &[
            "draughts",
            "transfer",
            "--tree",
            tree.to_str().unwrap(),
            "--strategy",
            strat.to_str().unwrap(),
        ],
        "",
    );
    let tr: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(tr["climb"], serde_json::json!([[2]]));
}

#[test]
fn stone_verbs() {
    let f = fixture("two_pairs.json");
    assert_eq!(stdout(&og(&["stone", "value", &f], "")), "\"undefined\"\n");
    let d: Value = serde_json::from_str(&stdout(&og(&["stone", "dual", &f], ""))).unwrap();
    assert_eq!(d["sets"].as_array().unwrap().len(), 4);
    let c: Value = serde_json::from_str(&stdout(&og(&["stone", "two-color", &f], ""))).unwrap();
    assert_eq!(c["white"].as_array().unwrap().len(), 2);
    let one =
        r#"{"board": ["a", "b"], "first_win_minimal": [["a"]], "second_win_minimal": [["b"]]}"#;
    assert_eq!(stdout(&og(&["stone", "value"], one)), "\"1\"\n");
    let dr: Value = serde_json::from_str(&stdout(&og(&["stone", "dead-region"], one))).unwrap();
    assert_eq!(dr["region"], serde_json::json!(["a"]));
    let steal = r#"{"first": [{"kind": "periodic", "base": [1, 2], "step": 2}],
                    "second": [{"kind": "finite", "vertices": [0]}], "involution": {"reflect": 1}}"#;
    assert_eq!(og(&["stone", "steal-check"], steal).status.code(), Some(1));
}

#[test]
fn seeded_runs_are_identical() {
    let a = og(&["--seed", "7", "verify-all", "--only", "7,10"], "");
    let b = og(&["verify-all", "--only", "7,10", "--seed", "7"], "");
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let sim = |seed: &str| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_og"));
        c.args(["hex", "mirror-sim", "--playouts", "5"])
            .env("OG_SEED", seed);
        c.output().unwrap().stdout
    };
    assert_eq!(sim("3"), sim("3"));
}

#[test]
fn quick_suite_passes() {
    let o = og(&["verify-all", "--quick", "--only", "1,2,3,5,10"], "");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        r[0]["detail"],
        "512 colourings of 3x3; 4x4 sampling skipped"
    );
}
