//! `og`: build, evaluate, render and verify games from the command line.
//!
//! Inputs are JSON files (or `-` / nothing for stdin); results are JSON on
//! stdout unless `--out` is given. Exit status: 0 on success, 1 on a domain
//! error or failed check, 2 on a usage error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ordgames::draughts::{
    self, build_king_tree, legal_moves, minimax_value, play_strategy, position_to_ascii,
    position_to_svg, strategy_transfer, validate_king_tree, DraughtsPosition, KingTreeOptions,
    RuleSet, Window,
};
use ordgames::gamecore::{
    build_tree_of_rank, climbing_game, game_from_json, tree_from_json, tree_to_json, Evaluator,
    GameNode, GameValue, Strategy,
};
use ordgames::hex::{
    self, board_to_ascii, board_to_svg, bounded_minimax, check_pairing, decide_winning, gale_tour,
    infinite_to_svg, make_bridge_chain, mirroring_playout, HexBoard, InfiniteHexPosition,
    PeriodicPath, Stone,
};
use ordgames::stoneplacing::{
    breaker_to_2coloring, dead_region, maker_breaker_dual, stone_value, strategy_steal_check,
    Involution, MakerBreakerSolver, SetDescriptor, Side, StonePlacingGame, StonePolicy,
};
use ordgames::verify::{run_criterion, verify_all, CriterionResult, VerifyOptions};
use ordgames::Ordinal;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "og", version, about = "Ordinal values of open infinite games")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Seed for every randomised step.
    #[arg(long, global = true, env = "OG_SEED", default_value_t = 0)]
    seed: u64,
    /// Node or state budget for each search.
    #[arg(
        long = "budget-nodes",
        global = true,
        env = "OG_BUDGET",
        default_value_t = 2_000_000
    )]
    budget: usize,
    /// How many members of each w-family are checked or built.
    #[arg(long = "omega-cutoff", global = true, default_value_t = 5)]
    omega_cutoff: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Cantor normal form ordinals.
    #[command(subcommand)]
    Ordinal(OrdinalCmd),
    /// Well-founded trees.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Open games given as JSON trees.
    #[command(subcommand)]
    Game(GameCmd),
    /// Finite and infinite Hex.
    #[command(subcommand)]
    Hex(HexCmd),
    /// Stone-placing games.
    #[command(subcommand)]
    Stone(StoneCmd),
    /// Infinite Draughts.
    #[command(subcommand)]
    Draughts(DraughtsCmd),
    /// Draw a Hex board or draughts position.
    Render {
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Run the acceptance suite.
    VerifyAll {
        /// Skip the 4x4 Hex sampling.
        #[arg(long)]
        quick: bool,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Subcommand)]
enum OrdinalCmd {
    /// Normal form of an expression such as `w^2*3+w+1`.
    Eval { expr: String },
    /// `less`, `equal` or `greater`.
    Cmp { a: String, b: String },
}

#[derive(Subcommand)]
enum TreeCmd {
    /// A tree of the given rank.
    Build {
        #[arg(long)]
        rank: String,
    },
    /// Rank of a tree.
    Rank { input: Option<PathBuf> },
}

#[derive(Subcommand)]
enum GameCmd {
    /// Value for the open player; a bare tree means its climbing game.
    Value { input: Option<PathBuf> },
    /// A value-reducing strategy, or a value-maintaining one for the
    /// closed player when there is no value.
    Strategy {
        input: Option<PathBuf>,
        /// Tabulation depth for value-maintaining strategies.
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// A path to a position of value `beta`.
    Reach {
        input: Option<PathBuf>,
        #[arg(long)]
        beta: String,
    },
}

#[derive(Subcommand)]
enum HexCmd {
    /// Winner and chain of a full board, by walking the tour.
    Tour { input: Option<PathBuf> },
    /// Exact solution of a finite board, or the windowed value of an
    /// infinite position.
    Solve {
        input: Option<PathBuf>,
        /// `auto` uses the open player's bridge cells; otherwise a JSON list of cells.
        #[arg(long)]
        window: Option<String>,
        #[arg(long, value_enum, default_value_t = Colour::Red)]
        open: Colour,
        /// Largest number of empty cells searched on a finite board.
        #[arg(long, default_value_t = 13)]
        max_empty: usize,
    },
    /// The (n+1) x n pairing, checked against every Red line.
    Pairing {
        #[arg(long)]
        n: usize,
    },
    /// Random playouts against the mirroring strategy.
    MirrorSim {
        #[arg(long, default_value_t = 100)]
        playouts: usize,
        #[arg(long, default_value_t = 200)]
        moves: usize,
        #[arg(long, default_value_t = 20)]
        radius: i32,
    },
    /// A Red path broken by `k` bridges.
    Bridges {
        #[arg(long)]
        k: usize,
    },
    /// Whether a periodic path is winning.
    PathDecide { input: Option<PathBuf> },
}

#[derive(Subcommand)]
enum StoneCmd {
    Value {
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SideArg::First)]
        open: SideArg,
    },
    /// Minimal transversals of one player's winning sets.
    Dual {
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SideArg::First)]
        side: SideArg,
    },
    DeadRegion {
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SideArg::First)]
        open: SideArg,
    },
    /// Proper 2-colouring from Breaker's win on the first player's sets.
    TwoColor { input: Option<PathBuf> },
    /// Strategy-stealing check: `{"first": [...], "second": [...], "involution": ...}`.
    StealCheck {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        playouts: usize,
        #[arg(long, default_value_t = 30)]
        horizon: usize,
    },
}

#[derive(Subcommand)]
enum DraughtsCmd {
    /// Compile a tree into a king-tree position.
    Build {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, default_value = "A", value_parser = parse_rules)]
        rules: RuleSet,
    },
    /// Legal moves of the side to move.
    Moves {
        input: Option<PathBuf>,
        #[arg(long, value_parser = parse_rules)]
        rules: Option<RuleSet>,
    },
    /// Minimax value for White on a window around the pieces.
    Value {
        input: Option<PathBuf>,
        #[arg(long, value_parser = parse_rules)]
        rules: Option<RuleSet>,
        #[arg(long, default_value_t = 2)]
        margin: i64,
    },
    /// King-tree checks; fails with the offending squares.
    Validate { input: Option<PathBuf> },
    /// Black's strategy from a Climber strategy (default: always the first child).
    Transfer {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        strategy: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Colour {
    Red,
    Blue,
}

impl From<Colour> for Stone {
    fn from(c: Colour) -> Stone {
        match c {
            Colour::Red => Stone::Red,
            Colour::Blue => Stone::Blue,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    First,
    Second,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::First => Side::First,
            SideArg::Second => Side::Second,
        }
    }
}

/// A domain failure: message for stderr, exit status 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<Output, Failure>;

enum Output {
    Json(Value),
    Text(String),
    /// Printed, then exit 1.
    Failed(Value),
}

fn read_input(path: &Option<PathBuf>) -> Result<Value, Failure> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| Failure(format!("{}: {e}", p.display())))?
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Failure(format!("input is not JSON: {e}")))
}

fn read_file(path: &Path) -> Result<Value, Failure> {
    read_input(&Some(path.to_path_buf()))
}

fn ordinal(s: &str) -> Result<Ordinal, Failure> {
    Ordinal::parse(s).map_err(|e| Failure(format!("{s:?}: {e}")))
}

fn parse_rules(s: &str) -> Result<RuleSet, String> {
    RuleSet::parse(s).map_err(|_| format!("expected A, B or C, got {s:?}"))
}

fn game_input(v: &Value) -> Result<GameNode, Failure> {
    if v.get("mover").is_some() || v.get("climb").is_some() {
        Ok(game_from_json(v)?)
    } else {
        Ok(climbing_game(&tree_from_json(v)?))
    }
}

fn hex_board(v: &Value) -> Result<HexBoard, Failure> {
    let rows: Vec<String> = serde_json::from_value(v["rows"].clone())?;
    let first: Stone = match v.get("first") {
        Some(f) => serde_json::from_value(f.clone())?,
        None => Stone::Red,
    };
    let rows: Vec<&str> = rows.iter().map(String::as_str).collect();
    Ok(HexBoard::from_rows(&rows, first)?)
}

fn value_json(v: &GameValue) -> Value {
    match v.defined().and_then(Ordinal::as_finite) {
        Some(n) => json!(n),
        None => json!(v),
    }
}

fn run(cmd: Command, g: &Global) -> Outcome {
    let ev = Evaluator::new(g.omega_cutoff, g.budget);
    Ok(match cmd {
        Command::Ordinal(OrdinalCmd::Eval { expr }) => Output::Json(json!(ordinal(&expr)?)),
        Command::Ordinal(OrdinalCmd::Cmp { a, b }) => {
            let word = match ordinal(&a)?.cmp(&ordinal(&b)?) {
                std::cmp::Ordering::Less => "less",
                std::cmp::Ordering::Equal => "equal",
                std::cmp::Ordering::Greater => "greater",
            };
            Output::Text(word.into())
        }
        Command::Tree(TreeCmd::Build { rank }) => {
            Output::Json(tree_to_json(&build_tree_of_rank(&ordinal(&rank)?)))
        }
        Command::Tree(TreeCmd::Rank { input }) => {
            Output::Json(json!(ev.rank(&tree_from_json(&read_input(&input)?)?)?))
        }
        Command::Game(GameCmd::Value { input }) => {
            Output::Json(json!(ev.game_value(&game_input(&read_input(&input)?)?)?))
        }
        Command::Game(GameCmd::Strategy { input, depth }) => {
            let game = game_input(&read_input(&input)?)?;
            let v = ev.game_value(&game)?;
            let (kind, s) = if v.is_defined() {
                ("reducing", ev.value_reducing_strategy(&game)?)
            } else {
                ("maintaining", ev.value_maintaining_strategy(&game, depth)?)
            };
            Output::Json(json!({"value": v, "kind": kind, "moves": s}))
        }
        Command::Game(GameCmd::Reach { input, beta }) => {
            let game = game_input(&read_input(&input)?)?;
            let path = ev.find_position_with_value(&game, &ordinal(&beta)?)?;
            Output::Json(json!({"beta": beta, "path": path}))
        }
        Command::Hex(cmd) => hex_cmd(cmd, g)?,
        Command::Stone(cmd) => stone_cmd(cmd, g)?,
        Command::Draughts(cmd) => draughts_cmd(cmd, g)?,
        Command::Render { input, format } => render(&read_input(&input)?, format)?,
        Command::VerifyAll { quick, only } => {
            let opts = VerifyOptions {
                seed: g.seed,
                budget: g.budget,
                quick,
            };
            let results: Vec<CriterionResult> = if only.is_empty() {
                verify_all(&opts)
            } else {
                only.iter()
                    .map(|&id| {
                        run_criterion(id, &opts)
                            .ok_or_else(|| Failure(format!("no criterion {id}")))
                    })
                    .collect::<Result<_, _>>()?
            };
            for r in &results {
                eprintln!(
                    "{:>2} {:<24} {} {:>7} ms  {}",
                    r.id,
                    r.name,
                    if r.passed { "pass" } else { "FAIL" },
                    r.millis,
                    r.detail
                );
            }
            let report = json!(results);
            if results.iter().all(|r| r.passed) {
                Output::Json(report)
            } else {
                Output::Failed(report)
            }
        }
    })
}

fn hex_cmd(cmd: HexCmd, g: &Global) -> Outcome {
    Ok(match cmd {
        HexCmd::Tour { input } => {
            let t = gale_tour(&hex_board(&read_input(&input)?)?)?;
            Output::Json(json!(t))
        }
        HexCmd::Solve {
            input,
            window,
            open,
            max_empty,
        } => {
            let v = read_input(&input)?;
            if v.get("rows").is_some() {
                let s = hex::solve(&hex_board(&v)?, max_empty)?;
                return Ok(Output::Json(json!({
                    "winner": s.winner, "plies": s.plies, "best_move": s.best_move, "positions": s.positions,
                })));
            }
            let pos: InfiniteHexPosition = serde_json::from_value(v)?;
            let open = Stone::from(open);
            let cells = match window.as_deref() {
                None | Some("auto") => pos.bridge_cells(open),
                Some(list) => {
                    serde_json::from_str(list).map_err(|e| Failure(format!("--window: {e}")))?
                }
            };
            Output::Json(value_json(&bounded_minimax(&pos, &cells, open, g.budget)?))
        }
        HexCmd::Pairing { n } => {
            let p = hex::asymmetric_pairing(n);
            match check_pairing(n) {
                Ok(lines) => Output::Json(
                    json!({"rows": p.rows, "cols": p.cols, "pairs": p.pairs(), "lines_checked": lines}),
                ),
                Err(line) => Output::Failed(json!({"pairs": p.pairs(), "red_wins_with": line})),
            }
        }
        HexCmd::MirrorSim {
            playouts,
            moves,
            radius,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let reports: Vec<_> = (0..playouts)
                .map(|_| mirroring_playout(&mut rng, moves, radius))
                .collect();
            let broken: usize = reports
                .iter()
                .map(|r| r.broken_pairs + r.blocked_replies)
                .sum();
            let out = json!({"playouts": playouts, "moves": moves, "failures": broken});
            if broken == 0 {
                Output::Json(out)
            } else {
                Output::Failed(out)
            }
        }
        HexCmd::Bridges { k } => Output::Json(json!(make_bridge_chain(k))),
        HexCmd::PathDecide { input } => {
            let p: PeriodicPath = serde_json::from_value(read_input(&input)?)?;
            p.validate()?;
            Output::Json(json!({"winning": decide_winning(&p)}))
        }
    })
}

fn stone_cmd(cmd: StoneCmd, g: &Global) -> Outcome {
    let game = |input: &Option<PathBuf>| -> Result<StonePlacingGame, Failure> {
        Ok(StonePlacingGame::from_json(&read_input(input)?)?)
    };
    Ok(match cmd {
        StoneCmd::Value { input, open } => {
            Output::Json(json!(stone_value(&game(&input)?, open.into(), g.budget)?))
        }
        StoneCmd::Dual { input, side } => {
            let gm = game(&input)?;
            let d = maker_breaker_dual(gm.len(), gm.wins(side.into()))?;
            let named: Vec<Vec<&str>> = d
                .sets
                .iter()
                .map(|s| s.iter().map(|&v| gm.labels()[v].as_str()).collect())
                .collect();
            Output::Json(json!({"sets": named, "degenerate": d.degenerate}))
        }
        StoneCmd::DeadRegion { input, open } => {
            let gm = game(&input)?;
            let dr = dead_region(&gm, open.into(), g.budget)?;
            let region: Vec<&str> = dr.region.iter().map(|&v| gm.labels()[v].as_str()).collect();
            Output::Json(json!({"value": dr.value, "region": region, "plan": dr.plan}))
        }
        StoneCmd::TwoColor { input } => {
            let gm = game(&input)?;
            let (n, sets) = (gm.len(), gm.wins(Side::First).to_vec());
            let fam = sets.clone();
            let mk = move || -> Box<dyn StonePolicy> { Box::new(MakerBreakerSolver::new(n, &fam)) };
            let c = breaker_to_2coloring(n, &sets, &mk)?;
            let name = |vs: &[usize]| -> Vec<String> {
                vs.iter().map(|&v| gm.labels()[v].clone()).collect()
            };
            Output::Json(json!({"white": name(&c.white), "black": name(&c.black)}))
        }
        StoneCmd::StealCheck {
            input,
            playouts,
            horizon,
        } => {
            let v = read_input(&input)?;
            let first: Vec<SetDescriptor> = serde_json::from_value(v["first"].clone())?;
            let second: Vec<SetDescriptor> = serde_json::from_value(v["second"].clone())?;
            let inv: Involution = serde_json::from_value(v["involution"].clone())?;
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            Output::Json(json!(strategy_steal_check(
                &first, &second, &inv, &mut rng, playouts, horizon
            )?))
        }
    })
}

fn draughts_cmd(cmd: DraughtsCmd, g: &Global) -> Outcome {
    let position =
        |input: &Option<PathBuf>| -> Result<(DraughtsPosition, Option<RuleSet>), Failure> {
            Ok(DraughtsPosition::from_json(&read_input(input)?)?)
        };
    let opts = KingTreeOptions {
        omega_cutoff: g.omega_cutoff,
        ..Default::default()
    };
    Ok(match cmd {
        DraughtsCmd::Build { tree, rules: rs } => {
            let kt = build_king_tree(&tree_from_json(&read_file(&tree)?)?, rs, opts)?;
            Output::Json(kt.position.to_json(Some(rs)))
        }
        DraughtsCmd::Moves { input, rules: flag } => {
            let (p, from) = position(&input)?;
            Output::Json(json!(legal_moves(&p, flag.or(from).unwrap_or(RuleSet::A))?))
        }
        DraughtsCmd::Value {
            input,
            rules: flag,
            margin,
        } => {
            let (p, from) = position(&input)?;
            let v = minimax_value(
                &p,
                flag.or(from).unwrap_or(RuleSet::A),
                Window::around(&p, margin),
                g.budget,
            )?;
            Output::Json(json!(v))
        }
        DraughtsCmd::Validate { input } => {
            let (p, _) = position(&input)?;
            let r = validate_king_tree(&p);
            if r.ok() {
                Output::Json(json!(r))
            } else {
                Output::Failed(json!(r))
            }
        }
        DraughtsCmd::Transfer { tree, strategy } => {
            let t = tree_from_json(&read_file(&tree)?)?;
            let kt = build_king_tree(&t, RuleSet::A, opts)?;
            let climber = match strategy {
                Some(p) => parse_strategy(&read_file(&p)?)?,
                None => Strategy {
                    fallback: Some(0),
                    ..Default::default()
                },
            };
            let black = strategy_transfer(&kt, &climber, g.budget)?;
            let plays = play_strategy(&kt, &black, 4 * kt.nodes.len() + 8)?;
            let traced: Vec<Vec<usize>> = plays
                .iter()
                .map(|p| draughts::trace_playout(&kt, &p.stops))
                .collect::<Result<_, _>>()?;
            Output::Json(json!({"black": black, "playouts": plays, "climb": traced}))
        }
    })
}

/// `[{"path": [...], "choice": n}, ...]`, optionally wrapped as
/// `{"moves": [...], "fallback": n}`.
fn parse_strategy(v: &Value) -> Result<Strategy, Failure> {
    let (list, fallback) = match v {
        Value::Array(_) => (v.clone(), None),
        _ => (
            v["moves"].clone(),
            v.get("fallback")
                .and_then(Value::as_u64)
                .map(|n| n as usize),
        ),
    };
    let entries: Vec<(Vec<usize>, usize)> = serde_json::from_value::<Vec<Value>>(list)?
        .iter()
        .map(|e| {
            Ok((
                serde_json::from_value(e["path"].clone())?,
                serde_json::from_value(e["choice"].clone())?,
            ))
        })
        .collect::<Result<_, serde_json::Error>>()?;
    Ok(Strategy {
        moves: entries.into_iter().collect(),
        fallback,
    })
}

fn render(v: &Value, format: Format) -> Outcome {
    let text = if v.get("pieces").is_some() || v.get("ladders").is_some() {
        let (p, _) = DraughtsPosition::from_json(v)?;
        match format {
            Format::Ascii => position_to_ascii(&p),
            Format::Svg => position_to_svg(&p),
        }
    } else if v.get("rows").is_some() {
        let b = hex_board(v)?;
        match format {
            Format::Ascii => board_to_ascii(&b),
            Format::Svg => board_to_svg(&b, gale_tour(&b).ok().as_ref()),
        }
    } else if v.get("cells").is_some() {
        let p: InfiniteHexPosition = serde_json::from_value(v.clone())?;
        match format {
            Format::Svg => infinite_to_svg(&p, 8),
            Format::Ascii => {
                return Err(Failure("infinite Hex positions render as svg only".into()))
            }
        }
    } else {
        return Err(Failure(
            "input is neither a Hex board nor a draughts position".into(),
        ));
    };
    Ok(Output::Text(text))
}

fn emit(text: &str, out: &Option<PathBuf>) -> io::Result<()> {
    match out {
        Some(p) => fs::write(p, text),
        None => {
            let mut s = io::stdout().lock();
            s.write_all(text.as_bytes())?;
            s.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (output, code) = match run(cli.command, &cli.global) {
        Ok(Output::Json(v)) => (serde_json::to_string_pretty(&v).unwrap() + "\n", 0),
        Ok(Output::Text(t)) => (if t.ends_with('\n') { t } else { t + "\n" }, 0),
        Ok(Output::Failed(v)) => (serde_json::to_string_pretty(&v).unwrap() + "\n", 1),
        Err(Failure(msg)) => {
            eprintln!("og: {msg}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(&output, &cli.global.out) {
        eprintln!("og: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
