//! Command-line front end for the hybrid logic toolkit.
//!
//! Subcommands: `parse`, `check`, `prove`, `countermodel`, `oracle`, `play`.
//! Human-readable text by default; `--json` switches every subcommand to
//! machine-readable output that reloads through the library's own parsers.
//!
//! Exit codes: 0 success, 1 other errors, 2 usage, 3 formula or sequent
//! syntax error, 4 invalid or unreadable model, 5 the prover gave up within
//! its budget.

pub mod session;

use std::fs;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use hybrid_games::calculus::{parse_sequent, prove, Goal, SearchConfig, SearchOutcome};
use hybrid_games::game::{Game, GameState, Locus, MoveStyle, Player, Role, StrategyTree};
use hybrid_games::kripke::{oracle_valid, Model, OracleBounds, OracleVerdict};
use hybrid_games::syntax::{parse as parse_formula, Formula};

use session::{Choice, PlaySession};

pub const ENV_MAX_STEPS: &str = "HYGAMES_MAX_STEPS";
pub const ENV_MAX_FRESH: &str = "HYGAMES_MAX_FRESH_NOMINALS";

#[derive(Debug, Error)]
pub enum CliError {
    /// Formula or sequent text did not parse (exit 3).
    #[error("{0}")]
    Syntax(String),
    /// Model file missing or invalid (exit 4).
    #[error("{0}")]
    Model(String),
    /// The prover exhausted its budget (exit 5).
    #[error("search gave up: {0}")]
    Unknown(String),
    /// Anything else (exit 1).
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Syntax(_) => 3,
            CliError::Model(_) => 4,
            CliError::Unknown(_) => 5,
            CliError::Other(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "hygames",
    version,
    about = "Hybrid modal logic: semantic games, sequent proofs, countermodels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a formula and report its canonical form, degree and symbols.
    Parse(ParseArgs),
    /// Evaluate a formula on a model, optionally with a winning strategy.
    Check(CheckArgs),
    /// Search for a proof that a formula (or sequent) is valid.
    Prove(ProveArgs),
    /// Search for a countermodel via failed proof search.
    Countermodel(ProveArgs),
    /// Brute-force validity over all named models within a world bound.
    Oracle(OracleArgs),
    /// Play the semantic game against the engine.
    Play(PlayArgs),
}

#[derive(Args, Debug)]
pub struct ParseArgs {
    /// Formula text, e.g. "[](j | ~[]p)".
    pub formula: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("locus").required(true).args(["world", "global"])))]
pub struct CheckArgs {
    /// Path to a model JSON file.
    #[arg(long)]
    pub model: PathBuf,
    /// Evaluate at this world.
    #[arg(long)]
    pub world: Option<String>,
    /// Evaluate at every world of the model.
    #[arg(long)]
    pub global: bool,
    /// Also emit My winning strategy (for the claim if true, against it if
    /// false).
    #[arg(long)]
    pub strategy: bool,
    /// Emit the strategy as GraphViz instead of JSON.
    #[arg(long)]
    pub dot: bool,
    /// Move generation: direct truth clauses, or the named-model
    /// reformulation (one representative per world, or all nominals).
    #[arg(long, value_enum, default_value_t = StyleArg::Direct)]
    pub style: StyleArg,
    #[arg(long)]
    pub json: bool,
    pub formula: String,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum StyleArg {
    Direct,
    Named,
    NamedAll,
}

impl From<StyleArg> for MoveStyle {
    fn from(s: StyleArg) -> MoveStyle {
        match s {
            StyleArg::Direct => MoveStyle::Direct,
            StyleArg::Named => MoveStyle::Named,
            StyleArg::NamedAll => MoveStyle::NamedAllNominals,
        }
    }
}

#[derive(Args, Debug)]
pub struct ProveArgs {
    /// Treat the goal as a sequent "G |- D" instead of a formula.
    #[arg(long)]
    pub sequent: bool,
    /// Rule applications before giving up (default 10000, or HYGAMES_MAX_STEPS).
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Fresh nominals the search may mint (default 8, or HYGAMES_MAX_FRESH_NOMINALS).
    #[arg(long)]
    pub max_fresh: Option<usize>,
    /// Emit the countermodel (when found) as GraphViz too.
    #[arg(long)]
    pub dot: bool,
    #[arg(long)]
    pub json: bool,
    pub goal: String,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Largest number of worlds to try.
    #[arg(long, default_value_t = 3)]
    pub max_worlds: usize,
    #[arg(long)]
    pub json: bool,
    pub formula: String,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("locus").required(true).args(["world", "global"])))]
pub struct PlayArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub world: Option<String>,
    #[arg(long)]
    pub global: bool,
    /// Which player you take: I (me, the proponent side of the claim) or Y.
    #[arg(long = "as", value_enum, default_value_t = SideArg::I)]
    pub side: SideArg,
    pub formula: String,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SideArg {
    I,
    Y,
}

impl From<SideArg> for Player {
    fn from(s: SideArg) -> Player {
        match s {
            SideArg::I => Player::I,
            SideArg::Y => Player::Y,
        }
    }
}

pub fn run(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Parse(args) => cmd_parse(args, out),
        Command::Check(args) => cmd_check(args, out),
        Command::Prove(args) => cmd_prove(args, out, false),
        Command::Countermodel(args) => cmd_prove(args, out, true),
        Command::Oracle(args) => cmd_oracle(args, out),
        Command::Play(args) => cmd_play(args, input, out),
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Other(e.to_string())
}

fn formula(text: &str) -> Result<Formula, CliError> {
    parse_formula(text).map_err(|e| CliError::Syntax(e.to_string()))
}

fn load_model(path: &PathBuf) -> Result<Model, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Model(format!("cannot read {}: {e}", path.display())))?;
    Model::from_json(&text).map_err(|e| CliError::Model(e.to_string()))
}

fn cmd_parse(args: ParseArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let f = formula(&args.formula)?;
    let nominals: Vec<String> = f.nominals().iter().map(|n| n.to_string()).collect();
    let props: Vec<String> = f.props().iter().map(|p| p.to_string()).collect();
    if args.json {
        let value = serde_json::json!({
            "formula": f.to_string(),
            "degree": f.degree(),
            "elementary": f.is_elementary(),
            "nominals": nominals,
            "propositions": props,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&value).unwrap()).map_err(io_err)?;
    } else {
        writeln!(out, "formula: {f}").map_err(io_err)?;
        writeln!(out, "degree: {}", f.degree()).map_err(io_err)?;
        writeln!(out, "nominals: {}", nominals.join(", ")).map_err(io_err)?;
        writeln!(out, "propositions: {}", props.join(", ")).map_err(io_err)?;
    }
    Ok(())
}

fn locus_of(model: &Model, world: &Option<String>, _global: bool) -> Result<Locus, CliError> {
    match world {
        Some(name) => model
            .world_named(name)
            .map(Locus::At)
            .ok_or_else(|| CliError::Model(format!("the model has no world named {name:?}"))),
        None => Ok(Locus::Global),
    }
}

/// Renders a strategy tree as indented bracket notation.
fn render_strategy(tree: &StrategyTree, model: &Model) -> String {
    fn go(t: &StrategyTree, model: &Model, depth: usize, out: &mut String) {
        for _ in 0..depth {
            out.push_str("  ");
        }
        out.push_str(&format!("[{}]^{}\n", t.state.render(model), t.label));
        for c in &t.children {
            go(c, model, depth + 1, out);
        }
    }
    let mut s = String::new();
    go(tree, model, 0, &mut s);
    s
}

fn cmd_check(args: CheckArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let model = load_model(&args.model)?;
    let f = formula(&args.formula)?;
    let locus = locus_of(&model, &args.world, args.global)?;
    let truth = match locus {
        Locus::At(w) => model.eval(w, &f),
        Locus::Global => model.eval_global(&f),
    }
    .map_err(|e| CliError::Other(e.to_string()))?;

    // My winning strategy: for the claim when true, against it when false.
    let strategy = if args.strategy {
        let role = if truth { Role::P } else { Role::O };
        let state = GameState {
            role,
            locus,
            formula: std::sync::Arc::new(f.clone()),
        };
        let game = Game::with_style(&model, args.style.into());
        Some(
            game.winning_strategy(&state)
                .map_err(|e| CliError::Other(e.to_string()))?,
        )
    } else {
        None
    };

    if args.json {
        let mut value = serde_json::json!({ "result": truth });
        if let Some(tree) = &strategy {
            value["strategy"] = tree.to_json(&model);
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&value).unwrap()).map_err(io_err)?;
    } else {
        writeln!(out, "{truth}").map_err(io_err)?;
        if let Some(tree) = &strategy {
            if args.dot {
                write!(out, "{}", tree.to_dot(&model)).map_err(io_err)?;
            } else {
                writeln!(out, "winning strategy for I:").map_err(io_err)?;
                write!(out, "{}", render_strategy(tree, &model)).map_err(io_err)?;
            }
        }
    }
    Ok(())
}

fn search_config(args: &ProveArgs) -> Result<SearchConfig, CliError> {
    let env_usize = |key: &str| -> Result<Option<usize>, CliError> {
        match std::env::var(key) {
            Ok(v) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| CliError::Other(format!("{key} must be a number, found {v:?}"))),
            Err(_) => Ok(None),
        }
    };
    let mut config = SearchConfig::default();
    if let Some(steps) = args.max_steps.or(env_usize(ENV_MAX_STEPS)?) {
        config.max_steps = steps;
    }
    if let Some(fresh) = args.max_fresh.or(env_usize(ENV_MAX_FRESH)?) {
        config.max_fresh_nominals = fresh;
    }
    Ok(config)
}

fn cmd_prove(
    args: ProveArgs,
    out: &mut dyn Write,
    want_countermodel: bool,
) -> Result<(), CliError> {
    let goal: Goal = if args.sequent {
        parse_sequent(&args.goal)
            .map_err(|e| CliError::Syntax(e.to_string()))?
            .into()
    } else {
        formula(&args.goal)?.into()
    };
    let config = search_config(&args)?;
    let outcome = prove(goal, &config).map_err(|e| CliError::Other(e.to_string()))?;

    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&outcome).unwrap()).map_err(io_err)?;
    }
    match &outcome {
        SearchOutcome::Proof(tree) => {
            if !args.json {
                if want_countermodel {
                    writeln!(out, "provable: no countermodel exists").map_err(io_err)?;
                } else {
                    writeln!(
                        out,
                        "proof found ({} rule applications):",
                        tree.node_count()
                    )
                    .map_err(io_err)?;
                    write!(out, "{}", tree.render()).map_err(io_err)?;
                }
            }
            Ok(())
        }
        SearchOutcome::Countermodel { model, branch } => {
            if !args.json {
                writeln!(out, "countermodel found:").map_err(io_err)?;
                writeln!(out, "{}", model.to_json()).map_err(io_err)?;
                if args.dot {
                    write!(out, "{}", model.to_dot()).map_err(io_err)?;
                }
                writeln!(out, "open branch:").map_err(io_err)?;
                for s in branch {
                    writeln!(out, "  {s}").map_err(io_err)?;
                }
            }
            Ok(())
        }
        SearchOutcome::Unknown(report) => Err(CliError::Unknown(format!(
            "{} (after {} rule applications, {} fresh nominals)",
            report.reason, report.steps_used, report.fresh_used
        ))),
    }
}

fn cmd_oracle(args: OracleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let f = formula(&args.formula)?;
    let bounds = OracleBounds::worlds(args.max_worlds);
    let verdict = oracle_valid(&f, &bounds).map_err(|e| CliError::Other(e.to_string()))?;
    match verdict {
        OracleVerdict::ValidUpToBounds => {
            if args.json {
                let value = serde_json::json!({ "valid": true, "max_worlds": args.max_worlds });
                writeln!(out, "{}", serde_json::to_string_pretty(&value).unwrap())
                    .map_err(io_err)?;
            } else {
                writeln!(out, "valid up to {} worlds", args.max_worlds).map_err(io_err)?;
            }
        }
        OracleVerdict::Counterexample { model, world } => {
            if args.json {
                let value = serde_json::json!({
                    "valid": false,
                    "world": model.world_name(world),
                    "counterexample": serde_json::to_value(&model).unwrap(),
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&value).unwrap())
                    .map_err(io_err)?;
            } else {
                writeln!(out, "false at {} of:", model.world_name(world)).map_err(io_err)?;
                writeln!(out, "{}", model.to_json()).map_err(io_err)?;
            }
        }
    }
    Ok(())
}

fn cmd_play(args: PlayArgs, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<(), CliError> {
    let model = load_model(&args.model)?;
    let f = formula(&args.formula)?;
    let locus = locus_of(&model, &args.world, args.global)?;
    let start = GameState {
        role: Role::P,
        locus,
        formula: std::sync::Arc::new(f),
    };
    let human: Player = args.side.into();
    let mut sess =
        PlaySession::new(model, start, human).map_err(|e| CliError::Other(e.to_string()))?;
    writeln!(out, "you play {human}; the engine plays {}", human.dual()).map_err(io_err)?;

    loop {
        let (mover, moves) = sess.turn();
        writeln!(out, "[{}]^{}", sess.current().render(sess.model()), mover).map_err(io_err)?;
        if moves.is_empty() {
            let winner = sess.winner().expect("leaf reached");
            let yours = if winner == human {
                " - you win"
            } else {
                " - you lose"
            };
            writeln!(out, "game over: {winner} wins{yours}").map_err(io_err)?;
            return Ok(());
        }
        if mover == human {
            writeln!(out, "your move:").map_err(io_err)?;
            for (i, s) in moves.iter().enumerate() {
                writeln!(out, "  {i}. [{}]", s.render(sess.model())).map_err(io_err)?;
            }
            write!(out, "> ").map_err(io_err)?;
            out.flush().map_err(io_err)?;
            let mut line = String::new();
            if input.read_line(&mut line).map_err(io_err)? == 0 {
                writeln!(out, "end of input, leaving the game").map_err(io_err)?;
                return Ok(());
            }
            let line = line.trim();
            if line == "q" || line == "quit" {
                writeln!(out, "leaving the game").map_err(io_err)?;
                return Ok(());
            }
            let index: usize = match line.parse() {
                Ok(i) => i,
                Err(_) => {
                    writeln!(out, "enter a move number or q").map_err(io_err)?;
                    continue;
                }
            };
            match sess.play_step(Choice::Move(index)) {
                Ok(_) => {}
                Err(e) => writeln!(out, "{e}").map_err(io_err)?,
            }
        } else {
            let next = sess
                .play_step(Choice::Engine)
                .map_err(|e| CliError::Other(e.to_string()))?
                .clone();
            writeln!(out, "engine plays: [{}]", next.render(sess.model())).map_err(io_err)?;
        }
    }
}
