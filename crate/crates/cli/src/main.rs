//! Command-line front end for `eldiff`.
//!
//! Exit codes: 0 no difference, 1 difference found, 2 usage or input error,
//! 3 internal invariant violation.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use eldiff::diff::{brute_force_witnesses, default_signature, generate_random_terminology, prepare};
use eldiff::syntax::{parse_concept, parse_signature, parse_terminology, render_report, render_terminology, ReportFormat};
use eldiff::{compute_diff, DiffOptions, Direction, Mode, Signature, Strategy, Terminology, WitnessReport};

const SUBCOMMANDS: [&str; 5] = ["diff", "gen", "oracle", "check", "help"];
const ORACLE_DEPTH: usize = 2;
const ORACLE_CONJ: usize = 2;

#[derive(Parser, Debug)]
#[command(name = "eldiff", version, about = "Logical difference between ELH^r terminologies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute difference witnesses between two terminologies (default).
    Diff(DiffArgs),
    /// Print a seeded random acyclic terminology.
    Gen(GenArgs),
    /// Enumerate witnesses by brute force over small concepts.
    Oracle(OracleArgs),
    /// Check whether a terminology entails `LHS ⊑ RHS`; exit 0 if it does, 1 if not.
    Check(CheckArgs),
}

#[derive(clap::Args, Debug)]
struct DiffArgs {
    /// First terminology file.
    t1: PathBuf,
    /// Second terminology file.
    t2: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::All)]
    mode: ModeArg,
    /// Signature file; defaults to the shared signature of both terminologies.
    #[arg(long)]
    sig: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = DirectionArg::Both)]
    direction: DirectionArg,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
    /// Attach a verified example inclusion to each witness.
    #[arg(long)]
    examples: bool,
    #[command(flatten)]
    sink: Sink,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, value_name = "N")]
    parallel: Option<usize>,
    /// Largest example reported; larger ones are marked as overflow.
    #[arg(long, value_name = "N", default_value_t = 64)]
    max_example_size: usize,
    /// Seed for the simulation worklist order.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
}

#[derive(clap::Args, Debug)]
struct GenArgs {
    #[arg(default_value_t = 20)]
    num_defined: usize,
    #[arg(default_value_t = 3)]
    num_roles: usize,
    #[arg(default_value_t = 0.525)]
    eq_ratio: f64,
    #[arg(default_value_t = 0.304)]
    exists_ratio: f64,
    #[arg(default_value_t = 2)]
    max_conj: usize,
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct OracleArgs {
    t1: PathBuf,
    t2: PathBuf,
    #[arg(long)]
    sig: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = DirectionArg::Both)]
    direction: DirectionArg,
    #[command(flatten)]
    sink: Sink,
}

#[derive(clap::Args, Debug)]
struct CheckArgs {
    /// Terminology file.
    t: PathBuf,
    /// Left-hand concept in s-expression syntax.
    lhs: String,
    /// Right-hand concept in s-expression syntax.
    rhs: String,
}

#[derive(clap::Args, Debug)]
struct Sink {
    #[arg(long, value_enum, default_value_t = OutputArg::Text)]
    output: OutputArg,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Concept,
    Instance,
    Query,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DirectionArg {
    Both,
    Forward,
    Backward,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StrategyArg {
    Auto,
    Notwitness,
    Abox,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OutputArg {
    Text,
    Tsv,
}

impl ModeArg {
    fn modes(self) -> Vec<Mode> {
        match self {
            ModeArg::Concept => vec![Mode::Concept],
            ModeArg::Instance => vec![Mode::Instance],
            ModeArg::Query => vec![Mode::Query],
            ModeArg::All => Mode::ALL.to_vec(),
        }
    }
}

impl DirectionArg {
    fn directions(self) -> Vec<Direction> {
        match self {
            DirectionArg::Both => Direction::BOTH.to_vec(),
            DirectionArg::Forward => vec![Direction::Forward],
            DirectionArg::Backward => vec![Direction::Backward],
        }
    }
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Notwitness => Strategy::NotWitness,
            StrategyArg::Abox => Strategy::Abox,
        }
    }
}

impl From<OutputArg> for ReportFormat {
    fn from(o: OutputArg) -> Self {
        match o {
            OutputArg::Text => ReportFormat::Text,
            OutputArg::Tsv => ReportFormat::Tsv,
        }
    }
}

impl Sink {
    fn emit(&self, text: &str) -> Result<()> {
        emit(self.out.as_deref(), text)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_terminology(path: &Path) -> Result<Terminology> {
    parse_terminology(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_signature(path: &Path) -> Result<Signature> {
    parse_signature(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn run_diff(args: &DiffArgs) -> Result<u8> {
    let t1 = load_terminology(&args.t1)?;
    let t2 = load_terminology(&args.t2)?;
    let sigma = args.sig.as_deref().map(load_signature).transpose()?;
    let opts = DiffOptions {
        modes: args.mode.modes(),
        directions: args.direction.directions(),
        strategy: args.strategy.into(),
        examples: args.examples,
        max_example_size: args.max_example_size,
        parallel: args.parallel != Some(1),
        threads: args.parallel,
        order_seed: args.seed,
        ..DiffOptions::default()
    };
    let report = compute_diff(&t1, &t2, sigma.as_ref(), &opts)?;
    args.sink.emit(&render_report(&report, args.sink.output.into()))?;
    Ok(u8::from(!report.is_empty()))
}

fn run_gen(args: &GenArgs) -> Result<u8> {
    let t = generate_random_terminology(args.num_defined, args.num_roles, args.eq_ratio, args.exists_ratio, args.max_conj, args.seed);
    emit(args.out.as_deref(), &render_terminology(&t))?;
    Ok(0)
}

fn run_oracle(args: &OracleArgs) -> Result<u8> {
    let t1 = load_terminology(&args.t1)?;
    let t2 = load_terminology(&args.t2)?;
    let sigma = match args.sig.as_deref() {
        Some(p) => load_signature(p)?,
        None => default_signature(&t1, &t2),
    };
    let (i1, i2) = (prepare(&t1), prepare(&t2));
    let mut entries = BTreeMap::new();
    for dir in args.direction.directions() {
        let (a, b) = match dir {
            Direction::Forward => (&i1, &i2),
            Direction::Backward => (&i2, &i1),
        };
        for (mode, m) in brute_force_witnesses(a, b, &sigma, ORACLE_DEPTH, ORACLE_CONJ) {
            entries.insert((dir, mode), m);
        }
    }
    let report = WitnessReport { entries };
    args.sink.emit(&render_report(&report, args.sink.output.into()))?;
    Ok(u8::from(!report.is_empty()))
}

fn run_check(args: &CheckArgs) -> Result<u8> {
    let t = load_terminology(&args.t)?;
    let lhs = parse_concept(&args.lhs).context("in LHS")?;
    let rhs = parse_concept(&args.rhs).context("in RHS")?;
    let entailed = prepare(&t).entails(&lhs, &rhs)?;
    println!("{}", if entailed { "entailed" } else { "not entailed" });
    Ok(u8::from(!entailed))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<eldiff::Error>() {
        Some(eldiff::Error::Verification(_)) => 3,
        _ => 2,
    }
}

/// Inserts `diff` when the first argument is not a subcommand or a top-level flag.
fn with_default_subcommand(mut argv: Vec<String>) -> Vec<String> {
    if let Some(first) = argv.get(1) {
        let top_flag = matches!(first.as_str(), "-h" | "--help" | "-V" | "--version");
        if !top_flag && !SUBCOMMANDS.contains(&first.as_str()) {
            argv.insert(1, "diff".to_string());
        }
    }
    argv
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(with_default_subcommand(std::env::args().collect())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = std::panic::catch_unwind(|| match &cli.command {
        Command::Diff(a) => run_diff(a),
        Command::Gen(a) => run_gen(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Check(a) => run_check(a),
    });
    match outcome {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
        Err(_) => ExitCode::from(3),
    }
}
