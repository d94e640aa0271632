use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use spinnerlab::config::{SuiteConfig, SEED_ENV};
use spinnerlab::lottery::{archimedean_regularity_witness, WitnessMode};
use spinnerlab::query::{compare_values, evaluate, evaluate_value, parse_query};
use spinnerlab::spinner::{finite_grid_stabilizer, FiniteGrid};
use spinnerlab::suites::run_all;
use spinnerlab::Rational;

#[derive(Parser)]
#[command(name = "spinnerlab", version, about = "Exact Archimedean and hyperfinite models of a fair spinner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a query such as "grid: P([0,1/4) u {1/3})".
    Eval { query: String },
    /// Order two probability queries and give their ratio.
    Compare { left: String, right: String },
    /// Run every registered property suite.
    Suite {
        #[arg(long)]
        config: Option<PathBuf>,
        /// One JSON object per suite.
        #[arg(long)]
        json: bool,
        /// Report duration_ms as 0 for reproducible output.
        #[arg(long)]
        no_timing: bool,
    },
    /// Witness that a regular uniform Archimedean point mass overruns one.
    Witness {
        #[arg(long, value_enum)]
        prop: Prop,
        #[arg(long, value_parser = parse_rational)]
        eps: Rational,
        /// Orbit rotation for --prop 4.2, default 1/(n+1).
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        rotation: Option<Rational>,
    },
    /// Rotation stabilizer of a finite grid.
    Stabilizer {
        /// Comma-separated rationals, e.g. "0,1/4,1/3".
        #[arg(long, conflicts_with = "uniform", required_unless_present = "uniform")]
        grid: Option<String>,
        /// The grid {k/n : 0 <= k < n}.
        #[arg(long)]
        uniform: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Prop {
    #[value(name = "4.1")]
    Total,
    #[value(name = "4.2")]
    Orbit,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|_| format!("`{s}` is not an exact rational p/q"))
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Eval { query } => match parse_query(&query).and_then(|q| evaluate(&q)) {
            Ok(e) => {
                println!("{e}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Compare { left, right } => {
            let value = |t: &str| parse_query(t).and_then(|q| evaluate_value(&q));
            match value(&left).and_then(|a| compare_values(&a, &value(&right)?)) {
                Ok(e) => {
                    println!("{e}");
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Suite { config, json, no_timing } => suite(config, json, !no_timing),
        Command::Witness { prop, eps, rotation } => {
            let mode = match prop {
                Prop::Total => WitnessMode::UniformPoints,
                Prop::Orbit => WitnessMode::RationalOrbit,
            };
            match archimedean_regularity_witness(&eps, mode, rotation.as_ref()) {
                Ok(w) => {
                    println!("{}", w.to_json());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Stabilizer { grid, uniform } => {
            let grid = match (grid, uniform) {
                (_, Some(n)) => FiniteGrid::uniform(n),
                (Some(list), None) => {
                    let points: Result<Vec<Rational>, String> =
                        list.split(',').filter(|p| !p.trim().is_empty()).map(parse_rational).collect();
                    match points {
                        Ok(p) => FiniteGrid::from_points(p),
                        Err(e) => return fail(e),
                    }
                }
                (None, None) => unreachable!("clap requires one of --grid and --uniform"),
            };
            match grid.and_then(|g| finite_grid_stabilizer(&g)) {
                Ok(st) => {
                    println!("{}", st.to_json());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
    }
}

fn suite(config: Option<PathBuf>, json: bool, timing: bool) -> ExitCode {
    let cfg = match config {
        Some(path) => SuiteConfig::load(&path),
        None => Ok(SuiteConfig::default()),
    }
    .and_then(|c| c.with_seed_override(std::env::var(SEED_ENV).ok().as_deref()));
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cfg.low_coverage() {
        eprintln!(
            "warning: low-coverage sampling (max_denominator = {}, cases = {}); passes are weak evidence",
            cfg.max_denominator, cfg.cases
        );
    }
    let outcomes = run_all(&cfg, timing);
    let mut out = std::io::stdout().lock();
    for o in &outcomes {
        if json {
            let _ = writeln!(out, "{}", o.to_json_line());
            continue;
        }
        let _ = writeln!(out, "{:<7} {:<20} {:>6} cases {:>6} ms", o.verdict, o.suite, o.cases, o.duration_ms);
        for c in o.counterexamples.iter().take(5) {
            let _ = writeln!(out, "        counterexample: {c}");
        }
        if o.counterexamples.len() > 5 {
            let _ = writeln!(out, "        ... {} more", o.counterexamples.len() - 5);
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    if !json {
        let _ = writeln!(out, "{}/{} suites passed", outcomes.len() - failed, outcomes.len());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
