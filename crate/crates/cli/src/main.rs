//! `coarsehyp`: runs named suites and writes JSON reports or SVG figures.
//!
//! Exit codes: 0 when every verdict passes, 1 when some verdict fails (the
//! report carries the witness), 2 on usage or configuration errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use coarsehyp::render::{render, Figure};
use coarsehyp::report::Report;
use coarsehyp::suites::{self, Check, SuiteConfig};

#[derive(Parser)]
#[command(name = "coarsehyp", version, about = "Finite-scale checks of coarse hyperbolic maps")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags take precedence over its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Tree depth (or comb spine length, plane radius, figure depth).
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Cone levels.
    #[arg(long, global = true)]
    levels: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Sample count for seeded scans.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Numerical tolerance for equality checks.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Write the report or figure here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Omit the generation comment from SVG output.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Hyperbolicity estimate of a model: f2tree, plane, comb, cantor,
    /// interval, circle, or a compact-model JSON file.
    Delta { model: String },
    /// One checker on one named map.
    Probe {
        /// example8, comb, fold, identity, constant, ray or cantor-lift.
        map: String,
        #[arg(long, value_enum)]
        check: CheckArg,
    },
    /// A full verification suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
    /// An SVG figure of the tree or of its image in the disc.
    Render {
        #[arg(value_enum)]
        figure: FigureArg,
    },
    /// Combines saved reports into one.
    Report {
        #[arg(long, required = true, num_args = 1..)]
        merge: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Lsl,
    Radial,
    Visual,
    Surjective,
    #[value(name = "n-to-1")]
    NTo1,
    Stability,
    ProductBound,
}

impl From<CheckArg> for Check {
    fn from(c: CheckArg) -> Check {
        match c {
            CheckArg::Lsl => Check::Lsl,
            CheckArg::Radial => Check::Radial,
            CheckArg::Visual => Check::Visual,
            CheckArg::Surjective => Check::Surjective,
            CheckArg::NTo1 => Check::NTo1,
            CheckArg::Stability => Check::Stability,
            CheckArg::ProductBound => Check::ProductBound,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Example8,
    Cone,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureArg {
    Figure1,
    Figure2,
}

/// A usage or configuration error, reported with exit code 2.
struct Failure(String);

impl From<coarsehyp::Error> for Failure {
    fn from(e: coarsehyp::Error) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("coarsehyp: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    configure_threads()?;
    let cfg = load_config(&cli.common)?;
    let c = &cli.common;
    let report = match cli.command {
        Command::Delta { model } => suites::delta(&model, &cfg)?,
        Command::Probe { map, check } => suites::probe(&map, check.into(), &cfg)?,
        Command::Verify { suite: SuiteArg::Example8 } => suites::verify_example8(&cfg)?,
        Command::Verify { suite: SuiteArg::Cone } => suites::verify_cone(&cfg)?,
        Command::Render { figure } => {
            let figure = match figure {
                FigureArg::Figure1 => Figure::Tree,
                FigureArg::Figure2 => Figure::Image,
            };
            let stamp = (!c.no_timestamp).then(timestamp);
            let svg = render(figure, cfg.depth.unwrap_or(4), stamp.as_deref())?;
            emit(c.out.as_deref(), &svg)?;
            return Ok(0);
        }
        Command::Report { merge } => {
            let reports = merge
                .iter()
                .map(|p| Report::from_json(&read(p)?).map_err(|e| Failure(format!("{}: {e}", p.display()))))
                .collect::<Result<Vec<_>, _>>()?;
            Report::merge(&reports)?
        }
    };
    emit(c.out.as_deref(), &report.to_json())?;
    let failures = report.failures();
    if failures.is_empty() {
        eprintln!("{}: {} verdicts pass", report.suite, report.verdicts.len());
        Ok(0)
    } else {
        let names: Vec<&str> = failures.iter().map(|v| v.name.as_str()).collect();
        eprintln!("{}: {} of {} verdicts fail: {}", report.suite, names.len(), report.verdicts.len(), names.join(", "));
        Ok(1)
    }
}

/// Defaults, then the config file, then flags.
fn load_config(c: &Common) -> Result<SuiteConfig, Failure> {
    let mut cfg = match &c.config {
        Some(p) => SuiteConfig::from_json(&read(p)?).map_err(|e| Failure(format!("{}: {e}", p.display())))?,
        None => SuiteConfig::default(),
    };
    if c.depth.is_some() {
        cfg.depth = c.depth;
    }
    if c.levels.is_some() {
        cfg.levels = c.levels;
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if c.samples.is_some() {
        cfg.samples = c.samples;
    }
    if let Some(t) = c.tolerance {
        cfg.tolerance = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("COARSEHYP_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure(format!("COARSEHYP_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure(format!("thread pool: {e}")))
}

fn read(p: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(p).map_err(|e| Failure(format!("{}: {e}", p.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn timestamp() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    format!("unix {secs}")
}
