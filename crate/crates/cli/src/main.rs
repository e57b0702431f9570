//! Command-line driver for the relsplit verification suites.

mod config;
mod report;
mod scenario;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use relsplit::scenarios::Order;
use relsplit::verify;

use config::{FileConfig, ParamFlags, VerifyConfig};

/// Error of a command, mapped onto the exit code.
#[derive(Debug)]
pub enum Failure {
    /// Invalid flags, config or parameters; exit code 2.
    Usage(String),
    /// Failure while running or writing results; exit code 1.
    Run(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Run(m) => f.write_str(m),
        }
    }
}

#[derive(Parser)]
#[command(name = "relsplit", version, about = "Verify space-time splitting identities and worked scenarios")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run identity suites and print a JSON report.
    Verify {
        /// Suite to run; repeat for several. Defaults to all suites.
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Sample points per check.
        #[arg(long)]
        points: Option<usize>,
        /// Tolerance replacing the built-in tolerance of every positive check.
        #[arg(long)]
        tol: Option<f64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// TOML config file; flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Compare a scenario with its closed forms and print a CSV profile.
    Scenario {
        /// One of minkowski, rotating, expanding, schiff.
        name: String,
        /// Order of the sphere-pair solution.
        #[arg(long, value_enum, default_value_t = OrderArg::Exact)]
        order: OrderArg,
        /// Rows of the profile table.
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long)]
        seed: Option<u32>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Dimensional audits.
    Dims {
        #[command(subcommand)]
        cmd: DimsCmd,
    },
}

#[derive(Subcommand)]
enum DimsCmd {
    /// Print one line per audited equation: id, dimension, PASS/FAIL.
    Check {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        params: ParamFlags,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Zeroth,
    First,
    Exact,
}

impl From<OrderArg> for Order {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Zeroth => Order::Zeroth,
            OrderArg::First => Order::First,
            OrderArg::Exact => Order::Exact,
        }
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Run(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Run(e.to_string())),
    }
}

fn exec(cli: Cli) -> Result<bool, Failure> {
    match cli.cmd {
        Cmd::Verify { suites, seed, points, tol, out, config, params } => {
            let file = FileConfig::load(config.as_deref())?;
            let cfg = VerifyConfig::merge(file, suites, seed, points, tol, out, &params)?;
            let rep = report::verify(&cfg)?;
            write_out(cfg.out.as_deref(), &(rep.to_json() + "\n"))?;
            eprintln!("{}: {} passed, {} failed", rep.status, rep.passed, rep.failed);
            Ok(rep.ok())
        }
        Cmd::Scenario { name, order, points, seed, out, config, params } => {
            let file = FileConfig::load(config.as_deref())?;
            let p = params.apply(file.params.unwrap_or_default())?;
            if points < 2 {
                return Err(Failure::Usage("points must be at least 2".into()));
            }
            let seed = seed.or(file.seed.map(|s| s as u32)).unwrap_or(0);
            let mut buf = Vec::new();
            let res = scenario::run(&name, p, order.into(), points, seed, &mut buf)?;
            write_out(out.or(file.out).as_deref(), &String::from_utf8_lossy(&buf))?;
            for l in &res.lines {
                eprintln!("{l}");
            }
            Ok(res.ok)
        }
        Cmd::Dims { cmd: DimsCmd::Check { seed, config, params } } => {
            let file = FileConfig::load(config.as_deref())?;
            let p = params.apply(file.params.unwrap_or_default())?;
            let audits = verify::audits(p, seed.or(file.seed).unwrap_or(0)).map_err(|e| Failure::Run(e.to_string()))?;
            let mut ok = true;
            let mut text = String::new();
            for a in audits {
                let line = match a.check() {
                    Ok(d) => format!("{}\t{d}\tPASS\n", a.id),
                    Err(e) => {
                        ok = false;
                        format!("{}\t{e}\tFAIL\n", a.id)
                    }
                };
                text.push_str(&line);
            }
            write_out(None, &text)?;
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match exec(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Failure::Usage(_) => 2,
                Failure::Run(_) => 1,
            })
        }
    }
}
