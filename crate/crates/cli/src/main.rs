//! `hl`: exponent tables, verification runs and sharpness experiments
//! from the command line.
//!
//! Exit codes: 0 success, 1 usage or domain error, 2 inconclusive result
//! under --strict.

mod commands;
mod config;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{RawConfig, RawFlags, RunConfig};

#[derive(Parser)]
#[command(name = "hl", version, about = "Hardy-Littlewood exponent calculator and sharpness lab")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exponent tuple of one theorem for one instance
    Exponents(CommonArgs),
    /// All applicable theorems for one instance, side by side
    Table(CommonArgs),
    /// Mixed-norm / operator-norm ratios on sampled or loaded tensors
    Verify(CommonArgs),
    /// Perturbation scan of a theorem tuple, optionally with growth runs
    Sharpness(CommonArgs),
    /// Admissibility classification over a 3d exponent grid
    Region(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Config file with `key = value` lines mirroring the flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// Theorem selector (main, dimant, ar, aron, mu, ot, vector, critical, critical-iso, paulino)
    #[arg(long)]
    theorem: Option<String>,
    /// Degree of the forms
    #[arg(short)]
    m: Option<String>,
    /// Space exponents, comma-separated exact rationals ("10", "4/3", "inf"); a single value is replicated
    #[arg(short)]
    p: Option<String>,
    /// Summing parameter r (vector-valued case)
    #[arg(short)]
    r: Option<String>,
    /// Summing parameter q (vector-valued case)
    #[arg(short)]
    q: Option<String>,
    /// Mixed-norm exponents (verify), or the grid axis (region), comma-separated
    #[arg(short)]
    t: Option<String>,
    /// Tensor sizes, comma-separated
    #[arg(long = "n-list")]
    n_list: Option<String>,
    /// Trials per size
    #[arg(long)]
    trials: Option<String>,
    /// Base seed for all sampling
    #[arg(long)]
    seed: Option<String>,
    /// Multistart restarts for norm estimation
    #[arg(long)]
    restarts: Option<String>,
    /// Enumeration budget for the exact norm oracle
    #[arg(long)]
    budget: Option<String>,
    /// Output format: json, csv or pretty
    #[arg(long)]
    format: Option<String>,
    /// Output path (base path for sharpness/region artifacts)
    #[arg(long)]
    out: Option<String>,
    /// Exit 2 when results are inconclusive
    #[arg(long)]
    strict: bool,
    /// Perturbation sizes for sharpness, comma-separated
    #[arg(long)]
    eps: Option<String>,
    /// JSON tensor file to verify instead of sampling
    #[arg(long)]
    tensor: Option<String>,
}

fn resolve(args: &CommonArgs) -> Result<RunConfig, String> {
    let file = match &args.config {
        Some(path) => RawConfig::from_file(path).map_err(|e| e.to_string())?,
        None => RawConfig::default(),
    };
    let flags = RawFlags {
        theorem: args.theorem.as_deref(),
        m: args.m.as_deref(),
        p: args.p.as_deref(),
        r: args.r.as_deref(),
        q: args.q.as_deref(),
        t: args.t.as_deref(),
        n_list: args.n_list.as_deref(),
        trials: args.trials.as_deref(),
        seed: args.seed.as_deref(),
        restarts: args.restarts.as_deref(),
        budget: args.budget.as_deref(),
        format: args.format.as_deref(),
        out: args.out.as_deref(),
        strict: args.strict,
        eps: args.eps.as_deref(),
        tensor: args.tensor.as_deref(),
    };
    RunConfig::build(flags, &file).map_err(|e| e.to_string())
}

fn run() -> Result<i32, String> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not errors
            if e.use_stderr() {
                eprint!("{e}");
                return Ok(1);
            }
            print!("{e}");
            return Ok(0);
        }
    };
    let (args, cmd): (&CommonArgs, fn(&RunConfig) -> commands::CmdResult) = match &cli.cmd {
        Cmd::Exponents(a) => (a, commands::cmd_exponents),
        Cmd::Table(a) => (a, commands::cmd_table),
        Cmd::Verify(a) => (a, commands::cmd_verify),
        Cmd::Sharpness(a) => (a, commands::cmd_sharpness),
        Cmd::Region(a) => (a, commands::cmd_region),
    };
    let cfg = resolve(args)?;
    cmd(&cfg)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
