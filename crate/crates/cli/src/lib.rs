//! Command-line driver for `gravidec-core`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 numerical non-convergence.

pub mod commands;
pub mod config;
pub mod verify;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use config::{Format, RunConfig};
use verify::Level;

#[derive(Debug, Parser)]
#[command(name = "gravidec", version, about = "Gravitational decoherence kernels, rates and times")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the graviton noise kernel N^{ijkl}(t, t′).
    Kernel(KernelArgs),
    /// Decoherence rate Γ(t_f) by closed form and/or quadrature.
    Gamma(CommonArgs),
    /// Decoherence time from the small-x formulas and by root finding.
    Tdec(CommonArgs),
    /// Rates over a parameter range, one CSV row per point.
    Sweep(CommonArgs),
    /// Run the oracle suites and report pass/fail per check.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Overrides `mc.seed`.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long = "t-prime", default_value_t = 0.0, allow_hyphen_values = true)]
    pub t_prime: f64,
    /// Also emit all 81 components.
    #[arg(long)]
    pub expand: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Accepted for symmetry with the other commands; the suites use fixed inputs.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Only json is supported.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "quick")]
    pub level: Level,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Some verification check failed; the report was written.
    Verification,
    Config(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Verification => 1,
            Failure::Config(_) | Failure::Io(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Verification => f.write_str("verification failed"),
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

fn write_out(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

/// `fig.csv` → `fig.meta.json`.
pub fn metadata_path(out: &Path) -> PathBuf {
    out.with_extension("meta.json")
}

fn load(args: &CommonArgs) -> Result<(RunConfig, Option<PathBuf>), Failure> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.mc.seed = seed;
    }
    let out = args.out.clone().or_else(|| cfg.output.path.clone());
    Ok((cfg, out))
}

fn format_of(args: &CommonArgs, cfg: &RunConfig, default: Format) -> Format {
    args.format.or(cfg.output.format).unwrap_or(default)
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Kernel(a) => {
            let (cfg, out) = load(&a.common)?;
            let text = commands::cmd_kernel(&cfg, format_of(&a.common, &cfg, Format::Json), a.t, a.t_prime, a.expand)?;
            write_out(&text, out.as_deref())
        }
        Command::Gamma(a) => {
            let (cfg, out) = load(&a)?;
            let text = commands::cmd_gamma(&cfg, format_of(&a, &cfg, Format::Json))?;
            write_out(&text, out.as_deref())
        }
        Command::Tdec(a) => {
            let (cfg, out) = load(&a)?;
            let text = commands::cmd_tdec(&cfg, format_of(&a, &cfg, Format::Json))?;
            write_out(&text, out.as_deref())
        }
        Command::Sweep(a) => {
            let (cfg, out) = load(&a)?;
            let text = commands::cmd_sweep(&cfg, format_of(&a, &cfg, Format::Csv))?;
            if let (Some(p), Some(spec)) = (out.as_deref(), cfg.sweep.as_ref()) {
                let meta = commands::sweep_metadata(&cfg, spec)?;
                write_out(&text, Some(p))?;
                write_out(&meta, Some(&metadata_path(p)))
            } else {
                write_out(&text, out.as_deref())
            }
        }
        Command::Verify(a) => {
            if a.format == Some(Format::Csv) {
                return Err(Failure::Config("verify writes json only".into()));
            }
            if let Some(p) = &a.config {
                RunConfig::load(p)?;
            }
            let report = verify::run(a.level, a.seed.unwrap_or(verify::DEFAULT_SEED));
            write_out(&commands::to_json(&report), a.out.as_deref())?;
            if report.all_passed {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

/// Caps the rayon pool from `GRAVIDEC_THREADS`.
pub fn init_threads() -> Result<(), Failure> {
    match std::env::var("GRAVIDEC_THREADS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Failure::Config(format!("GRAVIDEC_THREADS must be a positive integer, got {v:?}")))?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Config(format!("thread pool: {e}")))
        }
        Err(_) => Ok(()),
    }
}
