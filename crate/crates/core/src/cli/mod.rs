//! Command-line scenario runner.
//!
//! Every subcommand reads a versioned TOML scenario, runs one module and
//! writes a single table as CSV or JSON. Output depends only on the
//! configuration and seed, never on the thread count.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use config::{load_config, Format, ScenarioConfig};
use output::Table;

#[derive(Debug, Parser)]
#[command(name = "fracgreen", version, about = "Fractional Green kernels and existence criteria")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Scenario configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    /// Overrides `discrete.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Existence criteria for the configured volume and measure.
    Criteria,
    /// Green function by the Riesz, subordination and volume routes.
    Green,
    /// Quasi-metric, weak maximum principle, Ptolemy and minimality checks.
    KernelCheck,
    /// Iterates on a finite kernel space with the ψ_k lower bounds.
    Iterate,
    /// Minimal solutions by Picard iteration on Euclidean grids.
    Solve,
}

/// Applies the seed and format overrides; the result is what gets echoed into
/// the output. `--out` is left out so the destination never changes the bytes.
pub fn resolve(cli: &Cli) -> Result<ScenarioConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config PATH is required".into()))?;
    let mut cfg = load_config(&path.to_string_lossy())?;
    if let Some(seed) = cli.seed {
        cfg.discrete.seed = seed;
    }
    if let Some(f) = cli.format {
        cfg.output.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    Ok(cfg)
}

pub fn dispatch(command: Command, cfg: &ScenarioConfig) -> Result<Table> {
    match command {
        Command::Criteria => commands::cmd_criteria(cfg),
        Command::Green => commands::cmd_green(cfg),
        Command::KernelCheck => commands::cmd_kernel_check(cfg),
        Command::Iterate => commands::cmd_iterate(cfg),
        Command::Solve => commands::cmd_solve(cfg),
    }
}

/// Runs one invocation and returns the rendered output.
pub fn run(cli: &Cli) -> Result<String> {
    let cfg = resolve(cli)?;
    let text = dispatch(cli.command, &cfg)?.render(cfg.output.format, &cfg);
    let dest = cli.out.clone().or_else(|| cfg.output.path.as_ref().map(PathBuf::from));
    match dest {
        Some(p) => std::fs::write(&p, &text).map_err(|e| Error::Io(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(text)
}

/// Process entry point: parses arguments, runs and maps errors to exit codes.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return 2;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return 1;
        }
    }
    match run(&cli) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
