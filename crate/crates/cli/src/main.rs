use std::path::PathBuf;
use std::process::ExitCode;

use chanlab::concentration::ObjectiveFamily;
use chanlab_harness::config::{parse_constant, parse_grid, COMMANDS};
use chanlab_harness::{emit_report, run, ExperimentConfig, HarnessError, OutputFormat};
use clap::Parser;

/// Seeded experiments on random quantum channels and concentration of
/// measure. Flags override values from `--config`.
#[derive(Debug, Parser)]
#[command(name = "chanlab", version, after_help = after_help())]
struct Cli {
    /// Experiment to run (default: violation).
    command: Option<String>,
    /// TOML file whose keys mirror the long flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated k grid.
    #[arg(long)]
    k: Option<String>,
    /// Comma-separated d grid (default 4k², 16k²).
    #[arg(long)]
    d: Option<String>,
    /// Comma-separated m grid (default d/8, d/2).
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    subspace_trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    starts: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Random probes per section.
    #[arg(long)]
    probes: Option<usize>,
    /// Objective family: g, opnorm or schatten4.
    #[arg(long)]
    family: Option<String>,
    /// Scalar-operation budget for the product-channel output.
    #[arg(long)]
    budget: Option<u64>,
    /// name=value; repeatable.
    #[arg(long = "constant", value_name = "NAME=VALUE")]
    constants: Vec<String>,
    /// Report entropies in bits instead of nats.
    #[arg(long)]
    bits: bool,
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Output path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn after_help() -> String {
    format!(
        "Commands: {}\nConstants: c_win, c0, a, alpha, distance, points, cloud, center_trials\n\
         Exit codes: 0 success, 1 invalid config, 2 budget/optimizer error, 3 I/O error",
        COMMANDS.join(", ")
    )
}

fn build_config(cli: Cli) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.clone(), source })?;
            ExperimentConfig::from_toml(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(c) = cli.command {
        cfg.command = c;
    }
    if let Some(k) = &cli.k {
        cfg.k = parse_grid(k)?;
    }
    if let Some(d) = &cli.d {
        cfg.d = parse_grid(d)?;
    }
    if let Some(m) = &cli.m {
        cfg.m = parse_grid(m)?;
    }
    macro_rules! take {
        ($($field:ident),*) => { $(if let Some(v) = cli.$field { cfg.$field = v; })* };
    }
    take!(trials, subspace_trials, seed, starts, max_iters, probes, budget);
    if let Some(f) = &cli.family {
        cfg.family = f
            .parse::<ObjectiveFamily>()
            .map_err(|e| HarnessError::Config(format!("--family: {e}")))?;
    }
    for c in &cli.constants {
        let (name, value) = parse_constant(c)?;
        cfg.constants.insert(name, value);
    }
    if cli.bits {
        cfg.bits = true;
    }
    if let Some(f) = &cli.format {
        cfg.format = f.parse::<OutputFormat>()?;
    }
    if cli.out.is_some() {
        cfg.out = cli.out;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = build_config(cli).and_then(|cfg| {
        let report = run(&cfg)?;
        emit_report(&report, cfg.out.as_deref(), cfg.format)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("chanlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
