//! `tmcomp`: transfer matrices, composition and overlap studies from TOML
//! run configurations.
//!
//! Exit codes: 0 success, 1 a check failed, 2 config error, 3 numeric failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use tmcomp::propagator::PropagatorConfig;

use crate::config::{require, Document, InvisibilityConfig};
use crate::error::CliError;
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "tmcomp",
    version,
    about = "Transfer matrices of 1D complex potentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Relative tolerance of the integrator.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,

    /// Treat warnings as config errors.
    #[arg(long, global = true)]
    strict: bool,

    /// Add run metadata (version, time, arguments) to the output.
    #[arg(long, global = true)]
    meta: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Transfer matrix over a k grid.
    Transfer,
    /// Reflection and transmission amplitudes over a k grid.
    Amplitudes,
    /// Compose two potentials and compare with direct integration.
    Compose,
    /// Exact against series overlap corrections over an overlap grid.
    OverlapStudy,
    /// Overlap-induced violation of unidirectional invisibility.
    Invisibility,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("tmcomp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let doc = cli.config.as_deref().map(Document::load).transpose()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Config(e.to_string()))?;
    let outcome = pool.install(|| dispatch(cli, doc))?;
    let mut table = outcome.table;
    for w in &table.warnings {
        eprintln!("tmcomp: warning: {w}");
    }
    if cli.strict && !table.warnings.is_empty() {
        return Err(CliError::Config(format!(
            "{} warning(s) under --strict",
            table.warnings.len()
        )));
    }
    if cli.meta {
        let since_epoch = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        table.meta = Some(json!({
            "version": env!("CARGO_PKG_VERSION"),
            "unix_time": since_epoch,
            "args": std::env::args().skip(1).collect::<Vec<_>>(),
        }));
    }
    let text = table.render(cli.format);
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(outcome.passed)
}

fn dispatch(cli: &Cli, doc: Option<Document>) -> Result<commands::Outcome, CliError> {
    let needs_config = || CliError::Config("this subcommand needs --config".into());
    let mut cfg = match cli.command {
        Command::Invisibility => PropagatorConfig::tight(),
        _ => PropagatorConfig::default(),
    };
    if let Some(tol) = cli.rel_tol {
        cfg = cfg.with_rel_tol(tol);
    }
    cfg.validate()?;
    match cli.command {
        Command::Transfer => {
            let doc = doc.ok_or_else(needs_config)?;
            commands::transfer(&require(doc.transfer, "transfer")?, &cfg)
        }
        Command::Amplitudes => {
            let doc = doc.ok_or_else(needs_config)?;
            commands::amplitudes(&require(doc.amplitudes, "amplitudes")?, &cfg)
        }
        Command::Compose => {
            let doc = doc.ok_or_else(needs_config)?;
            commands::compose(&require(doc.compose, "compose")?, &cfg)
        }
        Command::OverlapStudy => {
            let doc = doc.ok_or_else(needs_config)?;
            commands::overlap_study(&require(doc.overlap_study, "overlap_study")?, &cfg)
        }
        Command::Invisibility => {
            let c = match doc {
                Some(d) => require(d.invisibility, "invisibility")?,
                None => InvisibilityConfig::default(),
            };
            commands::invisibility(&c, &cfg, cli.strict)
        }
    }
}
