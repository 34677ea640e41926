//! `twistcav`: run torsional-cavity scenarios from a JSON config.
//!
//! ```text
//! twistcav <command> <config.json> [--out PATH] [--csv PATH] [--key value ...]
//! ```
//!
//! Exit codes: 0 success, 1 config error, 2 numerical or guard error,
//! 3 threshold failure.

mod commands;
mod config;
mod error;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "twistcav",
    version,
    about = "Torsional optomechanics in a birefringent cavity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cavity eigenmodes and the ordinary/extraordinary frequencies.
    Modes(RunArgs),
    /// Δω, G, n, γ, Γ (and δ when enabled).
    Params(RunArgs),
    /// Integrate the master equation; writes the trajectory CSV.
    Evolve(RunArgs),
    /// Steady-state populations.
    Steady(RunArgs),
    /// Principal-value frequency shift δ.
    Shift(RunArgs),
    /// Compare the zero-temperature master equation with the exact
    /// discretized bath.
    Oracle(RunArgs),
    /// One parameter summary per value of the single list-valued key.
    Sweep(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Scenario config (JSON).
    config: PathBuf,
    /// Config overrides as `--key value` pairs (dotted keys for nesting),
    /// plus `--out PATH` for the summary and `--csv PATH` for tables.
    #[arg(
        trailing_var_arg = true,
        allow_hyphen_values = true,
        value_name = "--KEY VALUE"
    )]
    rest: Vec<String>,
}

struct Invocation {
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
    overrides: Vec<(String, String)>,
}

fn split_rest(rest: &[String]) -> Result<Invocation, CliError> {
    let mut inv = Invocation {
        out: None,
        csv: None,
        overrides: Vec::new(),
    };
    let mut it = rest.iter();
    while let Some(flag) = it.next() {
        let key = flag
            .strip_prefix("--")
            .ok_or_else(|| CliError::Config(format!("expected `--key value`, got `{flag}`")))?;
        let (key, value) = match key.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| CliError::Config(format!("`--{key}` needs a value")))?;
                (key.to_string(), v.clone())
            }
        };
        match key.as_str() {
            "out" => inv.out = Some(PathBuf::from(value)),
            "csv" => inv.csv = Some(PathBuf::from(value)),
            _ => inv.overrides.push((key, value)),
        }
    }
    Ok(inv)
}

fn emit<T: Serialize>(summary: &T, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(summary)
        .map_err(|e| CliError::Config(format!("cannot serialize summary: {e}")))?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(command: Command) -> Result<(), CliError> {
    let (args, name) = match &command {
        Command::Modes(a) => (a, "modes"),
        Command::Params(a) => (a, "params"),
        Command::Evolve(a) => (a, "evolve"),
        Command::Steady(a) => (a, "steady"),
        Command::Shift(a) => (a, "shift"),
        Command::Oracle(a) => (a, "oracle"),
        Command::Sweep(a) => (a, "sweep"),
    };
    let inv = split_rest(&args.rest)?;
    let mut doc = config::read_document(&args.config)?;
    config::apply_overrides(&mut doc, &inv.overrides)?;
    let out = inv.out.as_deref();
    let default_csv = |file: &str| inv.csv.clone().unwrap_or_else(|| PathBuf::from(file));
    log::debug!("running `{name}` with {}", args.config.display());

    match command {
        Command::Modes(_) => emit(&commands::cmd_modes(&doc)?, out),
        Command::Params(_) => emit(&commands::cmd_params(&doc)?, out),
        Command::Steady(_) => emit(&commands::cmd_steady(&doc)?, out),
        Command::Shift(_) => emit(&commands::cmd_shift(&doc)?, out),
        Command::Evolve(_) => emit(
            &commands::cmd_evolve(&doc, &default_csv("trajectory.csv"))?,
            out,
        ),
        Command::Sweep(_) => emit(&commands::cmd_sweep(&doc, &default_csv("sweep.csv"))?, out),
        Command::Oracle(_) => {
            let summary = commands::cmd_oracle(&doc, inv.csv.as_deref())?;
            emit(&summary, out)?;
            match &summary.oracle {
                Some(o) if !o.passed => Err(CliError::Threshold(commands::oracle_advice(o))),
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Numerical {
                source:
                    twistcav::Error::RecurrenceGuard {
                        suggested_modes, ..
                    },
                ..
            } = &e
            {
                eprintln!("advice: set `oracle.modes` to at least {suggested_modes}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
