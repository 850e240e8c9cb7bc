// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! `sns run | validate | report`.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use toml::Value;

use crate::error::{Error, Result};

use super::config::ExperimentConfig;
use super::report::report;
use super::results::write_results;
use super::run::run_points;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "SNS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "sns", version, about = "Spin-noise spectra of dipole-dipole coupled atom pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct ConfigArgs {
    /// Experiment configuration (flat TOML).
    config: PathBuf,
    /// Master seed, overriding `master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory, overriding `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `key=value` override of a configuration entry; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the recipe and write the result set.
    Run {
        #[command(flatten)]
        args: ConfigArgs,
        /// Worker threads (default: $SNS_THREADS, else all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check a configuration without running it.
    Validate {
        #[command(flatten)]
        args: ConfigArgs,
    },
    /// Aggregate a result directory into plot-ready CSV files.
    Report {
        dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(args: &ConfigArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(&args.config, &args.overrides)?;
    if let Some(seed) = args.seed {
        let seed =
            i64::try_from(seed).map_err(|_| Error::Config(format!("seed {seed} exceeds the TOML integer range")))?;
        cfg = cfg.with_override("master_seed", Value::Integer(seed))?;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

fn threads(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return if n > 0 { Ok(n) } else { Err(Error::Config("--threads must be at least 1".into())) };
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_config_error() {
        EXIT_CONFIG
    } else {
        EXIT_RUNTIME
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Validate { args } => {
            let cfg = load(&args)?;
            println!("ok: {} with {} point(s), config hash {}", cfg.recipe, cfg.points().len(), cfg.hash());
            Ok(())
        }
        Command::Run { args, threads: flag } => {
            let cfg = load(&args)?;
            let n = threads(flag)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            let (set, error) = pool.install(|| run_points(&cfg));
            write_results(&set, &cfg.output_dir)?;
            println!(
                "{}: {} point(s) written to {} in {:.1} s",
                cfg.recipe,
                set.points.len(),
                cfg.output_dir.display(),
                set.elapsed_s
            );
            error.map_or(Ok(()), Err)
        }
        Command::Report { dir, out } => {
            for path in report(&dir, out.as_deref())? {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns the exit code.
pub fn cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let parsed = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(parsed.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            exit_code(&e)
        }
    }
}
