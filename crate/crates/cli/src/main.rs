use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use qch_lab::config::{apply_override, parse_config};
use qch_lab::preset::{run_preset, PRESET_NAMES};
use qch_lab::resolve_out_dir;
use qch_lab::run::run_scenario;
use qch_lab::verify::run_verify;

/// Hybrid quantum-classical dynamics laboratory.
#[derive(Parser)]
#[command(name = "qch-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a config file.
    Run {
        /// Path to a `key = value` configuration document.
        config_file: PathBuf,
        /// Output directory (default: $QCH_LAB_OUT or ./out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override a config key, e.g. --set alpha=2 --set grid.n=256.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Run a named preset sweep or scripted suite.
    Preset {
        /// One of: fig1 fig2 fig3 fig4 fig5 free-limit sampler-suite.
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Run the free-limit, sampler and convergence verification suites.
    Verify {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config_file,
            out,
            set,
        } => {
            let text = std::fs::read_to_string(&config_file)
                .with_context(|| format!("reading {}", config_file.display()))?;
            let mut config = parse_config(&text)?;
            for s in &set {
                apply_override(&mut config, s)?;
            }
            let dir = config
                .out_dir
                .clone()
                .unwrap_or_else(|| resolve_out_dir(out).join("run"));
            run_scenario(&config, &dir, &format!("run {}", config_file.display()))?;
            println!("run complete: {}", dir.display());
            Ok(())
        }
        Command::Preset { name, out, set } => {
            if !PRESET_NAMES.contains(&name.as_str()) {
                anyhow::bail!("unknown preset `{name}` (expected one of {PRESET_NAMES:?})");
            }
            let dir = resolve_out_dir(out).join(&name);
            run_preset(&name, &dir, &set)?;
            println!("preset {name} complete: {}", dir.display());
            Ok(())
        }
        Command::Verify { out } => {
            let dir = resolve_out_dir(out).join("verify");
            let checks = run_verify(&dir)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                anyhow::bail!("{failed} verification check(s) failed");
            }
            println!("all {} verification checks passed", checks.len());
            Ok(())
        }
    }
}
