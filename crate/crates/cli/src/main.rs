mod commands;
mod config;
mod error;
mod grid;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use commands::{EvolveArgs, Report, Scale, SweepParam};
use config::{DeviceConfig, Units};
use error::CliError;
use grid::{Grid, IntRange};

#[derive(Parser, Debug)]
#[command(name = "cqsim", version, about = "Coupled charge-qubit simulator")]
struct Cli {
    /// Device description (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write CSV here instead of stdout; metadata goes to <out>.meta.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output units; defaults to the config's `units` field.
    #[arg(long, global = true, value_enum)]
    units: Option<Units>,
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Network energy relative to (n_a, n_b) = (0, 0): closed form, expansion and exact minimum.
    Energy {
        #[arg(long, default_value = "-2:2", allow_hyphen_values = true)]
        na: IntRange,
        #[arg(long, default_value = "-2:2", allow_hyphen_values = true)]
        nb: IntRange,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        va: Grid,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        vb: Grid,
    },
    /// Two-qubit eigenvalues along a V_a sweep.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        va: Grid,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        vb: f64,
    },
    /// Time evolution at fixed gate bias.
    Evolve {
        #[arg(long, allow_hyphen_values = true)]
        va: f64,
        #[arg(long, allow_hyphen_values = true)]
        vb: f64,
        /// Initial basis state |n_a n_b⟩.
        #[arg(long, default_value = "00")]
        initial: String,
        #[arg(long)]
        duration: f64,
        /// Sampling interval.
        #[arg(long)]
        dt: f64,
        /// Include T1/T2 relaxation from the config.
        #[arg(long)]
        dissipative: bool,
    },
    /// CNOT truth table (control qubit b, target qubit a).
    Cnot {
        #[arg(long, default_value_t = 1)]
        control: u8,
        #[arg(long, default_value_t = 20.0)]
        park_factor: f64,
    },
    /// Channel current for each basis state.
    Readout {
        #[arg(long, allow_hyphen_values = true)]
        v_gate: f64,
        #[arg(long)]
        v_ds: f64,
    },
    /// Channel current per basis state along a gate or drain sweep.
    Sweep {
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long, allow_hyphen_values = true)]
        range: Grid,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        v_gate: f64,
        #[arg(long, default_value_t = 0.05)]
        v_ds: f64,
    },
    #[command(subcommand)]
    Config(ConfigCommand),
}

#[derive(Subcommand, Debug)]
enum ConfigCommand {
    /// Print the canonical form of the config, or an example without --config.
    Print,
    /// Check the config and print derived device quantities.
    Validate,
}

fn load(path: &Option<PathBuf>) -> Result<DeviceConfig, CliError> {
    match path {
        Some(p) => DeviceConfig::load(p),
        None => Err(CliError::Config("--config <path> is required".into())),
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn emit(cli: &Cli, name: &str, units: Units, report: Report, started: Instant) -> Result<(), CliError> {
    let Some(out) = &cli.out else {
        std::io::stdout().lock().write_all(&report.csv)?;
        return Ok(());
    };
    std::fs::write(out, &report.csv)?;
    let created = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = json!({
        "tool": "cqsim",
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "args": std::env::args().skip(1).collect::<Vec<_>>(),
        "config": cli.config.as_ref().map(|p| p.display().to_string()),
        "units": Scale::describe(units),
        "created_unix_s": created,
        "elapsed_s": started.elapsed().as_secs_f64(),
        "results": Value::Object(report.meta),
    });
    let mut text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    text.push('\n');
    std::fs::write(sidecar_path(out), text)?;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let started = Instant::now();
    if let Command::Config(sub) = &cli.command {
        return match sub {
            ConfigCommand::Print => {
                let cfg = match &cli.config {
                    Some(p) => DeviceConfig::load(p)?,
                    None => DeviceConfig::example(),
                };
                match &cli.out {
                    Some(out) => std::fs::write(out, cfg.to_json())?,
                    None => std::io::stdout().lock().write_all(cfg.to_json().as_bytes())?,
                }
                Ok(())
            }
            ConfigCommand::Validate => {
                let cfg = load(&cli.config)?;
                let units = cli.units.unwrap_or(cfg.units);
                let facts = commands::device_summary(&cfg, Scale::new(units))?;
                println!("ok: {facts}");
                Ok(())
            }
        };
    }

    let cfg = load(&cli.config)?;
    let units = cli.units.unwrap_or(cfg.units);
    let scale = Scale::new(units);
    let (name, report) = match &cli.command {
        Command::Energy { na, nb, va, vb } => ("energy", commands::energy(&cfg, scale, *na, *nb, va, vb)?),
        Command::Spectrum { va, vb } => ("spectrum", commands::spectrum(&cfg, scale, va, *vb)?),
        Command::Evolve {
            va,
            vb,
            initial,
            duration,
            dt,
            dissipative,
        } => {
            let args = EvolveArgs {
                va: *va,
                vb: *vb,
                initial,
                duration: *duration,
                dt: *dt,
                dissipative: *dissipative,
            };
            ("evolve", commands::evolve(&cfg, scale, &args)?)
        }
        Command::Cnot { control, park_factor } => ("cnot", commands::cnot(&cfg, scale, *control, *park_factor)?),
        Command::Readout { v_gate, v_ds } => ("readout", commands::readout(&cfg, *v_gate, *v_ds)?),
        Command::Sweep {
            param,
            range,
            v_gate,
            v_ds,
        } => ("sweep", commands::sweep(&cfg, *param, range, *v_gate, *v_ds)?),
        Command::Config(_) => unreachable!(),
    };
    emit(cli, name, units, report, started)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.verbose {
            log::LevelFilter::Debug
        } else {
            log::LevelFilter::Warn
        })
        .parse_default_env()
        .init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cqsim: {e}");
            e.exit_code()
        }
    }
}
