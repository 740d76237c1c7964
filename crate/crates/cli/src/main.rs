use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use gmud_cli::config::Config;
use gmud_cli::presets;
use gmud_cli::report::render_stability;
use gmud_core::experiment::{
    render_csv, run_sweep, stability_analysis, CsvOptions, SweepResult, SweepSpec, SweepVariable,
};
use gmud_core::partition::enumerate_structures;

/// Coalition stability analysis for group multiuser detection in a CDMA
/// uplink: enumerate coalition structures, evaluate SINR payoffs, decide core
/// membership, and sweep SNR, shadowing, or path-loss exponent.
#[derive(Parser)]
#[command(name = "gmud", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List all coalition structures of an n-player set, plus the Bell count
    Enumerate {
        /// Number of players (1..=12)
        #[arg(long)]
        players: usize,
    },
    /// Report payoffs, rationality, and core membership at the configured
    /// operating point
    Stability {
        /// Config file (flat `key = value` text)
        #[arg(long)]
        config: PathBuf,
        /// Also write a single-point CSV snapshot of the evaluation
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the sweep described by the config and write CSV
    Sweep {
        /// Config file with `sweep.variable` and `sweep.values`
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path (falls back to the config's `output` key)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in preset (fig1..fig5) and write its CSV
    Preset {
        /// Preset name
        #[arg(long)]
        name: String,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        /// Override the preset's master seed
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Enumerate { players } => cmd_enumerate(players),
        Command::Stability { config, out } => cmd_stability(&config, out.as_deref()),
        Command::Sweep { config, out } => cmd_sweep(&config, out),
        Command::Preset { name, out, seed } => cmd_preset(&name, &out, seed),
    }
}

fn cmd_enumerate(players: usize) -> Result<()> {
    let structures = enumerate_structures(players).map_err(|e| anyhow!("{e}"))?;
    for s in &structures {
        println!("{s}");
    }
    println!("B_{players} = {}", structures.len());
    Ok(())
}

fn cmd_stability(config_path: &std::path::Path, out: Option<&std::path::Path>) -> Result<()> {
    let cfg = Config::load(config_path)?;
    let stations = stability_analysis(&cfg.scenario).map_err(|e| anyhow!("{e}"))?;
    print!("{}", render_stability(&cfg.scenario, &stations));

    if let Some(path) = out.or(cfg.output.as_deref()) {
        // Single-point snapshot at the configured operating SNR.
        let spec = SweepSpec::new(SweepVariable::SnrDb, vec![cfg.snr_db])
            .map_err(|e| anyhow!("{e}"))?;
        let result = run_sweep(&cfg.scenario, &spec, cfg.filter.as_deref())
            .map_err(|e| anyhow!("{e}"))?;
        write_csv(&result, &cfg, path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_sweep(config_path: &std::path::Path, out: Option<PathBuf>) -> Result<()> {
    let cfg = Config::load(config_path)?;
    let Some(spec) = cfg.sweep.clone() else {
        bail!(
            "{}: sweep.variable: missing (the sweep command needs a sweep spec)",
            config_path.display()
        );
    };
    let out = out
        .or_else(|| cfg.output.clone())
        .ok_or_else(|| anyhow!("no output path: pass --out or set `output` in the config"))?;
    run_and_write(&cfg, &spec, &out)
}

fn cmd_preset(name: &str, out: &std::path::Path, seed: Option<u64>) -> Result<()> {
    let Some(text) = presets::text(name) else {
        bail!(
            "unknown preset `{name}` (available: {})",
            presets::NAMES.join(", ")
        );
    };
    let mut cfg = Config::from_str(text, &format!("preset:{name}"))?;
    if let Some(seed) = seed {
        cfg.set_seed(seed);
    }
    let spec = cfg.sweep.clone().expect("presets always define a sweep");
    run_and_write(&cfg, &spec, out)
}

fn run_and_write(cfg: &Config, spec: &SweepSpec, out: &std::path::Path) -> Result<()> {
    let result =
        run_sweep(&cfg.scenario, spec, cfg.filter.as_deref()).map_err(|e| anyhow!("{e}"))?;
    write_csv(&result, cfg, out)?;
    println!("wrote {}", out.display());

    let first = summarize_point(&result, 0);
    let last = summarize_point(&result, result.points.len() - 1);
    println!(
        "max group payoff at {} = {}: {first}",
        result.variable.as_str(),
        result.points[0].value
    );
    if result.points.len() > 1 {
        println!(
            "max group payoff at {} = {}: {last}",
            result.variable.as_str(),
            result.points[result.points.len() - 1].value
        );
    }
    Ok(())
}

fn summarize_point(result: &SweepResult, point: usize) -> String {
    result
        .max_group_structure_at(point)
        .into_iter()
        .map(|(station, structure, total)| {
            format!("station {station}: {} ({total:.6e})", structure.label())
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn write_csv(result: &SweepResult, cfg: &Config, path: &std::path::Path) -> Result<()> {
    let opts = CsvOptions {
        echo: cfg.echo_lines(),
        db_offset_column: cfg.db_offset_column,
    };
    std::fs::write(path, render_csv(result, &opts))
        .with_context(|| format!("cannot write {}", path.display()))
}
