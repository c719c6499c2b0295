use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use jcas_core::experiments::{
    dump_snapshots, figure_preset, parse_config_onto, run_sweep, write_csv, Engines, SweepConfig,
};

#[derive(Parser, Debug)]
#[command(name = "jcas", version, about = "Analytic and Monte-Carlo sweeps of CSMA joint communication and sensing networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a parameter sweep and write one CSV row per point and window.
    Sweep(SweepArgs),
}

#[derive(clap::Args, Debug)]
struct SweepArgs {
    /// `key = value` configuration file, applied on top of the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Start from a figure preset.
    #[arg(long, value_parser = ["fig3", "fig4", "fig5", "fig6"])]
    preset: Option<String>,
    #[arg(long, value_parser = parse_engines)]
    engines: Option<Engines>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Replications per point and window.
    #[arg(long)]
    reps: Option<usize>,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Also write the first snapshot of every point and window to this directory.
    #[arg(long)]
    dump_snapshots: Option<PathBuf>,
}

fn parse_engines(s: &str) -> Result<Engines, String> {
    s.parse()
}

fn load_config(args: &SweepArgs) -> Result<SweepConfig> {
    let mut cfg = match &args.preset {
        Some(name) => figure_preset(name)?,
        None => SweepConfig::default(),
    };
    match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            cfg = parse_config_onto(&text, cfg).with_context(|| format!("in {}", path.display()))?;
        }
        None if args.preset.is_none() => bail!("nothing to run: pass --config, --preset or both"),
        None => {}
    }
    if let Some(e) = args.engines {
        cfg.engines = e;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(n) = args.reps {
        cfg.n_reps = n;
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn sweep(args: SweepArgs) -> Result<()> {
    let cfg = load_config(&args)?;
    log::info!("sweep configuration:\n{}", cfg.to_config_string());
    if let Some(dir) = &args.dump_snapshots {
        let n = dump_snapshots(&cfg, dir)?;
        log::info!("wrote {n} snapshots to {}", dir.display());
    }
    let rows = run_sweep(&cfg)?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        log::warn!("{failed} of {} rows carry errors; see the error column", rows.len());
    }
    match &args.out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut out = io::BufWriter::new(file);
            write_csv(&mut out, &rows)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            write_csv(&mut out, &rows)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Sweep(args) => sweep(args),
    }
}
