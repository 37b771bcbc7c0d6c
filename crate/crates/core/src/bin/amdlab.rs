use std::path::PathBuf;

use amdlab::experiment::{
    run_isolate_table, run_search, run_tournament, write_isolate, write_tournament, ExperimentConfig,
};
use anyhow::Context;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "amdlab", version, about = "Double-auction mechanism search and evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search the mechanism space against the fixed baseline markets.
    Search(Common),
    /// Play replicated games between the listed markets.
    Tournament(Common),
    /// Evaluate mechanisms one at a time against single-strategy populations.
    Isolate(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration; every value has a default.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of search steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    replications: Option<usize>,
    /// Market preset or genome string; repeat to list several. Replaces the
    /// fixed markets (search), the entrants (tournament) or the rows (isolate).
    #[arg(long = "preset")]
    presets: Vec<String>,
}

fn load(common: &Common, pick: impl FnOnce(&mut ExperimentConfig) -> &mut Vec<String>) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path).with_context(|| format!("loading {}", path.display()))?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(steps) = common.steps {
        cfg.search.steps = steps;
    }
    if let Some(out) = &common.out {
        cfg.out = out.clone();
    }
    if let Some(r) = common.replications {
        cfg.replications = r;
    }
    if !common.presets.is_empty() {
        *pick(&mut cfg) = common.presets.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Search(c) => {
            let cfg = load(&c, |cfg| &mut cfg.search.fixed)?;
            let hofs = run_search(&cfg)?;
            for (r, hof) in hofs.iter().enumerate() {
                println!("replication {r}: hall of fame");
                for e in &hof.active {
                    println!("  {:<10} {:.4} ({} games)  {}", e.label, e.mean, e.games, e.genome);
                }
            }
        }
        Command::Tournament(c) => {
            let cfg = load(&c, |cfg| &mut cfg.tournament.markets)?;
            let report = run_tournament(&cfg)?;
            write_tournament(&report, &cfg.out)?;
            println!("{:<10} {:>12} {:>10} {:>8} {:>8}", "market", "cumulative", "sd", "score", "sd");
            for r in &report.rows {
                println!(
                    "{:<10} {:>12.3} {:>10.3} {:>8.4} {:>8.4}",
                    r.name, r.cumulative.mean, r.cumulative.sd, r.score.mean, r.score.sd
                );
            }
        }
        Command::Isolate(c) => {
            let cfg = load(&c, |cfg| &mut cfg.isolate.mechanisms)?;
            let cells = run_isolate_table(&cfg)?;
            write_isolate(&cells, &cfg.out)?;
            println!("{:<12} {:<4} {:>9} {:>8} {:>9} {:>8}", "mechanism", "", "E_a", "sd", "alpha", "sd");
            for c in &cells {
                let r = &c.report;
                println!(
                    "{:<12} {:<4} {:>9.3} {:>8.3} {:>9.3} {:>8.3}",
                    c.name, r.strategy, r.ea.mean, r.ea.sd, r.alpha.mean, r.alpha.sd
                );
            }
        }
    }
    Ok(())
}
