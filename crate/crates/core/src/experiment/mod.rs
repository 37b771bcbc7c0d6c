//! Experiment harness: presets, configuration and the three commands.

mod config;
mod isolate;
pub mod presets;

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use anyhow::Context;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::game::{run_game, GameResult};
use crate::metrics::{write_runs_csv, RunRecord};
use crate::search::{grey_box_amd, step_csv_header, step_csv_row, HallOfFame, SearchConfig, SearchState};

pub use config::{ExperimentConfig, GameSection, IsolateSection, SearchSection, TournamentSection};
pub use isolate::{run_isolate, IsolateConfig, IsolateReport, Summary};

/// Seed of an independent stream `stream` under a master seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer over the combined input
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn search_config(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<SearchConfig> {
    Ok(SearchConfig {
        steps: cfg.search.steps,
        samples: cfg.search.samples,
        hof_capacity: cfg.search.hof_capacity,
        hof_samples: cfg.search.hof_samples,
        anneal: cfg.search.anneal,
        fixed: ExperimentConfig::markets(&cfg.search.fixed)?,
        game: cfg.game.template(),
        seed,
    })
}

const CHECKPOINT: &str = "checkpoint.json";
const STEPS: &str = "steps.csv";

/// Runs (or resumes) one search, writing `steps.csv`, `checkpoint.json`
/// and `hof.csv` under `dir`.
pub fn run_search_in(scfg: &SearchConfig, dir: &Path) -> anyhow::Result<HallOfFame> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let checkpoint = dir.join(CHECKPOINT);
    let mut state = if checkpoint.exists() {
        let text = fs::read_to_string(&checkpoint)?;
        let state: SearchState = serde_json::from_str(&text).context("reading checkpoint")?;
        log::info!("resuming {} from step {}", dir.display(), state.step);
        state
    } else {
        SearchState::new(scfg.hof_capacity)
    };

    let steps_path = dir.join(STEPS);
    keep_rows_before(&steps_path, state.step)?;
    let fresh = !steps_path.exists();
    let mut writer = csv::Writer::from_writer(OpenOptions::new().create(true).append(true).open(&steps_path)?);
    if fresh {
        writer.write_record(step_csv_header(scfg))?;
        writer.flush()?;
    }
    grey_box_amd(scfg, &mut state, |rec, st| {
        let io = |e: std::io::Error| crate::error::ConfigError::Io(e);
        writer.write_record(step_csv_row(scfg, rec)).map_err(|e| io(e.into()))?;
        writer.flush().map_err(io)?;
        let json = serde_json::to_string_pretty(st).expect("search state serializes");
        fs::write(&checkpoint, json).map_err(io)?;
        log::info!("step {} T={:.3} hof {} max {:?}", rec.step, rec.temperature, rec.hof_active, rec.hof_max);
        Ok(())
    })?;
    write_hof_csv(&state.hof, File::create(dir.join("hof.csv"))?)?;
    Ok(state.hof)
}

/// Drops step rows at or after `step` (left by an interrupted run).
fn keep_rows_before(path: &Path, step: usize) -> anyhow::Result<()> {
    if !path.exists() {
        return Ok(());
    }
    let lines: Vec<String> = BufReader::new(File::open(path)?).lines().collect::<Result<_, _>>()?;
    let mut kept = Vec::with_capacity(lines.len());
    for (i, line) in lines.into_iter().enumerate() {
        let row_step = line.split(',').next().and_then(|s| s.parse::<usize>().ok());
        if i == 0 || row_step.is_some_and(|s| s < step) {
            kept.push(line);
        }
    }
    let mut f = File::create(path)?;
    for line in kept {
        writeln!(f, "{line}")?;
    }
    Ok(())
}

pub fn write_hof_csv<W: Write>(hof: &HallOfFame, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["status", "label", "genome", "mean", "games"])?;
    for (status, entries) in [("active", &hof.active), ("inactive", &hof.inactive)] {
        for e in entries {
            w.write_record([status, &e.label, &e.genome.to_string(), &e.mean.to_string(), &e.games.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// The `search` command: one search per replication.
pub fn run_search(cfg: &ExperimentConfig) -> anyhow::Result<Vec<HallOfFame>> {
    if cfg.replications == 1 {
        return Ok(vec![run_search_in(&search_config(cfg, cfg.seed)?, &cfg.out)?]);
    }
    (0..cfg.replications)
        .into_par_iter()
        .map(|r| {
            let scfg = search_config(cfg, derive_seed(cfg.seed, r as u64))?;
            run_search_in(&scfg, &cfg.out.join(format!("rep{r}")))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TournamentRow {
    pub name: String,
    pub genome: String,
    /// Sum of daily combined scores over a game.
    pub cumulative: Summary,
    /// Mean daily combined score over a game.
    pub score: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TournamentReport {
    pub rows: Vec<TournamentRow>,
    pub games: Vec<GameResult>,
}

/// The `tournament` command: replicated games between the listed markets.
pub fn run_tournament(cfg: &ExperimentConfig) -> anyhow::Result<TournamentReport> {
    let markets = ExperimentConfig::markets(&cfg.tournament.markets)?;
    anyhow::ensure!(markets.len() >= 2, "a tournament needs at least two markets");
    let genomes: Vec<_> = markets.iter().map(|(_, g)| *g).collect();
    let template = cfg.game.template();
    let games = (0..cfg.replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, r as u64));
            Ok(run_game(&template.build(genomes.clone(), &mut rng))?)
        })
        .collect::<anyhow::Result<Vec<GameResult>>>()?;
    let rows = markets
        .iter()
        .enumerate()
        .map(|(m, (name, g))| TournamentRow {
            name: name.clone(),
            genome: g.to_string(),
            cumulative: Summary::of(games.iter().map(|r| r.daily[m].iter().map(|d| d.combined).sum())),
            score: Summary::of(games.iter().map(|r| r.scores[m])),
        })
        .collect();
    Ok(TournamentReport { rows, games })
}

pub fn write_tournament(report: &TournamentReport, dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("tournament.csv"))?;
    w.write_record(["market", "genome", "cumulative_mean", "cumulative_sd", "score_mean", "score_sd", "games"])?;
    for r in &report.rows {
        w.write_record([
            r.name.clone(),
            r.genome.clone(),
            r.cumulative.mean.to_string(),
            r.cumulative.sd.to_string(),
            r.score.mean.to_string(),
            r.score.sd.to_string(),
            r.cumulative.n.to_string(),
        ])?;
    }
    w.flush()?;
    for (i, g) in report.games.iter().enumerate() {
        g.write_daily_csv(File::create(dir.join(format!("game{i}_daily.csv")))?)?;
    }
    Ok(())
}

/// One cell of the isolation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolateCell {
    pub name: String,
    pub report: IsolateReport,
}

pub fn isolate_config(cfg: &ExperimentConfig, name: &str, strategy: crate::traders::StrategyKind, cell: u64) -> anyhow::Result<IsolateConfig> {
    let genome = presets::resolve(name)?;
    Ok(IsolateConfig {
        genome,
        strategy,
        traders_per_side: cfg.isolate.traders_per_side,
        num_days: cfg.isolate.days,
        rounds_per_day: cfg.isolate.rounds,
        value_low: cfg.game.value_low,
        value_high: cfg.game.value_high,
        bounds: cfg.game.template().bounds,
        runs: cfg.isolate.runs,
        seed: derive_seed(cfg.seed, cell),
    })
}

/// The `isolate` command: every mechanism against every strategy, alone.
pub fn run_isolate_table(cfg: &ExperimentConfig) -> anyhow::Result<Vec<IsolateCell>> {
    let mut cells = Vec::new();
    for (i, name) in cfg.isolate.mechanisms.iter().enumerate() {
        for (j, &strategy) in cfg.isolate.strategies.iter().enumerate() {
            let cell = (i * cfg.isolate.strategies.len() + j) as u64;
            let report = run_isolate(&isolate_config(cfg, name, strategy, cell)?)?;
            log::info!("{name} / {strategy}: E_a {:.3} alpha {:.3}", report.ea.mean, report.alpha.mean);
            cells.push(IsolateCell { name: name.clone(), report });
        }
    }
    Ok(cells)
}

pub fn write_isolate(cells: &[IsolateCell], dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir)?;
    let runs: Vec<RunRecord> = cells.iter().flat_map(|c| c.report.runs.iter().cloned()).collect();
    write_runs_csv(&runs, File::create(dir.join("isolate_runs.csv"))?)?;
    let mut w = csv::Writer::from_path(dir.join("isolate_summary.csv"))?;
    w.write_record(["mechanism", "genome", "strategy", "ea_mean", "ea_sd", "alpha_mean", "alpha_sd", "runs"])?;
    for c in cells {
        let r = &c.report;
        w.write_record([
            c.name.clone(),
            r.mechanism.clone(),
            r.strategy.to_string(),
            r.ea.mean.to_string(),
            r.ea.sd.to_string(),
            r.alpha.mean.to_string(),
            r.alpha.sd.to_string(),
            r.runs.len().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.game.traders = 8;
        cfg.game.days = 3;
        cfg.game.rounds = 3;
        cfg
    }

    #[test]
    fn seeds_differ_by_stream() {
        assert_ne!(derive_seed(0, 0), derive_seed(0, 1));
        assert_ne!(derive_seed(0, 0), derive_seed(1, 0));
        assert_eq!(derive_seed(5, 9), derive_seed(5, 9));
    }

    #[test]
    fn search_writes_and_resumes() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = desk();
        cfg.search.steps = 3;
        let a = run_search_in(&search_config(&cfg, 1).unwrap(), dir.path()).unwrap();
        let steps = fs::read_to_string(dir.path().join(STEPS)).unwrap();
        assert_eq!(steps.lines().count(), 4);

        // interrupted after step 1: checkpoint at step 2 plus a stray row
        let other = tempfile::tempdir().unwrap();
        cfg.search.steps = 2;
        run_search_in(&search_config(&cfg, 1).unwrap(), other.path()).unwrap();
        let mut f = OpenOptions::new().append(true).open(other.path().join(STEPS)).unwrap();
        writeln!(f, "2,stray").unwrap();
        cfg.search.steps = 3;
        let b = run_search_in(&search_config(&cfg, 1).unwrap(), other.path()).unwrap();
        assert_eq!(a, b);
        assert_eq!(steps, fs::read_to_string(other.path().join(STEPS)).unwrap());
    }

    #[test]
    fn tournament_single_replication_has_zero_sd() {
        let mut cfg = desk();
        cfg.tournament.markets = vec!["CDA_l".into(), "CH_l".into()];
        let report = run_tournament(&cfg).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!(report.rows.iter().all(|r| r.score.sd == 0.0 && r.cumulative.n == 1));
        let dir = tempfile::tempdir().unwrap();
        write_tournament(&report, dir.path()).unwrap();
        let text = fs::read_to_string(dir.path().join("tournament.csv")).unwrap();
        assert!(text.starts_with("market,genome,cumulative_mean"));
    }

    #[test]
    fn isolate_table_shape() {
        let mut cfg = desk();
        cfg.isolate.mechanisms = vec!["CDA".into()];
        cfg.isolate.strategies = vec![crate::traders::StrategyKind::Zic];
        cfg.isolate.traders_per_side = 3;
        cfg.isolate.runs = 4;
        let cells = run_isolate_table(&cfg).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].report.runs.len(), 4);
        let dir = tempfile::tempdir().unwrap();
        write_isolate(&cells, dir.path()).unwrap();
        let runs = fs::read_to_string(dir.path().join("isolate_runs.csv")).unwrap();
        assert!(runs.starts_with("run,mechanism,strategy,ea,alpha"));
        assert_eq!(runs.lines().count(), 5);
    }
}
