use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::derive_seed;
use crate::book::PriceBounds;
use crate::error::ConfigError;
use crate::game::{population, run_game, GameConfig};
use crate::genome::MechanismGenome;
use crate::metrics::{econ_report, RunRecord, Schedule};
use crate::traders::StrategyKind;

/// One cell of an isolation experiment: a single market populated by
/// traders that all use the same strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolateConfig {
    pub genome: MechanismGenome,
    pub strategy: StrategyKind,
    pub traders_per_side: usize,
    pub num_days: u32,
    pub rounds_per_day: u32,
    pub value_low: f64,
    pub value_high: f64,
    pub bounds: PriceBounds,
    pub runs: usize,
    pub seed: u64,
}

impl IsolateConfig {
    pub fn new(genome: MechanismGenome, strategy: StrategyKind) -> Self {
        IsolateConfig {
            genome,
            strategy,
            traders_per_side: 60,
            num_days: 10,
            rounds_per_day: 30,
            value_low: 50.0,
            value_high: 150.0,
            bounds: PriceBounds::default(),
            runs: 100,
            seed: 0,
        }
    }
}

/// Mean and sample standard deviation over the runs where a value is defined.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub sd: f64,
    pub n: usize,
}

impl Summary {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let v: Vec<f64> = values.into_iter().collect();
        let n = v.len();
        if n == 0 {
            return Summary { mean: f64::NAN, sd: f64::NAN, n };
        }
        let mean = v.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 { (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt() } else { 0.0 };
        Summary { mean, sd, n }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolateReport {
    pub mechanism: String,
    pub strategy: StrategyKind,
    pub runs: Vec<RunRecord>,
    pub ea: Summary,
    pub alpha: Summary,
}

pub fn run_isolate(cfg: &IsolateConfig) -> Result<IsolateReport, ConfigError> {
    if cfg.runs == 0 || cfg.traders_per_side == 0 {
        return Err(ConfigError::Invalid("isolation needs at least one run and one trader per side".into()));
    }
    cfg.genome.validate().map_err(|source| ConfigError::Genome { name: cfg.genome.to_string(), source })?;
    let mechanism = cfg.genome.to_string();
    let runs = (0..cfg.runs)
        .into_par_iter()
        .map(|run| {
            let seed = derive_seed(cfg.seed, run as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let traders = population(2 * cfg.traders_per_side, &[cfg.strategy], cfg.value_low, cfg.value_high, &mut rng);
            let schedule = Schedule::from_traders(&traders);
            let mut game = GameConfig::new(vec![cfg.genome], traders, cfg.num_days, cfg.rounds_per_day, seed);
            game.bounds = cfg.bounds;
            let result = run_game(&game)?;
            let report = econ_report(&result, 0, &schedule, cfg.bounds);
            Ok(RunRecord {
                run,
                mechanism: mechanism.clone(),
                strategy: cfg.strategy.to_string(),
                ea: report.ea,
                alpha: report.alpha,
            })
        })
        .collect::<Result<Vec<_>, ConfigError>>()?;
    let ea = Summary::of(runs.iter().filter_map(|r| r.ea));
    let alpha = Summary::of(runs.iter().filter_map(|r| r.alpha));
    Ok(IsolateReport { mechanism, strategy: cfg.strategy, runs, ea, alpha })
}
