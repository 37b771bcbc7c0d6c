//! Grey-box mechanism search: a policy tree of softmax bandits proposes
//! mechanisms, which compete in games against fixed baselines and the best
//! mechanisms found so far.

mod hof;
mod tree;

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::book::PriceBounds;
use crate::error::ConfigError;
use crate::experiment::derive_seed;
use crate::game::{population, run_game, GameConfig};
use crate::genome::MechanismGenome;
use crate::traders::StrategyKind;

pub use hof::{HallOfFame, HofEntry};
pub use tree::{Arm, OrNode, PolicyTree};

/// Exponential cooling with a floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Anneal {
    pub initial: f64,
    pub decay: f64,
    pub floor: f64,
}

impl Default for Anneal {
    fn default() -> Self {
        Anneal { initial: 1.0, decay: 0.98, floor: 0.1 }
    }
}

impl Anneal {
    pub fn temperature(&self, step: usize) -> f64 {
        let exp = i32::try_from(step).unwrap_or(i32::MAX);
        (self.initial * self.decay.powi(exp)).max(self.floor)
    }
}

/// Shape of the game played at every step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameTemplate {
    pub traders: usize,
    pub strategies: Vec<StrategyKind>,
    pub value_low: f64,
    pub value_high: f64,
    pub num_days: u32,
    pub rounds_per_day: u32,
    pub bounds: PriceBounds,
}

impl Default for GameTemplate {
    fn default() -> Self {
        GameTemplate {
            traders: 120,
            strategies: StrategyKind::ALL.to_vec(),
            value_low: 50.0,
            value_high: 150.0,
            num_days: 500,
            rounds_per_day: 10,
            bounds: PriceBounds::default(),
        }
    }
}

impl GameTemplate {
    pub fn build<R: Rng + ?Sized>(&self, markets: Vec<MechanismGenome>, rng: &mut R) -> GameConfig {
        let traders = population(self.traders, &self.strategies, self.value_low, self.value_high, rng);
        let mut cfg = GameConfig::new(markets, traders, self.num_days, self.rounds_per_day, rng.gen());
        cfg.bounds = self.bounds;
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub steps: usize,
    pub samples: usize,
    pub hof_capacity: usize,
    pub hof_samples: usize,
    pub anneal: Anneal,
    /// Named markets present in every game and never scored for the HOF.
    pub fixed: Vec<(String, MechanismGenome)>,
    pub game: GameTemplate,
    pub seed: u64,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.fixed.len() + self.samples + self.hof_samples == 0 {
            return Err(ConfigError::Invalid("a search game needs at least one market".into()));
        }
        if self.anneal.initial <= 0.0 || self.anneal.floor <= 0.0 || !(0.0..=1.0).contains(&self.anneal.decay) {
            return Err(ConfigError::Invalid(format!("bad anneal schedule {:?}", self.anneal)));
        }
        if self.game.traders == 0 || self.game.strategies.is_empty() {
            return Err(ConfigError::Invalid("a search game needs traders".into()));
        }
        for (name, g) in &self.fixed {
            g.validate().map_err(|source| ConfigError::Genome { name: name.clone(), source })?;
        }
        Ok(())
    }
}

/// Everything needed to resume a search after `step` completed steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchState {
    pub step: usize,
    pub tree: PolicyTree,
    pub hof: HallOfFame,
}

impl SearchState {
    pub fn new(hof_capacity: usize) -> Self {
        SearchState { step: 0, tree: PolicyTree::default(), hof: HallOfFame::new(hof_capacity) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Participant {
    pub label: String,
    pub genome: MechanismGenome,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub temperature: f64,
    pub fixed: Vec<Participant>,
    pub hof_sampled: Vec<Participant>,
    pub sampled: Vec<Participant>,
    pub hof_active: usize,
    pub hof_min: Option<f64>,
    pub hof_median: Option<f64>,
    pub hof_max: Option<f64>,
}

/// Runs one step: sample, play, score.
pub fn search_step(cfg: &SearchConfig, state: &mut SearchState) -> Result<StepRecord, ConfigError> {
    let step = state.step;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, step as u64));
    let temperature = cfg.anneal.temperature(step);

    let sampled: Vec<(String, MechanismGenome)> =
        (0..cfg.samples).map(|i| (format!("SM{step}.{i}"), state.tree.sample(temperature, &mut rng))).collect();
    let from_hof: Vec<(String, MechanismGenome)> = state
        .hof
        .select(cfg.hof_samples, temperature, &mut rng)
        .into_iter()
        .map(|i| (state.hof.active[i].label.clone(), state.hof.active[i].genome))
        .collect();

    let entrants: Vec<&(String, MechanismGenome)> = cfg.fixed.iter().chain(&from_hof).chain(&sampled).collect();
    let game = cfg.game.build(entrants.iter().map(|(_, g)| *g).collect(), &mut rng);
    let result = run_game(&game)?;

    let scored = |range: std::ops::Range<usize>| -> Vec<Participant> {
        range
            .map(|m| Participant { label: entrants[m].0.clone(), genome: entrants[m].1, score: result.scores[m] })
            .collect()
    };
    let nf = cfg.fixed.len();
    let nh = from_hof.len();
    let fixed = scored(0..nf);
    let hof_sampled = scored(nf..nf + nh);
    let new = scored(nf + nh..entrants.len());

    for p in hof_sampled.iter().chain(&new) {
        state.hof.record(&p.label, p.genome, p.score);
        state.tree.update_block_scores(&p.genome, p.score);
    }
    state.step += 1;
    Ok(StepRecord {
        step,
        temperature,
        fixed,
        hof_sampled,
        sampled: new,
        hof_active: state.hof.active.len(),
        hof_min: state.hof.min_active(),
        hof_median: state.hof.median_active(),
        hof_max: state.hof.max_active(),
    })
}

/// Runs the remaining steps of a search, reporting each as it completes.
pub fn grey_box_amd(
    cfg: &SearchConfig,
    state: &mut SearchState,
    mut on_step: impl FnMut(&StepRecord, &SearchState) -> Result<(), ConfigError>,
) -> Result<Vec<StepRecord>, ConfigError> {
    cfg.validate()?;
    let mut records = Vec::new();
    while state.step < cfg.steps {
        let rec = search_step(cfg, state)?;
        on_step(&rec, state)?;
        records.push(rec);
    }
    Ok(records)
}

/// Column names of the per-step table.
pub fn step_csv_header(cfg: &SearchConfig) -> Vec<String> {
    let mut h = vec!["step".to_string(), "temperature".to_string()];
    h.extend(cfg.fixed.iter().map(|(n, _)| format!("fixed_{n}")));
    h.extend(["hof_active", "hof_min", "hof_median", "hof_max"].map(String::from));
    for kind in ["hof", "sm"] {
        let n = if kind == "hof" { cfg.hof_samples } else { cfg.samples };
        for i in 0..n {
            h.extend([format!("{kind}{i}_label"), format!("{kind}{i}_genome"), format!("{kind}{i}_score")]);
        }
    }
    h
}

pub fn step_csv_row(cfg: &SearchConfig, rec: &StepRecord) -> Vec<String> {
    let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
    let mut row = vec![rec.step.to_string(), rec.temperature.to_string()];
    row.extend(rec.fixed.iter().map(|p| p.score.to_string()));
    row.extend([rec.hof_active.to_string(), opt(rec.hof_min), opt(rec.hof_median), opt(rec.hof_max)]);
    for (group, n) in [(&rec.hof_sampled, cfg.hof_samples), (&rec.sampled, cfg.samples)] {
        for i in 0..n {
            match group.get(i) {
                Some(p) => row.extend([p.label.clone(), p.genome.to_string(), p.score.to_string()]),
                None => row.extend([String::new(), String::new(), String::new()]),
            }
        }
    }
    row
}

/// Writes a finished search's step table.
pub fn write_steps_csv<W: Write>(cfg: &SearchConfig, records: &[StepRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(step_csv_header(cfg))?;
    for r in records {
        w.write_record(step_csv_row(cfg, r))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::presets::{preset, BASELINES};

    fn small(steps: usize, samples: usize, hof_samples: usize) -> SearchConfig {
        SearchConfig {
            steps,
            samples,
            hof_capacity: 10,
            hof_samples,
            anneal: Anneal::default(),
            fixed: BASELINES.iter().map(|n| (n.to_string(), preset(n).unwrap())).collect(),
            game: GameTemplate { traders: 8, num_days: 3, rounds_per_day: 3, ..GameTemplate::default() },
            seed: 1,
        }
    }

    #[test]
    fn anneal_examples() {
        let a = Anneal::default();
        assert_eq!(a.temperature(0), 1.0);
        assert_eq!(a.temperature(10_000), 0.1);
        assert!((a.temperature(34) - 0.98f64.powi(34)).abs() < 1e-12);
        assert!((a.temperature(34) - 0.503).abs() < 1e-3);
        let mut last = f64::INFINITY;
        for s in 0..300 {
            let t = a.temperature(s);
            assert!(t <= last && t >= 0.1);
            last = t;
        }
    }

    #[test]
    fn first_step_inducts_both_samples() {
        let cfg = small(1, 2, 0);
        let mut state = SearchState::new(cfg.hof_capacity);
        let recs = grey_box_amd(&cfg, &mut state, |_, _| Ok(())).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].fixed.len() + recs[0].sampled.len(), 6);
        assert_eq!(state.hof.active.len(), 2);
        assert_eq!(recs[0].sampled[0].label, "SM0.0");
    }

    #[test]
    fn zero_steps_do_nothing() {
        let cfg = small(0, 2, 2);
        let mut state = SearchState::new(cfg.hof_capacity);
        assert!(grey_box_amd(&cfg, &mut state, |_, _| Ok(())).unwrap().is_empty());
        assert!(state.hof.active.is_empty());
    }

    #[test]
    fn resumed_search_matches_uninterrupted() {
        let cfg = small(4, 2, 2);
        let mut full = SearchState::new(cfg.hof_capacity);
        let a = grey_box_amd(&cfg, &mut full, |_, _| Ok(())).unwrap();

        let mut part = SearchState::new(cfg.hof_capacity);
        let first = grey_box_amd(&SearchConfig { steps: 2, ..cfg.clone() }, &mut part, |_, _| Ok(())).unwrap();
        let json = serde_json::to_string(&part).unwrap();
        let mut resumed: SearchState = serde_json::from_str(&json).unwrap();
        let rest = grey_box_amd(&cfg, &mut resumed, |_, _| Ok(())).unwrap();
        assert_eq!(a, [first, rest].concat());
        assert_eq!(full, resumed);
    }

    #[test]
    fn hof_never_exceeds_capacity() {
        let mut cfg = small(12, 2, 2);
        cfg.hof_capacity = 3;
        let mut state = SearchState::new(cfg.hof_capacity);
        grey_box_amd(&cfg, &mut state, |_, s| {
            assert!(s.hof.active.len() <= 3);
            assert!(s.hof.active.iter().all(|e| e.games >= 1));
            Ok(())
        })
        .unwrap();
        assert_eq!(state.hof.active.len(), 3);
    }

    #[test]
    fn csv_row_matches_header() {
        let cfg = small(1, 2, 2);
        let mut state = SearchState::new(cfg.hof_capacity);
        let recs = grey_box_amd(&cfg, &mut state, |_, _| Ok(())).unwrap();
        assert_eq!(step_csv_header(&cfg).len(), step_csv_row(&cfg, &recs[0]).len());
    }
}
