use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::presets::{resolve, BASELINES, ISOLATION_ROWS};
use crate::book::PriceBounds;
use crate::error::ConfigError;
use crate::genome::MechanismGenome;
use crate::search::{Anneal, GameTemplate};
use crate::traders::StrategyKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GameSection {
    pub traders: usize,
    pub strategies: Vec<StrategyKind>,
    pub value_low: f64,
    pub value_high: f64,
    pub days: u32,
    pub rounds: u32,
    pub floor: f64,
    pub ceiling: f64,
}

impl Default for GameSection {
    fn default() -> Self {
        GameSection {
            traders: 120,
            strategies: StrategyKind::ALL.to_vec(),
            value_low: 50.0,
            value_high: 150.0,
            days: 500,
            rounds: 10,
            floor: 0.0,
            ceiling: 200.0,
        }
    }
}

impl GameSection {
    pub fn template(&self) -> GameTemplate {
        GameTemplate {
            traders: self.traders,
            strategies: self.strategies.clone(),
            value_low: self.value_low,
            value_high: self.value_high,
            num_days: self.days,
            rounds_per_day: self.rounds,
            bounds: PriceBounds::new(self.floor, self.ceiling),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSection {
    pub steps: usize,
    pub samples: usize,
    pub hof_capacity: usize,
    pub hof_samples: usize,
    pub anneal: Anneal,
    /// Preset names or genome strings of the fixed markets.
    pub fixed: Vec<String>,
}

impl Default for SearchSection {
    fn default() -> Self {
        SearchSection {
            steps: 200,
            samples: 2,
            hof_capacity: 10,
            hof_samples: 2,
            anneal: Anneal::default(),
            fixed: BASELINES.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TournamentSection {
    pub markets: Vec<String>,
}

impl Default for TournamentSection {
    fn default() -> Self {
        let names = ["SM7.1", "SM88.0", "SM127.1"].into_iter().chain(BASELINES);
        TournamentSection { markets: names.map(String::from).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IsolateSection {
    pub mechanisms: Vec<String>,
    pub strategies: Vec<StrategyKind>,
    pub traders_per_side: usize,
    pub days: u32,
    pub rounds: u32,
    pub runs: usize,
}

impl Default for IsolateSection {
    fn default() -> Self {
        IsolateSection {
            mechanisms: ISOLATION_ROWS.iter().map(|s| s.to_string()).collect(),
            strategies: StrategyKind::ALL.to_vec(),
            traders_per_side: 60,
            days: 10,
            rounds: 30,
            runs: 100,
        }
    }
}

/// Everything the three commands read, with every constant defaulted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub out: PathBuf,
    pub replications: usize,
    pub game: GameSection,
    pub search: SearchSection,
    pub tournament: TournamentSection,
    pub isolate: IsolateSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            out: PathBuf::from("results"),
            replications: 1,
            game: GameSection::default(),
            search: SearchSection::default(),
            tournament: TournamentSection::default(),
            isolate: IsolateSection::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.replications == 0 {
            return Err(ConfigError::Invalid("replications must be at least 1".into()));
        }
        for name in self.search.fixed.iter().chain(&self.tournament.markets).chain(&self.isolate.mechanisms) {
            resolve(name)?;
        }
        Ok(())
    }

    pub fn markets(names: &[String]) -> Result<Vec<(String, MechanismGenome)>, ConfigError> {
        names.iter().map(|n| Ok((n.clone(), resolve(n)?))).collect()
    }
}
