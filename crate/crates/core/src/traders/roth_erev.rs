use rand::Rng;

use super::{OfferContext, Role};
use crate::softmax::sample_index;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RothErevParams {
    pub experimentation: f64,
    pub recency: f64,
    pub scaling: f64,
    pub actions: usize,
}

impl Default for RothErevParams {
    fn default() -> Self {
        RothErevParams { experimentation: 0.15, recency: 0.1, scaling: 1.0, actions: 100 }
    }
}

/// Modified Roth-Erev reinforcement learner over a grid of profit margins.
///
/// Action `j` asks for margin `j / actions` of the private value. One action
/// is chosen per day and reinforced with that day's profit.
#[derive(Debug, Clone, PartialEq)]
pub struct RothErev {
    params: RothErevParams,
    propensities: Vec<f64>,
    current: Option<usize>,
}

impl RothErev {
    pub fn new(params: RothErevParams) -> Self {
        let actions = params.actions.max(1);
        RothErev { propensities: vec![params.scaling; actions], params, current: None }
    }

    pub fn propensities(&self) -> &[f64] {
        &self.propensities
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let total: f64 = self.propensities.iter().sum();
        if total <= 0.0 {
            return vec![1.0 / self.propensities.len() as f64; self.propensities.len()];
        }
        self.propensities.iter().map(|q| q / total).collect()
    }

    pub fn start_day(&mut self) {
        self.current = None;
    }

    pub fn margin(&self, action: usize) -> f64 {
        action as f64 / self.propensities.len() as f64
    }

    pub fn choose<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        match self.current {
            Some(a) => a,
            None => {
                let a = sample_index(&self.probabilities(), rng);
                self.current = Some(a);
                a
            }
        }
    }

    pub fn offer<R: Rng + ?Sized>(&mut self, role: Role, value: f64, _ctx: &OfferContext<'_>, rng: &mut R) -> f64 {
        let action = self.choose(rng);
        let m = self.margin(action);
        match role {
            Role::Buyer => value * (1.0 - m),
            Role::Seller => value * (1.0 + m),
        }
    }

    /// Reinforces the action played today with a non-negative reward.
    pub fn reinforce(&mut self, reward: f64) {
        let Some(chosen) = self.current else { return };
        self.apply(chosen, reward);
    }

    pub fn apply(&mut self, chosen: usize, reward: f64) {
        let RothErevParams { experimentation: e, recency: r, .. } = self.params;
        let k = self.propensities.len();
        let spill = if k > 1 { e / (k - 1) as f64 } else { 0.0 };
        for (j, q) in self.propensities.iter_mut().enumerate() {
            let gain = if j == chosen { reward * (1.0 - e) } else { *q * spill };
            *q = (1.0 - r) * *q + gain;
        }
    }
}
