use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::softmax::{sample_index, softmax};

/// n-armed bandit over markets, valued by the running mean of daily net profit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketSelector {
    values: Vec<f64>,
    counts: Vec<u64>,
    temperature: f64,
}

impl MarketSelector {
    pub fn new(markets: usize, temperature: f64) -> Self {
        MarketSelector { values: vec![0.0; markets], counts: vec![0; markets], temperature }
    }

    pub fn with_values(values: Vec<f64>, temperature: f64) -> Self {
        let counts = vec![0; values.len()];
        MarketSelector { values, counts, temperature }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn probabilities(&self) -> Vec<f64> {
        softmax(&self.values, self.temperature)
    }

    pub fn select<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        sample_index(&self.probabilities(), rng)
    }

    pub fn update(&mut self, market: usize, reward: f64) {
        self.counts[market] += 1;
        let n = self.counts[market] as f64;
        self.values[market] += (reward - self.values[market]) / n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn symmetric_values_are_uniform() {
        for t in [0.01, 1.0, 100.0] {
            let p = MarketSelector::with_values(vec![0.0, 0.0], t).probabilities();
            assert_eq!(p, vec![0.5, 0.5]);
        }
    }

    #[test]
    fn unit_temperature_closed_form() {
        let p = MarketSelector::with_values(vec![1.0, 0.0], 1.0).probabilities();
        let e = std::f64::consts::E;
        assert!((p[0] - e / (e + 1.0)).abs() < 1e-12);
        assert!((p[0] - 0.731).abs() < 1e-3);
        assert!((p[1] - 0.269).abs() < 1e-3);
    }

    #[test]
    fn greedy_limit() {
        let p = MarketSelector::with_values(vec![1.0, 0.0], 1e-6).probabilities();
        assert!(p[0] > 1.0 - 1e-12);
    }

    #[test]
    fn running_mean_updates() {
        let mut s = MarketSelector::new(3, 1.0);
        s.update(0, 10.0);
        assert_eq!(s.values()[0], 10.0);
        s.update(0, 0.0);
        assert_eq!(s.values()[0], 5.0);
        assert_eq!(s.values()[1], 0.0);
        assert_eq!(s.values()[2], 0.0);
    }

    #[test]
    fn sampling_frequencies() {
        let s = MarketSelector::with_values(vec![1.0, 0.0], 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 20_000;
        let first = (0..n).filter(|_| s.select(&mut rng) == 0).count() as f64 / n as f64;
        assert!((first - 0.731).abs() < 0.01, "{first}");
    }
}
