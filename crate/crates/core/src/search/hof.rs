use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::genome::MechanismGenome;
use crate::softmax::{sample_index, softmax};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HofEntry {
    pub label: String,
    pub genome: MechanismGenome,
    /// Running mean of the game scores this genome has received.
    pub mean: f64,
    pub games: u64,
}

/// Capacity-bounded set of the best genomes found so far, plus an archive
/// of demoted members that may be reactivated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HallOfFame {
    pub capacity: usize,
    pub active: Vec<HofEntry>,
    pub inactive: Vec<HofEntry>,
}

impl HallOfFame {
    pub fn new(capacity: usize) -> Self {
        HallOfFame { capacity, active: Vec::new(), inactive: Vec::new() }
    }

    pub fn is_active(&self, genome: &MechanismGenome) -> bool {
        self.active.iter().any(|e| e.genome == *genome)
    }

    pub fn min_active(&self) -> Option<f64> {
        self.active.iter().map(|e| e.mean).reduce(f64::min)
    }

    pub fn max_active(&self) -> Option<f64> {
        self.active.iter().map(|e| e.mean).reduce(f64::max)
    }

    pub fn median_active(&self) -> Option<f64> {
        let mut m: Vec<f64> = self.active.iter().map(|e| e.mean).collect();
        if m.is_empty() {
            return None;
        }
        m.sort_by(f64::total_cmp);
        let n = m.len();
        Some(if n % 2 == 1 { m[n / 2] } else { 0.5 * (m[n / 2 - 1] + m[n / 2]) })
    }

    /// Draws up to `n` distinct active members by softmax over their means.
    pub fn select<R: Rng + ?Sized>(&self, n: usize, temperature: f64, rng: &mut R) -> Vec<usize> {
        let mut remaining: Vec<usize> = (0..self.active.len()).collect();
        let mut chosen = Vec::with_capacity(n.min(remaining.len()));
        while chosen.len() < n && !remaining.is_empty() {
            let q: Vec<f64> = remaining.iter().map(|&i| self.active[i].mean).collect();
            let pick = sample_index(&softmax(&q, temperature), rng);
            chosen.push(remaining.remove(pick));
        }
        chosen
    }

    /// Folds one game score into the genome's running mean, then lets it
    /// enter the active set if there is room or it beats the weakest member.
    pub fn record(&mut self, label: &str, genome: MechanismGenome, score: f64) {
        let bump = |e: &mut HofEntry| {
            e.games += 1;
            e.mean += (score - e.mean) / e.games as f64;
        };
        if let Some(e) = self.active.iter_mut().find(|e| e.genome == genome) {
            bump(e);
            return;
        }
        let entry = match self.inactive.iter().position(|e| e.genome == genome) {
            Some(i) => {
                let mut e = self.inactive.remove(i);
                bump(&mut e);
                e
            }
            None => HofEntry { label: label.to_string(), genome, mean: score, games: 1 },
        };
        self.consider(entry);
    }

    fn consider(&mut self, entry: HofEntry) {
        if self.active.len() < self.capacity {
            self.active.push(entry);
            return;
        }
        let weakest = self
            .active
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.mean.total_cmp(&b.1.mean))
            .map(|(i, e)| (i, e.mean));
        match weakest {
            Some((i, min)) if entry.mean > min => {
                let demoted = std::mem::replace(&mut self.active[i], entry);
                self.inactive.push(demoted);
            }
            // a returning member that still falls short goes back to the archive
            _ if entry.games > 1 => self.inactive.push(entry),
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(k: u32) -> MechanismGenome {
        format!("ME + QT + AA + CC + PD(k={}) + GF(fp=0.1)", k as f64 / 10.0).parse().unwrap()
    }

    #[test]
    fn fills_then_replaces_weakest() {
        let mut hof = HallOfFame::new(2);
        hof.record("a", g(1), 0.35);
        hof.record("b", g(2), 0.5);
        assert_eq!(hof.active.len(), 2);
        hof.record("c", g(3), 0.40);
        assert_eq!(hof.active.len(), 2);
        assert!(hof.is_active(&g(3)));
        assert!(!hof.is_active(&g(1)));
        assert_eq!(hof.inactive.len(), 1);
        assert_eq!(hof.min_active(), Some(0.40));
        // too weak to enter
        hof.record("d", g(4), 0.1);
        assert!(!hof.is_active(&g(4)));
    }

    #[test]
    fn inactive_member_is_reactivated() {
        let mut hof = HallOfFame::new(1);
        hof.record("a", g(1), 0.3);
        hof.record("b", g(2), 0.4);
        assert_eq!(hof.inactive[0].genome, g(1));
        // a's mean becomes (0.3 + 0.7) / 2 = 0.5 > 0.4
        hof.record("a'", g(1), 0.7);
        assert!(hof.is_active(&g(1)));
        assert_eq!(hof.active[0].label, "a");
        assert_eq!(hof.active[0].games, 2);
        assert!((hof.active[0].mean - 0.5).abs() < 1e-12);
        assert_eq!(hof.inactive[0].genome, g(2));
    }

    #[test]
    fn active_member_mean_updates() {
        let mut hof = HallOfFame::new(3);
        hof.record("a", g(1), 0.4);
        hof.record("a", g(1), 0.2);
        assert_eq!(hof.active.len(), 1);
        assert!((hof.active[0].mean - 0.3).abs() < 1e-12);
    }

    #[test]
    fn selection_is_without_replacement() {
        let mut hof = HallOfFame::new(10);
        for k in 0..5 {
            hof.record("x", g(k), k as f64 / 10.0);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let mut s = hof.select(3, 1.0, &mut rng);
            assert_eq!(s.len(), 3);
            s.sort();
            s.dedup();
            assert_eq!(s.len(), 3);
        }
        assert_eq!(hof.select(8, 1.0, &mut rng).len(), 5);
    }

    #[test]
    fn median_of_even_and_odd() {
        let mut hof = HallOfFame::new(10);
        for (k, s) in [0.1, 0.4, 0.2].into_iter().enumerate() {
            hof.record("x", g(k as u32), s);
        }
        assert_eq!(hof.median_active(), Some(0.2));
        hof.record("x", g(9), 0.3);
        assert!((hof.median_active().unwrap() - 0.25).abs() < 1e-12);
    }
}
