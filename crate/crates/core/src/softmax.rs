//! Softmax (Boltzmann) action selection shared by market selection and the
//! policy-tree bandits.

use rand::Rng;

/// Softmax probabilities of `values` at `temperature`.
///
/// A non-positive temperature is the greedy limit: ties at the maximum
/// share the mass equally.
pub fn softmax(values: &[f64], temperature: f64) -> Vec<f64> {
    if values.is_empty() {
        return Vec::new();
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if temperature <= 0.0 {
        let winners = values.iter().filter(|&&v| v == max).count() as f64;
        return values.iter().map(|&v| if v == max { 1.0 / winners } else { 0.0 }).collect();
    }
    let weights: Vec<f64> = values.iter().map(|&v| ((v - max) / temperature).exp()).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Draws an index from a probability vector.
pub fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // rounding left u above the cumulative sum; fall back to the last positive arm
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_ties_share_mass() {
        assert_eq!(softmax(&[1.0, 0.0, 1.0], 0.0), vec![0.5, 0.0, 0.5]);
    }

    #[test]
    fn large_values_do_not_overflow() {
        let p = softmax(&[1000.0, 999.0], 1.0);
        assert!(p.iter().all(|x| x.is_finite()));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infinite_temperature_is_uniform() {
        assert_eq!(softmax(&[0.9, 0.0, -3.0], f64::INFINITY), vec![1.0 / 3.0; 3]);
    }

    #[test]
    fn empty_input() {
        assert!(softmax(&[], 1.0).is_empty());
    }
}
