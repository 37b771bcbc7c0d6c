use rand::Rng;

use super::{MarketEvent, Role};
use crate::book::Side;

/// Per-trader ZIP constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipParams {
    pub learning_rate: f64,
    pub momentum: f64,
    /// Upper end of the relative target perturbation, as a fraction of price.
    pub relative: f64,
    /// Upper end of the absolute target perturbation, in currency.
    pub absolute: f64,
}

impl ZipParams {
    /// Draws constants from Cliff's published ranges.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        ZipParams {
            learning_rate: rng.gen_range(0.1..0.5),
            momentum: rng.gen_range(0.2..0.8),
            relative: 0.05,
            absolute: 0.05,
        }
    }
}

/// Zero-intelligence-plus: a profit margin adapted by Widrow-Hoff steps
/// towards perturbed prices of observed shouts and trades.
#[derive(Debug, Clone, PartialEq)]
pub struct Zip {
    role: Role,
    value: f64,
    margin: f64,
    momentum_term: f64,
    params: ZipParams,
}

impl Zip {
    pub fn new<R: Rng + ?Sized>(role: Role, value: f64, params: ZipParams, rng: &mut R) -> Self {
        let m: f64 = rng.gen_range(0.05..0.35);
        let margin = match role {
            Role::Buyer => -m,
            Role::Seller => m,
        };
        Self::with_margin(role, value, margin, params)
    }

    pub fn with_margin(role: Role, value: f64, margin: f64, params: ZipParams) -> Self {
        Zip { role, value, margin, momentum_term: 0.0, params }
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn price(&self) -> f64 {
        self.value * (1.0 + self.margin)
    }

    /// One Widrow-Hoff step with momentum towards `target`.
    pub fn adjust_toward(&mut self, target: f64) {
        let current = self.price();
        let delta = self.params.learning_rate * (target - current);
        self.momentum_term = self.params.momentum * self.momentum_term + (1.0 - self.params.momentum) * delta;
        let margin = (current + self.momentum_term) / self.value - 1.0;
        self.margin = match self.role {
            Role::Buyer => margin.clamp(-1.0, 0.0),
            Role::Seller => margin.max(0.0),
        };
    }

    fn above<R: Rng + ?Sized>(&self, q: f64, rng: &mut R) -> f64 {
        q * (1.0 + rng.gen_range(0.0..=self.params.relative)) + rng.gen_range(0.0..=self.params.absolute)
    }

    fn below<R: Rng + ?Sized>(&self, q: f64, rng: &mut R) -> f64 {
        q * (1.0 - rng.gen_range(0.0..=self.params.relative)) - rng.gen_range(0.0..=self.params.absolute)
    }

    /// Cliff's update rules; `active` is false once the trader's unit is sold.
    pub fn observe<R: Rng + ?Sized>(&mut self, event: &MarketEvent, active: bool, rng: &mut R) {
        let p = self.price();
        let target = match (self.role, *event) {
            (Role::Seller, MarketEvent::Trade { side, price: q }) => {
                if p <= q {
                    Some(self.above(q, rng))
                } else if side == Side::Bid && active {
                    Some(self.below(q, rng))
                } else {
                    None
                }
            }
            (Role::Seller, MarketEvent::Shout { side: Side::Ask, price: q }) if active && p >= q => Some(self.below(q, rng)),
            (Role::Buyer, MarketEvent::Trade { side, price: q }) => {
                if p >= q {
                    Some(self.below(q, rng))
                } else if side == Side::Ask && active {
                    Some(self.above(q, rng))
                } else {
                    None
                }
            }
            (Role::Buyer, MarketEvent::Shout { side: Side::Bid, price: q }) if active && p <= q => Some(self.above(q, rng)),
            _ => None,
        };
        if let Some(t) = target {
            self.adjust_toward(t);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fixed(rate: f64, momentum: f64) -> ZipParams {
        ZipParams { learning_rate: rate, momentum, relative: 0.0, absolute: 0.0 }
    }

    #[test]
    fn single_widrow_hoff_step() {
        // value 80, margin 0.25 -> ask 100; target 90, rate 0.5, no momentum:
        // delta = 0.5 * (90 - 100) = -5, new price 95, margin 95/80 - 1
        let mut z = Zip::with_margin(Role::Seller, 80.0, 0.25, fixed(0.5, 0.0));
        assert_eq!(z.price(), 100.0);
        z.adjust_toward(90.0);
        assert!((z.price() - 95.0).abs() < 1e-12);
        assert!((z.margin() - 0.1875).abs() < 1e-12);
    }

    #[test]
    fn seller_lowers_after_cheaper_trade_hit_by_bid() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut z = Zip::with_margin(Role::Seller, 80.0, 0.25, fixed(0.5, 0.0));
        z.observe(&MarketEvent::Trade { side: Side::Bid, price: 90.0 }, true, &mut rng);
        assert!((z.margin() - 0.1875).abs() < 1e-12);
    }

    #[test]
    fn momentum_carries_previous_step() {
        // rate 0.5, momentum 0.5: first step 0.5 * (-5) = -2.5 -> 97.5
        let mut z = Zip::with_margin(Role::Seller, 80.0, 0.25, fixed(0.5, 0.5));
        z.adjust_toward(90.0);
        assert!((z.price() - 97.5).abs() < 1e-12);
        // second: delta = 0.5 * (90 - 97.5) = -3.75, gamma = 0.5*(-2.5) + 0.5*(-3.75) = -3.125
        z.adjust_toward(90.0);
        assert!((z.price() - 94.375).abs() < 1e-12);
    }

    #[test]
    fn seller_raises_when_trades_happen_above() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut z = Zip::with_margin(Role::Seller, 80.0, 0.1, fixed(0.5, 0.0));
        z.observe(&MarketEvent::Trade { side: Side::Ask, price: 120.0 }, true, &mut rng);
        assert!(z.price() > 88.0);
    }

    #[test]
    fn buyer_margin_stays_non_positive() {
        let mut z = Zip::with_margin(Role::Buyer, 100.0, -0.1, fixed(1.0, 0.0));
        z.adjust_toward(150.0);
        assert_eq!(z.margin(), 0.0);
        assert_eq!(z.price(), 100.0);
    }

    #[test]
    fn inactive_seller_does_not_lower() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut z = Zip::with_margin(Role::Seller, 80.0, 0.25, fixed(0.5, 0.0));
        z.observe(&MarketEvent::Trade { side: Side::Bid, price: 90.0 }, false, &mut rng);
        assert_eq!(z.margin(), 0.25);
    }
}
