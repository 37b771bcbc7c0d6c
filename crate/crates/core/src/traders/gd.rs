use rand::Rng;

use super::{OfferContext, Role, Zic};

/// Gjerstad-Dickhaut: offers the price maximizing `belief(p) * surplus(p)`,
/// with the belief a step function of the recent shout memory.
///
/// Candidate prices are those seen in memory and one unit either side.
/// When no candidate promises a positive expected surplus (in particular
/// with an empty memory) the trader falls back to a ZI-C draw.
#[derive(Debug, Clone, Copy, Default)]
pub struct Gd;

impl Gd {
    pub fn offer<R: Rng + ?Sized>(&self, role: Role, value: f64, ctx: &OfferContext<'_>, rng: &mut R) -> Option<f64> {
        if ctx.memory.is_empty() {
            return Zic.offer(role, value, ctx, rng);
        }
        let mut candidates = Vec::new();
        for p in ctx.memory.prices() {
            candidates.extend([p - 1.0, p, p + 1.0]);
        }
        candidates.retain(|&p| ctx.bounds.contains(p));
        candidates.sort_by(f64::total_cmp);
        candidates.dedup();
        let side = role.side();
        let belief = |p| ctx.memory.belief(side, p).unwrap_or(0.0);
        match best_price(role, value, &candidates, belief) {
            Some(p) if belief(p) * role.surplus(value, p) > 0.0 => Some(p),
            _ => Zic.offer(role, value, ctx, rng),
        }
    }
}

/// Expected-surplus argmax over individually rational `candidates`
/// (ascending); ties go to the first.
pub fn best_price(role: Role, value: f64, candidates: &[f64], belief: impl Fn(f64) -> f64) -> Option<f64> {
    let mut best: Option<(f64, f64)> = None;
    for &p in candidates.iter().filter(|&&p| role.is_rational(value, p)) {
        let e = belief(p) * role.surplus(value, p);
        if best.is_none_or(|(_, b)| e > b) {
            best = Some((p, e));
        }
    }
    best.map(|(p, _)| p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::book::{PriceBounds, Side};
    use crate::history::ShoutMemory;
    use crate::policies::MarketQuote;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_belief_picks_sure_price() {
        let belief = |p: f64| if p <= 90.0 { 1.0 } else { 0.0 };
        assert_eq!(best_price(Role::Buyer, 100.0, &[90.0, 95.0], belief), Some(90.0));
    }

    #[test]
    fn irrational_candidates_are_dropped() {
        assert_eq!(best_price(Role::Seller, 100.0, &[90.0, 99.0], |_| 1.0), None);
        assert_eq!(best_price(Role::Seller, 100.0, &[90.0, 110.0], |_| 1.0), Some(110.0));
    }

    #[test]
    fn buyer_bids_at_observed_ask() {
        // one standing ask at 80: bid belief is 1 from 80 up, 0 below
        let mut memory = ShoutMemory::new(40);
        memory.push_outcome(Side::Ask, 80.0, false);
        let bounds = PriceBounds::default();
        let ctx = OfferContext { bounds, quote: MarketQuote::open(bounds), memory: &memory };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(Gd.offer(Role::Buyer, 100.0, &ctx, &mut rng), Some(80.0));
    }

    #[test]
    fn hopeless_memory_falls_back_to_random() {
        // only bids below the seller's value: nothing rational can trade
        let mut memory = ShoutMemory::new(40);
        memory.push_outcome(Side::Bid, 30.0, false);
        let bounds = PriceBounds::default();
        let ctx = OfferContext { bounds, quote: MarketQuote::open(bounds), memory: &memory };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = Gd.offer(Role::Seller, 100.0, &ctx, &mut rng).unwrap();
        assert!((100.0..=200.0).contains(&p));
    }

    #[test]
    fn empty_memory_falls_back_to_random() {
        let memory = ShoutMemory::new(40);
        let bounds = PriceBounds::default();
        let ctx = OfferContext { bounds, quote: MarketQuote::open(bounds), memory: &memory };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = Gd.offer(Role::Seller, 100.0, &ctx, &mut rng).unwrap();
        assert!((100.0..=200.0).contains(&p));
    }
}
