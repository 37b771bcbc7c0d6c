use serde::{Deserialize, Serialize};

use super::Matching;
use crate::book::{crossing_quantity, OrderBook, Shout};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub ask: Shout,
    pub bid: Shout,
}

/// ME pairing over sorted prices: i-th lowest ask with i-th highest bid.
pub fn equilibrium_pairs(asks: &[f64], bids: &[f64]) -> Vec<(usize, usize)> {
    (0..crossing_quantity(asks, bids)).map(|i| (i, i)).collect()
}

fn volume_feasible(asks: &[f64], bids: &[f64], k: usize) -> bool {
    (0..k).all(|i| bids[i] >= asks[k - 1 - i])
}

/// Largest number of disjoint pairs with bid >= ask.
///
/// The k highest bids can be matched against the k lowest asks iff pairing
/// them highest-with-highest is feasible, and feasibility is monotone in k.
pub fn max_volume(asks: &[f64], bids: &[f64]) -> usize {
    let mut k = asks.len().min(bids.len());
    while k > 0 && !volume_feasible(asks, bids, k) {
        k -= 1;
    }
    k
}

/// MV pairing of exactly `k` pairs (`k` must not exceed [`max_volume`]).
pub fn max_volume_pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k).map(|i| (k - 1 - i, i)).collect()
}

impl Matching {
    /// Pairs `(ask index, bid index)` into the sorted standing queues.
    pub fn tentative(&self, asks: &[f64], bids: &[f64]) -> Vec<(usize, usize)> {
        match *self {
            Matching::Equilibrium => equilibrium_pairs(asks, bids),
            Matching::MaxVolume => max_volume_pairs(max_volume(asks, bids)),
            Matching::Theta { theta } => {
                let me = crossing_quantity(asks, bids);
                if theta <= 0.0 {
                    let target = ((1.0 + theta) * me as f64).round() as usize;
                    (0..target.min(me)).map(|i| (i, i)).collect()
                } else {
                    let mv = max_volume(asks, bids);
                    let target = (me as f64 + theta * (mv - me) as f64).round() as usize;
                    max_volume_pairs(target.clamp(me, mv))
                }
            }
        }
    }

    /// Matches the standing shouts and removes the matched ones from `book`.
    pub fn match_book(&self, book: &mut OrderBook) -> Vec<MatchedPair> {
        let asks: Vec<f64> = book.asks().iter().map(|s| s.price).collect();
        let bids: Vec<f64> = book.bids().iter().map(|s| s.price).collect();
        let pairs: Vec<MatchedPair> = self
            .tentative(&asks, &bids)
            .into_iter()
            .map(|(a, b)| MatchedPair { ask: book.asks()[a], bid: book.bids()[b] })
            .collect();
        let ids: Vec<_> = pairs.iter().flat_map(|p| [p.ask.id, p.bid.id]).collect();
        book.remove_ids(&ids);
        pairs
    }
}
