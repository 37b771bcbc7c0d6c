//! Order-book primitives: shouts, the standing ask/bid queues and the
//! reported equilibrium of whatever is currently standing.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::BookError;

/// Identifier of a trader within one game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TraderId(pub u32);

/// Identifier of a shout, unique within one market.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ShoutId(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Ask,
    Bid,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Ask => f.write_str("ASK"),
            Side::Bid => f.write_str("BID"),
        }
    }
}

/// A priced, single-unit offer to sell (ask) or buy (bid).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shout {
    pub id: ShoutId,
    pub trader: TraderId,
    pub side: Side,
    pub price: f64,
    pub day: u32,
    pub round: u32,
}

impl Shout {
    pub fn ask(id: u64, trader: u32, price: f64) -> Self {
        Shout { id: ShoutId(id), trader: TraderId(trader), side: Side::Ask, price, day: 0, round: 0 }
    }

    pub fn bid(id: u64, trader: u32, price: f64) -> Self {
        Shout { id: ShoutId(id), trader: TraderId(trader), side: Side::Bid, price, day: 0, round: 0 }
    }

    /// True if `self` is strictly more competitive than `other` on the same side.
    pub fn beats(&self, other: &Shout) -> bool {
        match self.side {
            Side::Ask => self.price < other.price,
            Side::Bid => self.price > other.price,
        }
    }
}

/// Price range every market in a game operates within.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceBounds {
    pub floor: f64,
    pub ceiling: f64,
}

impl PriceBounds {
    pub fn new(floor: f64, ceiling: f64) -> Self {
        PriceBounds { floor, ceiling }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.floor + self.ceiling)
    }

    pub fn clamp(&self, price: f64) -> f64 {
        price.clamp(self.floor, self.ceiling)
    }

    pub fn contains(&self, price: f64) -> bool {
        price >= self.floor && price <= self.ceiling
    }
}

impl Default for PriceBounds {
    fn default() -> Self {
        PriceBounds { floor: 0.0, ceiling: 200.0 }
    }
}

/// Standing shouts of one market.
///
/// Asks are kept ascending by price and bids descending, ties in arrival
/// order. Both queues are small (at most one shout per trader), so plain
/// vectors with ordered insertion are used.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OrderBook {
    asks: Vec<Shout>,
    bids: Vec<Shout>,
}

impl OrderBook {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn asks(&self) -> &[Shout] {
        &self.asks
    }

    pub fn bids(&self) -> &[Shout] {
        &self.bids
    }

    pub fn len(&self) -> usize {
        self.asks.len() + self.bids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.asks.is_empty() && self.bids.is_empty()
    }

    pub fn standing_of(&self, trader: TraderId) -> Option<&Shout> {
        self.asks.iter().chain(self.bids.iter()).find(|s| s.trader == trader)
    }

    /// Inserts `shout`, replacing any shout the same trader has standing.
    ///
    /// Returns the replaced shout, if any.
    pub fn insert(&mut self, shout: Shout) -> Result<Option<Shout>, BookError> {
        if !shout.price.is_finite() || shout.price < 0.0 {
            return Err(BookError::InvalidPrice(shout.price));
        }
        if self.asks.iter().chain(self.bids.iter()).any(|s| s.id == shout.id) {
            return Err(BookError::DuplicateShout(shout.id));
        }
        let replaced = self.remove_trader(shout.trader);
        let queue = match shout.side {
            Side::Ask => &mut self.asks,
            Side::Bid => &mut self.bids,
        };
        // first position whose shout the new one strictly beats; equal prices stay FIFO
        let pos = queue.iter().position(|s| shout.beats(s)).unwrap_or(queue.len());
        queue.insert(pos, shout);
        Ok(replaced)
    }

    pub fn remove_trader(&mut self, trader: TraderId) -> Option<Shout> {
        if let Some(i) = self.asks.iter().position(|s| s.trader == trader) {
            return Some(self.asks.remove(i));
        }
        if let Some(i) = self.bids.iter().position(|s| s.trader == trader) {
            return Some(self.bids.remove(i));
        }
        None
    }

    /// Removes the given shouts (by id) from the standing queues.
    pub fn remove_ids(&mut self, ids: &[ShoutId]) {
        self.asks.retain(|s| !ids.contains(&s.id));
        self.bids.retain(|s| !ids.contains(&s.id));
    }

    pub fn clear(&mut self) -> Vec<Shout> {
        let mut out: Vec<Shout> = self.asks.drain(..).collect();
        out.append(&mut self.bids);
        out
    }

    /// Reported equilibrium of the standing shouts.
    pub fn reported_equilibrium(&self, bounds: PriceBounds) -> EquilibriumReport {
        let asks: Vec<f64> = self.asks.iter().map(|s| s.price).collect();
        let bids: Vec<f64> = self.bids.iter().map(|s| s.price).collect();
        equilibrium_of_sorted(&asks, &bids, bounds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub quantity: usize,
    pub price_low: f64,
    pub price_high: f64,
    pub midpoint: f64,
}

/// Largest `q` such that the q-th highest bid is at least the q-th lowest ask.
///
/// `asks` must be ascending and `bids` descending.
pub fn crossing_quantity(asks: &[f64], bids: &[f64]) -> usize {
    asks.iter().zip(bids.iter()).take_while(|(a, b)| b >= a).count()
}

/// Equilibrium of a sorted reported (or underlying) schedule.
///
/// With no crossing the interval is the whole price range.
pub fn equilibrium_of_sorted(asks: &[f64], bids: &[f64], bounds: PriceBounds) -> EquilibriumReport {
    let q = crossing_quantity(asks, bids);
    if q == 0 {
        return EquilibriumReport {
            quantity: 0,
            price_low: bounds.floor,
            price_high: bounds.ceiling,
            midpoint: bounds.midpoint(),
        };
    }
    let mut low = asks[q - 1];
    if let Some(&b) = bids.get(q) {
        low = low.max(b);
    }
    let mut high = bids[q - 1];
    if let Some(&a) = asks.get(q) {
        high = high.min(a);
    }
    EquilibriumReport { quantity: q, price_low: low, price_high: high, midpoint: 0.5 * (low + high) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn book(asks: &[f64], bids: &[f64]) -> OrderBook {
        let mut b = OrderBook::new();
        let mut id = 0;
        for &p in asks {
            b.insert(Shout::ask(id, id as u32, p)).unwrap();
            id += 1;
        }
        for &p in bids {
            b.insert(Shout::bid(id, id as u32, p)).unwrap();
            id += 1;
        }
        b
    }

    fn prices(s: &[Shout]) -> Vec<f64> {
        s.iter().map(|s| s.price).collect()
    }

    #[test]
    fn insert_into_empty_book() {
        let b = book(&[80.0], &[]);
        assert_eq!(prices(b.asks()), vec![80.0]);
    }

    #[test]
    fn insert_keeps_price_order() {
        let b = book(&[60.0, 120.0, 80.0], &[70.0, 130.0, 90.0]);
        assert_eq!(prices(b.asks()), vec![60.0, 80.0, 120.0]);
        assert_eq!(prices(b.bids()), vec![130.0, 90.0, 70.0]);
    }

    #[test]
    fn equal_prices_are_fifo() {
        let mut b = OrderBook::new();
        b.insert(Shout::bid(1, 1, 90.0)).unwrap();
        b.insert(Shout::bid(2, 2, 90.0)).unwrap();
        b.insert(Shout::bid(3, 3, 95.0)).unwrap();
        let ids: Vec<u64> = b.bids().iter().map(|s| s.id.0).collect();
        assert_eq!(ids, vec![3, 1, 2]);
    }

    #[test]
    fn same_trader_replaces() {
        let mut b = OrderBook::new();
        b.insert(Shout::bid(1, 7, 70.0)).unwrap();
        let old = b.insert(Shout::bid(2, 7, 75.0)).unwrap();
        assert_eq!(old.map(|s| s.price), Some(70.0));
        assert_eq!(prices(b.bids()), vec![75.0]);
        assert_eq!(b.len(), 1);
    }

    #[test]
    fn duplicate_id_rejected() {
        let mut b = OrderBook::new();
        b.insert(Shout::bid(1, 1, 70.0)).unwrap();
        assert!(matches!(b.insert(Shout::ask(1, 2, 60.0)), Err(BookError::DuplicateShout(_))));
    }

    #[test]
    fn negative_price_rejected() {
        let mut b = OrderBook::new();
        assert!(b.insert(Shout::bid(1, 1, -1.0)).is_err());
    }

    #[test]
    fn equilibrium_of_crossing_book() {
        let b = book(&[60.0, 80.0, 120.0], &[130.0, 90.0, 70.0]);
        let eq = b.reported_equilibrium(PriceBounds::default());
        assert_eq!(eq.quantity, 2);
        assert_eq!((eq.price_low, eq.price_high), (80.0, 90.0));
        assert_eq!(eq.midpoint, 85.0);
    }

    #[test]
    fn equilibrium_one_sided_book() {
        let b = book(&[], &[100.0]);
        let eq = b.reported_equilibrium(PriceBounds::new(0.0, 200.0));
        assert_eq!(eq.quantity, 0);
        assert_eq!(eq.midpoint, 100.0);
    }

    #[test]
    fn equilibrium_degenerate_equality() {
        let b = book(&[50.0], &[50.0]);
        let eq = b.reported_equilibrium(PriceBounds::default());
        assert_eq!(eq.quantity, 1);
        assert_eq!(eq.midpoint, 50.0);
    }
}
