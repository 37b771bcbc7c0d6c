//! Public market history: recent transactions and recent shouts.
//!
//! The shout memory also provides the Gjerstad-Dickhaut belief used both by
//! GD traders and by the history-based accepting policy.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::book::{Shout, ShoutId, Side};

/// Default number of shouts remembered for belief estimation.
pub const DEFAULT_SHOUT_MEMORY: usize = 40;

/// Transactions are kept up to this length; every window policy reads a suffix.
const TRANSACTION_MEMORY: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransactionRecord {
    pub ask_price: f64,
    pub bid_price: f64,
    pub price: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct ShoutRecord {
    id: ShoutId,
    side: Side,
    price: f64,
    taken: bool,
}

/// The last `capacity` shouts placed in a market, each flagged once it trades.
#[derive(Debug, Clone, PartialEq)]
pub struct ShoutMemory {
    records: VecDeque<ShoutRecord>,
    capacity: usize,
}

impl ShoutMemory {
    pub fn new(capacity: usize) -> Self {
        ShoutMemory { records: VecDeque::with_capacity(capacity + 1), capacity: capacity.max(1) }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn push(&mut self, shout: &Shout) {
        self.records.push_back(ShoutRecord { id: shout.id, side: shout.side, price: shout.price, taken: false });
        while self.records.len() > self.capacity {
            self.records.pop_front();
        }
    }

    /// Pushes a shout that is known to have traded or not.
    pub fn push_outcome(&mut self, side: Side, price: f64, taken: bool) {
        let id = ShoutId(u64::MAX - self.records.len() as u64);
        self.records.push_back(ShoutRecord { id, side, price, taken });
        while self.records.len() > self.capacity {
            self.records.pop_front();
        }
    }

    pub fn mark_taken(&mut self, id: ShoutId) {
        if let Some(r) = self.records.iter_mut().rev().find(|r| r.id == id) {
            r.taken = true;
        }
    }

    /// Distinct prices present in memory, ascending.
    pub fn prices(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self.records.iter().map(|r| r.price).collect();
        p.sort_by(f64::total_cmp);
        p.dedup();
        p
    }

    /// Estimated probability that an ask at `price` trades.
    ///
    /// `(TA(>=a) + B(>=a)) / (TA(>=a) + B(>=a) + RA(<=a))`; `None` when the
    /// memory carries no evidence either way.
    pub fn ask_belief(&self, price: f64) -> Option<f64> {
        let mut favourable = 0usize;
        let mut against = 0usize;
        for r in &self.records {
            match r.side {
                Side::Ask if r.taken && r.price >= price => favourable += 1,
                Side::Ask if !r.taken && r.price <= price => against += 1,
                Side::Bid if r.price >= price => favourable += 1,
                _ => {}
            }
        }
        ratio(favourable, against)
    }

    /// Estimated probability that a bid at `price` trades.
    ///
    /// `(TB(<=b) + A(<=b)) / (TB(<=b) + A(<=b) + RB(>=b))`.
    pub fn bid_belief(&self, price: f64) -> Option<f64> {
        let mut favourable = 0usize;
        let mut against = 0usize;
        for r in &self.records {
            match r.side {
                Side::Bid if r.taken && r.price <= price => favourable += 1,
                Side::Bid if !r.taken && r.price >= price => against += 1,
                Side::Ask if r.price <= price => favourable += 1,
                _ => {}
            }
        }
        ratio(favourable, against)
    }

    pub fn belief(&self, side: Side, price: f64) -> Option<f64> {
        match side {
            Side::Ask => self.ask_belief(price),
            Side::Bid => self.bid_belief(price),
        }
    }
}

fn ratio(favourable: usize, against: usize) -> Option<f64> {
    let total = favourable + against;
    (total > 0).then(|| favourable as f64 / total as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarketHistory {
    transactions: VecDeque<TransactionRecord>,
    pub shouts: ShoutMemory,
}

impl Default for MarketHistory {
    fn default() -> Self {
        Self::new(DEFAULT_SHOUT_MEMORY)
    }
}

impl MarketHistory {
    pub fn new(shout_memory: usize) -> Self {
        MarketHistory { transactions: VecDeque::new(), shouts: ShoutMemory::new(shout_memory) }
    }

    pub fn record_transaction(&mut self, record: TransactionRecord) {
        self.transactions.push_back(record);
        while self.transactions.len() > TRANSACTION_MEMORY {
            self.transactions.pop_front();
        }
    }

    /// Up to the `n` most recent transactions, oldest first.
    pub fn recent(&self, n: usize) -> impl Iterator<Item = &TransactionRecord> {
        let skip = self.transactions.len().saturating_sub(n);
        self.transactions.iter().skip(skip)
    }

    pub fn transaction_count(&self) -> usize {
        self.transactions.len()
    }
}
