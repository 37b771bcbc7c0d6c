//! One running market: an order book driven by the six policies of a genome.

use rand::Rng;

use crate::book::{OrderBook, PriceBounds, Shout, ShoutId, Side, TraderId};
use crate::genome::MechanismGenome;
use crate::history::{MarketHistory, TransactionRecord};
use crate::policies::{
    accept, price, AcceptContext, ChargingState, ClearEvent, FeeSchedule, MarketObservation, MarketQuote, PricingContext,
};

/// A matched and priced pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Execution {
    pub ask: Shout,
    pub bid: Shout,
    pub price: f64,
}

impl Execution {
    /// Side of the later of the two shouts, i.e. the one that completed the trade.
    pub fn aggressor(&self) -> Side {
        if self.ask.id > self.bid.id {
            Side::Ask
        } else {
            Side::Bid
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Submission {
    Rejected,
    /// Accepted; any transactions the placement triggered are attached.
    Accepted { shout: Shout, executions: Vec<Execution> },
}

#[derive(Debug, Clone)]
pub struct Market {
    genome: MechanismGenome,
    bounds: PriceBounds,
    book: OrderBook,
    history: MarketHistory,
    quote: MarketQuote,
    charging: ChargingState,
    next_id: u64,
}

impl Market {
    pub fn new(genome: MechanismGenome, bounds: PriceBounds, shout_memory: usize) -> Self {
        Market {
            genome,
            bounds,
            book: OrderBook::new(),
            history: MarketHistory::new(shout_memory),
            quote: MarketQuote::open(bounds),
            charging: ChargingState::new(genome.charging),
            next_id: 0,
        }
    }

    pub fn genome(&self) -> &MechanismGenome {
        &self.genome
    }

    pub fn quote(&self) -> MarketQuote {
        self.quote
    }

    pub fn book(&self) -> &OrderBook {
        &self.book
    }

    pub fn history(&self) -> &MarketHistory {
        &self.history
    }

    pub fn fees(&self) -> FeeSchedule {
        self.charging.fees
    }

    pub fn bounds(&self) -> PriceBounds {
        self.bounds
    }

    fn refresh_quote(&mut self) {
        self.quote = self.genome.quoting.quote(&self.book, &self.genome.matching, self.bounds);
    }

    /// Runs a shout through the accepting policy and, if admitted, places it
    /// and applies the clearing policy.
    pub fn submit<R: Rng + ?Sized>(
        &mut self,
        trader: TraderId,
        side: Side,
        price: f64,
        day: u32,
        round: u32,
        rng: &mut R,
    ) -> Submission {
        let shout = Shout { id: ShoutId(self.next_id), trader, side, price: self.bounds.clamp(price), day, round };
        let ctx = AcceptContext { quote: self.quote, history: &self.history, standing: self.book.standing_of(trader) };
        if !accept(&shout, &ctx, &self.genome.accepting).is_accept() {
            return Submission::Rejected;
        }
        self.next_id += 1;
        self.book.insert(shout).expect("fresh shout ids are unique and prices clamped");
        self.history.shouts.push(&shout);
        self.refresh_quote();
        let executions = if self.genome.clearing.should_clear(ClearEvent::ShoutPlaced, rng) {
            self.clear()
        } else {
            Vec::new()
        };
        Submission::Accepted { shout, executions }
    }

    pub fn end_round<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Vec<Execution> {
        if self.genome.clearing.should_clear(ClearEvent::RoundEnd, rng) {
            self.clear()
        } else {
            Vec::new()
        }
    }

    /// Final clearing of the day; whatever is still standing afterwards expires.
    pub fn end_day<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Vec<Execution> {
        let executions =
            if self.genome.clearing.should_clear(ClearEvent::DayEnd, rng) { self.clear() } else { Vec::new() };
        self.book.clear();
        self.refresh_quote();
        executions
    }

    /// Matches the book and prices every pair.
    pub fn clear(&mut self) -> Vec<Execution> {
        let quote = self.quote;
        let standing_asks = self.book.asks().len();
        let standing_bids = self.book.bids().len();
        let pairs = self.genome.matching.match_book(&mut self.book);
        let mut out = Vec::with_capacity(pairs.len());
        for pair in pairs {
            let ctx = PricingContext { quote, history: &self.history, standing_asks, standing_bids };
            let p = price(&pair, &ctx, &self.genome.pricing);
            self.history.record_transaction(TransactionRecord { ask_price: pair.ask.price, bid_price: pair.bid.price, price: p });
            self.history.shouts.mark_taken(pair.ask.id);
            self.history.shouts.mark_taken(pair.bid.id);
            out.push(Execution { ask: pair.ask, bid: pair.bid, price: p });
        }
        if !out.is_empty() {
            self.refresh_quote();
        }
        out
    }

    /// Lets the charging policy react to the day's public reports.
    pub fn update_charges(&mut self, obs: &MarketObservation) -> FeeSchedule {
        self.charging.update(obs)
    }
}
