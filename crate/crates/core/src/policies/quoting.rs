use serde::{Deserialize, Serialize};

use super::{Matching, Quoting};
use crate::book::{OrderBook, PriceBounds};

/// Upper bound for asks and lower bound for bids issued by a market.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketQuote {
    pub ask_quote: f64,
    pub bid_quote: f64,
}

impl MarketQuote {
    /// Quote of an empty book: nothing constrains either side.
    pub fn open(bounds: PriceBounds) -> Self {
        MarketQuote { ask_quote: bounds.ceiling, bid_quote: bounds.floor }
    }
}

fn min_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn max_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Quoting {
    pub fn quote(&self, book: &OrderBook, matching: &Matching, bounds: PriceBounds) -> MarketQuote {
        let asks: Vec<f64> = book.asks().iter().map(|s| s.price).collect();
        let bids: Vec<f64> = book.bids().iter().map(|s| s.price).collect();
        let pairs = matching.tentative(&asks, &bids);

        let mut ask_matched = vec![false; asks.len()];
        let mut bid_matched = vec![false; bids.len()];
        for &(a, b) in &pairs {
            ask_matched[a] = true;
            bid_matched[b] = true;
        }
        // queues are sorted, so the first unmatched entry is the nearest to equilibrium
        let lowest_unmatched_ask = asks.iter().zip(&ask_matched).find(|(_, m)| !**m).map(|(p, _)| *p);
        let highest_unmatched_bid = bids.iter().zip(&bid_matched).find(|(_, m)| !**m).map(|(p, _)| *p);
        let lowest_matched_bid = bids.iter().zip(&bid_matched).filter(|(_, m)| **m).map(|(p, _)| *p).reduce(f64::min);
        let highest_matched_ask = asks.iter().zip(&ask_matched).filter(|(_, m)| **m).map(|(p, _)| *p).reduce(f64::max);

        let (ask_quote, bid_quote) = match self {
            Quoting::OneSided => (lowest_unmatched_ask, highest_unmatched_bid),
            Quoting::TwoSided | Quoting::Spread { .. } => (
                min_opt(lowest_matched_bid, lowest_unmatched_ask),
                max_opt(highest_matched_ask, highest_unmatched_bid),
            ),
        };
        let mut quote = MarketQuote {
            ask_quote: bounds.clamp(ask_quote.unwrap_or(bounds.ceiling)),
            bid_quote: bounds.clamp(bid_quote.unwrap_or(bounds.floor)),
        };
        if let Quoting::Spread { spread } = *self {
            if quote.ask_quote < quote.bid_quote {
                let mid = 0.5 * (quote.ask_quote + quote.bid_quote);
                quote.ask_quote = bounds.clamp(mid + 0.5 * spread);
                quote.bid_quote = bounds.clamp(mid - 0.5 * spread);
            }
        }
        quote
    }
}
