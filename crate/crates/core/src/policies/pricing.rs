use super::{MarketQuote, MatchedPair, Pricing};
use crate::history::MarketHistory;

/// Market state a pricing policy may consult, captured before matching.
#[derive(Debug, Clone, Copy)]
pub struct PricingContext<'a> {
    pub quote: MarketQuote,
    pub history: &'a MarketHistory,
    pub standing_asks: usize,
    pub standing_bids: usize,
}

fn clamp_to_pair(price: f64, ask: f64, bid: f64) -> f64 {
    price.clamp(ask, bid)
}

/// Transaction price for a matched pair; always within `[ask, bid]`.
pub fn price(pair: &MatchedPair, ctx: &PricingContext<'_>, policy: &Pricing) -> f64 {
    let ask = pair.ask.price;
    let bid = pair.bid.price;
    debug_assert!(ask <= bid);
    match *policy {
        Pricing::Discriminatory { k } => ask + k * (bid - ask),
        Pricing::Uniform { k } => {
            let lo = ctx.quote.bid_quote.min(ctx.quote.ask_quote);
            let hi = ctx.quote.bid_quote.max(ctx.quote.ask_quote);
            clamp_to_pair(lo + k * (hi - lo), ask, bid)
        }
        Pricing::NPricing { n } => {
            let mut sum = 0.0;
            let mut count = 0usize;
            for t in ctx.history.recent(n) {
                sum += t.ask_price + t.bid_price;
                count += 2;
            }
            if count == 0 {
                0.5 * (ask + bid)
            } else {
                clamp_to_pair(sum / count as f64, ask, bid)
            }
        }
        Pricing::SideBiased => {
            let total = ctx.standing_asks + ctx.standing_bids;
            let k = if total == 0 { 0.5 } else { ctx.standing_bids as f64 / total as f64 };
            ask + k * (bid - ask)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::book::Shout;
    use crate::history::TransactionRecord;

    fn pair(a: f64, b: f64) -> MatchedPair {
        MatchedPair { ask: Shout::ask(1, 1, a), bid: Shout::bid(2, 2, b) }
    }

    fn ctx(h: &MarketHistory) -> PricingContext<'_> {
        PricingContext { quote: MarketQuote { ask_quote: 200.0, bid_quote: 0.0 }, history: h, standing_asks: 0, standing_bids: 0 }
    }

    #[test]
    fn discriminatory_midpoint() {
        let h = MarketHistory::default();
        assert_eq!(price(&pair(80.0, 90.0), &ctx(&h), &Pricing::Discriminatory { k: 0.5 }), 85.0);
        assert_eq!(price(&pair(80.0, 90.0), &ctx(&h), &Pricing::Discriminatory { k: 0.0 }), 80.0);
    }

    #[test]
    fn n_pricing_clamps() {
        let mut h = MarketHistory::default();
        h.record_transaction(TransactionRecord { ask_price: 80.0, bid_price: 90.0, price: 85.0 });
        h.record_transaction(TransactionRecord { ask_price: 82.0, bid_price: 92.0, price: 87.0 });
        assert_eq!(price(&pair(88.0, 89.0), &ctx(&h), &Pricing::NPricing { n: 2 }), 88.0);
        assert_eq!(price(&pair(80.0, 95.0), &ctx(&h), &Pricing::NPricing { n: 2 }), 86.0);
        // only the latest pair
        assert_eq!(price(&pair(80.0, 95.0), &ctx(&h), &Pricing::NPricing { n: 1 }), 87.0);
    }

    #[test]
    fn n_pricing_without_history_uses_midpoint() {
        let h = MarketHistory::default();
        assert_eq!(price(&pair(80.0, 90.0), &ctx(&h), &Pricing::NPricing { n: 4 }), 85.0);
    }

    #[test]
    fn side_biased_favours_scarce_side() {
        let h = MarketHistory::default();
        let mut c = ctx(&h);
        c.standing_asks = 9;
        c.standing_bids = 1;
        let p = price(&pair(80.0, 90.0), &c, &Pricing::SideBiased);
        assert!((p - 81.0).abs() < 1e-12);
        c.standing_asks = 0;
        c.standing_bids = 0;
        assert_eq!(price(&pair(80.0, 90.0), &c, &Pricing::SideBiased), 85.0);
    }

    #[test]
    fn uniform_between_quotes() {
        let h = MarketHistory::default();
        let mut c = ctx(&h);
        c.quote = MarketQuote { ask_quote: 90.0, bid_quote: 80.0 };
        assert_eq!(price(&pair(60.0, 130.0), &c, &Pricing::Uniform { k: 0.5 }), 85.0);
        // outside the pair: the nearer end is used
        assert_eq!(price(&pair(87.0, 95.0), &c, &Pricing::Uniform { k: 0.5 }), 87.0);
        // crossed quotes are swapped before interpolating
        c.quote = MarketQuote { ask_quote: 80.0, bid_quote: 90.0 };
        let p = price(&pair(60.0, 130.0), &c, &Pricing::Uniform { k: 0.7 });
        assert!((p - 87.0).abs() < 1e-9);
    }
}
