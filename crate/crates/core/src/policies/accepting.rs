use super::{Accepting, MarketQuote, SideFilter};
use crate::book::{Shout, Side};
use crate::history::MarketHistory;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }

    pub fn is_accept(self) -> bool {
        self == Verdict::Accept
    }
}

/// What an accepting policy may look at when judging a shout.
#[derive(Debug, Clone, Copy)]
pub struct AcceptContext<'a> {
    pub quote: MarketQuote,
    pub history: &'a MarketHistory,
    /// The submitting trader's shout currently standing in this market.
    pub standing: Option<&'a Shout>,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn std_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64).sqrt()
}

fn beats_estimate(shout: &Shout, estimate: f64, slack: f64) -> bool {
    match shout.side {
        Side::Bid => shout.price >= estimate - slack,
        Side::Ask => shout.price <= estimate + slack,
    }
}

pub fn accept(shout: &Shout, ctx: &AcceptContext<'_>, policy: &Accepting) -> Verdict {
    let ok = match *policy {
        Accepting::Always => true,
        Accepting::Never => false,
        Accepting::QuoteBeating => match shout.side {
            Side::Bid => shout.price >= ctx.quote.bid_quote,
            Side::Ask => shout.price <= ctx.quote.ask_quote,
        },
        Accepting::SelfBeating => match ctx.standing {
            Some(own) if own.side == shout.side => shout.beats(own),
            _ => true,
        },
        Accepting::EquilibriumBeating { window, delta } => {
            let prices: Vec<f64> = ctx.history.recent(window).map(|t| t.price).collect();
            prices.is_empty() || beats_estimate(shout, mean(&prices), delta)
        }
        Accepting::DeviationBeating { window } => {
            let prices: Vec<f64> = ctx.history.recent(window).map(|t| t.price).collect();
            prices.is_empty() || beats_estimate(shout, mean(&prices), std_dev(&prices))
        }
        Accepting::HistoryBased { tau } => match ctx.history.shouts.belief(shout.side, shout.price) {
            Some(q) => q >= tau,
            None => true,
        },
        Accepting::TransactionBased { window } => {
            let recent: Vec<_> = ctx.history.recent(window).collect();
            if recent.is_empty() {
                true
            } else {
                match shout.side {
                    Side::Bid => {
                        let lowest = recent.iter().map(|t| t.bid_price).fold(f64::INFINITY, f64::min);
                        shout.price >= lowest
                    }
                    Side::Ask => {
                        let highest = recent.iter().map(|t| t.ask_price).fold(f64::NEG_INFINITY, f64::max);
                        shout.price <= highest
                    }
                }
            }
        }
        Accepting::SideBased { side } => matches!(
            (side, shout.side),
            (SideFilter::Both, _) | (SideFilter::AskOnly, Side::Ask) | (SideFilter::BidOnly, Side::Bid)
        ),
    };
    Verdict::from_bool(ok)
}
