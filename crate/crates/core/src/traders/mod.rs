//! Trading agents: ZI-C, ZIP, Roth-Erev and GD strategies, each holding a
//! single unit per day, plus the softmax market selector every trader uses.

mod gd;
mod roth_erev;
mod selector;
mod zic;
mod zip;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::book::{PriceBounds, Side, TraderId};
use crate::history::ShoutMemory;
use crate::policies::MarketQuote;

pub use gd::Gd;
pub use roth_erev::{RothErev, RothErevParams};
pub use selector::MarketSelector;
pub use zic::Zic;
pub use zip::{Zip, ZipParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Buyer,
    Seller,
}

impl Role {
    pub fn side(self) -> Side {
        match self {
            Role::Buyer => Side::Bid,
            Role::Seller => Side::Ask,
        }
    }

    /// Whether `price` leaves a non-negative surplus for a trader valuing the unit at `value`.
    pub fn is_rational(self, value: f64, price: f64) -> bool {
        match self {
            Role::Buyer => price <= value,
            Role::Seller => price >= value,
        }
    }

    pub fn surplus(self, value: f64, price: f64) -> f64 {
        match self {
            Role::Buyer => value - price,
            Role::Seller => price - value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StrategyKind {
    #[serde(rename = "ZIC")]
    Zic,
    #[serde(rename = "ZIP")]
    Zip,
    #[serde(rename = "RE")]
    RothErev,
    #[serde(rename = "GD")]
    Gd,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [StrategyKind::Zic, StrategyKind::Zip, StrategyKind::RothErev, StrategyKind::Gd];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Zic => "ZIC",
            StrategyKind::Zip => "ZIP",
            StrategyKind::RothErev => "RE",
            StrategyKind::Gd => "GD",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().replace('-', "").as_str() {
            "ZIC" => Ok(StrategyKind::Zic),
            "ZIP" => Ok(StrategyKind::Zip),
            "RE" | "ROTHEREV" => Ok(StrategyKind::RothErev),
            "GD" => Ok(StrategyKind::Gd),
            other => Err(format!("unknown trading strategy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraderSpec {
    pub id: TraderId,
    pub role: Role,
    pub strategy: StrategyKind,
    pub private_value: f64,
}

/// What a trader sees of the market it is trading in when forming an offer.
#[derive(Debug, Clone, Copy)]
pub struct OfferContext<'a> {
    pub bounds: PriceBounds,
    pub quote: MarketQuote,
    pub memory: &'a ShoutMemory,
}

/// A public event in the trader's market.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MarketEvent {
    /// A shout was placed and is standing.
    Shout { side: Side, price: f64 },
    /// A trade executed; `side` is the side of the shout that completed it.
    Trade { side: Side, price: f64 },
}

#[derive(Debug, Clone)]
pub enum Strategy {
    Zic(Zic),
    Zip(Zip),
    RothErev(RothErev),
    Gd(Gd),
}

impl Strategy {
    pub fn new<R: Rng + ?Sized>(kind: StrategyKind, role: Role, value: f64, rng: &mut R) -> Self {
        match kind {
            StrategyKind::Zic => Strategy::Zic(Zic),
            StrategyKind::Zip => Strategy::Zip(Zip::new(role, value, ZipParams::sample(rng), rng)),
            StrategyKind::RothErev => Strategy::RothErev(RothErev::new(RothErevParams::default())),
            StrategyKind::Gd => Strategy::Gd(Gd),
        }
    }
}

/// A trader participating in a game.
#[derive(Debug, Clone)]
pub struct Trader {
    pub spec: TraderSpec,
    pub strategy: Strategy,
    pub selector: MarketSelector,
    traded_today: bool,
}

impl Trader {
    pub fn new<R: Rng + ?Sized>(spec: TraderSpec, markets: usize, temperature: f64, rng: &mut R) -> Self {
        Trader {
            strategy: Strategy::new(spec.strategy, spec.role, spec.private_value, rng),
            selector: MarketSelector::new(markets, temperature),
            spec,
            traded_today: false,
        }
    }

    pub fn id(&self) -> TraderId {
        self.spec.id
    }

    pub fn role(&self) -> Role {
        self.spec.role
    }

    pub fn value(&self) -> f64 {
        self.spec.private_value
    }

    pub fn has_traded(&self) -> bool {
        self.traded_today
    }

    pub fn start_day(&mut self) {
        self.traded_today = false;
        if let Strategy::RothErev(re) = &mut self.strategy {
            re.start_day();
        }
    }

    /// Price to shout this round, or `None` to stay silent.
    ///
    /// Offers are individually rational: buyers never bid above their value
    /// and sellers never ask below it.
    pub fn form_offer<R: Rng + ?Sized>(&mut self, ctx: &OfferContext<'_>, rng: &mut R) -> Option<f64> {
        if self.traded_today {
            return None;
        }
        let role = self.spec.role;
        let value = self.spec.private_value;
        let raw = match &mut self.strategy {
            Strategy::Zic(z) => z.offer(role, value, ctx, rng),
            Strategy::Zip(z) => Some(z.price()),
            Strategy::RothErev(re) => Some(re.offer(role, value, ctx, rng)),
            Strategy::Gd(gd) => gd.offer(role, value, ctx, rng),
        }?;
        let price = ctx.bounds.clamp(raw);
        role.is_rational(value, price).then_some(price)
    }

    /// Reacts to an event in the market this trader is in today.
    pub fn observe<R: Rng + ?Sized>(&mut self, event: &MarketEvent, rng: &mut R) {
        if let Strategy::Zip(z) = &mut self.strategy {
            z.observe(event, !self.traded_today, rng);
        }
    }

    pub fn record_trade(&mut self) {
        self.traded_today = true;
    }

    /// End-of-day feedback: `gross` is trading profit, `net` is after fees.
    pub fn end_day(&mut self, market: usize, gross: f64, net: f64) {
        self.selector.update(market, net);
        if let Strategy::RothErev(re) = &mut self.strategy {
            re.reinforce(gross.max(0.0));
        }
    }
}
