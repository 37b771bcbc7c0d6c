//! Auction rules as interchangeable building blocks.
//!
//! A market is assembled from one policy of each of six families: matching
//! (M), quoting (Q), shout accepting (A), clearing (C), pricing (P) and
//! charging (G). Every policy value carries its own parameters.

mod accepting;
mod charging;
mod clearing;
mod matching;
mod pricing;
mod quoting;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use accepting::{accept, AcceptContext, Verdict};
pub use charging::{assess_fees, ChargingState, FeeLedger, FeeSchedule, MarketObservation};
pub use clearing::ClearEvent;
pub use matching::{equilibrium_pairs, max_volume, max_volume_pairs, MatchedPair};
pub use pricing::{price, PricingContext};
pub use quoting::MarketQuote;

/// The six policy families, in canonical genome order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Matching,
    Quoting,
    Accepting,
    Clearing,
    Pricing,
    Charging,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Matching,
        Family::Quoting,
        Family::Accepting,
        Family::Clearing,
        Family::Pricing,
        Family::Charging,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Matching => "matching",
            Family::Quoting => "quoting",
            Family::Accepting => "accepting",
            Family::Clearing => "clearing",
            Family::Pricing => "pricing",
            Family::Charging => "charging",
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            Family::Matching => "M",
            Family::Quoting => "Q",
            Family::Accepting => "A",
            Family::Clearing => "C",
            Family::Pricing => "P",
            Family::Charging => "G",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Matching {
    /// ME: intra-marginal asks against intra-marginal bids.
    Equilibrium,
    /// MV: largest feasible number of pairs.
    MaxVolume,
    /// MT: volume interpolated between none (-1), ME (0) and MV (1).
    Theta { theta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Quoting {
    /// QT
    TwoSided,
    /// QO
    OneSided,
    /// QS: QT with a fixed spread imposed when the quotes cross.
    Spread { spread: f64 },
}

pub const DEFAULT_SPREAD: f64 = 10.0;

/// Which shout types an AY market admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SideFilter {
    AskOnly,
    BidOnly,
    Both,
}

impl SideFilter {
    pub const ALL: [SideFilter; 3] = [SideFilter::AskOnly, SideFilter::BidOnly, SideFilter::Both];

    pub fn token(self) -> &'static str {
        match self {
            SideFilter::AskOnly => "ask",
            SideFilter::BidOnly => "bid",
            SideFilter::Both => "both",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ask" => Some(SideFilter::AskOnly),
            "bid" => Some(SideFilter::BidOnly),
            "both" => Some(SideFilter::Both),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Accepting {
    /// AA
    Always,
    /// AN
    Never,
    /// AQ: shout must be at least as competitive as the market quote.
    QuoteBeating,
    /// AS: first shouts pass, replacements must improve on the trader's own.
    SelfBeating,
    /// AE: shout must beat a windowed mean of transaction prices, relaxed by `delta`.
    EquilibriumBeating { window: usize, delta: f64 },
    /// AD: AE with the window's standard deviation in place of `delta`.
    DeviationBeating { window: usize },
    /// AH: shout's estimated match probability must reach `tau`.
    HistoryBased { tau: f64 },
    /// AT: bounded by the lowest matched bid / highest matched ask in the window.
    TransactionBased { window: usize },
    /// AY: admits shouts by type only.
    SideBased { side: SideFilter },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Clearing {
    /// CC
    Continuous,
    /// CR
    Round,
    /// CP
    Probabilistic { p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Pricing {
    /// PD
    Discriminatory { k: f64 },
    /// PU
    Uniform { k: f64 },
    /// PN
    NPricing { n: usize },
    /// PB
    SideBiased,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Charging {
    /// GF
    Fixed { fees: FeeSchedule },
    /// GB
    BaitAndSwitch { fees: FeeSchedule },
    /// GC
    ChargeCutting { scale: f64, fees: FeeSchedule },
    /// GL
    LearnOrLure { rate: f64, tau: f64, fees: FeeSchedule },
}

impl Charging {
    pub fn fixed_profit_fee(fp: f64) -> Self {
        Charging::Fixed { fees: FeeSchedule::profit_only(fp) }
    }

    pub fn initial_fees(&self) -> FeeSchedule {
        match *self {
            Charging::Fixed { fees }
            | Charging::BaitAndSwitch { fees }
            | Charging::ChargeCutting { fees, .. }
            | Charging::LearnOrLure { fees, .. } => fees,
        }
    }
}

fn in_unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

fn nonneg(x: f64) -> bool {
    x.is_finite() && x >= 0.0
}

/// A parameter that violates its policy's range: `(param, value)`.
pub type RangeViolation = (&'static str, f64);

impl Matching {
    pub fn check(&self) -> Result<(), RangeViolation> {
        match *self {
            Matching::Theta { theta } if !(-1.0..=1.0).contains(&theta) => Err(("theta", theta)),
            _ => Ok(()),
        }
    }
}

impl Quoting {
    pub fn check(&self) -> Result<(), RangeViolation> {
        match *self {
            Quoting::Spread { spread } if !nonneg(spread) => Err(("spread", spread)),
            _ => Ok(()),
        }
    }
}

impl Accepting {
    pub fn check(&self) -> Result<(), RangeViolation> {
        match *self {
            Accepting::EquilibriumBeating { window, delta } => {
                if window < 1 {
                    Err(("w", window as f64))
                } else if !nonneg(delta) {
                    Err(("delta", delta))
                } else {
                    Ok(())
                }
            }
            Accepting::DeviationBeating { window } | Accepting::TransactionBased { window }
                if window < 1 =>
            {
                Err(("w", window as f64))
            }
            Accepting::HistoryBased { tau } if !in_unit(tau) => Err(("tau", tau)),
            _ => Ok(()),
        }
    }
}

impl Clearing {
    pub fn check(&self) -> Result<(), RangeViolation> {
        match *self {
            Clearing::Probabilistic { p } if !in_unit(p) => Err(("p", p)),
            _ => Ok(()),
        }
    }
}

impl Pricing {
    pub fn check(&self) -> Result<(), RangeViolation> {
        match *self {
            Pricing::Discriminatory { k } | Pricing::Uniform { k } if !in_unit(k) => Err(("k", k)),
            Pricing::NPricing { n } if n < 1 => Err(("n", n as f64)),
            _ => Ok(()),
        }
    }
}

impl Charging {
    pub fn check(&self) -> Result<(), RangeViolation> {
        self.initial_fees().check()?;
        match *self {
            Charging::ChargeCutting { scale, .. } if !nonneg(scale) => Err(("scale", scale)),
            Charging::LearnOrLure { rate, .. } if !(rate > 0.0 && rate <= 1.0) => Err(("r", rate)),
            Charging::LearnOrLure { tau, .. } if !in_unit(tau) => Err(("tau", tau)),
            _ => Ok(()),
        }
    }
}

// Canonical grammar tokens. Parsing lives in `genome`.

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Matching::Equilibrium => f.write_str("ME"),
            Matching::MaxVolume => f.write_str("MV"),
            Matching::Theta { theta } => write!(f, "MT(theta={theta})"),
        }
    }
}

impl fmt::Display for Quoting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quoting::TwoSided => f.write_str("QT"),
            Quoting::OneSided => f.write_str("QO"),
            Quoting::Spread { spread } => write!(f, "QS(spread={spread})"),
        }
    }
}

impl fmt::Display for Accepting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Accepting::Always => f.write_str("AA"),
            Accepting::Never => f.write_str("AN"),
            Accepting::QuoteBeating => f.write_str("AQ"),
            Accepting::SelfBeating => f.write_str("AS"),
            Accepting::EquilibriumBeating { window, delta } => write!(f, "AE(w={window},delta={delta})"),
            Accepting::DeviationBeating { window } => write!(f, "AD(w={window})"),
            Accepting::HistoryBased { tau } => write!(f, "AH(tau={tau})"),
            Accepting::TransactionBased { window } => write!(f, "AT(w={window})"),
            Accepting::SideBased { side } => write!(f, "AY(side={})", side.token()),
        }
    }
}

impl fmt::Display for Clearing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clearing::Continuous => f.write_str("CC"),
            Clearing::Round => f.write_str("CR"),
            Clearing::Probabilistic { p } => write!(f, "CP(p={p})"),
        }
    }
}

impl fmt::Display for Pricing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pricing::Discriminatory { k } => write!(f, "PD(k={k})"),
            Pricing::Uniform { k } => write!(f, "PU(k={k})"),
            Pricing::NPricing { n } => write!(f, "PN(n={n})"),
            Pricing::SideBiased => f.write_str("PB"),
        }
    }
}

impl fmt::Display for Charging {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, fees) = match self {
            Charging::Fixed { fees } => ("GF", fees),
            Charging::BaitAndSwitch { fees } => ("GB", fees),
            Charging::ChargeCutting { fees, .. } => ("GC", fees),
            Charging::LearnOrLure { fees, .. } => ("GL", fees),
        };
        let mut args: Vec<String> = Vec::new();
        match self {
            Charging::ChargeCutting { scale, .. } => args.push(format!("scale={scale}")),
            Charging::LearnOrLure { rate, tau, .. } => {
                args.push(format!("r={rate}"));
                args.push(format!("tau={tau}"));
            }
            _ => {}
        }
        for (key, value) in [("fr", fees.registration), ("fi", fees.information), ("fs", fees.shout), ("ft", fees.transaction)] {
            if value != 0.0 {
                args.push(format!("{key}={value}"));
            }
        }
        args.push(format!("fp={}", fees.profit));
        write!(f, "{name}({})", args.join(","))
    }
}
