use serde::{Deserialize, Serialize};

use super::Charging;

/// Fees on registration, information, shouts, transactions, and a fraction of profit.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FeeSchedule {
    pub registration: f64,
    pub information: f64,
    pub shout: f64,
    pub transaction: f64,
    pub profit: f64,
}

impl FeeSchedule {
    pub fn profit_only(profit: f64) -> Self {
        FeeSchedule { profit, ..Default::default() }
    }

    pub fn check(&self) -> Result<(), super::RangeViolation> {
        for (name, v) in [
            ("fr", self.registration),
            ("fi", self.information),
            ("fs", self.shout),
            ("ft", self.transaction),
            ("fp", self.profit),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err((name, v));
            }
        }
        if self.profit > 1.0 {
            return Err(("fp", self.profit));
        }
        Ok(())
    }

    fn map(self, f: impl Fn(f64) -> f64) -> Self {
        FeeSchedule {
            registration: f(self.registration),
            information: f(self.information),
            shout: f(self.shout),
            transaction: f(self.transaction),
            profit: f(self.profit).min(1.0),
        }
    }

    fn zip(self, other: Self, f: impl Fn(f64, f64) -> f64) -> Self {
        FeeSchedule {
            registration: f(self.registration, other.registration),
            information: f(self.information, other.information),
            shout: f(self.shout, other.shout),
            transaction: f(self.transaction, other.transaction),
            profit: f(self.profit, other.profit).min(1.0),
        }
    }
}

/// Chargeable activity of one trader in one market on one day.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FeeLedger {
    pub registrations: u32,
    pub info_requests: u32,
    pub shouts: u32,
    pub transactions: u32,
    /// Realized trading profit before fees.
    pub profit: f64,
}

impl std::ops::Add for FeeLedger {
    type Output = FeeLedger;

    fn add(self, o: FeeLedger) -> FeeLedger {
        FeeLedger {
            registrations: self.registrations + o.registrations,
            info_requests: self.info_requests + o.info_requests,
            shouts: self.shouts + o.shouts,
            transactions: self.transactions + o.transactions,
            profit: self.profit + o.profit,
        }
    }
}

pub fn assess_fees(ledger: &FeeLedger, fees: &FeeSchedule) -> f64 {
    fees.registration * ledger.registrations as f64
        + fees.information * ledger.info_requests as f64
        + fees.shout * ledger.shouts as f64
        + fees.transaction * ledger.transactions as f64
        + fees.profit * ledger.profit.max(0.0)
}

/// Public end-of-day report of every market, as seen by one of them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MarketObservation {
    /// Index of the observing market in the slices below.
    pub own: usize,
    pub shares: Vec<f64>,
    pub fees: Vec<FeeSchedule>,
    /// Fee income of each market on the day.
    pub income: Vec<f64>,
}

const BAIT_TARGET_SHARE: f64 = 0.3;
const BAIT_RECUT_SHARE: f64 = 0.2;
const BAIT_STEP: f64 = 0.05;

/// Fees in force at a market plus whatever its charging policy remembers.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargingState {
    pub policy: Charging,
    pub fees: FeeSchedule,
    raising: bool,
}

impl ChargingState {
    pub fn new(policy: Charging) -> Self {
        ChargingState { policy, fees: policy.initial_fees(), raising: false }
    }

    /// Adjusts fees after a day's public reports.
    pub fn update(&mut self, obs: &MarketObservation) -> FeeSchedule {
        let own_share = obs.shares.get(obs.own).copied().unwrap_or(0.0);
        match self.policy {
            Charging::Fixed { .. } => {}
            Charging::BaitAndSwitch { .. } => {
                if self.raising && own_share < BAIT_RECUT_SHARE {
                    self.raising = false;
                } else if !self.raising && own_share >= BAIT_TARGET_SHARE {
                    self.raising = true;
                }
                let factor = if self.raising { 1.0 + BAIT_STEP } else { 1.0 - BAIT_STEP };
                self.fees = self.fees.map(|f| f * factor);
            }
            Charging::ChargeCutting { scale, .. } => {
                let cheapest = obs
                    .fees
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != obs.own)
                    .map(|(_, f)| *f)
                    .reduce(|a, b| a.zip(b, f64::min));
                if let Some(min) = cheapest {
                    self.fees = min.map(|f| f * scale);
                }
            }
            Charging::LearnOrLure { rate, tau, .. } => {
                if exploring(&obs.shares, tau) {
                    self.fees = self.fees.map(|f| f * (1.0 - rate));
                } else if let Some(best) = most_profitable(obs) {
                    self.fees = self.fees.zip(best, |f, target| f + rate * (target - f));
                }
            }
        }
        self.fees
    }
}

/// Flat share distribution (coefficient of variation below `tau`) means traders
/// are still exploring.
fn exploring(shares: &[f64], tau: f64) -> bool {
    if shares.is_empty() {
        return true;
    }
    let n = shares.len() as f64;
    let mean = shares.iter().sum::<f64>() / n;
    if mean <= 0.0 {
        return true;
    }
    let sd = (shares.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n).sqrt();
    sd / mean < tau
}

fn most_profitable(obs: &MarketObservation) -> Option<FeeSchedule> {
    obs.income
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .and_then(|(i, _)| obs.fees.get(i).copied())
}
