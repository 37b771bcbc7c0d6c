//! Economic evaluation of single-market runs: allocative efficiency and
//! Smith's coefficient of convergence.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::book::{equilibrium_of_sorted, PriceBounds};
use crate::game::GameResult;
use crate::traders::{Role, TraderSpec};

/// Underlying demand and supply: one unit per trader.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Schedule {
    pub buyers: Vec<f64>,
    pub sellers: Vec<f64>,
}

impl Schedule {
    pub fn new(buyers: Vec<f64>, sellers: Vec<f64>) -> Self {
        Schedule { buyers, sellers }
    }

    pub fn from_traders(traders: &[TraderSpec]) -> Self {
        let pick = |role| traders.iter().filter(|t| t.role == role).map(|t| t.private_value).collect();
        Schedule { buyers: pick(Role::Buyer), sellers: pick(Role::Seller) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub price: f64,
    pub quantity: usize,
    pub max_surplus: f64,
}

pub fn theoretical_equilibrium(schedule: &Schedule, bounds: PriceBounds) -> Equilibrium {
    let mut sellers = schedule.sellers.clone();
    sellers.sort_by(f64::total_cmp);
    let mut buyers = schedule.buyers.clone();
    buyers.sort_by(|a, b| b.total_cmp(a));
    let report = equilibrium_of_sorted(&sellers, &buyers, bounds);
    let q = report.quantity;
    let max_surplus = buyers[..q].iter().zip(&sellers[..q]).map(|(b, s)| b - s).sum();
    Equilibrium { price: report.midpoint, quantity: q, max_surplus }
}

/// `100 * realized / (periods * max_surplus)`.
///
/// With nothing to gain, a run without trades is fully efficient and one
/// with trades is undefined.
pub fn allocative_efficiency(realized: f64, max_surplus: f64, periods: usize, traded: bool) -> Option<f64> {
    if max_surplus <= 0.0 || periods == 0 {
        return (!traded).then_some(100.0);
    }
    Some(100.0 * realized / (periods as f64 * max_surplus))
}

/// Smith's alpha: root-mean-square deviation from `p0`, as a percentage of `p0`.
pub fn smith_alpha(prices: &[f64], p0: f64) -> Option<f64> {
    if prices.is_empty() || p0 <= 0.0 {
        return None;
    }
    let ms = prices.iter().map(|p| (p - p0).powi(2)).sum::<f64>() / prices.len() as f64;
    Some(100.0 / p0 * ms.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EconReport {
    pub ea: Option<f64>,
    /// Mean of the daily alphas over days with trades.
    pub alpha: Option<f64>,
    pub equilibrium: Equilibrium,
}

/// Evaluates market `market` of a finished game against `schedule`, which
/// is assumed present in that market every day.
pub fn econ_report(result: &GameResult, market: usize, schedule: &Schedule, bounds: PriceBounds) -> EconReport {
    let eq = theoretical_equilibrium(schedule, bounds);
    let days = result.daily.get(market).map_or(0, Vec::len);
    let mut realized = 0.0;
    let mut per_day: Vec<Vec<f64>> = vec![Vec::new(); days];
    for t in result.transactions.iter().filter(|t| t.market == market) {
        realized += t.surplus();
        per_day[t.day as usize].push(t.price);
    }
    let traded = per_day.iter().any(|d| !d.is_empty());
    let alphas: Vec<f64> = per_day.iter().filter_map(|p| smith_alpha(p, eq.price)).collect();
    let alpha = (!alphas.is_empty()).then(|| alphas.iter().sum::<f64>() / alphas.len() as f64);
    EconReport { ea: allocative_efficiency(realized, eq.max_surplus, days, traded), alpha, equilibrium: eq }
}

/// One evaluated run in an isolation experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub mechanism: String,
    pub strategy: String,
    pub ea: Option<f64>,
    pub alpha: Option<f64>,
}

pub fn write_runs_csv<W: Write>(records: &[RunRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["run", "mechanism", "strategy", "ea", "alpha"])?;
    let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
    for r in records {
        w.write_record([r.run.to_string(), r.mechanism.clone(), r.strategy.clone(), opt(r.ea), opt(r.alpha)])?;
    }
    w.flush()?;
    Ok(())
}
