//! Multi-market tournaments: traders pick a market each day, trade for a
//! number of rounds, pay fees, and markets are scored daily.

use std::collections::HashMap;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::book::{PriceBounds, TraderId};
use crate::error::ConfigError;
use crate::genome::MechanismGenome;
use crate::history::DEFAULT_SHOUT_MEMORY;
use crate::market::{Execution, Market, Submission};
use crate::policies::{assess_fees, FeeLedger, FeeSchedule, MarketObservation};
use crate::traders::{MarketEvent, OfferContext, Role, StrategyKind, Trader, TraderSpec};

/// Builds a population of `size` traders: strategies assigned round-robin in
/// blocks, each block split evenly between buyers and sellers, private values
/// uniform on `[low, high]`.
pub fn population<R: Rng + ?Sized>(
    size: usize,
    strategies: &[StrategyKind],
    low: f64,
    high: f64,
    rng: &mut R,
) -> Vec<TraderSpec> {
    assert!(!strategies.is_empty(), "population needs at least one strategy");
    (0..size)
        .map(|i| {
            let strategy = strategies[i * strategies.len() / size.max(1)];
            let role = if i % 2 == 0 { Role::Buyer } else { Role::Seller };
            let private_value = if high > low { rng.gen_range(low..=high) } else { low };
            TraderSpec { id: TraderId(i as u32), role, strategy, private_value }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub num_days: u32,
    pub rounds_per_day: u32,
    pub markets: Vec<MechanismGenome>,
    pub traders: Vec<TraderSpec>,
    pub bounds: PriceBounds,
    pub shout_memory: usize,
    /// Softmax temperature of the traders' market selection.
    pub selector_temperature: f64,
    pub seed: u64,
}

impl GameConfig {
    pub fn new(markets: Vec<MechanismGenome>, traders: Vec<TraderSpec>, num_days: u32, rounds_per_day: u32, seed: u64) -> Self {
        GameConfig {
            num_days,
            rounds_per_day,
            markets,
            traders,
            bounds: PriceBounds::default(),
            shout_memory: DEFAULT_SHOUT_MEMORY,
            selector_temperature: 1.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.num_days == 0 || self.rounds_per_day == 0 {
            return Err(ConfigError::Invalid("a game needs at least one day and one round".into()));
        }
        if self.markets.is_empty() {
            return Err(ConfigError::Invalid("a game needs at least one market".into()));
        }
        if !(self.bounds.floor >= 0.0 && self.bounds.ceiling > self.bounds.floor) {
            return Err(ConfigError::Invalid(format!("bad price bounds {:?}", self.bounds)));
        }
        for (i, g) in self.markets.iter().enumerate() {
            g.validate().map_err(|source| ConfigError::Genome { name: format!("market {i}"), source })?;
        }
        let mut seen = std::collections::HashSet::new();
        for t in &self.traders {
            if !seen.insert(t.id) {
                return Err(ConfigError::Invalid(format!("duplicate trader id {}", t.id.0)));
            }
            if !t.private_value.is_finite() || t.private_value < 0.0 {
                return Err(ConfigError::Invalid(format!("trader {} has value {}", t.id.0, t.private_value)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DailyScore {
    pub market_share: f64,
    pub profit_share: f64,
    pub tsr: f64,
    pub combined: f64,
}

/// What one market did on one day.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MarketDay {
    pub registered: usize,
    pub shouts_placed: usize,
    /// Accepted shouts that ended in a transaction (two per trade).
    pub shouts_matched: usize,
    pub fee_income: f64,
}

pub fn daily_score(own: &MarketDay, all: &[MarketDay], total_traders: usize) -> DailyScore {
    let ratio = |num: f64, den: f64| if den > 0.0 { num / den } else { 0.0 };
    let total_income: f64 = all.iter().map(|d| d.fee_income).sum();
    let market_share = ratio(own.registered as f64, total_traders as f64);
    let profit_share = ratio(own.fee_income, total_income);
    let tsr = ratio(own.shouts_matched as f64, own.shouts_placed as f64);
    DailyScore { market_share, profit_share, tsr, combined: (market_share + profit_share + tsr) / 3.0 }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transaction {
    pub day: u32,
    /// Round of the clearing; equal to `rounds_per_day` for the day-end clear.
    pub round: u32,
    pub market: usize,
    pub buyer: TraderId,
    pub seller: TraderId,
    pub bid: f64,
    pub ask: f64,
    pub price: f64,
    pub buyer_value: f64,
    pub seller_value: f64,
}

impl Transaction {
    pub fn surplus(&self) -> f64 {
        self.buyer_value - self.seller_value
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameResult {
    pub markets: Vec<MechanismGenome>,
    /// `daily[m][d]` is market `m`'s score on day `d`.
    pub daily: Vec<Vec<DailyScore>>,
    pub days: Vec<Vec<MarketDay>>,
    /// Mean combined daily score of each market.
    pub scores: Vec<f64>,
    pub transactions: Vec<Transaction>,
    /// Cumulative chargeable activity per market.
    pub ledgers: Vec<FeeLedger>,
    pub fee_income: Vec<f64>,
    /// Cumulative trading profit per trader, before and after fees.
    pub trader_gross: Vec<f64>,
    pub trader_net: Vec<f64>,
}

impl GameResult {
    pub fn total_surplus(&self) -> f64 {
        self.transactions.iter().map(Transaction::surplus).sum()
    }

    /// Writes the per-day score table.
    pub fn write_daily_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["day", "market", "market_share", "profit_share", "tsr", "combined"])?;
        let days = self.daily.first().map_or(0, Vec::len);
        for d in 0..days {
            for (m, scores) in self.daily.iter().enumerate() {
                let s = scores[d];
                w.write_record([
                    d.to_string(),
                    m.to_string(),
                    s.market_share.to_string(),
                    s.profit_share.to_string(),
                    s.tsr.to_string(),
                    s.combined.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

struct Engine {
    config: GameConfig,
    rng: ChaCha8Rng,
    markets: Vec<Market>,
    traders: Vec<Trader>,
    index: HashMap<TraderId, usize>,
    result: GameResult,
}

struct DayState {
    choice: Vec<usize>,
    members: Vec<Vec<usize>>,
    ledgers: Vec<FeeLedger>,
    market_days: Vec<MarketDay>,
}

pub fn run_game(config: &GameConfig) -> Result<GameResult, ConfigError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n_markets = config.markets.len();
    let traders: Vec<Trader> =
        config.traders.iter().map(|s| Trader::new(*s, n_markets, config.selector_temperature, &mut rng)).collect();
    let markets = config.markets.iter().map(|g| Market::new(*g, config.bounds, config.shout_memory)).collect();
    let index = config.traders.iter().enumerate().map(|(i, s)| (s.id, i)).collect();
    let result = GameResult {
        markets: config.markets.clone(),
        daily: vec![Vec::with_capacity(config.num_days as usize); n_markets],
        days: vec![Vec::with_capacity(config.num_days as usize); n_markets],
        scores: vec![0.0; n_markets],
        transactions: Vec::new(),
        ledgers: vec![FeeLedger::default(); n_markets],
        fee_income: vec![0.0; n_markets],
        trader_gross: vec![0.0; traders.len()],
        trader_net: vec![0.0; traders.len()],
    };
    let mut engine = Engine { config: config.clone(), rng, markets, traders, index, result };
    for day in 0..config.num_days {
        engine.play_day(day);
    }
    let mut result = engine.result;
    for (m, daily) in result.daily.iter().enumerate() {
        result.scores[m] = daily.iter().map(|s| s.combined).sum::<f64>() / daily.len() as f64;
    }
    Ok(result)
}

impl Engine {
    fn play_day(&mut self, day: u32) {
        let n_markets = self.markets.len();
        let mut state = DayState {
            choice: Vec::with_capacity(self.traders.len()),
            members: vec![Vec::new(); n_markets],
            ledgers: vec![FeeLedger { registrations: 1, ..FeeLedger::default() }; self.traders.len()],
            market_days: vec![MarketDay::default(); n_markets],
        };
        for (i, t) in self.traders.iter_mut().enumerate() {
            t.start_day();
            let m = t.selector.select(&mut self.rng);
            state.choice.push(m);
            state.members[m].push(i);
            state.market_days[m].registered += 1;
        }

        let mut order: Vec<usize> = (0..self.traders.len()).collect();
        for round in 0..self.config.rounds_per_day {
            order.shuffle(&mut self.rng);
            for &i in &order {
                self.trader_turn(i, day, round, &mut state);
            }
            for m in 0..n_markets {
                let ex = self.markets[m].end_round(&mut self.rng);
                self.settle(m, day, round, &ex, &mut state);
            }
        }
        for m in 0..n_markets {
            let ex = self.markets[m].end_day(&mut self.rng);
            self.settle(m, day, self.config.rounds_per_day, &ex, &mut state);
        }
        self.close_day(&mut state);
    }

    fn trader_turn(&mut self, i: usize, day: u32, round: u32, state: &mut DayState) {
        let m = state.choice[i];
        let market = &self.markets[m];
        let ctx = OfferContext { bounds: market.bounds(), quote: market.quote(), memory: &market.history().shouts };
        let Some(price) = self.traders[i].form_offer(&ctx, &mut self.rng) else { return };
        let id = self.traders[i].id();
        let side = self.traders[i].role().side();
        let Submission::Accepted { shout, executions } = self.markets[m].submit(id, side, price, day, round, &mut self.rng)
        else {
            return;
        };
        state.ledgers[i].shouts += 1;
        state.market_days[m].shouts_placed += 1;
        if executions.is_empty() {
            self.broadcast(m, &MarketEvent::Shout { side: shout.side, price: shout.price }, state);
        } else {
            self.settle(m, day, round, &executions, state);
        }
    }

    fn broadcast(&mut self, m: usize, event: &MarketEvent, state: &DayState) {
        for &j in &state.members[m] {
            self.traders[j].observe(event, &mut self.rng);
        }
    }

    fn settle(&mut self, m: usize, day: u32, round: u32, executions: &[Execution], state: &mut DayState) {
        for ex in executions {
            let b = self.index[&ex.bid.trader];
            let s = self.index[&ex.ask.trader];
            let buyer_value = self.traders[b].value();
            let seller_value = self.traders[s].value();
            for (i, gain) in [(b, buyer_value - ex.price), (s, ex.price - seller_value)] {
                self.traders[i].record_trade();
                state.ledgers[i].transactions += 1;
                state.ledgers[i].profit += gain;
            }
            state.market_days[m].shouts_matched += 2;
            self.result.transactions.push(Transaction {
                day,
                round,
                market: m,
                buyer: ex.bid.trader,
                seller: ex.ask.trader,
                bid: ex.bid.price,
                ask: ex.ask.price,
                price: ex.price,
                buyer_value,
                seller_value,
            });
            self.broadcast(m, &MarketEvent::Trade { side: ex.aggressor(), price: ex.price }, state);
        }
    }

    fn close_day(&mut self, state: &mut DayState) {
        let fees: Vec<FeeSchedule> = self.markets.iter().map(Market::fees).collect();
        for (i, t) in self.traders.iter_mut().enumerate() {
            let m = state.choice[i];
            let ledger = state.ledgers[i];
            let fee = assess_fees(&ledger, &fees[m]);
            let gross = ledger.profit;
            let net = gross - fee;
            state.market_days[m].fee_income += fee;
            self.result.ledgers[m] = self.result.ledgers[m] + ledger;
            self.result.fee_income[m] += fee;
            self.result.trader_gross[i] += gross;
            self.result.trader_net[i] += net;
            t.end_day(m, gross, net);
        }
        let total = self.traders.len();
        let mut shares = Vec::with_capacity(self.markets.len());
        for (m, md) in state.market_days.iter().enumerate() {
            let score = daily_score(md, &state.market_days, total);
            shares.push(score.market_share);
            self.result.daily[m].push(score);
            self.result.days[m].push(*md);
        }
        let income: Vec<f64> = state.market_days.iter().map(|d| d.fee_income).collect();
        for (m, market) in self.markets.iter_mut().enumerate() {
            let obs = MarketObservation { own: m, shares: shares.clone(), fees: fees.clone(), income: income.clone() };
            market.update_charges(&obs);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn genome(s: &str) -> MechanismGenome {
        s.parse().unwrap()
    }

    const CDA: &str = "ME + QT + AQ + CC + PD(k=0.5) + GF(fp=0.1)";

    #[test]
    fn score_examples() {
        let all = [
            MarketDay { registered: 60, shouts_placed: 8, shouts_matched: 6, fee_income: 10.0 },
            MarketDay { registered: 60, shouts_placed: 0, shouts_matched: 0, fee_income: 30.0 },
        ];
        let a = daily_score(&all[0], &all, 120);
        let b = daily_score(&all[1], &all, 120);
        assert_eq!(a.market_share, 0.5);
        assert_eq!(a.profit_share, 0.25);
        assert_eq!(b.profit_share, 0.75);
        assert_eq!(a.tsr, 0.75);
        assert_eq!(b.tsr, 0.0);
        assert!((a.combined - 1.5 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_income_gives_zero_profit_share() {
        let all = [MarketDay { registered: 1, ..Default::default() }];
        assert_eq!(daily_score(&all[0], &all, 1).profit_share, 0.0);
    }

    #[test]
    fn two_traders_trade_once_per_day_within_values() {
        let traders = vec![
            TraderSpec { id: TraderId(0), role: Role::Buyer, strategy: StrategyKind::Zic, private_value: 100.0 },
            TraderSpec { id: TraderId(1), role: Role::Seller, strategy: StrategyKind::Zic, private_value: 50.0 },
        ];
        let cfg = GameConfig::new(vec![genome(CDA)], traders, 20, 50, 7);
        let r = run_game(&cfg).unwrap();
        assert!(!r.transactions.is_empty());
        for d in 0..20 {
            let n = r.transactions.iter().filter(|t| t.day == d).count();
            assert!(n <= 1);
        }
        assert!(r.transactions.iter().all(|t| (50.0..=100.0).contains(&t.price)));
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = GameConfig::new(vec![genome(CDA)], Vec::new(), 0, 1, 0);
        assert!(run_game(&cfg).is_err());
    }

    #[test]
    fn replay_is_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let traders = population(16, &StrategyKind::ALL, 50.0, 150.0, &mut rng);
        let cfg = GameConfig::new(vec![genome(CDA), genome("ME + QT + AQ + CR + PU(k=0.5) + GF(fp=0.1)")], traders, 10, 5, 3);
        assert_eq!(run_game(&cfg).unwrap(), run_game(&cfg).unwrap());
    }

    #[test]
    fn surplus_is_conserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let traders = population(24, &StrategyKind::ALL, 50.0, 150.0, &mut rng);
        let cfg = GameConfig::new(vec![genome(CDA), genome("MV + QO + AA + CP(p=0.3) + PN(n=4) + GF(fp=1)")], traders, 15, 5, 9);
        let r = run_game(&cfg).unwrap();
        let net: f64 = r.trader_net.iter().sum();
        let income: f64 = r.fee_income.iter().sum();
        assert!((net + income - r.total_surplus()).abs() < 1e-6);
        for daily in &r.daily {
            for s in daily {
                for x in [s.market_share, s.profit_share, s.tsr, s.combined] {
                    assert!((0.0..=1.0).contains(&x));
                }
            }
        }
        assert!(r.scores.iter().all(|s| (0.0..=1.0).contains(s)));
    }

    #[test]
    fn population_is_balanced() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = population(120, &StrategyKind::ALL, 50.0, 150.0, &mut rng);
        for k in StrategyKind::ALL {
            let group: Vec<_> = p.iter().filter(|t| t.strategy == k).collect();
            assert_eq!(group.len(), 30);
            assert_eq!(group.iter().filter(|t| t.role == Role::Buyer).count(), 15);
        }
        assert!(p.iter().all(|t| (50.0..=150.0).contains(&t.private_value)));
    }
}
