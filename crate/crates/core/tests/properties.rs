use amdlab::book::{OrderBook, PriceBounds, Shout};
use amdlab::experiment::presets::{preset, PRESETS};
use amdlab::game::{population, run_game, GameConfig};
use amdlab::genome::MechanismGenome;
use amdlab::history::MarketHistory;
use amdlab::metrics::{allocative_efficiency, theoretical_equilibrium, Schedule};
use amdlab::policies::{max_volume, price, MarketQuote, MatchedPair, Matching, Pricing, PricingContext};
use amdlab::search::{HallOfFame, PolicyTree};
use amdlab::softmax::softmax;
use amdlab::traders::StrategyKind;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn prices(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0u32..=200).prop_map(f64::from), 0..=max)
}

fn sorted(mut asks: Vec<f64>, mut bids: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    asks.sort_by(f64::total_cmp);
    bids.sort_by(|a, b| b.total_cmp(a));
    (asks, bids)
}

proptest! {
    #[test]
    fn matching_volume_is_monotone_in_theta(asks in prices(12), bids in prices(12), t in -1.0f64..=1.0, dt in 0.0f64..=1.0) {
        let (asks, bids) = sorted(asks, bids);
        let hi = (t + dt).min(1.0);
        let lo = Matching::Theta { theta: t }.tentative(&asks, &bids).len();
        let up = Matching::Theta { theta: hi }.tentative(&asks, &bids).len();
        prop_assert!(lo <= up);
        prop_assert!(up <= max_volume(&asks, &bids));
    }

    #[test]
    fn every_tentative_pair_crosses(asks in prices(12), bids in prices(12), t in -1.0f64..=1.0) {
        let (asks, bids) = sorted(asks, bids);
        for m in [Matching::Equilibrium, Matching::MaxVolume, Matching::Theta { theta: t }] {
            let pairs = m.tentative(&asks, &bids);
            let mut seen_a = std::collections::HashSet::new();
            let mut seen_b = std::collections::HashSet::new();
            for (a, b) in pairs {
                prop_assert!(bids[b] >= asks[a]);
                prop_assert!(seen_a.insert(a) && seen_b.insert(b));
            }
        }
    }

    #[test]
    fn matched_book_no_longer_crosses_under_me(asks in prices(10), bids in prices(10)) {
        let mut book = OrderBook::new();
        for (i, &p) in asks.iter().enumerate() {
            book.insert(Shout::ask(i as u64, i as u32, p)).unwrap();
        }
        for (i, &p) in bids.iter().enumerate() {
            let id = 1000 + i;
            book.insert(Shout::bid(id as u64, id as u32, p)).unwrap();
        }
        let before = book.len();
        let pairs = Matching::Equilibrium.match_book(&mut book);
        prop_assert_eq!(book.len() + 2 * pairs.len(), before);
        prop_assert_eq!(book.reported_equilibrium(PriceBounds::default()).quantity, 0);
    }

    #[test]
    fn pricing_is_budget_balanced(a in 0.0f64..200.0, spread in 0.0f64..100.0, k in 0.0f64..=1.0,
                                 qa in 0.0f64..200.0, qb in 0.0f64..200.0, sa in 0usize..20, sb in 0usize..20) {
        let b = a + spread;
        let pair = MatchedPair { ask: Shout::ask(0, 0, a), bid: Shout::bid(1, 1, b) };
        let history = MarketHistory::default();
        let ctx = PricingContext {
            quote: MarketQuote { ask_quote: qa, bid_quote: qb },
            history: &history,
            standing_asks: sa,
            standing_bids: sb,
        };
        for p in [Pricing::Discriminatory { k }, Pricing::Uniform { k }, Pricing::NPricing { n: 3 }, Pricing::SideBiased] {
            let x = price(&pair, &ctx, &p);
            prop_assert!(a <= x && x <= b, "{} priced {} outside [{}, {}]", p, x, a, b);
        }
    }

    #[test]
    fn softmax_is_a_distribution(values in prop::collection::vec(-5.0f64..5.0, 1..8), t in 0.01f64..10.0) {
        let p = softmax(&values, t);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(p.iter().all(|&x| (0.0..=1.0).contains(&x)));
        let best = values.iter().cloned().fold(f64::MIN, f64::max);
        for (v, q) in values.iter().zip(&p) {
            if *v == best {
                prop_assert!(p.iter().all(|x| x <= &(q + 1e-12)));
            }
        }
    }

    #[test]
    fn max_surplus_bounds_any_allocation(buyers in prop::collection::vec(50.0f64..150.0, 1..20),
                                         sellers in prop::collection::vec(50.0f64..150.0, 1..20),
                                         perm_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let eq = theoretical_equilibrium(&Schedule::new(buyers.clone(), sellers.clone()), PriceBounds::default());
        let mut shuffled = sellers.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(perm_seed));
        let other: f64 = buyers.iter().zip(&shuffled).map(|(b, s)| (b - s).max(0.0)).sum();
        prop_assert!(other <= eq.max_surplus + 1e-9);
        let ea = allocative_efficiency(other, eq.max_surplus, 1, other > 0.0);
        if let Some(ea) = ea {
            prop_assert!(ea <= 100.0 + 1e-9);
        }
    }

    #[test]
    fn tree_samples_round_trip(seed in any::<u64>(), t in 0.05f64..5.0) {
        let tree = PolicyTree::new(amdlab::policies::Charging::fixed_profit_fee(0.1));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = tree.sample(t, &mut rng);
        let back: MechanismGenome = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
        prop_assert!(g.validate().is_ok());
    }

    #[test]
    fn hof_never_exceeds_capacity(scores in prop::collection::vec((0usize..12, 0.0f64..1.0), 1..60), cap in 1usize..6) {
        let names: Vec<&str> = PRESETS.iter().map(|p| p.0).collect();
        let mut hof = HallOfFame::new(cap);
        for (i, s) in scores {
            hof.record(names[i], preset(names[i]).unwrap(), s);
            prop_assert!(hof.active.len() <= cap);
            for e in &hof.active {
                prop_assert!(!hof.inactive.iter().any(|x| x.genome == e.genome));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn games_conserve_surplus(seed in any::<u64>(), m in 0usize..12, traders in 2usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let markets = vec![preset(PRESETS[m].0).unwrap(), preset("CH_l").unwrap()];
        let pop = population(traders, &StrategyKind::ALL, 50.0, 150.0, &mut rng);
        let res = run_game(&GameConfig::new(markets, pop, 8, 4, seed)).unwrap();
        let gross: f64 = res.trader_gross.iter().sum();
        let net: f64 = res.trader_net.iter().sum();
        let fees: f64 = res.fee_income.iter().sum();
        prop_assert!((gross - res.total_surplus()).abs() < 1e-6);
        prop_assert!((gross - net - fees).abs() < 1e-6);
        for s in res.daily.iter().flatten() {
            prop_assert!((0.0..=1.0).contains(&s.market_share));
            prop_assert!((0.0..=1.0).contains(&s.profit_share));
            prop_assert!((0.0..=1.0).contains(&s.tsr));
        }
        // no trader trades twice on the same day
        let mut seen = std::collections::HashSet::new();
        for t in &res.transactions {
            prop_assert!(seen.insert((t.day, t.buyer)));
            prop_assert!(seen.insert((t.day, t.seller)));
        }
    }
}
