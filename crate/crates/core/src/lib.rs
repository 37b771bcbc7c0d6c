//! Double-auction mechanism laboratory.
//!
//! * [`book`] and [`policies`]: the parameterized auction engine.
//! * [`market`]: one running market assembled from a [`genome::MechanismGenome`].
//! * [`traders`]: ZI-C, ZIP, Roth-Erev and GD trading agents and their
//!   softmax market selection.
//! * [`game`]: multi-market tournaments with daily market-share, profit-share
//!   and transaction-success scoring.
//! * [`search`]: grey-box mechanism search over a policy tree of softmax
//!   bandits, with a Hall of Fame.
//! * [`metrics`]: allocative efficiency and Smith's coefficient of convergence.
//! * [`experiment`]: configuration, presets and the `search`, `tournament`
//!   and `isolate` commands.

pub mod book;
pub mod error;
pub mod experiment;
pub mod game;
pub mod genome;
pub mod history;
pub mod market;
pub mod metrics;
pub mod policies;
pub mod search;
pub mod softmax;
pub mod traders;

pub use book::{OrderBook, PriceBounds, Shout, ShoutId, Side, TraderId};
pub use error::{BookError, ConfigError, GenomeError};
pub use genome::MechanismGenome;
