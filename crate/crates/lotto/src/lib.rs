//! Resource-allocation games where one side's budget is private information.
//!
//! The allocator ("A") draws a budget from a two-point distribution; the
//! opponent ("B") knows only the distribution. Both sides spread resources
//! over valued battlefields, each battlefield going to whoever places more
//! on it (ties to the opponent), and budgets bind in expectation. The crate
//! provides:
//!
//! * closed-form equilibrium payoffs and strategies for the private-budget
//!   game and its complete-information benchmark ([`bernoulli`],
//!   [`complete_info`]),
//! * the opponent's optimal resource investment when units carry a per-unit
//!   cost, and the induced payoff curves ([`cost`]),
//! * the allocator's optimal two-point budget randomization ([`randomize`]),
//! * a commander's assignment of budgets or unit costs across two
//!   independent fronts, deterministic vs. randomized ([`commander`]),
//! * a best-response oracle that certifies any candidate profile as an
//!   ε-equilibrium and Monte-Carlo machinery ([`oracle`]),
//! * JSON interchange types ([`io`]).
//!
//! All numeric code is generic over the scalar through [`num::Real`];
//! `f64` aliases are exported at the crate root.

pub mod bernoulli;
pub mod commander;
pub mod complete_info;
pub mod cost;
pub mod error;
pub mod game;
pub mod io;
pub mod num;
pub mod oracle;
pub mod randomize;
pub mod strategy;

pub use error::{Error, Result};
pub use num::Real;

/// `f64` battlefield set.
pub type BattlefieldSet64 = game::BattlefieldSet<f64>;
/// `f64` two-point endowment.
pub type BernoulliEndowment64 = game::BernoulliEndowment<f64>;
/// `f64` opponent parameters.
pub type OpponentParams64 = game::OpponentParams<f64>;
/// `f64` game description.
pub type GameSpec64 = game::GameSpec<f64>;
/// `f64` payoff pair.
pub type PayoffPair64 = game::PayoffPair<f64>;
/// `f64` mixed strategy.
pub type MixedStrategy64 = strategy::MixedStrategy<f64>;
/// `f64` strategy profile.
pub type StrategyProfile64 = strategy::StrategyProfile<f64>;
