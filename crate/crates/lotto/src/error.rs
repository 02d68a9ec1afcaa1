//! Error type shared across the crate.

use thiserror::Error;

/// Validation and solver failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A quantity that must be strictly positive was not.
    #[error("{name} must be strictly positive, got {value}")]
    NonpositiveValue { name: &'static str, value: f64 },

    /// A quantity that must be nonnegative was not.
    #[error("{name} must be nonnegative, got {value}")]
    NegativeValue { name: &'static str, value: f64 },

    /// A quantity that must be finite was not.
    #[error("{name} must be finite, got {value}")]
    NonfiniteValue { name: &'static str, value: f64 },

    /// Endowment levels out of order (high must strictly exceed low).
    #[error("endowment levels out of order: high={high}, low={low}")]
    EndowmentOrder { high: f64, low: f64 },

    /// Probability outside the open interval (0, 1).
    #[error("probability must lie strictly between 0 and 1, got {value}")]
    ProbabilityRange { value: f64 },

    /// Asked for a zero-cost quantity with an infinite budget, which has no
    /// finite value.
    #[error("infinite opponent budget requires a strictly positive unit cost")]
    InfiniteBudgetNoCost,

    /// Parameter combination matched no payoff region; indicates an internal
    /// classification gap rather than bad input.
    #[error("parameters (high={high}, low={low}, p={p}, budget={budget}) matched no payoff region")]
    Unclassifiable {
        high: f64,
        low: f64,
        p: f64,
        budget: f64,
    },

    /// Operation is only defined in the auction-like region.
    #[error("operation requires the auction-like payoff region, but parameters classify as {found}")]
    OutsideAuctionRegion { found: &'static str },

    /// A commander operation was invoked on an instance whose budgets/costs
    /// do not match the required setting.
    #[error("instance does not match the required setting: {detail}")]
    SettingMismatch { detail: &'static str },

    /// A mixed strategy failed validation.
    #[error("invalid mixed strategy: {detail}")]
    InvalidStrategy { detail: String },

    /// Malformed input file or JSON payload.
    #[error("invalid input: {detail}")]
    InvalidInput { detail: String },
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
