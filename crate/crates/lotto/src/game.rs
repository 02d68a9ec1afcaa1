//! Game primitives: battlefields, endowment distributions, opponents.

use crate::error::{Error, Result};
use crate::num::Real;

/// A set of battlefields with positive values.
///
/// Equilibria in these games are driven only by the total value: both sides
/// allocate proportionally to battlefield value, so every battlefield is won
/// or lost together. Individual values still matter for allocation output.
#[derive(Debug, Clone, PartialEq)]
pub struct BattlefieldSet<R: Real> {
    values: Vec<R>,
    total: R,
}

impl<R: Real> BattlefieldSet<R> {
    /// Builds a battlefield set; every value must be strictly positive.
    pub fn new(values: Vec<R>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput {
                detail: "battlefield set must be nonempty".into(),
            });
        }
        let mut total = R::zero();
        for &v in &values {
            if !(v > R::zero()) || !v.is_finite() {
                return Err(Error::NonpositiveValue {
                    name: "battlefield value",
                    value: v.to_f64().unwrap_or(f64::NAN),
                });
            }
            total = total + v;
        }
        Ok(Self { values, total })
    }

    /// Single battlefield of the given total value.
    pub fn single(total: R) -> Result<Self> {
        Self::new(vec![total])
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }

    /// Sum of battlefield values.
    pub fn total(&self) -> R {
        self.total
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Splits an aggregate expenditure proportionally to value.
    pub fn split(&self, aggregate: R) -> Vec<R> {
        self.values.iter().map(|&v| aggregate * v / self.total).collect()
    }
}

/// Two-point private endowment: `high` with probability `p_high`, else `low`.
///
/// Invariants: `high > low >= 0`, `high > 0`, `p_high` strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernoulliEndowment<R: Real> {
    high: R,
    low: R,
    p_high: R,
}

impl<R: Real> BernoulliEndowment<R> {
    pub fn new(high: R, low: R, p_high: R) -> Result<Self> {
        if !high.is_finite() {
            return Err(Error::NonfiniteValue {
                name: "high endowment",
                value: high.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !low.is_finite() {
            return Err(Error::NonfiniteValue {
                name: "low endowment",
                value: low.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(high > R::zero()) {
            return Err(Error::NonpositiveValue {
                name: "high endowment",
                value: high.to_f64().unwrap_or(f64::NAN),
            });
        }
        if low < R::zero() {
            return Err(Error::NegativeValue {
                name: "low endowment",
                value: low.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(high > low) {
            return Err(Error::EndowmentOrder {
                high: high.to_f64().unwrap_or(f64::NAN),
                low: low.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(p_high > R::zero() && p_high < R::one()) {
            return Err(Error::ProbabilityRange {
                value: p_high.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { high, low, p_high })
    }

    pub fn high(&self) -> R {
        self.high
    }

    pub fn low(&self) -> R {
        self.low
    }

    pub fn p_high(&self) -> R {
        self.p_high
    }

    pub fn p_low(&self) -> R {
        R::one() - self.p_high
    }

    /// Expected endowment.
    pub fn mean(&self) -> R {
        self.p_high * self.high + self.p_low() * self.low
    }
}

/// Opponent description: per-round budget (possibly infinite) and unit cost.
///
/// `budget` may be `+inf` only when `unit_cost > 0`; otherwise the opponent's
/// problem is unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpponentParams<R: Real> {
    budget: R,
    unit_cost: R,
}

impl<R: Real> OpponentParams<R> {
    pub fn new(budget: R, unit_cost: R) -> Result<Self> {
        if budget.is_nan() || !(budget > R::zero()) {
            return Err(Error::NonpositiveValue {
                name: "opponent budget",
                value: budget.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !unit_cost.is_finite() || unit_cost < R::zero() {
            return Err(Error::NegativeValue {
                name: "opponent unit cost",
                value: unit_cost.to_f64().unwrap_or(f64::NAN),
            });
        }
        if budget.is_infinite() && unit_cost == R::zero() {
            return Err(Error::InfiniteBudgetNoCost);
        }
        Ok(Self { budget, unit_cost })
    }

    /// Finite budget, no per-unit cost.
    pub fn budget_only(budget: R) -> Result<Self> {
        Self::new(budget, R::zero())
    }

    pub fn budget(&self) -> R {
        self.budget
    }

    pub fn unit_cost(&self) -> R {
        self.unit_cost
    }

    pub fn has_cost(&self) -> bool {
        self.unit_cost > R::zero()
    }
}

/// Full game description for the single-front game.
#[derive(Debug, Clone, PartialEq)]
pub struct GameSpec<R: Real> {
    pub battlefields: BattlefieldSet<R>,
    pub endowment: BernoulliEndowment<R>,
    pub opponent: OpponentParams<R>,
}

impl<R: Real> GameSpec<R> {
    pub fn new(
        battlefields: BattlefieldSet<R>,
        endowment: BernoulliEndowment<R>,
        opponent: OpponentParams<R>,
    ) -> Self {
        Self {
            battlefields,
            endowment,
            opponent,
        }
    }

    /// Total battlefield value.
    pub fn total_value(&self) -> R {
        self.battlefields.total()
    }
}

/// Expected payoffs of the two sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffPair<R: Real> {
    pub a: R,
    pub b: R,
}

impl<R: Real> PayoffPair<R> {
    pub fn new(a: R, b: R) -> Self {
        Self { a, b }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battlefields_require_positive_values() {
        assert!(BattlefieldSet::new(vec![1.0, 2.0]).is_ok());
        assert!(BattlefieldSet::new(vec![1.0, 0.0]).is_err());
        assert!(BattlefieldSet::new(vec![-1.0]).is_err());
        assert!(BattlefieldSet::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn split_is_proportional() {
        let b = BattlefieldSet::new(vec![1.0, 3.0]).unwrap();
        assert_eq!(b.total(), 4.0);
        assert_eq!(b.split(2.0), vec![0.5, 1.5]);
    }

    #[test]
    fn endowment_validation() {
        assert!(BernoulliEndowment::new(2.0, 0.5, 0.5).is_ok());
        assert!(BernoulliEndowment::new(2.0, 0.0, 0.5).is_ok());
        assert!(BernoulliEndowment::new(0.5, 2.0, 0.5).is_err());
        assert!(BernoulliEndowment::new(2.0, 2.0, 0.5).is_err());
        assert!(BernoulliEndowment::new(2.0, -0.1, 0.5).is_err());
        assert!(BernoulliEndowment::new(2.0, 0.5, 0.0).is_err());
        assert!(BernoulliEndowment::new(2.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn endowment_mean() {
        let e = BernoulliEndowment::new(2.5, 0.5, 0.5).unwrap();
        assert_eq!(e.mean(), 1.5);
    }

    #[test]
    fn opponent_validation() {
        assert!(OpponentParams::new(1.0, 0.0).is_ok());
        assert!(OpponentParams::new(f64::INFINITY, 0.1).is_ok());
        assert!(OpponentParams::new(f64::INFINITY, 0.0).is_err());
        assert!(OpponentParams::new(0.0, 0.1).is_err());
        assert!(OpponentParams::new(1.0, -0.1).is_err());
    }
}
