//! Complete-information benchmark game.
//!
//! Both sides know the allocator's budget. Payoffs, the opponent's optimal
//! investment when resources carry a per-unit cost, and the standard
//! equilibrium mixtures are all closed-form.

use crate::error::{Error, Result};
use crate::game::PayoffPair;
use crate::num::{ge, Real};
use crate::strategy::MixedStrategy;

/// Payoffs plus the opponent's chosen expenditure level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CIOutcome<R: Real> {
    pub payoffs: PayoffPair<R>,
    /// Opponent resource level actually deployed (B*).
    pub opponent_spend: R,
}

fn check_phi<R: Real>(phi: R) -> Result<()> {
    if !phi.is_finite() || !(phi > R::zero()) {
        return Err(Error::NonpositiveValue {
            name: "total battlefield value",
            value: phi.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

fn check_mean<R: Real>(a_mean: R) -> Result<()> {
    if !a_mean.is_finite() || a_mean < R::zero() {
        return Err(Error::NegativeValue {
            name: "mean budget",
            value: a_mean.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

fn check_finite_b<R: Real>(b: R) -> Result<()> {
    if b.is_infinite() {
        return Err(Error::InfiniteBudgetNoCost);
    }
    if b.is_nan() || !(b > R::zero()) {
        return Err(Error::NonpositiveValue {
            name: "opponent budget",
            value: b.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Zero-cost payoffs: the weaker side wins with the classic budget-ratio
/// probability. π_A = φ·Ā/(2B) when Ā ≤ B, else φ·(1 − B/(2Ā)); constant sum.
pub fn ci_payoff_nocost<R: Real>(a_mean: R, b: R, phi: R) -> Result<PayoffPair<R>> {
    check_mean(a_mean)?;
    check_finite_b(b)?;
    check_phi(phi)?;
    let two = R::val(2);
    let pi_a = if a_mean < b {
        phi * a_mean / (two * b)
    } else {
        phi * (R::one() - b / (two * a_mean))
    };
    Ok(PayoffPair::new(pi_a, phi - pi_a))
}

/// Opponent's optimal resource level when units cost `c` and the budget cap
/// is absent: √(Āφ/(2c)) below the saturation cost φ/(2Ā), zero at and above
/// it (the lowest optimal investment is taken at the boundary).
pub fn ci_optimal_investment<R: Real>(a_mean: R, c: R, phi: R) -> Result<R> {
    check_phi(phi)?;
    if !a_mean.is_finite() || !(a_mean > R::zero()) {
        return Err(Error::NonpositiveValue {
            name: "mean budget",
            value: a_mean.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !c.is_finite() || !(c > R::zero()) {
        return Err(Error::NonpositiveValue {
            name: "opponent unit cost",
            value: c.to_f64().unwrap_or(f64::NAN),
        });
    }
    let two = R::val(2);
    let saturation = phi / (two * a_mean);
    if ge(c, saturation) {
        Ok(R::zero())
    } else {
        Ok((a_mean * phi / (two * c)).sqrt())
    }
}

/// Payoffs with a per-unit opponent cost and budget cap `b` (infinite allowed
/// when `c > 0`). The opponent deploys min{B, √(Āφ/(2c))}; above the
/// saturation cost φ/(2Ā) it deploys nothing and concedes the field.
pub fn ci_payoff_cost<R: Real>(a_mean: R, b: R, c: R, phi: R) -> Result<CIOutcome<R>> {
    check_phi(phi)?;
    if !a_mean.is_finite() || !(a_mean > R::zero()) {
        return Err(Error::NonpositiveValue {
            name: "mean budget",
            value: a_mean.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !c.is_finite() || c < R::zero() {
        return Err(Error::NegativeValue {
            name: "opponent unit cost",
            value: c.to_f64().unwrap_or(f64::NAN),
        });
    }
    if c == R::zero() {
        let payoffs = ci_payoff_nocost(a_mean, b, phi)?;
        return Ok(CIOutcome {
            payoffs,
            opponent_spend: b,
        });
    }
    if b.is_nan() || !(b > R::zero()) {
        return Err(Error::NonpositiveValue {
            name: "opponent budget",
            value: b.to_f64().unwrap_or(f64::NAN),
        });
    }

    let two = R::val(2);
    let saturation = phi / (two * a_mean);
    if ge(c, saturation) {
        return Ok(CIOutcome {
            payoffs: PayoffPair::new(phi, R::zero()),
            opponent_spend: R::zero(),
        });
    }

    let unconstrained = (a_mean * phi / (two * c)).sqrt();
    let pi_a_free = (c * phi * a_mean / two).sqrt();
    let pi_b_spent = (two * c * phi * a_mean).sqrt();
    if b.is_infinite() {
        return Ok(CIOutcome {
            payoffs: PayoffPair::new(pi_a_free, phi - pi_b_spent),
            opponent_spend: unconstrained,
        });
    }

    let nocost = ci_payoff_nocost(a_mean, b, phi)?;
    let pi_a = nocost.a.max(pi_a_free);
    let pi_b = phi - (nocost.a + c * b).min(pi_b_spent);
    Ok(CIOutcome {
        payoffs: PayoffPair::new(pi_a, pi_b),
        opponent_spend: b.min(unconstrained),
    })
}

/// Equilibrium mixtures for the zero-cost benchmark. The stronger side mixes
/// uniformly up to twice its budget; the weaker side adds an atom at zero.
/// Both means equal the respective budgets.
pub fn ci_equilibrium_strategy<R: Real>(
    a_mean: R,
    b: R,
) -> Result<(MixedStrategy<R>, MixedStrategy<R>)> {
    if !a_mean.is_finite() || !(a_mean > R::zero()) {
        return Err(Error::NonpositiveValue {
            name: "mean budget",
            value: a_mean.to_f64().unwrap_or(f64::NAN),
        });
    }
    check_finite_b(b)?;
    let two = R::val(2);
    let gamma = a_mean / b;
    if gamma <= R::one() {
        let f_a = MixedStrategy::mix(&[
            (R::one() - gamma, &MixedStrategy::atom(R::zero())?),
            (gamma, &MixedStrategy::uniform(R::zero(), two * b)?),
        ])?;
        let f_b = MixedStrategy::uniform(R::zero(), two * b)?;
        Ok((f_a, f_b))
    } else {
        let f_a = MixedStrategy::uniform(R::zero(), two * a_mean)?;
        let inv = R::one() / gamma;
        let f_b = MixedStrategy::mix(&[
            (R::one() - inv, &MixedStrategy::atom(R::zero())?),
            (inv, &MixedStrategy::uniform(R::zero(), two * a_mean)?),
        ])?;
        Ok((f_a, f_b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::Segment;
    use approx::assert_abs_diff_eq;

    #[test]
    fn nocost_payoffs() {
        let p = ci_payoff_nocost(1.0, 2.0, 1.0).unwrap();
        assert_abs_diff_eq!(p.a, 0.25);
        let p = ci_payoff_nocost(1.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(p.a, 0.5);
        let p = ci_payoff_nocost(1.5, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(p.a, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.a + p.b, 1.0);
    }

    #[test]
    fn nocost_rejects_infinite_budget() {
        assert!(matches!(
            ci_payoff_nocost(1.0, f64::INFINITY, 1.0),
            Err(Error::InfiniteBudgetNoCost)
        ));
    }

    #[test]
    fn optimal_investment_branches() {
        assert_abs_diff_eq!(ci_optimal_investment(1.0, 0.125, 1.0).unwrap(), 2.0);
        assert_eq!(ci_optimal_investment(1.6, 0.5, 1.0).unwrap(), 0.0);
        // At the saturation cost exactly, the lowest optimum is zero.
        assert_eq!(ci_optimal_investment(1.0, 0.5, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn cost_payoffs_unbounded_budget() {
        let o = ci_payoff_cost(1.0, f64::INFINITY, 0.125, 1.0).unwrap();
        assert_abs_diff_eq!(o.payoffs.a, 0.25);
        assert_abs_diff_eq!(o.payoffs.b, 0.5);
        assert_abs_diff_eq!(o.opponent_spend, 2.0);

        let o = ci_payoff_cost(1.0, f64::INFINITY, 0.6, 1.0).unwrap();
        assert_eq!(o.payoffs.a, 1.0);
        assert_eq!(o.payoffs.b, 0.0);
        assert_eq!(o.opponent_spend, 0.0);
    }

    #[test]
    fn cost_payoffs_binding_budget() {
        let o = ci_payoff_cost(1.0, 0.5, 0.125, 1.0).unwrap();
        assert_abs_diff_eq!(o.payoffs.a, 0.75);
        assert_abs_diff_eq!(o.payoffs.b, 0.5);
        assert_abs_diff_eq!(o.opponent_spend, 0.5);
    }

    #[test]
    fn cost_payoffs_zero_cost_routes_to_nocost() {
        let o = ci_payoff_cost(1.5, 1.0, 0.0, 1.0).unwrap();
        let p = ci_payoff_nocost(1.5, 1.0, 1.0).unwrap();
        assert_eq!(o.payoffs.a, p.a);
        assert_eq!(o.payoffs.b, p.b);
    }

    #[test]
    fn cost_consistency_at_optimal_investment() {
        // Re-running the capped game at the optimal cap reproduces the
        // uncapped payoffs.
        for &(a, c, phi) in &[(1.0, 0.125, 1.0), (2.5, 0.05, 3.0), (0.7, 0.2, 1.0)] {
            let free = ci_payoff_cost(a, f64::INFINITY, c, phi).unwrap();
            let b_star = ci_optimal_investment(a, c, phi).unwrap();
            if b_star > 0.0 {
                let capped = ci_payoff_cost(a, b_star, c, phi).unwrap();
                assert_abs_diff_eq!(capped.payoffs.a, free.payoffs.a, epsilon = 1e-12);
                assert_abs_diff_eq!(capped.payoffs.b, free.payoffs.b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn equilibrium_strategies_have_budget_means() {
        let (f_a, f_b) = ci_equilibrium_strategy(1.0, 2.0).unwrap();
        assert_abs_diff_eq!(f_a.mean(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f_b.mean(), 2.0, epsilon = 1e-12);
        assert_eq!(f_a.components().len(), 2);
        assert!(matches!(
            f_a.components()[0].segment,
            Segment::Atom(x) if x == 0.0
        ));
        assert_abs_diff_eq!(f_a.components()[0].weight, 0.5);

        let (f_a, f_b) = ci_equilibrium_strategy(1.0, 1.0).unwrap();
        assert_eq!(f_a, f_b);
        assert_eq!(f_a.components().len(), 1);

        let (f_a, f_b) = ci_equilibrium_strategy(1.5, 1.0).unwrap();
        assert_abs_diff_eq!(f_a.mean(), 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(f_b.mean(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f_b.components()[0].weight, 1.0 / 3.0, epsilon = 1e-15);
    }
}
