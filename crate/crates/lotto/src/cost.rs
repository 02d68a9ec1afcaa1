//! Opponent per-unit cost: optimal investment and induced payoffs.
//!
//! With a per-unit cost `c` the opponent first chooses how much resource to
//! field (up to its cap), then the zero-cost game is played at that level.
//! The induced objective is piecewise concave with closed-form maximizers;
//! everything here evaluates those closed forms.

use crate::bernoulli::bl_payoff_nocost;
use crate::complete_info::{ci_optimal_investment, ci_payoff_cost, ci_payoff_nocost};
use crate::error::{Error, Result};
use crate::game::{BernoulliEndowment, PayoffPair};
use crate::num::{ge, lt, Real};

/// Payoffs under opponent cost, the opponent's deployed amount, and the cost
/// threshold `lambda` below which private budgets change nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostOutcome<R: Real> {
    pub payoffs: PayoffPair<R>,
    pub opponent_spend: R,
    pub lambda_threshold: R,
}

/// How the private-budget payoffs compare against the mean-budget benchmark
/// as the opponent cost varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Low cost: the opponent invests as against the mean budget.
    CoincidesWithCi,
    /// Intermediate cost: the opponent under-invests relative to the
    /// benchmark and gains from it; the allocator gains too while the cost
    /// stays under the benchmark crossing 2φp²/(√Ā − √((1−p)A₂))².
    BothImprove,
    /// Higher cost: the opponent still gains, the allocator loses.
    BBenefitsAHurts,
    /// Cost so high the opponent concedes entirely.
    Saturated,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::CoincidesWithCi => "coincides_with_ci",
            Regime::BothImprove => "both_improve",
            Regime::BBenefitsAHurts => "b_benefits_a_hurts",
            Regime::Saturated => "saturated",
        }
    }
}

impl core::fmt::Display for Regime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
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

/// True when the endowment spread is too narrow to matter: payoffs then
/// coincide with the mean-budget benchmark at every cost level.
pub fn benchmark_coincident<R: Real>(e: &BernoulliEndowment<R>) -> bool {
    let (a1, a2, p) = (e.high(), e.low(), e.p_high());
    ge(a2 * (R::val(2) - p), (R::one() - p) * a1)
}

/// Cost threshold below which the opponent's optimal investment (and hence
/// both payoffs) is the same as against the known mean budget.
pub fn lambda_threshold<R: Real>(e: &BernoulliEndowment<R>, phi: R) -> R {
    let (a1, a2, p) = (e.high(), e.low(), e.p_high());
    let s = ((R::one() - p) * a2).sqrt() + e.mean().sqrt();
    phi * s * s / (R::val(2) * a1 * a1)
}

/// Opponent payoff in the zero-cost game as a function of its resource level
/// `b_prime`. This is the objective the opponent maximizes (net of cost) when
/// choosing how much to field.
pub fn pi_b_curve<R: Real>(e: &BernoulliEndowment<R>, b_prime: R, phi: R) -> Result<R> {
    check_phi(phi)?;
    if !b_prime.is_finite() || b_prime < R::zero() {
        return Err(Error::NegativeValue {
            name: "opponent resource level",
            value: b_prime.to_f64().unwrap_or(f64::NAN),
        });
    }
    let (a1, a2, p) = (e.high(), e.low(), e.p_high());
    let one = R::one();
    let two = R::val(2);
    let abar = e.mean();

    if benchmark_coincident(e) {
        if b_prime == R::zero() {
            // Both endowment levels are positive here, so a zero bid loses
            // everywhere despite winning ties.
            return Ok(R::zero());
        }
        return Ok(phi - ci_payoff_nocost(abar, b_prime, phi)?.a);
    }

    let root_low = ((one - p) * a2).sqrt();
    let denom = root_low + abar.sqrt();
    let y2 = a1 * abar.sqrt() / denom;
    let lambda = lambda_threshold(e, phi);

    if a2 <= R::tol_abs() {
        // The low type fields nothing; any bid beats it on ties, so the
        // curve starts at the low-type value instead of zero.
        if b_prime <= y2 {
            return Ok(phi * (one - p) + lambda * b_prime);
        }
        return Ok(phi - phi * abar / (two * b_prime));
    }

    let y1 = a1 * root_low / denom;
    let v = if b_prime <= a2 {
        phi * (one - p) * b_prime / (two * a2)
    } else if b_prime <= y1 {
        phi * (one - p) * (one - a2 / (two * b_prime))
    } else if b_prime <= y2 {
        phi * ((one - p) * (one - a2 / a1) - (abar * (one - p) * a2).sqrt() / a1)
            + lambda * b_prime
    } else {
        phi - phi * abar / (two * b_prime)
    };
    Ok(v)
}

/// Opponent's optimal resource level against the private-budget allocator,
/// capped at `b` (infinite cap allowed). Ties between optimal levels resolve
/// to the lowest.
pub fn bl_optimal_investment<R: Real>(
    e: &BernoulliEndowment<R>,
    b: R,
    c: R,
    phi: R,
) -> Result<R> {
    check_phi(phi)?;
    if !c.is_finite() || !(c > R::zero()) {
        return Err(Error::NonpositiveValue {
            name: "opponent unit cost",
            value: c.to_f64().unwrap_or(f64::NAN),
        });
    }
    if b.is_nan() || !(b > R::zero()) {
        return Err(Error::NonpositiveValue {
            name: "opponent budget",
            value: b.to_f64().unwrap_or(f64::NAN),
        });
    }
    let (a2, p) = (e.low(), e.p_high());
    let one = R::one();
    let two = R::val(2);
    let abar = e.mean();

    let unconstrained = if benchmark_coincident(e) {
        ci_optimal_investment(abar, c, phi)?
    } else {
        let lambda = lambda_threshold(e, phi);
        if lt(c, lambda) {
            (abar * phi / (two * c)).sqrt()
        } else if a2 <= R::tol_abs() {
            R::zero()
        } else if lt(c, (one - p) * phi / (two * a2)) {
            ((one - p) * a2 * phi / (two * c)).sqrt()
        } else {
            R::zero()
        }
    };
    Ok(if b.is_infinite() {
        unconstrained
    } else {
        b.min(unconstrained)
    })
}

/// Equilibrium payoffs of the private-budget game with opponent cost `c` and
/// budget cap `b`.
pub fn bl_payoff_cost<R: Real>(
    e: &BernoulliEndowment<R>,
    b: R,
    c: R,
    phi: R,
) -> Result<CostOutcome<R>> {
    check_phi(phi)?;
    if !c.is_finite() || c < R::zero() {
        return Err(Error::NegativeValue {
            name: "opponent unit cost",
            value: c.to_f64().unwrap_or(f64::NAN),
        });
    }
    let lambda = lambda_threshold(e, phi);
    if c == R::zero() {
        let payoffs = bl_payoff_nocost(e, b, phi)?;
        return Ok(CostOutcome {
            payoffs,
            opponent_spend: b,
            lambda_threshold: lambda,
        });
    }

    if benchmark_coincident(e) {
        let o = ci_payoff_cost(e.mean(), b, c, phi)?;
        return Ok(CostOutcome {
            payoffs: o.payoffs,
            opponent_spend: o.opponent_spend,
            lambda_threshold: lambda,
        });
    }

    let (a2, p) = (e.low(), e.p_high());
    let one = R::one();
    let two = R::val(2);
    let abar = e.mean();
    let third = if a2 <= R::tol_abs() {
        R::infinity()
    } else {
        (one - p) * phi / (two * a2)
    };

    let pi_a_free = if lt(c, lambda) {
        (c * phi * abar / two).sqrt()
    } else if lt(c, third) {
        p * phi + (c * phi * (one - p) * a2 / two).sqrt()
    } else {
        phi
    };
    let pi_b_free = if lt(c, lambda) {
        phi - (two * c * phi * abar).sqrt()
    } else if lt(c, third) {
        phi * (one - p) - (two * c * phi * (one - p) * a2).sqrt()
    } else {
        R::zero()
    };

    let opponent_spend = bl_optimal_investment(e, b, c, phi)?;
    let payoffs = if b.is_infinite() {
        PayoffPair::new(pi_a_free, pi_b_free)
    } else {
        let nocost = bl_payoff_nocost(e, b, phi)?;
        PayoffPair::new(
            nocost.a.max(pi_a_free),
            (nocost.b - c * b).min(pi_b_free),
        )
    };
    Ok(CostOutcome {
        payoffs,
        opponent_spend,
        lambda_threshold: lambda,
    })
}

/// Classifies the cost level: who gains from the budget being private, for
/// an opponent without a budget cap.
pub fn classify_regime<R: Real>(e: &BernoulliEndowment<R>, c: R, phi: R) -> Result<Regime> {
    check_phi(phi)?;
    if !c.is_finite() || c < R::zero() {
        return Err(Error::NegativeValue {
            name: "opponent unit cost",
            value: c.to_f64().unwrap_or(f64::NAN),
        });
    }
    if benchmark_coincident(e) {
        return Ok(Regime::CoincidesWithCi);
    }
    let (a2, p) = (e.low(), e.p_high());
    let one = R::one();
    let two = R::val(2);
    let lambda = lambda_threshold(e, phi);
    let saturation = phi / (two * e.mean());
    let third = if a2 <= R::tol_abs() {
        R::infinity()
    } else {
        (one - p) * phi / (two * a2)
    };
    Ok(if lt(c, lambda) {
        Regime::CoincidesWithCi
    } else if lt(c, saturation) {
        Regime::BothImprove
    } else if lt(c, third) {
        Regime::BBenefitsAHurts
    } else {
        Regime::Saturated
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn e(a1: f64, a2: f64, p: f64) -> BernoulliEndowment<f64> {
        BernoulliEndowment::new(a1, a2, p).unwrap()
    }

    #[test]
    fn curve_first_branch() {
        assert_abs_diff_eq!(
            pi_b_curve(&e(3.0, 0.2, 0.5), 0.1, 1.0).unwrap(),
            0.125,
            epsilon = 1e-15
        );
    }

    #[test]
    fn curve_continuous_at_breakpoints() {
        let end = e(3.0, 0.2, 0.5);
        // Interval knots for this instance.
        let y1 = 0.6;
        let y2 = 2.4;
        for &bp in &[0.2, y1, y2] {
            let lo = pi_b_curve(&end, bp - 1e-9, 1.0).unwrap();
            let hi = pi_b_curve(&end, bp + 1e-9, 1.0).unwrap();
            assert!((hi - lo).abs() < 1e-7, "jump at {bp}");
        }
        assert_abs_diff_eq!(pi_b_curve(&end, 0.2, 1.0).unwrap(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn curve_matches_zero_cost_game_payoff() {
        for (a1, a2, p) in [(3.0, 0.2, 0.5), (2.5, 0.5, 0.5), (2.0, 1.0, 0.5)] {
            let end = e(a1, a2, p);
            for i in 1..60 {
                let b = 0.08 * i as f64;
                let direct = bl_payoff_nocost(&end, b, 1.0).unwrap().b;
                let curve = pi_b_curve(&end, b, 1.0).unwrap();
                assert_abs_diff_eq!(curve, direct, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn curve_with_zero_low_type_starts_at_low_value() {
        let end = e(2.0, 0.0, 0.5);
        assert_abs_diff_eq!(pi_b_curve(&end, 0.0, 1.0).unwrap(), 0.5, epsilon = 1e-15);
        for i in 1..40 {
            let b = 0.1 * i as f64;
            let direct = bl_payoff_nocost(&end, b, 1.0).unwrap().b;
            assert_abs_diff_eq!(pi_b_curve(&end, b, 1.0).unwrap(), direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn investment_branches() {
        let end = e(3.0, 0.2, 0.5);
        assert_abs_diff_eq!(
            bl_optimal_investment(&end, f64::INFINITY, 0.5, 1.0).unwrap(),
            0.1_f64.sqrt(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            bl_optimal_investment(&end, f64::INFINITY, 0.05, 1.0).unwrap(),
            4.0,
            epsilon = 1e-12
        );
        assert_eq!(
            bl_optimal_investment(&end, f64::INFINITY, 2.0, 1.0).unwrap(),
            0.0
        );
        // Budget cap binds.
        assert_abs_diff_eq!(
            bl_optimal_investment(&end, 1.5, 0.05, 1.0).unwrap(),
            1.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn investment_at_lambda_takes_lower_plateau_end() {
        let end = e(3.0, 0.2, 0.5);
        let lambda = lambda_threshold(&end, 1.0);
        let b_star = bl_optimal_investment(&end, f64::INFINITY, lambda, 1.0).unwrap();
        // The lower end of the flat maximizer interval.
        assert_abs_diff_eq!(b_star, 0.6, epsilon = 1e-12);
    }

    #[test]
    fn payoff_examples() {
        let end = e(3.0, 0.2, 0.5);
        let o = bl_payoff_cost(&end, f64::INFINITY, 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(o.payoffs.a, 0.5 + 0.025_f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(o.payoffs.a, 0.65811, epsilon = 1e-5);

        let o = bl_payoff_cost(&end, f64::INFINITY, 1.5, 1.0).unwrap();
        assert_eq!(o.payoffs.a, 1.0);
        assert_eq!(o.payoffs.b, 0.0);

        let o = bl_payoff_cost(&end, f64::INFINITY, 0.05, 1.0).unwrap();
        assert_abs_diff_eq!(o.payoffs.a, 0.2, epsilon = 1e-12);
    }

    #[test]
    fn payoff_sum_with_interior_spend_is_total_value() {
        let end = e(3.0, 0.2, 0.5);
        for &c in &[0.05, 0.1, 0.3, 0.5, 1.0] {
            let o = bl_payoff_cost(&end, f64::INFINITY, c, 1.0).unwrap();
            let total = o.payoffs.a + o.payoffs.b + c * o.opponent_spend;
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn narrow_spread_delegates_to_benchmark() {
        let end = e(2.0, 1.0, 0.5);
        assert!(benchmark_coincident(&end));
        let o = bl_payoff_cost(&end, f64::INFINITY, 0.1, 1.0).unwrap();
        let ci = ci_payoff_cost(1.5, f64::INFINITY, 0.1, 1.0).unwrap();
        assert_eq!(o.payoffs.a, ci.payoffs.a);
        assert_eq!(o.payoffs.b, ci.payoffs.b);
    }

    #[test]
    fn regime_examples() {
        let end = e(2.5, 0.5, 0.5);
        assert!(!benchmark_coincident(&end));
        assert_eq!(
            classify_regime(&end, 0.3, 1.0).unwrap(),
            Regime::BothImprove
        );
        assert_eq!(
            classify_regime(&end, 0.1, 1.0).unwrap(),
            Regime::CoincidesWithCi
        );
        assert_eq!(classify_regime(&end, 2.0, 1.0).unwrap(), Regime::Saturated);
        assert_eq!(
            classify_regime(&end, 0.4, 1.0).unwrap(),
            Regime::BBenefitsAHurts
        );
    }

    #[test]
    fn lambda_value_for_swept_instance() {
        // (sqrt(0.25) + sqrt(1.5))^2 / 12.5
        let lambda = lambda_threshold(&e(2.5, 0.5, 0.5), 1.0);
        assert_abs_diff_eq!(lambda, 0.23797959, epsilon = 1e-8);
    }

    #[test]
    fn lambda_increases_with_low_endowment() {
        let mut prev = 0.0;
        for i in 1..20 {
            let a2 = 0.05 * i as f64;
            let l = lambda_threshold(&e(3.0, a2, 0.5), 1.0);
            assert!(l > prev);
            prev = l;
        }
    }

    #[test]
    fn lambda_meets_saturation_at_spread_boundary() {
        // Where the spread stops mattering, the low-cost threshold merges
        // into the benchmark saturation cost.
        let a1 = 3.0;
        let p = 0.5;
        let a2 = (1.0 - p) * a1 / (2.0 - p);
        let end = e(a1, a2, p);
        let lambda = lambda_threshold(&end, 1.0);
        assert_abs_diff_eq!(lambda, 1.0 / (2.0 * end.mean()), epsilon = 1e-12);
    }
}
