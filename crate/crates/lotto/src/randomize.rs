//! Optimal two-point budget randomization for the allocator.
//!
//! Given a mean budget the allocator may commit to, drawing the actual
//! budget from a two-point distribution with that mean can raise its payoff
//! against a costly opponent. This module computes the best such
//! distribution, with the mixing probability either fixed or optimized.

use crate::complete_info::{ci_payoff_cost, ci_payoff_nocost};
use crate::cost::bl_payoff_cost;
use crate::error::{Error, Result};
use crate::game::BernoulliEndowment;
use crate::num::{ge, Real};

/// Two-point budget distribution; `high == low` encodes no randomization at
/// all (then `p_high` is reported as 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Randomization<R: Real> {
    pub high: R,
    pub low: R,
    pub p_high: R,
}

impl<R: Real> Randomization<R> {
    fn degenerate(level: R) -> Self {
        Self {
            high: level,
            low: level,
            p_high: R::one(),
        }
    }

    pub fn mean(&self) -> R {
        self.p_high * self.high + (R::one() - self.p_high) * self.low
    }

    pub fn is_degenerate(&self) -> bool {
        self.high == self.low
    }

    /// The nondegenerate endowment, when there is one.
    pub fn endowment(&self) -> Option<BernoulliEndowment<R>> {
        if self.is_degenerate() {
            None
        } else {
            BernoulliEndowment::new(self.high, self.low, self.p_high).ok()
        }
    }
}

/// Best achievable payoff for the allocator and the endowment realizing it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomizationResult<R: Real> {
    pub randomization: Randomization<R>,
    pub payoff_a: R,
    pub payoff_b: R,
}

fn validate<R: Real>(a_mean: R, b: R, c: R, phi: R) -> Result<()> {
    if !phi.is_finite() || !(phi > R::zero()) {
        return Err(Error::NonpositiveValue {
            name: "total battlefield value",
            value: phi.to_f64().unwrap_or(f64::NAN),
        });
    }
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
    if b.is_nan() || !(b > R::zero()) {
        return Err(Error::NonpositiveValue {
            name: "opponent budget",
            value: b.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Evaluates the cost-game payoffs at a chosen randomization, so results are
/// always self-consistent with the payoff functions.
fn result_at<R: Real>(
    r: Randomization<R>,
    b: R,
    c: R,
    phi: R,
) -> Result<RandomizationResult<R>> {
    let payoffs = if r.is_degenerate() {
        ci_payoff_cost(r.mean(), b, c, phi)?.payoffs
    } else {
        let e = BernoulliEndowment::new(r.high, r.low, r.p_high)?;
        bl_payoff_cost(&e, b, c, phi)?.payoffs
    };
    Ok(RandomizationResult {
        randomization: r,
        payoff_a: payoffs.a,
        payoff_b: payoffs.b,
    })
}

/// Best two-point randomization with the mixing probability `p` fixed.
/// Below the lower cost threshold p²φ/(2Ā) no spread helps; in the middle
/// band the optimal levels are interior; past the saturation cost φ/(2Ā)
/// the opponent concedes regardless.
pub fn optimal_randomization_fixed_p<R: Real>(
    a_mean: R,
    b: R,
    c: R,
    p: R,
    phi: R,
) -> Result<RandomizationResult<R>> {
    validate(a_mean, b, c, phi)?;
    if !(p > R::zero() && p < R::one()) {
        return Err(Error::ProbabilityRange {
            value: p.to_f64().unwrap_or(f64::NAN),
        });
    }
    let one = R::one();
    let two = R::val(2);
    let saturation = phi / (two * a_mean);

    if ge(c, saturation) {
        return result_at(Randomization::degenerate(a_mean), b, c, phi);
    }

    let free_value = if c < p * p * saturation {
        // No feasible spread with this mixing probability beats playing the
        // mean outright.
        (c * phi * a_mean / two).sqrt()
    } else {
        p * phi / two + (c * phi * a_mean / two).sqrt()
    };
    if b.is_finite() && ge(ci_payoff_nocost(a_mean, b, phi)?.a, free_value) {
        return result_at(Randomization::degenerate(a_mean), b, c, phi);
    }
    if c < p * p * saturation {
        return result_at(Randomization::degenerate(a_mean), b, c, phi);
    }

    let high = phi * (two * (two * c * a_mean / phi).sqrt() - p) / (two * c);
    let low = (a_mean - p * high) / (one - p);
    result_at(
        Randomization {
            high,
            low,
            p_high: p,
        },
        b,
        c,
        phi,
    )
}

/// Best two-point randomization with the mixing probability optimized too.
/// For costs below saturation the optimum puts the low level at zero and
/// doubles the benchmark payoff; at or above saturation (or when a finite
/// opponent cap makes the benchmark better) no randomization is used.
pub fn optimal_randomization<R: Real>(
    a_mean: R,
    b: R,
    c: R,
    phi: R,
) -> Result<RandomizationResult<R>> {
    validate(a_mean, b, c, phi)?;
    let two = R::val(2);
    let saturation = phi / (two * a_mean);

    if ge(c, saturation) {
        return result_at(Randomization::degenerate(a_mean), b, c, phi);
    }
    let free_value = (two * c * phi * a_mean).sqrt();
    if b.is_finite() && ge(ci_payoff_nocost(a_mean, b, phi)?.a, free_value) {
        return result_at(Randomization::degenerate(a_mean), b, c, phi);
    }
    let high = (a_mean * phi / (two * c)).sqrt();
    let p_high = (two * c * a_mean / phi).sqrt();
    result_at(
        Randomization {
            high,
            low: R::zero(),
            p_high,
        },
        b,
        c,
        phi,
    )
}
