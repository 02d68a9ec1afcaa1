//! Private-budget game with a two-point endowment.
//!
//! The allocator's budget is `high` with probability `p` and `low` otherwise;
//! the opponent knows only the distribution. The (high, low) parameter plane
//! splits into five payoff regions for a fixed opponent budget `b`. In four
//! of them the equilibrium reuses complete-information building blocks; in
//! the auction-like region R5 it comes from a multiplier system equivalent
//! to an incomplete-information all-pay auction, split into three cases by
//! how the opponent's budget constraint binds.

use crate::complete_info::ci_equilibrium_strategy;
use crate::error::{Error, Result};
use crate::game::{BernoulliEndowment, PayoffPair};
use crate::num::{close, ge, gt, le, lt, Real};
use crate::strategy::{Component, MixedStrategy, Segment, StrategyProfile};

/// Sub-case of the auction-like region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiegelCase {
    /// Opponent budget dominates the high endowment; the low type is shut out.
    Case1,
    /// Interior case; both types are active and the opponent mixes without
    /// an atom at zero.
    Case2,
    /// Opponent budget is slack enough to leave an atom at zero.
    Case3,
}

/// Payoff region in the (high, low) plane for a fixed opponent budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Mean budget at most the opponent's; payoff as the mean-budget benchmark.
    R1,
    /// Mean budget above the opponent's, endowment spread small.
    R2,
    /// Both endowment levels large relative to the opponent budget.
    R3,
    /// High level large, low level below the opponent budget.
    R4,
    /// Auction-like region below the classification boundary.
    R5(SiegelCase),
}

impl Region {
    pub fn name(&self) -> &'static str {
        match self {
            Region::R1 => "R1",
            Region::R2 => "R2",
            Region::R3 => "R3",
            Region::R4 => "R4",
            Region::R5(SiegelCase::Case1) => "R5/Case1",
            Region::R5(SiegelCase::Case2) => "R5/Case2",
            Region::R5(SiegelCase::Case3) => "R5/Case3",
        }
    }
}

impl core::fmt::Display for Region {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Lagrange multipliers of the auction-like region's equilibrium system.
/// `lambda_b` prices the opponent's budget; `sigma1`, `sigma2` are the
/// relative prices of the two endowment levels (`sigma2` is `+inf` when the
/// low type is priced out entirely).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Multipliers<R: Real> {
    pub sigma1: R,
    pub sigma2: R,
    pub lambda_b: R,
    pub case: SiegelCase,
}

impl<R: Real> Multipliers<R> {
    /// Budget price faced by the high type.
    pub fn lambda1(&self) -> R {
        self.sigma1 * self.lambda_b
    }

    /// Budget price faced by the low type (`+inf` when `sigma2` is).
    pub fn lambda2(&self) -> R {
        self.sigma2 * self.lambda_b
    }
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

/// Boundary curve of the auction-like region, as a function of the
/// high-endowment-to-opponent-budget ratio `a`. Piecewise: 0 below 1, then
/// two algebraic arcs, then a decaying tail past `2 + p/(1-p)`.
pub fn h_boundary<R: Real>(a: R, p: R) -> Result<R> {
    if !(p > R::zero() && p < R::one()) {
        return Err(Error::ProbabilityRange {
            value: p.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !a.is_finite() || a < R::zero() {
        return Err(Error::NegativeValue {
            name: "budget ratio",
            value: a.to_f64().unwrap_or(f64::NAN),
        });
    }
    let one = R::one();
    let two = R::val(2);
    let q = two + p / (one - p);
    if a < one {
        Ok(R::zero())
    } else if a <= two - p {
        Ok(p * (a - one) * (a - one) / ((one - p) * (two - a)))
    } else if a <= q {
        Ok((one - p) * a / (two - p))
    } else {
        Ok(p / ((one - p) * (a - two)))
    }
}

/// Classifies an endowment against a finite opponent budget. The auction-like
/// region is checked first; the remaining four predicates are disjoint.
pub fn classify_region<R: Real>(e: &BernoulliEndowment<R>, b: R) -> Result<Region> {
    check_finite_b(b)?;
    let (a1, a2, p) = (e.high(), e.low(), e.p_high());
    let one = R::one();
    let two = R::val(2);
    let abar = e.mean();
    let ratio = a1 / b;

    if le(a2, b * h_boundary(ratio, p)?) {
        let case = if a2 <= R::tol_abs() && le(a1, b) {
            SiegelCase::Case1
        } else if close(a2 * (two - p), (one - p) * a1)
            && gt(ratio, two - p)
            && lt(ratio, two + p / (one - p))
        {
            SiegelCase::Case3
        } else {
            SiegelCase::Case2
        };
        return Ok(Region::R5(case));
    }
    if ge(abar, b) && ge(a2 * (two - p), (one - p) * a1) {
        return Ok(Region::R2);
    }
    let steep = (two + p / (one - p)) * b;
    if ge(a1, steep) && ge(a2, b) && le(a2 * (two - p), (one - p) * a1) {
        return Ok(Region::R3);
    }
    if ge(a1, steep) && le(a2, b) && ge(a2, p * b * b / ((one - p) * (a1 - two * b))) {
        return Ok(Region::R4);
    }
    if le(abar, b) {
        return Ok(Region::R1);
    }
    Err(Error::Unclassifiable {
        high: a1.to_f64().unwrap_or(f64::NAN),
        low: a2.to_f64().unwrap_or(f64::NAN),
        p: p.to_f64().unwrap_or(f64::NAN),
        budget: b.to_f64().unwrap_or(f64::NAN),
    })
}

/// Unit-value budget price of the auction-like region (the bracket of the
/// region payoff that multiplies the opponent budget).
fn lambda_b_bracket<R: Real>(e: &BernoulliEndowment<R>) -> R {
    let (a1, a2, p) = (e.high(), e.low(), e.p_high());
    let s = ((R::one() - p) * a2).sqrt() + e.mean().sqrt();
    s * s / (R::val(2) * a1 * a1)
}

/// Equilibrium payoffs of the private-budget game without opponent cost.
/// Constant-sum: the pair adds to `phi` exactly.
pub fn bl_payoff_nocost<R: Real>(
    e: &BernoulliEndowment<R>,
    b: R,
    phi: R,
) -> Result<PayoffPair<R>> {
    if !phi.is_finite() || !(phi > R::zero()) {
        return Err(Error::NonpositiveValue {
            name: "total battlefield value",
            value: phi.to_f64().unwrap_or(f64::NAN),
        });
    }
    let region = classify_region(e, b)?;
    let (a1, a2, p) = (e.high(), e.low(), e.p_high());
    let one = R::one();
    let two = R::val(2);
    let abar = e.mean();
    let unit = match region {
        Region::R1 => abar / (two * b),
        Region::R2 => one - b / (two * abar),
        Region::R3 => p + (one - p) * (one - b / (two * a2)),
        Region::R4 => p + (one - p) * a2 / (two * b),
        // On the opponent-dominant segment the general expression below is
        // not valid; the constructed equilibrium gives the benchmark value.
        Region::R5(SiegelCase::Case1) => abar / (two * b),
        Region::R5(_) => {
            p + (one - p) * a2 / a1 + (abar * (one - p) * a2).sqrt() / a1
                - b * lambda_b_bracket(e)
        }
    };
    let pi_a = phi * unit;
    Ok(PayoffPair::new(pi_a, phi - pi_a))
}

/// Solves the multiplier system of the auction-like region in closed form.
/// Errors if the parameters classify elsewhere.
pub fn solve_soe<R: Real>(e: &BernoulliEndowment<R>, b: R) -> Result<Multipliers<R>> {
    let region = classify_region(e, b)?;
    let case = match region {
        Region::R5(case) => case,
        other => {
            return Err(Error::OutsideAuctionRegion { found: other.name() });
        }
    };
    let (a1, a2, p) = (e.high(), e.low(), e.p_high());
    let one = R::one();
    let two = R::val(2);
    let m = match case {
        SiegelCase::Case1 => Multipliers {
            sigma1: b / (p * a1),
            sigma2: R::infinity(),
            lambda_b: p * a1 / (two * b * b),
            case,
        },
        SiegelCase::Case2 => {
            let lambda_b = lambda_b_bracket(e);
            if a2 <= R::tol_abs() {
                // Low type endowed with nothing but the high endowment
                // exceeds the opponent budget: the low-type price diverges.
                Multipliers {
                    sigma1: b / (p * a1),
                    sigma2: R::infinity(),
                    lambda_b,
                    case,
                }
            } else {
                let sigma2 = (one - b / a1)
                    * ((a1 / ((one - p) * a2)) / (p + (one - p) * a2 / a1)).sqrt();
                let sigma1 = (b - (one - p) * sigma2 * a2) / (p * a1);
                Multipliers {
                    sigma1,
                    sigma2,
                    lambda_b,
                    case,
                }
            }
        }
        SiegelCase::Case3 => {
            let lambda_b = (two - p) / (two * a1);
            let g1 = a1 / b;
            let q = two + p / (one - p);
            // sigma1 is free inside an open interval (every choice yields the
            // same payoffs); the midpoint keeps the output deterministic and
            // strictly interior.
            let lower = (q - g1) / (g1 * p * (one + p / (one - p)));
            let upper = q / (g1 * p * (q + (one - p) / p));
            let sigma1 = (lower + upper) / two;
            let sigma2 = (b - p * sigma1 * a1) / ((one - p) * a2);
            Multipliers {
                sigma1,
                sigma2,
                lambda_b,
                case,
            }
        }
    };
    debug_assert!(le(m.sigma1, m.sigma2), "price ordering violated");
    Ok(m)
}

/// Equilibrium of the incomplete-information all-pay auction where the
/// allocator values winning at `v_a1` (probability `p`) or `v_a2`, and the
/// opponent values winning at `v_b1`/`v_b2` against the respective types.
/// `v_a2` may be zero (the low type then bids nothing).
pub fn siegel_apa_strategies<R: Real>(
    v_a1: R,
    v_a2: R,
    v_b1: R,
    v_b2: R,
    p: R,
) -> Result<StrategyProfile<R>> {
    if !(p > R::zero() && p < R::one()) {
        return Err(Error::ProbabilityRange {
            value: p.to_f64().unwrap_or(f64::NAN),
        });
    }
    for (name, v) in [
        ("high-type valuation", v_a1),
        ("opponent valuation vs high", v_b1),
        ("opponent valuation vs low", v_b2),
    ] {
        if !v.is_finite() || !(v > R::zero()) {
            return Err(Error::NonpositiveValue {
                name,
                value: v.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    if !v_a2.is_finite() || v_a2 < R::zero() {
        return Err(Error::NegativeValue {
            name: "low-type valuation",
            value: v_a2.to_f64().unwrap_or(f64::NAN),
        });
    }

    let one = R::one();
    let zero = R::zero();
    let atom0 = MixedStrategy::atom(zero)?;

    if ge(p * v_b1, v_a1) {
        // Only the top interval is contested; the low type and part of the
        // high type's mass sit at zero.
        let w = v_a1 / (p * v_b1);
        let f1 = MixedStrategy::mix(&[
            (one - w, &atom0),
            (w, &MixedStrategy::uniform(zero, v_a1)?),
        ])?;
        let f2 = atom0;
        let f_b = MixedStrategy::uniform(zero, v_a1)?;
        return Ok(StrategyProfile::new(f1, f2, f_b));
    }

    let degenerate_low = v_a2 <= R::tol_abs();
    let two_intervals = degenerate_low
        || ge(p * v_b1 / v_a1 + (one - p) * v_b2 / v_a2, one);

    let l1 = p * v_b1;
    let l2 = if two_intervals {
        if degenerate_low {
            zero
        } else {
            v_a2 * (one - p * v_b1 / v_a1)
        }
    } else {
        (one - p) * v_b2
    };

    let f1 = MixedStrategy::uniform(l2, l2 + l1)?;
    let f2 = if two_intervals {
        let w = l2 / ((one - p) * v_b2);
        if w <= R::tol_abs() {
            MixedStrategy::atom(zero)?
        } else {
            MixedStrategy::mix(&[(one - w, &atom0), (w, &MixedStrategy::uniform(zero, l2)?)])?
        }
    } else {
        MixedStrategy::uniform(zero, l2)?
    };

    let w_hi = l1 / v_a1;
    // Written to avoid 0/0 when the low interval collapses.
    let w_lo = if two_intervals {
        one - p * v_b1 / v_a1
    } else {
        l2 / v_a2
    };
    let w0 = (one - w_lo - w_hi).max(zero);
    let f_b = MixedStrategy::new(vec![
        Component {
            weight: w0,
            segment: Segment::Atom(zero),
        },
        Component {
            weight: w_lo,
            segment: Segment::Uniform(zero, l2),
        },
        Component {
            weight: w_hi,
            segment: Segment::Uniform(l2, l2 + l1),
        },
    ])?;
    Ok(StrategyProfile::new(f1, f2, f_b))
}

fn apa_from_multipliers<R: Real>(m: &Multipliers<R>, p: R) -> Result<StrategyProfile<R>> {
    let v_b = R::one() / m.lambda_b;
    let v_a1 = R::one() / m.lambda1();
    let v_a2 = if m.sigma2.is_infinite() {
        R::zero()
    } else {
        R::one() / m.lambda2()
    };
    siegel_apa_strategies(v_a1, v_a2, v_b, v_b, p)
}

/// Boundary point of the benchmark-coincident zone along the fixed-mean ray,
/// in budget-ratio coordinates, together with the allocator strategy shapes
/// there. Only the allocator's shapes are needed: the opponent keeps the
/// benchmark strategy throughout the zone.
fn coincident_boundary<R: Real>(
    e: &BernoulliEndowment<R>,
    b: R,
) -> Result<(R, R, MixedStrategy<R>, MixedStrategy<R>)> {
    let p = e.p_high();
    let one = R::one();
    let two = R::val(2);
    let gbar = e.mean() / b;
    let atom0 = MixedStrategy::atom(R::zero())?;

    if le(gbar, p) {
        let g1 = gbar / p;
        let f1 = MixedStrategy::mix(&[
            (one - g1, &atom0),
            (g1, &MixedStrategy::uniform(R::zero(), two * b)?),
        ])?;
        Ok((g1, R::zero(), f1, atom0))
    } else if le(gbar, one) {
        let g1 = two - p / gbar;
        let g2 = h_boundary(g1, p)?;
        let ebd = BernoulliEndowment::new(g1 * b, g2 * b, p)?;
        let lambda_b = lambda_b_bracket(&ebd);
        let (a1, a2) = (ebd.high(), ebd.low());
        let sigma2 =
            (one - b / a1) * ((a1 / ((one - p) * a2)) / (p + (one - p) * a2 / a1)).sqrt();
        let sigma1 = (b - (one - p) * sigma2 * a2) / (p * a1);
        let m = Multipliers {
            sigma1,
            sigma2,
            lambda_b,
            case: SiegelCase::Case2,
        };
        let profile = apa_from_multipliers(&m, p)?;
        Ok((g1, g2, profile.f_a_high, profile.f_a_low))
    } else {
        let g1 = (two - p) * gbar;
        let g2 = (one - p) * gbar;
        let a2 = g2 * b;
        let f1 = MixedStrategy::uniform(two * a2, two * gbar * b)?;
        let f2 = MixedStrategy::uniform(R::zero(), two * a2)?;
        Ok((g1, g2, f1, f2))
    }
}

/// Constructs an equilibrium profile of the private-budget game for any
/// region. Budget means hold in expectation: mean(f_a_high) = high,
/// mean(f_a_low) = low, mean(f_b) <= b.
pub fn bl_equilibrium_strategy<R: Real>(
    e: &BernoulliEndowment<R>,
    b: R,
) -> Result<StrategyProfile<R>> {
    let region = classify_region(e, b)?;
    let (a1, a2, p) = (e.high(), e.low(), e.p_high());
    let one = R::one();
    let two = R::val(2);
    match region {
        Region::R5(_) => {
            let m = solve_soe(e, b)?;
            apa_from_multipliers(&m, p)
        }
        Region::R3 => {
            let g2 = a2 / b;
            let f1 = MixedStrategy::uniform(two * a2, two * (a1 - a2))?;
            let f2 = MixedStrategy::uniform(R::zero(), two * a2)?;
            let f_b = MixedStrategy::mix(&[
                (one - one / g2, &MixedStrategy::atom(R::zero())?),
                (one / g2, &MixedStrategy::uniform(R::zero(), two * a2)?),
            ])?;
            Ok(StrategyProfile::new(f1, f2, f_b))
        }
        Region::R4 => {
            let g2 = a2 / b;
            let f1 = MixedStrategy::uniform(two * b, two * (a1 - b))?;
            let f2 = MixedStrategy::mix(&[
                (one - g2, &MixedStrategy::atom(R::zero())?),
                (g2, &MixedStrategy::uniform(R::zero(), two * b)?),
            ])?;
            let f_b = MixedStrategy::uniform(R::zero(), two * b)?;
            Ok(StrategyProfile::new(f1, f2, f_b))
        }
        Region::R1 | Region::R2 => {
            let gbar = e.mean() / b;
            let (g1, g2) = (a1 / b, a2 / b);
            let (g1bd, g2bd, f1bd, f2bd) = coincident_boundary(e, b)?;
            let alpha = (g1 - gbar) / (g1bd - gbar);
            let alpha_check = (gbar - g2) / (gbar - g2bd);
            debug_assert!(
                (alpha - alpha_check).abs() <= R::val(1e-10) * R::one().max(alpha.abs()),
                "fixed-mean ray lost collinearity"
            );
            let alpha = alpha.max(R::zero()).min(one);
            let (f_a_mean, f_b) = ci_equilibrium_strategy(e.mean(), b)?;
            let f_a_high =
                MixedStrategy::mix(&[(alpha, &f1bd), (one - alpha, &f_a_mean)])?;
            let f_a_low = MixedStrategy::mix(&[(alpha, &f2bd), (one - alpha, &f_a_mean)])?;
            Ok(StrategyProfile::new(f_a_high, f_a_low, f_b))
        }
    }
}

/// True when knowing only the budget distribution leaves the opponent no
/// worse than the allocator gains: the private-budget payoff never exceeds
/// the mean-budget benchmark payoff.
pub fn ci_better_check<R: Real>(e: &BernoulliEndowment<R>, b: R, phi: R) -> Result<bool> {
    let bl = bl_payoff_nocost(e, b, phi)?;
    let ci = crate::complete_info::ci_payoff_nocost(e.mean(), b, phi)?;
    Ok(bl.a <= ci.a + R::val(1e-9))
}
