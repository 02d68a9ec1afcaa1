//! Independent verification of equilibrium claims.
//!
//! Nothing here reuses the closed-form solution path: payoffs between
//! mixtures are integrated in closed form pairwise, and best-response values
//! under an expected-budget constraint come from concavifying the pure-bid
//! payoff. A strategy profile is certified by comparing each player's
//! realized value against its concavification optimum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{BattlefieldSet, GameSpec};
use crate::num::Real;
use crate::strategy::{MixedStrategy, StrategyProfile};

/// Outcome of certifying a strategy profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationReport<R: Real> {
    pub value_a: R,
    pub value_b: R,
    pub exploitability_a_high: R,
    pub exploitability_a_low: R,
    pub exploitability_b: R,
    /// Largest of the three exploitabilities.
    pub epsilon: R,
    pub grid_points: usize,
}

/// Expected payoff to the side playing `f` when ties go to the side playing
/// `g`: phi * P(X > Y).
pub fn exact_payoff<R: Real>(f: &MixedStrategy<R>, g: &MixedStrategy<R>, phi: R) -> R {
    phi * f.prob_beats(g)
}

/// Upper concave hull of points with ascending x. Points below a chord of
/// their neighbors are dropped; the result's slopes strictly decrease.
fn upper_hull<R: Real>(pts: &[(R, R)]) -> Vec<(R, R)> {
    let mut hull: Vec<(R, R)> = Vec::with_capacity(pts.len());
    for &(x, y) in pts {
        if let Some(&(lx, ly)) = hull.last() {
            if lx == x {
                if y <= ly {
                    continue;
                }
                hull.pop();
            }
        }
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            if (y2 - y1) * (x - x2) <= (y - y2) * (x2 - x1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    hull
}

/// Hull value at m, linearly interpolated; clamped to the end values
/// outside the hull's x-range.
fn hull_value<R: Real>(hull: &[(R, R)], m: R) -> R {
    if hull.is_empty() {
        return R::zero();
    }
    if m <= hull[0].0 {
        return hull[0].1;
    }
    if m >= hull[hull.len() - 1].0 {
        return hull[hull.len() - 1].1;
    }
    let idx = hull.partition_point(|&(x, _)| x <= m);
    let (x1, y1) = hull[idx - 1];
    let (x2, y2) = hull[idx];
    y1 + (y2 - y1) * (m - x1) / (x2 - x1)
}

/// Ascending evaluation knots: an even grid over [0, top] with the given
/// extra points spliced in.
fn knots<R: Real>(top: R, grid: usize, extra: &[R]) -> Vec<R> {
    let n = grid.max(2) - 1;
    let step = top / R::val(n);
    let mut xs: Vec<R> = (0..=n).map(|i| step * R::val(i)).collect();
    xs.extend(
        extra
            .iter()
            .copied()
            .filter(|x| *x >= R::zero() && *x <= top),
    );
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite knots"));
    xs.dedup();
    xs
}

/// Best payoff the budget-constrained side can guarantee against `g`: the
/// upper concave envelope of the pure-bid payoff phi * P(Y <= x), evaluated
/// at the budget. The right-continuous CDF is the correct pure-bid value
/// here because a bid just above an atom wins it; a zero budget means a
/// forced zero bid, which loses ties.
pub fn best_response_value_a<R: Real>(
    g: &MixedStrategy<R>,
    budget: R,
    phi: R,
    grid: usize,
) -> R {
    if budget <= R::tol_abs() {
        return phi * g.cdf_left(R::zero());
    }
    let top = g.support_top() * R::val(1.01);
    if top <= R::tol_abs() {
        return phi * g.cdf(R::zero());
    }
    let xs = knots(top, grid, &g.breakpoints());
    let pts: Vec<(R, R)> = xs.into_iter().map(|x| (x, phi * g.cdf(x))).collect();
    let hull = upper_hull(&pts);
    hull_value(&hull, budget.min(top))
}

/// Best payoff the opponent can achieve against the type-contingent pair
/// (f_high, f_low): pure-bid payoff
/// phi * [p F_high(x) + (1-p) F_low(x)] - unit_cost * x (the opponent wins
/// ties, so the CDFs are taken right-continuously), concavified and
/// maximized over mean spends up to the budget.
pub fn best_response_value_b<R: Real>(
    f_high: &MixedStrategy<R>,
    f_low: &MixedStrategy<R>,
    p: R,
    budget: R,
    unit_cost: R,
    phi: R,
    grid: usize,
) -> R {
    let q = R::one() - p;
    let pure = |x: R| phi * (p * f_high.cdf(x) + q * f_low.cdf(x)) - unit_cost * x;
    let top = f_high.support_top().max(f_low.support_top()) * R::val(1.01);
    if top <= R::tol_abs() {
        return pure(R::zero());
    }
    let mut extra = f_high.breakpoints();
    extra.extend(f_low.breakpoints());
    let xs = knots(top, grid, &extra);
    let pts: Vec<(R, R)> = xs.into_iter().map(|x| (x, pure(x))).collect();
    let hull = upper_hull(&pts);
    let cap = budget.min(top);
    let mut best = hull_value(&hull, cap);
    for &(x, y) in &hull {
        if x <= cap {
            best = best.max(y);
        }
    }
    best
}

/// Certifies a strategy profile against the game it claims to solve. Each
/// exploitability is the gap between a concavification best response and
/// the realized value; tiny negative gaps from rounding are clamped to 0.
pub fn verify_equilibrium<R: Real>(
    profile: &StrategyProfile<R>,
    spec: &GameSpec<R>,
    grid: usize,
) -> VerificationReport<R> {
    let phi = spec.total_value();
    let p = spec.endowment.p_high();
    let q = spec.endowment.p_low();
    let b = &spec.opponent;

    let realized_high = exact_payoff(&profile.f_a_high, &profile.f_b, phi);
    let realized_low = exact_payoff(&profile.f_a_low, &profile.f_b, phi);
    let value_a = p * realized_high + q * realized_low;
    let value_b = (phi - value_a) - b.unit_cost() * profile.f_b.mean();

    let br_high = best_response_value_a(&profile.f_b, spec.endowment.high(), phi, grid);
    let br_low = best_response_value_a(&profile.f_b, spec.endowment.low(), phi, grid);
    let br_b = best_response_value_b(
        &profile.f_a_high,
        &profile.f_a_low,
        p,
        b.budget(),
        b.unit_cost(),
        phi,
        grid,
    );

    let clamp = |v: R| v.max(R::zero());
    let exploitability_a_high = clamp(br_high - realized_high);
    let exploitability_a_low = clamp(br_low - realized_low);
    let exploitability_b = clamp(br_b - value_b);
    VerificationReport {
        value_a,
        value_b,
        exploitability_a_high,
        exploitability_a_low,
        exploitability_b,
        epsilon: exploitability_a_high
            .max(exploitability_a_low)
            .max(exploitability_b),
        grid_points: grid,
    }
}

/// Draws one aggregate expenditure from `s` and splits it across
/// battlefields in proportion to value.
pub fn sample_allocation<R: Real>(
    s: &MixedStrategy<R>,
    battlefields: &BattlefieldSet<R>,
    seed: u64,
) -> Vec<R> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    battlefields.split(s.sample(&mut rng))
}

/// Simulates the game: per sample, draw the informed side's type and both
/// totals, split proportionally, and award each battlefield to the strictly
/// higher allocation (ties to the opponent). Returns the sample mean of the
/// informed side's winnings and its standard error.
pub fn monte_carlo_payoff<R: Real>(
    profile: &StrategyProfile<R>,
    spec: &GameSpec<R>,
    n_samples: usize,
    seed: u64,
) -> (R, R) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = spec.endowment.p_high().to_f64().expect("probability fits f64");
    let n = n_samples.max(1);
    let mut sum = R::zero();
    let mut sum_sq = R::zero();
    for _ in 0..n {
        let high_type = rng.gen::<f64>() < p;
        let f = if high_type {
            &profile.f_a_high
        } else {
            &profile.f_a_low
        };
        let x = f.sample(&mut rng);
        let y = profile.f_b.sample(&mut rng);
        let a_alloc = spec.battlefields.split(x);
        let b_alloc = spec.battlefields.split(y);
        let mut won = R::zero();
        for (j, v) in spec.battlefields.values().iter().enumerate() {
            if a_alloc[j] > b_alloc[j] {
                won = won + *v;
            }
        }
        sum = sum + won;
        sum_sq = sum_sq + won * won;
    }
    let n_r = R::val(n);
    let mean = sum / n_r;
    if n == 1 {
        return (mean, R::zero());
    }
    let var = ((sum_sq - sum * sum / n_r) / (n_r - R::one())).max(R::zero());
    (mean, (var / n_r).sqrt())
}
