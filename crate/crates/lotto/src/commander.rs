//! Two-front resource assignment for a commander.
//!
//! A commander assigns resources to two sub-colonels, each engaged in a
//! General Lotto competition on its own front against an opponent with
//! per-front cost and budget parameters. Assignments may be deterministic
//! (a fixed split) or randomized (a joint distribution whose per-front
//! marginals take at most two values). Randomization pays off only when the
//! commander buys resources at a per-unit cost; with a use-it-or-lose-it
//! budget it provably does not.

use crate::bernoulli::bl_payoff_nocost;
use crate::complete_info::{ci_payoff_cost, ci_payoff_nocost};
use crate::cost::bl_payoff_cost;
use crate::error::{Error, Result};
use crate::game::BernoulliEndowment;
use crate::num::{close, ge, gt, le, lt, Real};
use crate::randomize::optimal_randomization;

/// Which parameter regime an instance belongs to. Every instance maps to
/// exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Setting {
    /// All costs zero, every budget finite.
    FixedBudget,
    /// All costs positive, every budget infinite.
    PerUnit,
    /// Anything else.
    General,
}

impl Setting {
    pub fn name(self) -> &'static str {
        match self {
            Setting::FixedBudget => "fixed_budget",
            Setting::PerUnit => "per_unit",
            Setting::General => "general",
        }
    }
}

impl core::fmt::Display for Setting {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters of a two-front assignment problem: commander per-unit cost c
/// and budget A, opponent per-unit costs c_i, budgets B_i, and front values
/// phi_i.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommanderInstance<R: Real> {
    commander_cost: R,
    opp_costs: [R; 2],
    front_values: [R; 2],
    commander_budget: R,
    opp_budgets: [R; 2],
}

impl<R: Real> CommanderInstance<R> {
    pub fn new(
        commander_cost: R,
        opp_costs: (R, R),
        front_values: (R, R),
        commander_budget: R,
        opp_budgets: (R, R),
    ) -> Result<Self> {
        let nonneg = |name: &'static str, v: R| -> Result<()> {
            if v.is_nan() || v.is_infinite() || v < R::zero() {
                return Err(Error::NegativeValue {
                    name,
                    value: v.to_f64().unwrap_or(f64::NAN),
                });
            }
            Ok(())
        };
        nonneg("commander cost", commander_cost)?;
        nonneg("opponent cost (front 1)", opp_costs.0)?;
        nonneg("opponent cost (front 2)", opp_costs.1)?;
        for (name, v) in [
            ("front 1 value", front_values.0),
            ("front 2 value", front_values.1),
        ] {
            if !v.is_finite() || !(v > R::zero()) {
                return Err(Error::NonpositiveValue {
                    name,
                    value: v.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        // Budgets may be +infinity; the commander's may also be zero.
        if commander_budget.is_nan() || commander_budget < R::zero() {
            return Err(Error::NegativeValue {
                name: "commander budget",
                value: commander_budget.to_f64().unwrap_or(f64::NAN),
            });
        }
        for (name, v) in [
            ("opponent budget (front 1)", opp_budgets.0),
            ("opponent budget (front 2)", opp_budgets.1),
        ] {
            if v.is_nan() || !(v > R::zero()) {
                return Err(Error::NonpositiveValue {
                    name,
                    value: v.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self {
            commander_cost,
            opp_costs: [opp_costs.0, opp_costs.1],
            front_values: [front_values.0, front_values.1],
            commander_budget,
            opp_budgets: [opp_budgets.0, opp_budgets.1],
        })
    }

    pub fn commander_cost(&self) -> R {
        self.commander_cost
    }

    pub fn opp_costs(&self) -> (R, R) {
        (self.opp_costs[0], self.opp_costs[1])
    }

    pub fn front_values(&self) -> (R, R) {
        (self.front_values[0], self.front_values[1])
    }

    pub fn commander_budget(&self) -> R {
        self.commander_budget
    }

    pub fn opp_budgets(&self) -> (R, R) {
        (self.opp_budgets[0], self.opp_budgets[1])
    }

    pub fn setting(&self) -> Setting {
        let zero_costs = self.commander_cost == R::zero()
            && self.opp_costs[0] == R::zero()
            && self.opp_costs[1] == R::zero();
        let finite_budgets = self.commander_budget.is_finite()
            && self.opp_budgets[0].is_finite()
            && self.opp_budgets[1].is_finite();
        if zero_costs && finite_budgets {
            return Setting::FixedBudget;
        }
        let positive_costs = self.commander_cost > R::zero()
            && self.opp_costs[0] > R::zero()
            && self.opp_costs[1] > R::zero();
        let infinite_budgets = self.commander_budget.is_infinite()
            && self.opp_budgets[0].is_infinite()
            && self.opp_budgets[1].is_infinite();
        if positive_costs && infinite_budgets {
            return Setting::PerUnit;
        }
        Setting::General
    }

    /// Outright-win cost of front i for the commander: assigning
    /// phi_i/(2 c_i) saturates the opponent's cost there.
    fn win_cost(&self, i: usize) -> R {
        self.front_values[i] / (R::val(2) * self.opp_costs[i])
    }

    /// c1 phi1 + c2 phi2, the recurring weight sum.
    fn weight_sum(&self) -> R {
        self.opp_costs[0] * self.front_values[0] + self.opp_costs[1] * self.front_values[1]
    }

    /// argmin_i phi_i/(2 c_i), ties toward front 1.
    fn cheapest_front(&self) -> usize {
        if le(self.win_cost(0), self.win_cost(1)) {
            0
        } else {
            1
        }
    }

    /// argmax_i c_i, ties toward front 1.
    fn costliest_front(&self) -> usize {
        if ge(self.opp_costs[0], self.opp_costs[1]) {
            0
        } else {
            1
        }
    }

    fn require_budgeted_commander(&self, op: &'static str) -> Result<()> {
        let ok = self.commander_cost == R::zero()
            && self.commander_budget.is_finite()
            && self.opp_costs.iter().all(|c| *c > R::zero())
            && self.opp_budgets.iter().all(|b| b.is_infinite());
        if ok {
            Ok(())
        } else {
            Err(Error::SettingMismatch { detail: op })
        }
    }

    fn require_per_unit(&self, op: &'static str) -> Result<()> {
        if self.setting() == Setting::PerUnit {
            Ok(())
        } else {
            Err(Error::SettingMismatch { detail: op })
        }
    }
}

/// A randomized assignment: joint distribution over (front-1, front-2)
/// resource pairs. Canonical form drops zero-probability points, merges
/// duplicates, and keeps each marginal on at most two values.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentDistribution<R: Real> {
    support: Vec<([R; 2], R)>,
}

impl<R: Real> AssignmentDistribution<R> {
    pub fn new(support: Vec<([R; 2], R)>) -> Result<Self> {
        let mut kept: Vec<([R; 2], R)> = Vec::with_capacity(support.len());
        let mut total = R::zero();
        for (pt, pr) in support {
            if pr.is_nan() || pr < -R::tol_abs() {
                return Err(Error::InvalidInput {
                    detail: format!("assignment probability {pr} is negative"),
                });
            }
            for v in pt {
                if !v.is_finite() || v < R::zero() {
                    return Err(Error::InvalidInput {
                        detail: format!("assignment level {v} is not a finite nonnegative value"),
                    });
                }
            }
            total = total + pr.max(R::zero());
            if pr <= R::tol_abs() {
                continue;
            }
            match kept
                .iter_mut()
                .find(|(q, _)| close(q[0], pt[0]) && close(q[1], pt[1]))
            {
                Some((_, q_pr)) => *q_pr = *q_pr + pr,
                None => kept.push((pt, pr)),
            }
        }
        if !close(total, R::one()) {
            return Err(Error::InvalidInput {
                detail: format!("assignment probabilities sum to {total}, expected 1"),
            });
        }
        if kept.is_empty() {
            return Err(Error::InvalidInput {
                detail: "assignment distribution has empty support".to_string(),
            });
        }
        let norm = kept.iter().fold(R::zero(), |acc, (_, p)| acc + *p);
        for (_, p) in &mut kept {
            *p = *p / norm;
        }
        kept.sort_by(|(a, _), (b, _)| {
            a[0].partial_cmp(&b[0])
                .unwrap()
                .then(a[1].partial_cmp(&b[1]).unwrap())
        });
        let dist = Self { support: kept };
        for i in 0..2 {
            let m = dist.marginal(i);
            if m.len() > 2 {
                return Err(Error::InvalidInput {
                    detail: format!("front {} marginal has {} distinct values", i + 1, m.len()),
                });
            }
        }
        Ok(dist)
    }

    fn point(a1: R, a2: R) -> Self {
        Self {
            support: vec![([a1, a2], R::one())],
        }
    }

    pub fn support(&self) -> &[([R; 2], R)] {
        &self.support
    }

    /// Per-front marginal as (value, probability) pairs, ascending, with
    /// nearby values merged.
    pub fn marginal(&self, front: usize) -> Vec<(R, R)> {
        let mut acc: Vec<(R, R)> = Vec::new();
        for (pt, pr) in &self.support {
            match acc.iter_mut().find(|(v, _)| close(*v, pt[front])) {
                Some((_, p)) => *p = *p + *pr,
                None => acc.push((pt[front], *pr)),
            }
        }
        acc.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        acc
    }

    pub fn expected_total(&self) -> R {
        self.support
            .iter()
            .fold(R::zero(), |acc, (pt, pr)| acc + *pr * (pt[0] + pt[1]))
    }
}

/// An optimal assignment: the distribution, its net performance, and the
/// expected resources committed.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentResult<R: Real> {
    pub distribution: AssignmentDistribution<R>,
    pub performance: R,
    pub expected_spend: R,
}

/// Net objective value of an arbitrary assignment distribution: the sum of
/// per-front equilibrium payoffs induced by its marginals, minus the
/// commander's cost of the expected total commitment. A one-value marginal
/// plays the complete-information game on that front; a two-value marginal
/// plays the private-budget game.
pub fn evaluate_assignment<R: Real>(
    inst: &CommanderInstance<R>,
    dist: &AssignmentDistribution<R>,
) -> Result<R> {
    let mut gross = R::zero();
    for i in 0..2 {
        let m = dist.marginal(i);
        let b = inst.opp_budgets[i];
        let c_i = inst.opp_costs[i];
        let phi = inst.front_values[i];
        let front = match m.as_slice() {
            [(v, _)] => {
                if *v <= R::tol_abs() {
                    R::zero()
                } else {
                    ci_payoff_cost(*v, b, c_i, phi)?.payoffs.a
                }
            }
            [(lo, _), (hi, p_hi)] => {
                let e = BernoulliEndowment::new(*hi, *lo, *p_hi)?;
                bl_payoff_cost(&e, b, c_i, phi)?.payoffs.a
            }
            _ => {
                return Err(Error::InvalidInput {
                    detail: format!("front {} marginal has more than two values", i + 1),
                })
            }
        };
        gross = gross + front;
    }
    Ok(gross - inst.commander_cost * dist.expected_total())
}

/// Optimal deterministic split of a fixed budget across two fronts whose
/// opponents pay per-unit costs. Four budget ranges relative to the
/// outright-win costs T_i = phi_i/(2 c_i); inside the middle ranges the
/// winner of the "win one front vs. hedge both" comparison decides.
pub fn det_assign_fixed_budget<R: Real>(
    inst: &CommanderInstance<R>,
) -> Result<AssignmentResult<R>> {
    inst.require_budgeted_commander(
        "deterministic fixed-budget assignment needs zero commander cost, a finite budget, positive front costs, and unbounded opponents",
    )?;
    let two = R::val(2);
    let a = inst.commander_budget;
    let t = [inst.win_cost(0), inst.win_cost(1)];
    let s = inst.weight_sum();
    let j = inst.cheapest_front();
    let cv = inst.opp_costs;
    let pv = inst.front_values;
    // Value of giving front i its win cost and the remainder to the other.
    let q = |i: usize| (cv[i] * pv[i] * (a - t[1 - i]) / two).sqrt();
    let hedged = (a * s / two).sqrt();

    let (lead, lead_amount, w) = if lt(a, t[0].min(t[1])) {
        (0, cv[0] * pv[0] * a / s, hedged)
    } else if lt(a, t[0].max(t[1])) {
        let win = pv[j] + q(1 - j);
        if ge(a, s / (two * cv[j] * cv[j])) {
            // The hedged interior point falls past front j's win cost, so
            // the unconstrained maximum is not attainable here.
            (j, t[j], win)
        } else if ge(win, hedged) {
            (j, t[j], win)
        } else {
            (j, cv[j] * pv[j] * a / s, hedged)
        }
    } else if lt(a, t[0] + t[1]) {
        let win_j = pv[j] + q(1 - j);
        let win_other = pv[1 - j] + q(j);
        if ge(win_other, win_j) {
            (j, a - t[1 - j], win_other)
        } else {
            (j, t[j], win_j)
        }
    } else {
        (0, t[0], pv[0] + pv[1])
    };

    let mut pair = [R::zero(); 2];
    pair[lead] = lead_amount;
    pair[1 - lead] = a - lead_amount;
    Ok(AssignmentResult {
        distribution: AssignmentDistribution::point(pair[0], pair[1]),
        performance: w,
        expected_spend: a,
    })
}

/// Optimal deterministic assignment when the commander itself pays per-unit
/// cost c with no budget. The problem separates across fronts: win front i
/// outright when c is at most c_i(1 + sqrt(3)/2), otherwise contest it at
/// the interior point c_i phi_i/(8 c^2).
pub fn det_assign_per_unit<R: Real>(inst: &CommanderInstance<R>) -> Result<AssignmentResult<R>> {
    inst.require_per_unit(
        "deterministic per-unit assignment needs positive costs and unbounded budgets",
    )?;
    let two = R::val(2);
    let eight = R::val(8);
    let win_edge = R::one() + R::val(3).sqrt() / two;
    let c = inst.commander_cost;
    let mut levels = [R::zero(); 2];
    let mut w = R::zero();
    for i in 0..2 {
        let (c_i, phi) = (inst.opp_costs[i], inst.front_values[i]);
        if le(c, c_i * win_edge) {
            levels[i] = inst.win_cost(i);
            w = w + (R::one() - c / (two * c_i)) * phi;
        } else {
            levels[i] = c_i * phi / (eight * c * c);
            w = w + c_i * phi / (eight * c);
        }
    }
    Ok(AssignmentResult {
        distribution: AssignmentDistribution::point(levels[0], levels[1]),
        performance: w,
        expected_spend: levels[0] + levels[1],
    })
}

/// Optimal randomized assignment of a fixed budget. Small budgets randomize
/// both fronts (four-point product support), intermediate budgets win the
/// costlier front outright and randomize the other, large budgets win both.
pub fn rand_assign_fixed_budget<R: Real>(
    inst: &CommanderInstance<R>,
) -> Result<AssignmentResult<R>> {
    inst.require_budgeted_commander(
        "randomized fixed-budget assignment needs zero commander cost, a finite budget, positive front costs, and unbounded opponents",
    )?;
    let two = R::val(2);
    let a = inst.commander_budget;
    let t = [inst.win_cost(0), inst.win_cost(1)];
    let s = inst.weight_sum();
    let k = inst.costliest_front();
    let cv = inst.opp_costs;
    let pv = inst.front_values;

    if lt(a, s / (two * cv[k] * cv[k])) {
        let mean = [cv[0] * pv[0] * a / s, cv[1] * pv[1] * a / s];
        let mut high = [R::zero(); 2];
        let mut p = [R::zero(); 2];
        for i in 0..2 {
            high[i] = (mean[i] * pv[i] / (two * cv[i])).sqrt();
            p[i] = (two * cv[i] * mean[i] / pv[i]).sqrt();
        }
        let support = vec![
            ([R::zero(), R::zero()], (R::one() - p[0]) * (R::one() - p[1])),
            ([high[0], R::zero()], p[0] * (R::one() - p[1])),
            ([R::zero(), high[1]], (R::one() - p[0]) * p[1]),
            ([high[0], high[1]], p[0] * p[1]),
        ];
        return Ok(AssignmentResult {
            distribution: AssignmentDistribution::new(support)?,
            performance: (two * a * s).sqrt(),
            expected_spend: a,
        });
    }
    if lt(a, t[0] + t[1]) {
        let rem = a - t[k];
        let o = 1 - k;
        let high = (rem * pv[o] / (two * cv[o])).sqrt();
        let p = (two * cv[o] * rem / pv[o]).sqrt();
        let mut on = [R::zero(); 2];
        on[k] = t[k];
        on[o] = high;
        let mut off = [R::zero(); 2];
        off[k] = t[k];
        let support = vec![(on, p), (off, R::one() - p)];
        return Ok(AssignmentResult {
            distribution: AssignmentDistribution::new(support)?,
            performance: pv[k] + (two * cv[o] * pv[o] * rem).sqrt(),
            expected_spend: a,
        });
    }
    Ok(AssignmentResult {
        distribution: AssignmentDistribution::point(t[0], a - t[0]),
        performance: pv[0] + pv[1],
        expected_spend: a,
    })
}

/// Optimal randomized assignment under commander per-unit cost c. Low c
/// wins both fronts deterministically; between the opponent costs the
/// costlier front is won outright and the other randomized; above both the
/// four-point maximal randomization applies with net value
/// (c1 phi1 + c2 phi2)/(2c).
pub fn rand_assign_per_unit<R: Real>(inst: &CommanderInstance<R>) -> Result<AssignmentResult<R>> {
    inst.require_per_unit(
        "randomized per-unit assignment needs positive costs and unbounded budgets",
    )?;
    let two = R::val(2);
    let c = inst.commander_cost;
    let t = [inst.win_cost(0), inst.win_cost(1)];
    let k = inst.costliest_front();
    let o = 1 - k;
    let cv = inst.opp_costs;
    let pv = inst.front_values;

    if le(c, cv[o]) {
        let w = (R::one() - c / (two * cv[0])) * pv[0] + (R::one() - c / (two * cv[1])) * pv[1];
        return Ok(AssignmentResult {
            distribution: AssignmentDistribution::point(t[0], t[1]),
            performance: w,
            expected_spend: t[0] + t[1],
        });
    }
    if lt(c, cv[k]) {
        let high = pv[o] / (two * c);
        let p = cv[o] / c;
        let mut on = [R::zero(); 2];
        on[k] = t[k];
        on[o] = high;
        let mut off = [R::zero(); 2];
        off[k] = t[k];
        let w = (R::one() - c / (two * cv[k])) * pv[k] + cv[o] * pv[o] / (two * c);
        return Ok(AssignmentResult {
            distribution: AssignmentDistribution::new(vec![(on, p), (off, R::one() - p)])?,
            performance: w,
            expected_spend: t[k] + cv[o] * pv[o] / (two * c * c),
        });
    }
    let high = [pv[0] / (two * c), pv[1] / (two * c)];
    let p = [cv[0] / c, cv[1] / c];
    let s = inst.weight_sum();
    let support = vec![
        ([R::zero(), R::zero()], (R::one() - p[0]) * (R::one() - p[1])),
        ([high[0], R::zero()], p[0] * (R::one() - p[1])),
        ([R::zero(), high[1]], (R::one() - p[0]) * p[1]),
        ([high[0], high[1]], p[0] * p[1]),
    ];
    Ok(AssignmentResult {
        distribution: AssignmentDistribution::new(support)?,
        performance: s / (two * c),
        expected_spend: s / (two * c * c),
    })
}

/// W*/W_d* in the per-unit setting. Bounded by 4.
pub fn improvement_factor<R: Real>(inst: &CommanderInstance<R>) -> Result<R> {
    let det = det_assign_per_unit(inst)?;
    let rand = rand_assign_per_unit(inst)?;
    Ok(rand.performance / det.performance)
}

/// Whether the per-unit instance attains the full fourfold improvement:
/// c > max{ (1/2) sqrt((c_j/phi_j)(c1 phi1 + c2 phi2)), c_k (1 + sqrt(3)/2) }
/// with j the cheapest-to-win front and k the costlier opponent.
pub fn fourfold_condition<R: Real>(inst: &CommanderInstance<R>) -> Result<bool> {
    inst.require_per_unit("fourfold condition needs positive costs and unbounded budgets")?;
    let two = R::val(2);
    let j = inst.cheapest_front();
    let k = inst.costliest_front();
    let s = inst.weight_sum();
    let hedge_edge = (inst.opp_costs[j] / inst.front_values[j] * s).sqrt() / two;
    let win_edge = inst.opp_costs[k] * (R::one() + R::val(3).sqrt() / two);
    Ok(gt(inst.commander_cost, hedge_edge.max(win_edge)))
}

/// Evenly spaced points over [lo, hi] plus any knots inside, ascending.
fn grid_with_knots<R: Real>(lo: R, hi: R, n: usize, knots: &[R]) -> Vec<R> {
    if !(hi > lo) {
        return vec![lo];
    }
    let step = (hi - lo) / R::val(n.max(1));
    let mut pts: Vec<R> = (0..=n.max(1)).map(|i| lo + step * R::val(i)).collect();
    pts.extend(knots.iter().copied().filter(|k| *k > lo && *k < hi));
    pts.push(hi);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| close(*a, *b));
    pts
}

/// Grid evaluation of both assignment problems for arbitrary (general)
/// parameters: maximize per-front payoffs minus c * total over total spend
/// and its split, doubling resolution until two successive refinements agree
/// within 1e-4 * (phi1 + phi2). Front win costs and opponent budgets are
/// inserted as exact grid knots because the deterministic objective jumps
/// there.
pub fn general_setting_performance<R: Real>(
    inst: &CommanderInstance<R>,
    grid_size: usize,
) -> Result<(R, R)> {
    let a = inst.commander_budget;
    if !a.is_finite() {
        return Err(Error::SettingMismatch {
            detail: "general-setting evaluation needs a finite commander budget",
        });
    }
    for i in 0..2 {
        if inst.opp_budgets[i].is_infinite() && inst.opp_costs[i] == R::zero() {
            return Err(Error::InfiniteBudgetNoCost);
        }
    }
    let (pv, cv, bv) = (inst.front_values, inst.opp_costs, inst.opp_budgets);
    let c = inst.commander_cost;

    let det_front = |i: usize, x: R| -> Result<R> {
        if x <= R::tol_abs() {
            Ok(R::zero())
        } else {
            Ok(ci_payoff_cost(x, bv[i], cv[i], pv[i])?.payoffs.a)
        }
    };
    let rand_front = |i: usize, x: R| -> Result<R> {
        if x <= R::tol_abs() {
            Ok(R::zero())
        } else if cv[i] == R::zero() {
            Ok(ci_payoff_nocost(x, bv[i], pv[i])?.a)
        } else {
            Ok(optimal_randomization(x, bv[i], cv[i], pv[i])?.payoff_a)
        }
    };

    let mut knots: Vec<R> = Vec::new();
    for i in 0..2 {
        if cv[i] > R::zero() {
            knots.push(inst.win_cost(i));
        }
        if bv[i].is_finite() {
            knots.push(bv[i]);
        }
    }
    if cv[0] > R::zero() && cv[1] > R::zero() {
        knots.push(inst.win_cost(0) + inst.win_cost(1));
    }
    let t_knots = knots.clone();

    let tol = R::val(1e-4) * (pv[0] + pv[1]);
    let mut n = grid_size.clamp(8, 4096);
    let mut prev: Option<(R, R)> = None;
    loop {
        let mut w_det = R::zero();
        let mut w_rand = R::zero();
        for total in grid_with_knots(R::zero(), a, n, &t_knots) {
            let mut s_knots = knots.clone();
            s_knots.extend(knots.iter().map(|k| total - *k));
            for a1 in grid_with_knots(R::zero(), total, n, &s_knots) {
                let a2 = (total - a1).max(R::zero());
                let d = det_front(0, a1)? + det_front(1, a2)? - c * total;
                let r = rand_front(0, a1)? + rand_front(1, a2)? - c * total;
                w_det = w_det.max(d);
                w_rand = w_rand.max(r);
            }
        }
        if let Some((pd, pr)) = prev {
            if (w_det - pd).abs() < tol && (w_rand - pr).abs() < tol {
                return Ok((w_det, w_rand));
            }
        }
        if n >= 4096 {
            return Ok((w_det, w_rand));
        }
        prev = Some((w_det, w_rand));
        n *= 2;
    }
}

/// With a fixed commander budget and zero costs everywhere, randomization
/// provably gains nothing. Returns the deterministic optimum W_d, the best
/// value found over deterministic splits and a sampled set of two-point
/// randomizations W, and whether they agree.
pub fn fixed_budget_equality<R: Real>(inst: &CommanderInstance<R>) -> Result<(R, R, bool)> {
    if inst.setting() != Setting::FixedBudget {
        return Err(Error::SettingMismatch {
            detail: "fixed-budget equality needs zero costs and finite budgets",
        });
    }
    let a = inst.commander_budget;
    let (pv, bv) = (inst.front_values, inst.opp_budgets);
    if a <= R::tol_abs() {
        return Ok((R::zero(), R::zero(), true));
    }
    let front = |i: usize, x: R| -> Result<R> {
        if x <= R::tol_abs() {
            Ok(R::zero())
        } else {
            Ok(ci_payoff_nocost(x, bv[i], pv[i])?.a)
        }
    };
    let knots = [bv[0], a - bv[1], bv[0].min(a)];
    let tol = R::val(1e-10) * (pv[0] + pv[1]);
    let mut n = 512;
    let mut w_det;
    let mut prev: Option<R> = None;
    loop {
        w_det = R::zero();
        for a1 in grid_with_knots(R::zero(), a, n, &knots) {
            w_det = w_det.max(front(0, a1)? + front(1, a - a1)?);
        }
        if let Some(p) = prev {
            if (w_det - p).abs() < tol || n >= 1 << 14 {
                break;
            }
        }
        prev = Some(w_det);
        n *= 2;
    }

    // Sample two-point randomizations per front at matched means and check
    // none beats the deterministic optimum.
    let quarters = [R::zero(), R::val(0.25), R::val(0.5), R::val(0.75)];
    let probs: Vec<R> = (1..8).map(|i| R::val(i) * R::val(0.125)).collect();
    let best_front = |i: usize, mean: R| -> Result<R> {
        let mut best = front(i, mean)?;
        if mean <= R::tol_abs() {
            return Ok(best);
        }
        for &p in &probs {
            for &f in &quarters {
                let lo = f * mean;
                let hi = (mean - (R::one() - p) * lo) / p;
                let e = BernoulliEndowment::new(hi, lo, p)?;
                best = best.max(bl_payoff_nocost(&e, bv[i], pv[i])?.a);
            }
        }
        Ok(best)
    };
    // Fold the deterministic value at the sampled splits into W_d so the
    // comparison happens at matched means; otherwise the coarser sampling
    // grid can land nearer the true optimum than the refinement grid did
    // and report a spurious gap at discretization scale.
    let mut w_rand = R::zero();
    for a1 in grid_with_knots(R::zero(), a, 100, &knots) {
        w_det = w_det.max(front(0, a1)? + front(1, a - a1)?);
        w_rand = w_rand.max(best_front(0, a1)? + best_front(1, a - a1)?);
    }
    let w = w_det.max(w_rand);
    Ok((w_det, w, w - w_det <= R::val(1e-9)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn per_unit(c: f64, c1: f64, c2: f64, phi1: f64, phi2: f64) -> CommanderInstance<f64> {
        CommanderInstance::new(
            c,
            (c1, c2),
            (phi1, phi2),
            f64::INFINITY,
            (f64::INFINITY, f64::INFINITY),
        )
        .unwrap()
    }

    fn budgeted(a: f64, c1: f64, c2: f64, phi1: f64, phi2: f64) -> CommanderInstance<f64> {
        CommanderInstance::new(
            0.0,
            (c1, c2),
            (phi1, phi2),
            a,
            (f64::INFINITY, f64::INFINITY),
        )
        .unwrap()
    }

    #[test]
    fn setting_classification() {
        assert_eq!(per_unit(1.0, 1.0, 1.0, 1.0, 1.0).setting(), Setting::PerUnit);
        assert_eq!(budgeted(1.0, 1.0, 1.0, 1.0, 1.0).setting(), Setting::General);
        let fixed =
            CommanderInstance::new(0.0, (0.0, 0.0), (1.0, 1.0), 1.0, (1.0, 1.0)).unwrap();
        assert_eq!(fixed.setting(), Setting::FixedBudget);
    }

    #[test]
    fn det_budgeted_small_budget_hedges_both() {
        let r = det_assign_fixed_budget(&budgeted(0.4, 1.0, 1.0, 1.0, 1.0)).unwrap();
        let ([a1, a2], _) = r.distribution.support()[0];
        assert_abs_diff_eq!(a1, 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(a2, 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(r.performance, 0.4_f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn det_budgeted_large_budget_wins_both() {
        let r = det_assign_fixed_budget(&budgeted(2.0, 1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(r.performance, 2.0);
        let ([a1, a2], _) = r.distribution.support()[0];
        assert!(a1 >= 0.5 - 1e-12 && a2 >= 0.5 - 1e-12);
    }

    #[test]
    fn det_budgeted_middle_comparison() {
        // Win costs 0.5 and 2; hedging loses to winning the cheap front.
        let r = det_assign_fixed_budget(&budgeted(1.5, 1.0, 1.0, 1.0, 4.0)).unwrap();
        assert_abs_diff_eq!(r.performance, 1.0 + 2.0_f64.sqrt(), epsilon = 1e-12);
        let ([a1, _], _) = r.distribution.support()[0];
        assert_abs_diff_eq!(a1, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn det_budgeted_unattainable_interior_is_not_reported() {
        // The hedged value sqrt(A*S/2) exceeds the win value here but its
        // maximizer lies past the cheap front's win cost, so it cannot be
        // attained; the correct optimum is the win value.
        let inst = budgeted(0.4, 10.0, 1.0, 1.0, 1.0);
        let r = det_assign_fixed_budget(&inst).unwrap();
        let win = 1.0 + (0.35_f64 / 2.0).sqrt();
        let hedged = (0.4_f64 * 11.0 / 2.0).sqrt();
        assert!(hedged > win);
        assert_abs_diff_eq!(r.performance, win, epsilon = 1e-12);
        assert_abs_diff_eq!(
            r.performance,
            evaluate_assignment(&inst, &r.distribution).unwrap(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn det_budgeted_case3_two_way() {
        let r = det_assign_fixed_budget(&budgeted(0.8, 1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(r.performance, 1.0 + 0.15_f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn det_per_unit_examples() {
        let r = det_assign_per_unit(&per_unit(4.0, 1.0, 2.0, 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(r.performance, 3.0 / 32.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.expected_spend, 3.0 / 128.0, epsilon = 1e-14);

        let r = det_assign_per_unit(&per_unit(0.3, 1.0, 2.0, 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(
            r.performance,
            (1.0 - 0.15) + (1.0 - 0.075),
            epsilon = 1e-12
        );

        let r = det_assign_per_unit(&per_unit(3.0, 1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(r.performance, 1.0 / 12.0, epsilon = 1e-14);
    }

    #[test]
    fn rand_budgeted_small_budget_randomizes_both() {
        let r = rand_assign_fixed_budget(&budgeted(0.5, 1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(r.performance, 2.0_f64.sqrt(), epsilon = 1e-12);
        for i in 0..2 {
            let m = r.distribution.marginal(i);
            assert_eq!(m.len(), 2);
            assert_eq!(m[0].0, 0.0);
            assert_abs_diff_eq!(m[1].0, 0.125_f64.sqrt(), epsilon = 1e-12);
            assert_abs_diff_eq!(m[1].1, 0.5_f64.sqrt(), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(r.distribution.expected_total(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn rand_budgeted_middle_wins_costly_front() {
        let inst = budgeted(0.6, 1.0, 3.0, 1.0, 1.0);
        let r = rand_assign_fixed_budget(&inst).unwrap();
        let m2 = r.distribution.marginal(1);
        assert_eq!(m2.len(), 1);
        assert_abs_diff_eq!(m2[0].0, 1.0 / 6.0, epsilon = 1e-12);
        let rem: f64 = 0.6 - 1.0 / 6.0;
        assert_abs_diff_eq!(r.performance, 1.0 + (2.0 * rem).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            r.performance,
            evaluate_assignment(&inst, &r.distribution).unwrap(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn rand_budgeted_large_budget_deterministic() {
        let r = rand_assign_fixed_budget(&budgeted(2.0, 1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(r.performance, 2.0);
        assert_eq!(r.distribution.support().len(), 1);
    }

    #[test]
    fn rand_per_unit_high_cost_four_point() {
        let inst = per_unit(4.0, 1.0, 2.0, 1.0, 1.0);
        let r = rand_assign_per_unit(&inst).unwrap();
        assert_abs_diff_eq!(r.performance, 0.375, epsilon = 1e-14);
        assert_abs_diff_eq!(r.expected_spend, 3.0 / 32.0, epsilon = 1e-14);
        let at = |a1: f64, a2: f64| -> f64 {
            r.distribution
                .support()
                .iter()
                .find(|(pt, _)| (pt[0] - a1).abs() < 1e-12 && (pt[1] - a2).abs() < 1e-12)
                .map(|(_, p)| *p)
                .unwrap_or(0.0)
        };
        assert_abs_diff_eq!(at(0.0, 0.0), 0.75 * 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(at(0.125, 0.0), 0.25 * 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(at(0.0, 0.125), 0.75 * 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(at(0.125, 0.125), 0.25 * 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(
            r.performance,
            evaluate_assignment(&inst, &r.distribution).unwrap(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn rand_per_unit_low_cost_deterministic() {
        let r = rand_assign_per_unit(&per_unit(0.5, 1.0, 2.0, 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(r.performance, 0.75 + 0.875, epsilon = 1e-12);
        assert_eq!(r.distribution.support().len(), 1);
    }

    #[test]
    fn rand_per_unit_middle_branch() {
        let inst = per_unit(1.5, 1.0, 2.0, 1.0, 1.0);
        let r = rand_assign_per_unit(&inst).unwrap();
        assert_abs_diff_eq!(r.performance, 23.0 / 24.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.expected_spend, 0.25 + 1.0 / 4.5, epsilon = 1e-12);
        assert_abs_diff_eq!(
            r.performance,
            evaluate_assignment(&inst, &r.distribution).unwrap(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn improvement_factor_examples() {
        let f = improvement_factor(&per_unit(4.0, 1.0, 2.0, 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(f, 4.0, epsilon = 1e-12);
        let f = improvement_factor(&per_unit(0.1, 1.0, 2.0, 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(f, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn fourfold_condition_examples() {
        assert!(fourfold_condition(&per_unit(4.0, 1.0, 2.0, 1.0, 1.0)).unwrap());
        assert!(!fourfold_condition(&per_unit(3.0, 1.0, 2.0, 1.0, 1.0)).unwrap());
        let edge = 2.0 * (1.0 + 3.0_f64.sqrt() / 2.0);
        assert!(fourfold_condition(&per_unit(edge + 1e-6, 1.0, 2.0, 1.0, 1.0)).unwrap());
        assert!(!fourfold_condition(&per_unit(edge - 1e-6, 1.0, 2.0, 1.0, 1.0)).unwrap());
    }

    #[test]
    fn fixed_budget_randomization_gains_nothing() {
        let inst = CommanderInstance::new(0.0, (0.0, 0.0), (1.0, 1.0), 1.0, (1.0, 1.0)).unwrap();
        let (wd, w, equal) = fixed_budget_equality(&inst).unwrap();
        assert!(equal, "W = {w}, W_d = {wd}");
        assert_abs_diff_eq!(wd, 0.5, epsilon = 1e-9);

        let inst =
            CommanderInstance::new(0.0, (0.0, 0.0), (1.0, 2.0), 2.0, (0.5, 1.5)).unwrap();
        let (_, _, equal) = fixed_budget_equality(&inst).unwrap();
        assert!(equal);
    }

    #[test]
    fn general_matches_per_unit_when_budget_slack() {
        let inst = CommanderInstance::new(
            4.0,
            (1.0, 2.0),
            (1.0, 1.0),
            1.0,
            (f64::INFINITY, f64::INFINITY),
        )
        .unwrap();
        let (wd, w) = general_setting_performance(&inst, 64).unwrap();
        assert_abs_diff_eq!(wd, 3.0 / 32.0, epsilon = 2e-4);
        assert_abs_diff_eq!(w, 0.375, epsilon = 2e-4);
    }

    #[test]
    fn general_randomized_dominates_deterministic() {
        let inst =
            CommanderInstance::new(0.05, (1.0, 1.0), (1.0, 2.0), 1.0, (0.4, 0.4)).unwrap();
        let (wd, w) = general_setting_performance(&inst, 64).unwrap();
        assert!(w >= wd - 1e-9);
        // A finite budget keeps the general value below the per-unit one.
        let free = rand_assign_per_unit(
            &CommanderInstance::new(
                0.05,
                (1.0, 1.0),
                (1.0, 2.0),
                f64::INFINITY,
                (f64::INFINITY, f64::INFINITY),
            )
            .unwrap(),
        )
        .unwrap();
        assert!(w < free.performance);
    }

    #[test]
    fn setting_mismatch_is_reported() {
        let fixed = CommanderInstance::new(0.0, (0.0, 0.0), (1.0, 1.0), 1.0, (1.0, 1.0)).unwrap();
        assert!(matches!(
            det_assign_per_unit(&fixed),
            Err(Error::SettingMismatch { .. })
        ));
        assert!(matches!(
            improvement_factor(&fixed),
            Err(Error::SettingMismatch { .. })
        ));
    }

    #[test]
    fn marginal_limit_is_enforced() {
        let bad = AssignmentDistribution::new(vec![
            ([0.0, 0.0], 0.25),
            ([1.0, 0.0], 0.25),
            ([2.0, 0.0], 0.25),
            ([3.0, 0.0], 0.25),
        ]);
        assert!(matches!(bad, Err(Error::InvalidInput { .. })));
    }
}
