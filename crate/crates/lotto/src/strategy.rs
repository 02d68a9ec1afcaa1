//! Mixed strategies over one-dimensional expenditure.
//!
//! Every equilibrium strategy that arises here is a finite mixture of point
//! masses and uniform intervals on the nonnegative reals, so that is the
//! whole representation. Construction canonicalizes: zero-weight components
//! are dropped, coincident atoms (and identical intervals) are merged,
//! degenerate intervals become atoms, and components are sorted by lower
//! endpoint. Canonical form makes derived equality meaningful.

use crate::error::{Error, Result};
use crate::num::{close, Real};
use rand::Rng;

/// One building block of a mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment<R: Real> {
    /// Point mass at a nonnegative expenditure.
    Atom(R),
    /// Uniform distribution on (lo, hi), 0 <= lo < hi.
    Uniform(R, R),
}

impl<R: Real> Segment<R> {
    fn lower(&self) -> R {
        match *self {
            Segment::Atom(a) => a,
            Segment::Uniform(lo, _) => lo,
        }
    }

    fn upper(&self) -> R {
        match *self {
            Segment::Atom(a) => a,
            Segment::Uniform(_, hi) => hi,
        }
    }

    fn mean(&self) -> R {
        match *self {
            Segment::Atom(a) => a,
            Segment::Uniform(lo, hi) => (lo + hi) / R::val(2),
        }
    }

    /// P(X <= x) for this segment alone.
    fn cdf(&self, x: R) -> R {
        match *self {
            Segment::Atom(a) => {
                if a <= x {
                    R::one()
                } else {
                    R::zero()
                }
            }
            Segment::Uniform(lo, hi) => ((x - lo) / (hi - lo)).max(R::zero()).min(R::one()),
        }
    }

    /// P(X < x) for this segment alone.
    fn cdf_left(&self, x: R) -> R {
        match *self {
            Segment::Atom(a) => {
                if a < x {
                    R::one()
                } else {
                    R::zero()
                }
            }
            // No point carries mass, so the left limit equals the CDF.
            Segment::Uniform(_, _) => self.cdf(x),
        }
    }

    /// P(X > Y) where X follows this segment and Y the other, independent.
    fn prob_beats(&self, other: &Segment<R>) -> R {
        match (*self, *other) {
            (Segment::Atom(a), _) => other.cdf_left(a),
            (Segment::Uniform(lo, hi), Segment::Atom(b)) => {
                R::one() - ((b - lo) / (hi - lo)).max(R::zero()).min(R::one())
            }
            (Segment::Uniform(a1, a2), Segment::Uniform(b1, b2)) => {
                // E[clamp((X-b1)/(b2-b1), 0, 1)] for X ~ U(a1, a2): the ramp
                // integrates in closed form on the overlap, plus full weight
                // where X exceeds b2.
                let l = b1.max(a1).min(a2);
                let u = b2.max(a1).min(a2);
                let ramp = ((u - b1) * (u - b1) - (l - b1) * (l - b1))
                    / (R::val(2) * (b2 - b1));
                let above = (a2 - u).max(R::zero());
                (ramp + above) / (a2 - a1)
            }
        }
    }
}

/// Weighted segment inside a mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component<R: Real> {
    pub weight: R,
    pub segment: Segment<R>,
}

/// Finite mixture of atoms and uniform intervals on nonnegative reals.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy<R: Real> {
    components: Vec<Component<R>>,
}

impl<R: Real> MixedStrategy<R> {
    /// Builds and canonicalizes a mixture. Weights must be nonnegative and
    /// sum to 1 within the scalar's relative tolerance.
    pub fn new(components: Vec<Component<R>>) -> Result<Self> {
        let mut total = R::zero();
        for c in &components {
            if !c.weight.is_finite() || c.weight < R::zero() {
                return Err(Error::InvalidStrategy {
                    detail: format!("component weight {:?} is negative or nonfinite", c.weight),
                });
            }
            match c.segment {
                Segment::Atom(a) => {
                    if !a.is_finite() || a < R::zero() {
                        return Err(Error::InvalidStrategy {
                            detail: format!("atom at {:?} outside nonnegative reals", a),
                        });
                    }
                }
                Segment::Uniform(lo, hi) => {
                    if !lo.is_finite() || !hi.is_finite() || lo < R::zero() || hi < lo {
                        return Err(Error::InvalidStrategy {
                            detail: format!("uniform ({:?}, {:?}) ill-formed", lo, hi),
                        });
                    }
                }
            }
            total = total + c.weight;
        }
        if !close(total, R::one()) {
            return Err(Error::InvalidStrategy {
                detail: format!("weights sum to {:?}, expected 1", total),
            });
        }

        let mut comps: Vec<Component<R>> = components
            .into_iter()
            .filter(|c| c.weight > R::tol_abs())
            .map(|c| match c.segment {
                // Intervals of negligible width act as point masses.
                Segment::Uniform(lo, hi) if close(lo, hi) => Component {
                    weight: c.weight,
                    segment: Segment::Atom(lo),
                },
                _ => c,
            })
            .collect();
        if comps.is_empty() {
            return Err(Error::InvalidStrategy {
                detail: "mixture has no components with positive weight".into(),
            });
        }

        comps.sort_by(|x, y| {
            let kx = (x.segment.lower(), matches!(x.segment, Segment::Uniform(_, _)), x.segment.upper());
            let ky = (y.segment.lower(), matches!(y.segment, Segment::Uniform(_, _)), y.segment.upper());
            kx.partial_cmp(&ky).expect("finite segment endpoints")
        });

        let mut merged: Vec<Component<R>> = Vec::with_capacity(comps.len());
        for c in comps {
            if let Some(last) = merged.last_mut() {
                let same = match (last.segment, c.segment) {
                    (Segment::Atom(a), Segment::Atom(b)) => close(a, b),
                    (Segment::Uniform(l1, h1), Segment::Uniform(l2, h2)) => {
                        close(l1, l2) && close(h1, h2)
                    }
                    _ => false,
                };
                if same {
                    last.weight = last.weight + c.weight;
                    continue;
                }
            }
            merged.push(c);
        }

        // Renormalize so downstream probability sums start from exactly one
        // unit of mass (dropping sub-tolerance weights can shift the total).
        let sum = merged.iter().fold(R::zero(), |s, c| s + c.weight);
        for c in &mut merged {
            c.weight = c.weight / sum;
        }
        Ok(Self { components: merged })
    }

    /// Point mass at `x`.
    pub fn atom(x: R) -> Result<Self> {
        Self::new(vec![Component {
            weight: R::one(),
            segment: Segment::Atom(x),
        }])
    }

    /// Uniform distribution on (lo, hi).
    pub fn uniform(lo: R, hi: R) -> Result<Self> {
        Self::new(vec![Component {
            weight: R::one(),
            segment: Segment::Uniform(lo, hi),
        }])
    }

    /// Convex combination of mixtures; weights must sum to 1.
    pub fn mix(parts: &[(R, &MixedStrategy<R>)]) -> Result<Self> {
        let mut comps = Vec::new();
        for (w, s) in parts {
            for c in &s.components {
                comps.push(Component {
                    weight: *w * c.weight,
                    segment: c.segment,
                });
            }
        }
        Self::new(comps)
    }

    pub fn components(&self) -> &[Component<R>] {
        &self.components
    }

    /// Expected expenditure.
    pub fn mean(&self) -> R {
        self.components
            .iter()
            .fold(R::zero(), |s, c| s + c.weight * c.segment.mean())
    }

    /// Right-continuous distribution function P(X <= x).
    pub fn cdf(&self, x: R) -> R {
        self.components
            .iter()
            .fold(R::zero(), |s, c| s + c.weight * c.segment.cdf(x))
    }

    /// Left limit P(X < x).
    pub fn cdf_left(&self, x: R) -> R {
        self.components
            .iter()
            .fold(R::zero(), |s, c| s + c.weight * c.segment.cdf_left(x))
    }

    /// Probability that a draw from `self` strictly exceeds an independent
    /// draw from `other`. Ties count for `other`.
    pub fn prob_beats(&self, other: &MixedStrategy<R>) -> R {
        let mut p = R::zero();
        for x in &self.components {
            for y in &other.components {
                p = p + x.weight * y.weight * x.segment.prob_beats(&y.segment);
            }
        }
        // Renormalized weights round at the last bit, so the accumulated
        // sum can stray a few ulps outside the unit interval.
        p.max(R::zero()).min(R::one())
    }

    /// Upper end of the support.
    pub fn support_top(&self) -> R {
        self.components
            .iter()
            .map(|c| c.segment.upper())
            .fold(R::zero(), R::max)
    }

    /// Sorted, deduplicated segment endpoints. These are the only points
    /// where a best-response payoff against this mixture can change slope.
    pub fn breakpoints(&self) -> Vec<R> {
        let mut pts: Vec<R> = Vec::with_capacity(2 * self.components.len());
        for c in &self.components {
            pts.push(c.segment.lower());
            let hi = c.segment.upper();
            if hi != c.segment.lower() {
                pts.push(hi);
            }
        }
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        pts.dedup_by(|a, b| close(*a, *b));
        pts
    }

    /// Draws an expenditure.
    pub fn sample<RNG: Rng + ?Sized>(&self, rng: &mut RNG) -> R {
        let u: f64 = rng.gen();
        let u = R::val(u);
        let mut acc = R::zero();
        for c in &self.components {
            acc = acc + c.weight;
            if u < acc {
                return match c.segment {
                    Segment::Atom(a) => a,
                    Segment::Uniform(lo, hi) => {
                        let v: f64 = rng.gen();
                        lo + R::val(v) * (hi - lo)
                    }
                };
            }
        }
        // Rounding in the cumulative sum can leave u unmatched; fall back to
        // the last component.
        match self.components.last().expect("nonempty mixture").segment {
            Segment::Atom(a) => a,
            Segment::Uniform(lo, hi) => {
                let v: f64 = rng.gen();
                lo + R::val(v) * (hi - lo)
            }
        }
    }
}

/// Equilibrium profile: one mixture per endowment level for the informed
/// side, one for the opponent.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile<R: Real> {
    pub f_a_high: MixedStrategy<R>,
    pub f_a_low: MixedStrategy<R>,
    pub f_b: MixedStrategy<R>,
}

impl<R: Real> StrategyProfile<R> {
    pub fn new(f_a_high: MixedStrategy<R>, f_a_low: MixedStrategy<R>, f_b: MixedStrategy<R>) -> Self {
        Self {
            f_a_high,
            f_a_low,
            f_b,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn u(lo: f64, hi: f64) -> MixedStrategy<f64> {
        MixedStrategy::uniform(lo, hi).unwrap()
    }

    #[test]
    fn canonicalization_merges_and_sorts() {
        let s = MixedStrategy::new(vec![
            Component {
                weight: 0.25,
                segment: Segment::Atom(0.0),
            },
            Component {
                weight: 0.5,
                segment: Segment::Uniform(0.0, 2.0),
            },
            Component {
                weight: 0.25,
                segment: Segment::Atom(0.0),
            },
        ])
        .unwrap();
        assert_eq!(s.components().len(), 2);
        assert!(matches!(s.components()[0].segment, Segment::Atom(a) if a == 0.0));
        assert_eq!(s.components()[0].weight, 0.5);
    }

    #[test]
    fn degenerate_uniform_becomes_atom() {
        let s = MixedStrategy::new(vec![Component {
            weight: 1.0,
            segment: Segment::Uniform(1.0, 1.0),
        }])
        .unwrap();
        assert!(matches!(s.components()[0].segment, Segment::Atom(a) if a == 1.0));
    }

    #[test]
    fn rejects_bad_weights_and_segments() {
        assert!(MixedStrategy::new(vec![Component {
            weight: 0.5,
            segment: Segment::Atom(0.0),
        }])
        .is_err());
        assert!(MixedStrategy::new(vec![Component {
            weight: 1.0,
            segment: Segment::Atom(-1.0),
        }])
        .is_err());
        assert!(MixedStrategy::new(vec![Component {
            weight: 1.0,
            segment: Segment::Uniform(2.0, 1.0),
        }])
        .is_err());
    }

    #[test]
    fn cdf_and_left_limit() {
        let s = MixedStrategy::mix(&[(0.5, &MixedStrategy::atom(1.0).unwrap()), (0.5, &u(0.0, 2.0))])
            .unwrap();
        assert_eq!(s.cdf(1.0), 0.5 + 0.25);
        assert_eq!(s.cdf_left(1.0), 0.25);
        assert_eq!(s.cdf(2.0), 1.0);
        assert_eq!(s.cdf(-0.1), 0.0);
    }

    #[test]
    fn mean_support_breakpoints() {
        let s = MixedStrategy::mix(&[(0.25, &MixedStrategy::atom(0.0).unwrap()), (0.75, &u(1.0, 3.0))])
            .unwrap();
        assert!((s.mean() - 1.5).abs() < 1e-15);
        assert_eq!(s.support_top(), 3.0);
        assert_eq!(s.breakpoints(), vec![0.0, 1.0, 3.0]);
    }

    #[test]
    fn prob_beats_uniform_pairs() {
        // Identical uniforms tie in distribution: P(X > Y) = 1/2.
        assert!((u(0.0, 2.0).prob_beats(&u(0.0, 2.0)) - 0.5).abs() < 1e-15);
        // Disjoint supports.
        assert_eq!(u(2.0, 3.0).prob_beats(&u(0.0, 1.0)), 1.0);
        assert_eq!(u(0.0, 1.0).prob_beats(&u(2.0, 3.0)), 0.0);
        // Nested: X ~ U(0,4), Y ~ U(0,2): P = E[min(X,2)/2] = (0.5*1 + 0.5*2)/2 = 0.75.
        assert!((u(0.0, 4.0).prob_beats(&u(0.0, 2.0)) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn prob_beats_atoms_tie_to_opponent() {
        let a0 = MixedStrategy::atom(0.0).unwrap();
        assert_eq!(a0.prob_beats(&a0), 0.0);
        let a1 = MixedStrategy::atom(1.0).unwrap();
        assert_eq!(a1.prob_beats(&a0), 1.0);
        // Atom against a uniform straddling it.
        assert_eq!(a1.prob_beats(&u(0.0, 2.0)), 0.5);
        // Uniform against an atom at its midpoint.
        assert_eq!(u(0.0, 2.0).prob_beats(&a1), 0.5);
    }

    #[test]
    fn sampling_is_seed_deterministic_and_in_support() {
        let s = MixedStrategy::mix(&[(0.3, &MixedStrategy::atom(0.0).unwrap()), (0.7, &u(1.0, 2.0))])
            .unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = s.sample(&mut r1);
            assert_eq!(x, s.sample(&mut r2));
            assert!(x == 0.0 || (1.0..2.0).contains(&x));
        }
    }

    #[test]
    fn sample_mean_approaches_expectation() {
        let s = MixedStrategy::mix(&[(0.5, &MixedStrategy::atom(0.0).unwrap()), (0.5, &u(0.0, 4.0))])
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 20_000;
        let sum: f64 = (0..n).map(|_| s.sample(&mut rng)).sum();
        assert!((sum / n as f64 - s.mean()).abs() < 0.05);
    }
}
