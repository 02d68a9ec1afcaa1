//! Scalar abstraction for the numeric core.
//!
//! Everything in this crate is closed-form scalar arithmetic, so the whole
//! library is generic over a floating-point type. `Real` bundles the
//! num-traits float machinery with per-type tolerances used for boundary
//! classification (region membership, tie-breaking between maximizers).

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable throughout the crate.
///
/// Tolerances are type-level constants: comparisons near case boundaries
/// must use the same slack everywhere or classification and payoff
/// evaluation can disagree about which side of a boundary a point is on.
pub trait Real: Float + FromPrimitive + core::fmt::Debug + core::fmt::Display + 'static {
    /// Relative comparison tolerance.
    fn tol_rel() -> Self;

    /// Absolute comparison floor, for values near zero.
    fn tol_abs() -> Self;

    /// Lossy conversion from any primitive; panics only on NaN-free types.
    fn val<T: ToPrimitive>(v: T) -> Self {
        Self::from(v.to_f64().expect("primitive converts to f64")).expect("f64 converts to Real")
    }
}

impl Real for f64 {
    fn tol_rel() -> Self {
        1e-12
    }
    fn tol_abs() -> Self {
        1e-15
    }
}

impl Real for f32 {
    fn tol_rel() -> Self {
        1e-5
    }
    fn tol_abs() -> Self {
        1e-7
    }
}

/// Scale-aware closeness: |a - b| <= tol_abs + tol_rel * max(|a|, |b|).
/// Equal infinities compare close; a finite value is never close to an
/// infinite one (the naive formula would say otherwise).
pub fn close<R: Real>(a: R, b: R) -> bool {
    if a == b {
        return true;
    }
    if !a.is_finite() || !b.is_finite() {
        return false;
    }
    (a - b).abs() <= R::tol_abs() + R::tol_rel() * a.abs().max(b.abs())
}

/// a <= b up to tolerance.
pub fn le<R: Real>(a: R, b: R) -> bool {
    a <= b || close(a, b)
}

/// a >= b up to tolerance.
pub fn ge<R: Real>(a: R, b: R) -> bool {
    a >= b || close(a, b)
}

/// a < b and not within tolerance of b.
pub fn lt<R: Real>(a: R, b: R) -> bool {
    a < b && !close(a, b)
}

/// a > b and not within tolerance of b.
pub fn gt<R: Real>(a: R, b: R) -> bool {
    a > b && !close(a, b)
}
