//! Monotone root bracketing and bisection on the log odds-ratio axis.

use crate::real::Real;

/// Bisection stops once the bracket on log ψ is narrower than this.
pub const LOG_PSI_TOLERANCE: f64 = 1e-8;

/// Search cap on |ln ψ|; beyond it `exp` saturates in double precision.
pub(crate) const MAX_LOG_PSI: f64 = 745.0;

/// Finds `lo < hi` with `f(lo) < target ≤ f(hi)` for increasing `f`,
/// stepping geometrically away from `start`. The bracket is clipped to
/// `±MAX_LOG_PSI` when no crossing exists.
pub(crate) fn bracket_increasing<T: Real, F: Fn(T) -> T>(f: &F, target: T, start: T) -> (T, T) {
    let cap = T::lit(MAX_LOG_PSI);
    let mut step = T::one();
    if f(start) >= target {
        let mut hi = start;
        loop {
            let lo = hi - step;
            if f(lo) < target || lo < -cap {
                return (lo.max(-cap), hi);
            }
            hi = lo;
            step = step * T::lit(2.0);
        }
    } else {
        let mut lo = start;
        loop {
            let hi = lo + step;
            if f(hi) >= target || hi > cap {
                return (lo, hi.min(cap));
            }
            lo = hi;
            step = step * T::lit(2.0);
        }
    }
}

/// Bisection for the switch point of a predicate that is false at `lo` and
/// true at `hi`. Returns the final bracket midpoint.
pub(crate) fn bisect<T: Real, P: Fn(T) -> bool>(pred: P, mut lo: T, mut hi: T) -> T {
    let tol = T::lit(LOG_PSI_TOLERANCE).max(T::epsilon() * T::lit(64.0));
    for _ in 0..400 {
        if (hi - lo).abs() < tol {
            break;
        }
        let mid = (lo + hi) / T::lit(2.0);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo + hi) / T::lit(2.0)
}

/// Edge of a region `{x : inside(x)}` that contains `start`, searched in
/// direction `dir` (±1). Returns `None` when the region runs past the cap.
pub(crate) fn region_edge<T: Real, P: Fn(T) -> bool>(inside: P, start: T, dir: T) -> Option<T> {
    let cap = T::lit(MAX_LOG_PSI);
    let mut near = start;
    let mut step = T::one();
    let mut far = near + dir * step;
    while inside(far) {
        if far.abs() >= cap {
            return None;
        }
        near = far;
        step = step * T::lit(2.0);
        far = (near + dir * step).max(-cap).min(cap);
    }
    // inside at `near`, outside at `far`
    if dir > T::zero() {
        Some(bisect(|x| !inside(x), near, far))
    } else {
        Some(bisect(inside, far, near))
    }
}
