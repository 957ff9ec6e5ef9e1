//! Shared numerical kernels: adaptive Simpson quadrature, bracketed
//! bisection, and golden-section maximization.
//!
//! All three are generic over [`Real`] and deliberately boring: bisection is
//! preferred over Newton for unconditional convergence on a sign-change
//! bracket, and golden-section needs nothing but unimodality.

use crate::scalar::Real;

/// Result of a bracketed search that may fail to bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    /// `f(lo)` and `f(hi)` have the same sign; no root is bracketed.
    #[error("no sign change over the bracket")]
    NoSignChange,
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` at relative tolerance
/// `rel_tol` (with respect to the magnitude of the whole integral).
///
/// The interval is never split below machine-width panels; recursion depth is
/// capped at 60, far beyond what any integrand in this crate requires.
pub fn adaptive_simpson<R: Real>(f: impl Fn(R) -> R, a: R, b: R, rel_tol: R) -> R {
    if a == b {
        return R::zero();
    }
    let two = R::of(2.0);
    let fa = f(a);
    let fb = f(b);
    let m = (a + b) / two;
    let fm = f(m);
    let whole = simpson_panel(a, b, fa, fm, fb);
    let scale = whole.abs().max(R::of(f64::MIN_POSITIVE.sqrt()));
    let tol = rel_tol * scale;
    simpson_recurse(&f, a, b, fa, fm, fb, whole, tol, 60)
}

#[inline]
fn simpson_panel<R: Real>(a: R, b: R, fa: R, fm: R, fb: R) -> R {
    (b - a) / R::of(6.0) * (fa + R::of(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse<R: Real>(
    f: &impl Fn(R) -> R,
    a: R,
    b: R,
    fa: R,
    fm: R,
    fb: R,
    whole: R,
    tol: R,
    depth: u32,
) -> R {
    let two = R::of(2.0);
    let m = (a + b) / two;
    let lm = (a + m) / two;
    let rm = (m + b) / two;
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_panel(a, m, fa, flm, fm);
    let right = simpson_panel(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= R::of(15.0) * tol || m <= a || m >= b {
        // Richardson extrapolation of the two half-panels
        return left + right + delta / R::of(15.0);
    }
    let half_tol = tol / two;
    simpson_recurse(f, a, m, fa, flm, fm, left, half_tol, depth - 1)
        + simpson_recurse(f, m, b, fm, frm, fb, right, half_tol, depth - 1)
}

/// Bisection for a root of `f` on `[lo, hi]`, requiring a sign change.
///
/// Runs until the bracket width drops below `x_tol` and returns the bracket
/// midpoint, which is within `x_tol/2` of a true root.
pub fn bisect_root<R: Real>(
    f: impl Fn(R) -> R,
    mut lo: R,
    mut hi: R,
    x_tol: R,
) -> Result<R, SolveError> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == R::zero() {
        return Ok(lo);
    }
    if fhi == R::zero() {
        return Ok(hi);
    }
    if (flo > R::zero()) == (fhi > R::zero()) {
        return Err(SolveError::NoSignChange);
    }
    let two = R::of(2.0);
    while hi - lo > x_tol {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break; // bracket at machine resolution
        }
        let fmid = f(mid);
        if fmid == R::zero() {
            return Ok(mid);
        }
        if (fmid > R::zero()) == (flo > R::zero()) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / two)
}

/// Golden-section maximization of a unimodal `f` over `[a, b]`.
///
/// Shrinks the bracket until its width falls below `rel_tol` times the scale
/// of the abscissa; returns `(argmax, max)`.
pub fn golden_max<R: Real>(f: impl Fn(R) -> R, mut a: R, mut b: R, rel_tol: R) -> (R, R) {
    // 1/φ and 1/φ²
    let inv_phi = R::of(0.618_033_988_749_894_8);
    let inv_phi2 = R::of(0.381_966_011_250_105_15);
    let mut x1 = a + inv_phi2 * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        let scale = a.abs().max(b.abs()).max(R::one());
        if b - a <= rel_tol * scale {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + inv_phi2 * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
