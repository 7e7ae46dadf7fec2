//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Plain bisection for a sign change of `f` on `[lo, hi]`.
///
/// Stops when the bracket is narrower than `abs_tol + rel_tol * |mid|` or after
/// enough halvings to exhaust double precision.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootFailure(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= abs_tol + rel_tol * mid.abs() || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Newton iteration safeguarded by a shrinking bracket.
///
/// `f` returns `(value, derivative)`; `value(lo)` and `value(hi)` must have
/// opposite signs. Steps that leave the bracket or stall fall back to a
/// bisection, which is geometric when the bracket spans many decades of a
/// positive variable.
pub fn newton_bracketed<F>(mut f: F, mut lo: f64, mut hi: f64, abs_tol: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (flo, _) = f(lo);
    let (fhi, _) = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootFailure(format!("no sign change on [{lo}, {hi}]")));
    }
    let lo_sign = flo.signum();
    let split = |lo: f64, hi: f64| {
        if lo > 0.0 && hi / lo > 16.0 {
            (lo * hi).sqrt()
        } else if lo == 0.0 && hi > 0.0 {
            hi * 1e-3
        } else {
            0.5 * (lo + hi)
        }
    };

    let mut x = split(lo, hi);
    let mut last_step = f64::INFINITY;
    for _ in 0..500 {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        let tol = abs_tol + rel_tol * x.abs();
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            split(lo, hi)
        };
        let step = (next - x).abs();
        if step <= tol || hi - lo <= tol {
            return Ok(next);
        }
        // Newton making poor progress: force a bracket split.
        x = if step > 0.5 * last_step { split(lo, hi) } else { next };
        last_step = step;
    }
    Err(Error::RootFailure(format!("no convergence in [{lo}, {hi}]")))
}
