//! Bracketed scalar root finding: bisection to tighten the bracket, then
//! safeguarded Newton steps that never leave it.

use crate::{Error, Result};

/// Finds a root of `f` on `[lo, hi]`, where `f(lo)` and `f(hi)` have opposite
/// signs (or one vanishes). `df` is the derivative of `f`.
///
/// Returns the abscissa; iteration stops when the bracket can no longer be
/// split in floating point or `|f| <= residual`.
pub fn solve<F, D>(f: F, df: D, mut lo: f64, mut hi: f64, residual: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(Error::NoConvergence(format!(
            "no sign change on [{lo}, {hi}]: f = {flo}, {fhi}"
        )));
    }
    // coarse bisection first
    for _ in 0..6 {
        let mid = 0.5 * (lo + hi);
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
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        let next = if d.is_finite() && d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == x || next <= lo || next >= hi {
            // bracket exhausted in floating point
            return Ok(if f(lo).abs() < f(hi).abs() { lo } else { hi });
        }
        x = next;
        if fx.abs() <= residual {
            return Ok(x);
        }
    }
    Ok(x)
}

/// Like [`solve`] without a derivative: pure bisection.
pub fn bisect<F>(f: F, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut lo = lo;
    let mut hi = hi;
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(Error::NoConvergence(format!(
            "no sign change on [{lo}, {hi}]: f = {flo}, {fhi}"
        )));
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
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
}

/// Doubles `hi` (starting from `start`) until `pred(hi)` holds. Fails after
/// `max_doublings` attempts.
pub fn grow_until<P>(start: f64, max_doublings: usize, pred: P) -> Result<f64>
where
    P: Fn(f64) -> bool,
{
    let mut hi = start;
    for _ in 0..max_doublings {
        if pred(hi) {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::NoConvergence(format!(
        "no bracket found below {hi}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = solve(|x| x * x - 2.0, |x| 2.0 * x, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        let b = bisect(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((b - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_missing_sign_change() {
        assert!(solve(|x| x * x + 1.0, |x| 2.0 * x, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn decreasing_function() {
        let r = solve(|x| (-x).exp() - 0.5, |x| -(-x).exp(), 0.0, 3.0, 1e-14).unwrap();
        assert!((r - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn grows_bracket() {
        let hi = grow_until(1.0, 20, |x| x > 100.0).unwrap();
        assert_eq!(hi, 128.0);
        assert!(grow_until(1.0, 3, |x| x > 100.0).is_err());
    }
}
