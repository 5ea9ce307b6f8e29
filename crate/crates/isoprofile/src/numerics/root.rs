//! Bracketed scalar root finding: bisection hardened with secant steps.

use crate::error::{Error, Result};

/// Find x in [a, b] with f(x) = 0, given f(a) and f(b) of opposite sign
/// (or zero). Converges to |interval| ≤ xtol via bisection interleaved
/// with secant steps when they stay inside the bracket.
pub fn solve_bracketed<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, xtol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::Numerics(format!(
            "no sign change on bracket [{lo}, {hi}]: f = ({flo}, {fhi})"
        )));
    }
    for _ in 0..200 {
        if hi - lo <= xtol {
            break;
        }
        // Secant candidate, accepted only if safely interior.
        let xs = hi - fhi * (hi - lo) / (fhi - flo);
        let interior = xs > lo + 0.1 * (hi - lo) && xs < hi - 0.1 * (hi - lo);
        let x = if interior { xs } else { 0.5 * (lo + hi) };
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_roots() {
        let r = solve_bracketed(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
        let r = solve_bracketed(|x| x.cos(), 0.0, 2.0, 1e-14).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_bracket() {
        assert!(solve_bracketed(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }
}
