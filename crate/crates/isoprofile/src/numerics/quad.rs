//! Quadrature: adaptive Simpson for general smooth integrands and the
//! uniform trapezoid rule for smooth periodic ones (where it converges
//! spectrally).

use crate::error::{Error, Result};

/// Adaptive Simpson with absolute/relative tolerance. Integrand must be
/// finite on [a, b]; endpoints are evaluated.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rtol: f64, atol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Numerics("infinite quadrature bounds".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    if !(fa.is_finite() && fm.is_finite() && fb.is_finite()) {
        return Err(Error::Numerics(format!(
            "integrand not finite on [{a}, {b}]"
        )));
    }
    let whole = simpson(a, b, fa, fm, fb);
    let mut acc = 0.0;
    rec(f, a, b, fa, fm, fb, whole, rtol, atol, 50, &mut acc)?;
    Ok(acc)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    rtol: f64,
    atol: f64,
    depth: u32,
    acc: &mut f64,
) -> Result<()> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    if !(flm.is_finite() && frm.is_finite()) {
        return Err(Error::Numerics(format!(
            "integrand not finite on [{a}, {b}]"
        )));
    }
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let tol = atol + rtol * (left + right).abs();
    // Acceptance keeps Richardson's delta/15 correction. At depth 0 the
    // subinterval has width 2^-50 of the original span, so the leftover
    // error of a finite integrand is below max|f| * span * 1e-15: accept
    // rather than fail (a square-root-type endpoint slows refinement but
    // contributes nothing at that scale). `atol` is intentionally not
    // halved per level; that would force the same endpoint cases to the
    // depth limit for no accuracy gain.
    if delta.abs() <= 15.0 * tol || depth == 0 {
        *acc += left + right + delta / 15.0;
        return Ok(());
    }
    rec(f, a, m, fa, flm, fm, left, rtol, atol, depth - 1, acc)?;
    rec(f, m, b, fm, frm, fb, right, rtol, atol, depth - 1, acc)
}

/// Uniform trapezoid rule over one period [0, 2π) with n samples.
/// For smooth 2π-periodic integrands the error decays faster than any
/// power of 1/n.
pub fn trapezoid_periodic<F: Fn(f64) -> f64>(f: &F, n: usize) -> f64 {
    let h = std::f64::consts::TAU / n as f64;
    let mut s = 0.0;
    for i in 0..n {
        s += f(i as f64 * h);
    }
    s * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn adaptive_polynomial_and_transcendental() {
        let got = adaptive(&|x: f64| x * x, 0.0, 3.0, 1e-12, 1e-14).unwrap();
        assert!((got - 9.0).abs() < 1e-11);
        let got = adaptive(&|x: f64| x.exp(), 0.0, 1.0, 1e-12, 1e-14).unwrap();
        assert!((got - (1f64.exp() - 1.0)).abs() < 1e-11);
    }

    #[test]
    fn adaptive_handles_mild_singularity_in_derivative() {
        // ∫₀¹ √x dx = 2/3; integrand is C⁰ but not C¹ at 0.
        let got = adaptive(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-10, 1e-12).unwrap();
        assert!((got - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn periodic_trapezoid_is_spectral() {
        // ∫₀^{2π} e^{cos θ} dθ = 2π I₀(1) = 7.95492652101284527...
        let reference = 7.954926521012845274513219665329394328161342771816638;
        let got = trapezoid_periodic(&|t: f64| t.cos().exp(), 64);
        assert!((got - reference).abs() < 1e-13);
        let got_pi = trapezoid_periodic(&|t: f64| (t.sin()).powi(2), 32);
        assert!((got_pi - PI).abs() < 1e-13);
        let got_tau = trapezoid_periodic(&|_| 1.0, 7);
        assert!((got_tau - TAU).abs() < 1e-15);
    }
}
