//! Shared numerical kernels: adaptive Runge–Kutta integration with dense
//! output, adaptive quadrature, bracketed root finding, and Hermite
//! interpolation. Everything here is deterministic and allocation-light.

pub mod interp;
pub mod ode;
pub mod quad;
pub mod root;

/// Machine-level comparison helper: |a−b| ≤ atol + rtol·max(|a|,|b|).
pub fn close(a: f64, b: f64, rtol: f64, atol: f64) -> bool {
    (a - b).abs() <= atol + rtol * a.abs().max(b.abs())
}
