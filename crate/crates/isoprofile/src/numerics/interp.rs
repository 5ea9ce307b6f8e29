//! Hermite interpolation: cubic (value+slope at both ends) and quintic
//! (full 2-jet at both ends), plus derivative evaluation.

/// Cubic Hermite on [x0, x1] with values y and slopes d at the ends.
pub fn cubic(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

/// Quintic Hermite polynomial matching value, first and second derivative
/// at both ends of [x0, x1]. Returned as monomial coefficients in
/// s = x − x0: p(s) = c[0] + c[1]s + ... + c[5]s⁵.
pub fn quintic_coeffs(
    x0: f64,
    x1: f64,
    jet0: (f64, f64, f64),
    jet1: (f64, f64, f64),
) -> [f64; 6] {
    let h = x1 - x0;
    let (y0, d0, s0) = jet0;
    let (y1, d1, s1) = jet1;
    // Lower coefficients come straight from the 2-jet at x0.
    let c0 = y0;
    let c1 = d0;
    let c2 = 0.5 * s0;
    // Remaining three from the jet at x1: solve the 3×3 system for
    // (c3, c4, c5) in powers of h.
    let r0 = y1 - (c0 + c1 * h + c2 * h * h);
    let r1 = d1 - (c1 + 2.0 * c2 * h);
    let r2 = s1 - 2.0 * c2;
    let h2 = h * h;
    let h3 = h2 * h;
    // [h³ h⁴ h⁵; 3h² 4h³ 5h⁴; 6h 12h² 20h³] · (c3,c4,c5)ᵀ = (r0,r1,r2)ᵀ
    let c3 = (10.0 * r0 - 4.0 * r1 * h + 0.5 * r2 * h2) / h3;
    let c4 = (-15.0 * r0 + 7.0 * r1 * h - r2 * h2) / (h3 * h);
    let c5 = (6.0 * r0 - 3.0 * r1 * h + 0.5 * r2 * h2) / (h3 * h2);
    [c0, c1, c2, c3, c4, c5]
}

/// Evaluate polynomial (monomial coefficients in s = x − x0) and its first
/// two derivatives.
pub fn poly_eval2(c: &[f64; 6], s: f64) -> (f64, f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    let mut ddp = 0.0;
    for &ci in c.iter().rev() {
        ddp = ddp * s + 2.0 * dp;
        dp = dp * s + p;
        p = p * s + ci;
    }
    (p, dp, ddp)
}
