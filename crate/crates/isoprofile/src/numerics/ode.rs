//! Adaptive Dormand–Prince 5(4) integrator with continuous (dense) output.
//!
//! The embedded 4th-order error estimate drives step control; the stored
//! per-step interpolant is the standard quartic continuous extension, so
//! off-node queries carry the same order of accuracy as the nodes
//! themselves. State dimension is a const generic; this crate only needs
//! N = 1 and N = 2.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const A7: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];

/// b − b̂: coefficients of the embedded error estimate.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Dense-output weights for the 5th stage polynomial (Hairer's contd5).
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Debug, Clone)]
struct DenseStep<const N: usize> {
    t0: f64,
    h: f64,
    rcont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let mut y = [0.0; N];
        for i in 0..N {
            let r = &self.rcont;
            y[i] = r[0][i]
                + theta
                    * (r[1][i] + theta1 * (r[2][i] + theta * (r[3][i] + theta1 * r[4][i])));
        }
        y
    }
}

/// Continuous solution of an initial value problem on [t0, t1].
#[derive(Debug, Clone)]
pub struct OdeSolution<const N: usize> {
    pub ts: Vec<f64>,
    pub ys: Vec<[f64; N]>,
    steps: Vec<DenseStep<N>>,
}

impl<const N: usize> OdeSolution<N> {
    pub fn t_start(&self) -> f64 {
        *self.ts.first().expect("nonempty solution")
    }

    pub fn t_end(&self) -> f64 {
        *self.ts.last().expect("nonempty solution")
    }

    pub fn y_end(&self) -> [f64; N] {
        *self.ys.last().expect("nonempty solution")
    }

    /// Evaluate the continuous extension at t (clamped to the solved span).
    pub fn eval(&self, t: f64) -> [f64; N] {
        let n = self.steps.len();
        if n == 0 {
            return self.ys[0];
        }
        let forward = self.steps[0].h > 0.0;
        let t = if forward {
            t.clamp(self.t_start(), self.t_end())
        } else {
            t.clamp(self.t_end(), self.t_start())
        };
        // Binary search over accepted steps.
        let mut lo = 0usize;
        let mut hi = n - 1;
        while lo < hi {
            let mid = (lo + hi) / 2;
            let end = self.ts[mid + 1];
            let before_end = if forward { t <= end } else { t >= end };
            if before_end {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        self.steps[lo].eval(t)
    }
}

pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: f64::INFINITY,
            max_steps: 4_000_000,
        }
    }
}

/// Integrate y' = f(t, y) from (t0, y0) to t1 (either direction).
pub fn integrate<const N: usize, F>(
    f: F,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    opts: &OdeOptions,
) -> Result<OdeSolution<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if !(t0.is_finite() && t1.is_finite()) || t0 == t1 {
        return Err(Error::Numerics(format!(
            "bad integration span [{t0}, {t1}]"
        )));
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let mut h = (span / 100.0).min(opts.max_step).max(span * 1e-12) * dir;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);

    let mut sol = OdeSolution {
        ts: vec![t0],
        ys: vec![y0],
        steps: Vec::new(),
    };

    let mut nsteps = 0usize;
    while (t1 - t) * dir > 0.0 {
        nsteps += 1;
        if nsteps > opts.max_steps {
            return Err(Error::Numerics(format!(
                "step budget exhausted at t={t} (of [{t0}, {t1}])"
            )));
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        if h.abs() < (t.abs() + 1.0) * 1e-15 {
            return Err(Error::Numerics(format!("step underflow at t={t}")));
        }

        let mut k = [[0.0; N]; 7];
        k[0] = k1;
        let stage = |coef: &[f64], k: &[[f64; N]; 7], y: &[f64; N], h: f64| {
            let mut s = *y;
            for i in 0..N {
                let mut acc = 0.0;
                for (j, a) in coef.iter().enumerate() {
                    acc += a * k[j][i];
                }
                s[i] += h * acc;
            }
            s
        };
        k[1] = f(t + C[1] * h, &stage(&A2, &k, &y, h));
        k[2] = f(t + C[2] * h, &stage(&A3, &k, &y, h));
        k[3] = f(t + C[3] * h, &stage(&A4, &k, &y, h));
        k[4] = f(t + C[4] * h, &stage(&A5, &k, &y, h));
        k[5] = f(t + C[5] * h, &stage(&A6, &k, &y, h));
        let y_new = stage(&A7, &k, &y, h);
        k[6] = f(t + h, &y_new);

        // Weighted RMS error of the embedded 4th-order difference.
        let mut err_sq = 0.0;
        for i in 0..N {
            let mut e = 0.0;
            for j in 0..7 {
                e += E[j] * k[j][i];
            }
            e *= h;
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / sc) * (e / sc);
        }
        let err = (err_sq / N as f64).sqrt();

        if err <= 1.0 {
            // Accept (a NaN error estimate compares false and rejects).
            let ydiff: [f64; N] = std::array::from_fn(|i| y_new[i] - y[i]);
            let bspl: [f64; N] = std::array::from_fn(|i| h * k[0][i] - ydiff[i]);
            let mut rcont = [[0.0; N]; 5];
            for i in 0..N {
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff[i];
                rcont[2][i] = bspl[i];
                rcont[3][i] = ydiff[i] - h * k[6][i] - bspl[i];
                let mut d = 0.0;
                for j in 0..7 {
                    d += D[j] * k[j][i];
                }
                rcont[4][i] = h * d;
            }
            sol.steps.push(DenseStep { t0: t, h, rcont });
            t += h;
            y = y_new;
            k1 = k[6]; // FSAL
            sol.ts.push(t);
            sol.ys.push(y);
        }

        let err = if err.is_finite() { err.max(1e-30) } else { 1e30 };
        let factor = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h = (h * factor).clamp(-opts.max_step, opts.max_step);
    }

    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth_to_tight_tolerance() {
        let sol = integrate(|_, y: &[f64; 1]| [y[0]], 0.0, 2.0, [1.0], &OdeOptions::default())
            .unwrap();
        let got = sol.y_end()[0];
        assert!((got - 2.0f64.exp()).abs() < 1e-9 * 2.0f64.exp());
    }

    #[test]
    fn dense_output_matches_closed_form_between_nodes() {
        // y' = cos t, y(0) = 0 → y = sin t; probe off-node points.
        let sol = integrate(
            |t, _: &[f64; 1]| [t.cos()],
            0.0,
            6.0,
            [0.0],
            &OdeOptions::default(),
        )
        .unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..=600 {
            let t = 6.0 * i as f64 / 600.0;
            worst = worst.max((sol.eval(t)[0] - t.sin()).abs());
        }
        assert!(worst < 1e-9, "dense output error {worst}");
    }

    #[test]
    fn dense_output_nonlinear_system() {
        // Harmonic oscillator as a 2-system; dense values must track
        // (sin, cos) between nodes to interpolant accuracy.
        let sol = integrate(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            10.0,
            [0.0, 1.0],
            &OdeOptions::default(),
        )
        .unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..=1000 {
            let t = 10.0 * i as f64 / 1000.0;
            let y = sol.eval(t);
            worst = worst.max((y[0] - t.sin()).abs().max((y[1] - t.cos()).abs()));
        }
        assert!(worst < 5e-9, "dense output error {worst}");
    }

    #[test]
    fn backward_integration() {
        let sol = integrate(|_, y: &[f64; 1]| [y[0]], 1.0, 0.0, [1.0], &OdeOptions::default())
            .unwrap();
        let got = sol.y_end()[0];
        assert!((got - (-1.0f64).exp()).abs() < 1e-10);
        let mid = sol.eval(0.5)[0];
        assert!((mid - (-0.5f64).exp()).abs() < 1e-9);
    }
}
