//! Brute-force variational oracles.
//!
//! Two independent checks live here, plus the plumbing they share:
//!
//! * [`competitor_search`]: a seeded multi-start descent over closed
//!   radial graphs r = ρ(θ) at fixed enclosed area, probing whether any
//!   competitor is shorter than the parallel circle. The search reports
//!   the best curve found, the spectrum of the constrained Hessian at
//!   that curve, and which Fourier modes are resonant (near-null). It
//!   can only ever report "no better competitor found"; it never proves
//!   minimality.
//! * [`singular_flux`]: the flux of the model calibration potential
//!   across a circle in the branched double-cover chart of a hyperbolic
//!   disk, cross-checked against the closed-form value (twice the
//!   hyperbolic ball area).
//!
//! ## Search design
//!
//! Competitors are single graphs over θ,
//!
//! ```text
//!   ρ(θ) = r₀ + Σ_{m=1..M} (a_m cos mθ + b_m sin mθ),
//! ```
//!
//! with the base radius r₀ eliminated by the area constraint: for every
//! coefficient vector x = (a, b) the unique r₀(x) with enclosed area
//! A(r₀, x) = v is found by a safeguarded Newton iteration (A is
//! strictly increasing in r₀ because the warping function is positive).
//! The reduced objective ℓ(x) = length(r₀(x), x) is minimized by plain
//! gradient descent with a backtracking (Armijo) line search; the
//! reduced gradient is analytic,
//!
//! ```text
//!   dℓ/dx = ∂L/∂x − (∂L/∂r₀)/(∂A/∂r₀) · ∂A/∂x,
//! ```
//!
//! with every partial a single pass of the periodic trapezoid rule, and
//! is validated against central finite differences on each search.
//! Trial 0 always starts from the circle itself, so the reported best
//! never exceeds the circle's length and is nonincreasing in the trial
//! count; trials 1.. start from seeded random coefficients, each drawn
//! from its own RNG stream so the outcome is independent of thread
//! scheduling.
//!
//! Quadratures use [`BASE_GRID`] uniform points, spectrally accurate
//! for these smooth periodic integrands; if the converged length moves
//! by more than [`GRID_AGREEMENT_RTOL`] when the grid is doubled, the
//! descent resumes on the doubled grid.

use std::f64::consts::{LN_2, PI};

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::quad;
use crate::report;
use crate::revolution::predicates;
use crate::revolution::surface::{geodesic_curvature, RadialMetricFns, RevolutionSurface};

/// Base number of quadrature cells for the periodic trapezoid rule.
pub const BASE_GRID: usize = 512;

/// Hard cap on grid refinement (four doublings of [`BASE_GRID`]).
const MAX_GRID: usize = 8192;

/// Relative agreement demanded between a converged length and its
/// re-evaluation on the doubled grid before the result is accepted.
pub const GRID_AGREEMENT_RTOL: f64 = 1e-9;

/// Area-projection accuracy: every evaluated competitor encloses the
/// target area to within this multiple of max(1, v).
const PROJECTION_RTOL: f64 = 1e-12;

/// Armijo sufficient-decrease coefficient for the backtracking search.
const ARMIJO_C1: f64 = 1e-4;

/// Descent stops once the reduced gradient norm falls below this
/// multiple of max(1, length). The length error this leaves behind is
/// quadratic in the gradient norm, far below the 1e-6 comparisons the
/// search feeds.
const GRAD_TOL: f64 = 1e-7;

/// Iteration cap per trial. Plain gradient descent converges linearly
/// with ratio 1 − λ_min/λ_max, so a few hundred iterations cover even
/// poorly conditioned mode mixes.
const MAX_DESCENT_ITERS: usize = 600;

/// Step (relative to the circle radius) for the finite-difference
/// Hessian. Chosen so that the truncation error on an exactly-null
/// isometry direction (quartic valley, error ∝ h²) and the roundoff
/// floor (∝ 1/h²) both sit well below the degeneracy threshold.
const HESSIAN_STEP: f64 = 1e-3;

/// Hessian eigenvalues smaller in magnitude than this fraction of the
/// largest one are flagged as resonant (degenerate) directions.
pub const DEGENERACY_FRACTION: f64 = 1e-6;

/// Largest relative mismatch tolerated between the analytic reduced
/// gradient and its central finite-difference check.
pub const GRADIENT_CHECK_RTOL: f64 = 1e-6;

/// Quadrature points for the singular-model flux integral. The
/// integrand is analytic in a θ-strip of halfwidth ≥ log(1/√tanh(log 2))
/// ≈ 0.13, so the periodic trapezoid rule converges geometrically and
/// 512 points reach machine precision everywhere in the chart.
const FLUX_GRID: usize = 512;

/// Agreement demanded between the numeric flux and its closed-form
/// cross-check.
pub const FLUX_CROSS_CHECK_TOL: f64 = 1e-6;

/// A closed radial graph ρ(θ) = r₀ + Σ (a_m cos mθ + b_m sin mθ)
/// bounding a disk-type region around the pole, together with the
/// measurements the search made of it. Curves produced by
/// [`competitor_search`] satisfy ρ > 0 everywhere and enclose the
/// target area to within the projection tolerance.
#[derive(Debug, Clone)]
pub struct CompetitorCurve {
    /// Base radius (the constant Fourier mode, fixed by the area).
    pub r0: f64,
    /// Cosine coefficients a_1..a_M.
    pub cos_coeffs: Vec<f64>,
    /// Sine coefficients b_1..b_M.
    pub sin_coeffs: Vec<f64>,
    /// Length on the surface, from the converged quadrature grid.
    pub length: f64,
    /// Enclosed area, recomputed after projection.
    pub area: f64,
    /// Quadrature cells used for the final evaluation.
    pub grid: usize,
    /// Eigenvalues (ascending) of the finite-difference Hessian of
    /// length at fixed area in coefficient coordinates. Empty until a
    /// search fills it in for its winner.
    pub hessian_spectrum: Vec<f64>,
}

impl CompetitorCurve {
    /// Number of Fourier modes M.
    pub fn max_mode(&self) -> usize {
        self.cos_coeffs.len()
    }

    /// ρ(θ).
    pub fn rho(&self, theta: f64) -> f64 {
        self.rho_jet(theta).0
    }

    /// (ρ, ρ′, ρ″) at θ.
    pub fn rho_jet(&self, theta: f64) -> (f64, f64, f64) {
        let (mut r, mut rp, mut rpp) = (self.r0, 0.0, 0.0);
        for (m, (&a, &b)) in self.cos_coeffs.iter().zip(&self.sin_coeffs).enumerate() {
            let mf = (m + 1) as f64;
            let (s, c) = (mf * theta).sin_cos();
            r += a * c + b * s;
            rp += mf * (b * c - a * s);
            rpp -= mf * mf * (a * c + b * s);
        }
        (r, rp, rpp)
    }

    /// Geodesic curvature of the curve at θ in the given ambient metric.
    pub fn kappa<M: RadialMetricFns + ?Sized>(&self, metric: &M, theta: f64) -> f64 {
        let (r, rp, rpp) = self.rho_jet(theta);
        geodesic_curvature(metric, r, rp, rpp)
    }

    /// Two-column plot data (theta, rho) on n+1 uniform samples, the
    /// last closing the curve at θ = 2π.
    pub fn csv_string(&self, n: usize) -> Result<String> {
        let rows: Vec<Vec<f64>> = (0..=n)
            .map(|i| {
                let theta = 2.0 * PI * i as f64 / n as f64;
                vec![theta, self.rho(theta)]
            })
            .collect();
        report::csv_string(&["theta", "rho"], &rows)
    }
}

/// Near-null directions of the constrained Hessian at a search winner.
#[derive(Debug, Clone)]
pub struct DegeneracyReport {
    /// All eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// (eigenvalue, dominant Fourier mode) for each direction whose
    /// eigenvalue magnitude falls below `threshold`.
    pub degenerate: Vec<(f64, usize)>,
    /// Absolute flagging threshold, [`DEGENERACY_FRACTION`] × max |λ|.
    pub threshold: f64,
}

/// Everything one competitor search reports.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Shortest length over all trials; never above `circle_length`
    /// because trial 0 starts from the circle.
    pub best_length: f64,
    /// The winning curve, Hessian spectrum included.
    pub best: CompetitorCurve,
    /// Radius of the parallel circle enclosing the target area.
    pub circle_radius: f64,
    /// Length of that circle, the benchmark the search tries to beat.
    pub circle_length: f64,
    /// Converged length of each trial, in trial order.
    pub trial_lengths: Vec<f64>,
    /// Resonant directions at the winner.
    pub degeneracy: DegeneracyReport,
    /// Relative disagreement between the analytic reduced gradient and
    /// central finite differences at a deterministic non-critical probe
    /// point; must stay below [`GRADIENT_CHECK_RTOL`].
    pub gradient_check: f64,
}

/// Precomputed cos(mθᵢ)/sin(mθᵢ) tables so the hot loops do no trig.
struct SearchGrid {
    n: usize,
    mmax: usize,
    /// Layout: entry i·mmax + (m−1) holds the value at grid point i.
    cos_tab: Vec<f64>,
    sin_tab: Vec<f64>,
}

impl SearchGrid {
    fn new(n: usize, mmax: usize) -> Self {
        let mut cos_tab = Vec::with_capacity(n * mmax);
        let mut sin_tab = Vec::with_capacity(n * mmax);
        for i in 0..n {
            let theta = 2.0 * PI * i as f64 / n as f64;
            for m in 1..=mmax {
                let (s, c) = (m as f64 * theta).sin_cos();
                cos_tab.push(c);
                sin_tab.push(s);
            }
        }
        SearchGrid { n, mmax, cos_tab, sin_tab }
    }
}

/// One search problem bound to a quadrature grid.
struct Engine<'a, Mt: RadialMetricFns + ?Sized> {
    metric: &'a Mt,
    v: f64,
    r_limit: f64,
    grid: &'a SearchGrid,
}

impl<'a, Mt: RadialMetricFns + ?Sized> Engine<'a, Mt> {
    fn h(&self) -> f64 {
        2.0 * PI / self.grid.n as f64
    }

    /// (ρ, ρ′) at grid point i.
    fn rho_at(&self, i: usize, r0: f64, x: &[f64]) -> (f64, f64) {
        let mm = self.grid.mmax;
        let base = i * mm;
        let (mut rho, mut rho_p) = (r0, 0.0);
        for m in 0..mm {
            let c = self.grid.cos_tab[base + m];
            let s = self.grid.sin_tab[base + m];
            let mf = (m + 1) as f64;
            rho += x[m] * c + x[mm + m] * s;
            rho_p += mf * (x[mm + m] * c - x[m] * s);
        }
        (rho, rho_p)
    }

    /// Enclosed area and its r₀-derivative: (h ΣG(ρ), h Σ g(ρ)).
    fn area_pass(&self, r0: f64, x: &[f64]) -> (f64, f64) {
        let (mut a, mut da) = (0.0, 0.0);
        for i in 0..self.grid.n {
            let (rho, _) = self.rho_at(i, r0, x);
            a += self.metric.g_antider(rho);
            da += self.metric.g(rho);
        }
        (self.h() * a, self.h() * da)
    }

    /// Length h Σ √(g(ρ)² + ρ′²).
    fn length_pass(&self, r0: f64, x: &[f64]) -> f64 {
        let mut len = 0.0;
        for i in 0..self.grid.n {
            let (rho, rho_p) = self.rho_at(i, r0, x);
            let g = self.metric.g(rho);
            len += (g * g + rho_p * rho_p).sqrt();
        }
        self.h() * len
    }

    /// Base radius r₀ with A(r₀, x) = v, or None when no admissible one
    /// exists (curve would touch the pole or leave the chart, or the
    /// area target is out of reach). Safeguarded Newton: A is strictly
    /// increasing in r₀, so a bisection bracket backs up every step.
    fn project(&self, x: &[f64], guess: f64) -> Option<f64> {
        let mm = self.grid.mmax;
        // max_θ |ρ − r₀| ≤ Σ √(a² + b²) bounds the admissible band.
        let amp: f64 = (0..mm).map(|m| x[m].hypot(x[mm + m])).sum();
        let wall = 1e-9 * self.r_limit;
        let (mut lo, mut hi) = (amp + wall, self.r_limit - amp - wall);
        if !(lo < hi) {
            return None;
        }
        let tol = PROJECTION_RTOL * self.v.max(1.0);
        let flo = self.area_pass(lo, x).0 - self.v;
        if flo > 0.0 {
            return None;
        }
        if flo.abs() <= tol {
            return Some(lo);
        }
        let fhi = self.area_pass(hi, x).0 - self.v;
        if fhi < 0.0 {
            return None;
        }
        if fhi.abs() <= tol {
            return Some(hi);
        }
        let mut r0 = guess.clamp(lo, hi);
        for _ in 0..80 {
            let (a, da) = self.area_pass(r0, x);
            let f = a - self.v;
            if f.abs() <= tol {
                return Some(r0);
            }
            if f > 0.0 {
                hi = r0;
            } else {
                lo = r0;
            }
            let next = if da > 0.0 { r0 - f / da } else { f64::NAN };
            r0 = if next.is_finite() && next > lo && next < hi {
                next
            } else {
                0.5 * (lo + hi)
            };
        }
        None
    }

    /// Reduced objective ℓ(x); +∞ when the projection has no admissible
    /// solution. `warm` carries the last r₀ as the Newton start.
    fn objective(&self, x: &[f64], warm: &mut f64) -> f64 {
        match self.project(x, *warm) {
            Some(r0) => {
                *warm = r0;
                self.length_pass(r0, x)
            }
            None => f64::INFINITY,
        }
    }

    /// One fused pass: length and the analytic reduced gradient
    /// dℓ/dx = ∂L/∂x − (∂L/∂r₀)/(∂A/∂r₀) · ∂A/∂x at a projected point.
    fn grad_pass(&self, r0: f64, x: &[f64]) -> (f64, Vec<f64>) {
        let mm = self.grid.mmax;
        let mut len = 0.0;
        let (mut dl0, mut da0) = (0.0, 0.0);
        let mut dl = vec![0.0; 2 * mm];
        let mut da = vec![0.0; 2 * mm];
        for i in 0..self.grid.n {
            let (rho, rho_p) = self.rho_at(i, r0, x);
            let g = self.metric.g(rho);
            let gp = self.metric.g_prime(rho);
            let w = (g * g + rho_p * rho_p).sqrt();
            len += w;
            let ggp_w = g * gp / w;
            let rp_w = rho_p / w;
            dl0 += ggp_w;
            da0 += g;
            let base = i * mm;
            for m in 0..mm {
                let c = self.grid.cos_tab[base + m];
                let s = self.grid.sin_tab[base + m];
                let mf = (m + 1) as f64;
                dl[m] += ggp_w * c - rp_w * mf * s;
                dl[mm + m] += ggp_w * s + rp_w * mf * c;
                da[m] += g * c;
                da[mm + m] += g * s;
            }
        }
        let ratio = dl0 / da0;
        let h = self.h();
        let grad = (0..2 * mm).map(|j| h * (dl[j] - ratio * da[j])).collect();
        (h * len, grad)
    }

    /// Gradient descent with backtracking line search from a point whose
    /// projection is already known valid. Returns (length, r₀).
    fn descend(&self, x: &mut [f64], warm: &mut f64) -> Option<(f64, f64)> {
        let mut r0 = self.project(x, *warm)?;
        *warm = r0;
        let (mut len, mut grad) = self.grad_pass(r0, x);
        let mut step = 0.0;
        for iter in 0..MAX_DESCENT_ITERS {
            let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
            let gnorm = gnorm2.sqrt();
            if gnorm <= GRAD_TOL * len.max(1.0) {
                break;
            }
            if iter == 0 {
                step = 0.1 * r0 / gnorm;
            }
            let mut t = step.max(1e-300);
            let mut accepted = false;
            for _ in 0..60 {
                let xt: Vec<f64> = x.iter().zip(&grad).map(|(xi, gi)| xi - t * gi).collect();
                let mut warm_t = *warm;
                let lt = self.objective(&xt, &mut warm_t);
                if lt <= len - ARMIJO_C1 * t * gnorm2 {
                    x.copy_from_slice(&xt);
                    *warm = warm_t;
                    r0 = warm_t;
                    let (l2, g2) = self.grad_pass(r0, x);
                    len = l2;
                    grad = g2;
                    step = 2.0 * t;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                // Line search exhausted: the gradient is at the
                // quadrature noise floor. Converged as far as f64 goes.
                break;
            }
        }
        Some((len, r0))
    }
}

/// Converged state of one trial.
struct TrialFit {
    x: Vec<f64>,
    r0: f64,
    length: f64,
    grid: usize,
}

/// Run one trial to convergence, doubling the quadrature grid until the
/// length stops moving. Falls back to the circle when the start (or a
/// refinement) is inadmissible, so a trial always produces a fit.
fn run_trial<Mt: RadialMetricFns + ?Sized>(
    metric: &Mt,
    v: f64,
    r_limit: f64,
    base: &SearchGrid,
    mut x: Vec<f64>,
    r_guess: f64,
) -> TrialFit {
    let probe = Engine { metric, v, r_limit, grid: base };
    for _ in 0..20 {
        if probe.project(&x, r_guess).is_some() {
            break;
        }
        for c in &mut x {
            *c *= 0.5;
        }
    }
    if probe.project(&x, r_guess).is_none() {
        x.iter_mut().for_each(|c| *c = 0.0);
    }

    let mut warm = r_guess;
    let mut owned: Option<SearchGrid> = None;
    loop {
        let grid = owned.as_ref().unwrap_or(base);
        let eng = Engine { metric, v, r_limit, grid };
        let (len, r0) = match eng.descend(&mut x, &mut warm) {
            Some(res) => res,
            None => {
                // Only reachable if a grid change invalidated the point;
                // restart this grid from the circle.
                x.iter_mut().for_each(|c| *c = 0.0);
                eng.descend(&mut x, &mut warm)
                    .expect("circle start is always admissible")
            }
        };
        let fine = SearchGrid::new(2 * grid.n, grid.mmax);
        let feng = Engine { metric, v, r_limit, grid: &fine };
        let Some(r0f) = feng.project(&x, r0) else {
            return TrialFit { x, r0, length: len, grid: grid.n };
        };
        let lenf = feng.length_pass(r0f, &x);
        if (lenf - len).abs() <= GRID_AGREEMENT_RTOL * len.abs().max(1.0) || fine.n > MAX_GRID {
            return TrialFit { x, r0: r0f, length: lenf, grid: fine.n };
        }
        owned = Some(fine);
    }
}

/// Search for closed radial graphs shorter than the parallel circle at
/// the same enclosed area.
///
/// `metric` describes the ambient rotationally symmetric chart (warping
/// function g and its antiderivative), admissible radii are (0,
/// `r_limit`), `v` is the target area, `max_mode` the Fourier cutoff M,
/// and each of `trials` starts descends independently: trial 0 from the
/// circle itself, later trials from random coefficients drawn from the
/// RNG stream (seed, trial), so results do not depend on scheduling.
///
/// Not beating the circle is the expected outcome; the search reports
/// what it found either way and never treats that as an error. Errors
/// are reserved for malformed inputs (`BadParameters`) or a breakdown
/// of the finite-difference Hessian probe (`Numerics`).
pub fn competitor_search<Mt: RadialMetricFns + Sync + ?Sized>(
    metric: &Mt,
    r_limit: f64,
    v: f64,
    max_mode: usize,
    trials: usize,
    seed: u64,
) -> Result<SearchOutcome> {
    if !(r_limit > 0.0) || !r_limit.is_finite() {
        return Err(Error::BadParameters(format!(
            "radial chart bound must be positive and finite, got {r_limit}"
        )));
    }
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::BadParameters(format!(
            "target area must be positive and finite, got {v}"
        )));
    }
    if max_mode == 0 {
        return Err(Error::BadParameters("need at least one Fourier mode".into()));
    }
    if trials == 0 {
        return Err(Error::BadParameters("need at least one trial".into()));
    }
    for i in 1..=64 {
        let r = r_limit * i as f64 / 64.0;
        if !(metric.g(r) > 0.0) {
            return Err(Error::BadParameters(format!(
                "warping function must stay positive on the chart; g({r}) = {}",
                metric.g(r)
            )));
        }
    }
    let total = 2.0 * PI * metric.g_antider(r_limit);
    if !(v < total) {
        return Err(Error::BadParameters(format!(
            "target area {v} is not below the chart's total area {total}"
        )));
    }

    // Benchmark circle: 2π G(r_v) = v has a unique root since G′ = g > 0.
    let wall = 1e-9 * r_limit;
    let r_v = crate::numerics::root::solve_bracketed(
        |r| 2.0 * PI * metric.g_antider(r) - v,
        wall,
        r_limit - wall,
        1e-14 * r_limit,
    )
    .map_err(|e| {
        Error::BadParameters(format!("no circle of area {v} inside the chart: {e}"))
    })?;
    let circle_length = 2.0 * PI * metric.g(r_v);

    let base = SearchGrid::new(BASE_GRID, max_mode);
    let fits: Vec<TrialFit> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let x0 = if trial == 0 {
                vec![0.0; 2 * max_mode]
            } else {
                let mut rng = ChaCha12Rng::seed_from_u64(seed);
                rng.set_stream(trial as u64);
                (0..2 * max_mode)
                    .map(|j| {
                        let m = (j % max_mode) + 1;
                        rng.random_range(-1.0..1.0) * 0.3 * r_v / (m * m) as f64
                    })
                    .collect()
            };
            run_trial(metric, v, r_limit, &base, x0, r_v)
        })
        .collect();

    let mut best_idx = 0;
    for (i, fit) in fits.iter().enumerate() {
        if fit.length < fits[best_idx].length {
            best_idx = i;
        }
    }
    let trial_lengths: Vec<f64> = fits.iter().map(|f| f.length).collect();
    let bf = &fits[best_idx];

    let final_grid = SearchGrid::new(bf.grid, max_mode);
    let eng = Engine { metric, v, r_limit, grid: &final_grid };
    let area = eng.area_pass(bf.r0, &bf.x).0;

    let (spectrum, degeneracy) = hessian_spectrum(&eng, &bf.x, bf.r0, r_v)?;
    let gradient_check = gradient_probe(&eng, r_v);

    let mut best = CompetitorCurve {
        r0: bf.r0,
        cos_coeffs: bf.x[..max_mode].to_vec(),
        sin_coeffs: bf.x[max_mode..].to_vec(),
        length: bf.length,
        area,
        grid: bf.grid,
        hessian_spectrum: Vec::new(),
    };
    best.hessian_spectrum = spectrum;

    Ok(SearchOutcome {
        best_length: bf.length,
        best,
        circle_radius: r_v,
        circle_length,
        trial_lengths,
        degeneracy,
        gradient_check,
    })
}

/// [`competitor_search`] over the sampled chart of a surface of
/// revolution, probing radii up to the outermost sampled node.
pub fn competitor_search_on_surface(
    s: &RevolutionSurface,
    v: f64,
    max_mode: usize,
    trials: usize,
    seed: u64,
) -> Result<SearchOutcome> {
    competitor_search(s, s.r_max(), v, max_mode, trials, seed)
}

/// Finite-difference Hessian of the reduced objective at the winner,
/// its eigendecomposition, and the resonance flags.
fn hessian_spectrum<Mt: RadialMetricFns + Sync + ?Sized>(
    eng: &Engine<'_, Mt>,
    x: &[f64],
    r0: f64,
    r_v: f64,
) -> Result<(Vec<f64>, DegeneracyReport)> {
    let dim = x.len();
    let mmax = dim / 2;
    let pairs: Vec<(usize, usize)> =
        (0..dim).flat_map(|j| (j..dim).map(move |k| (j, k))).collect();
    let mut entries: Option<Vec<f64>> = None;
    let mut h = HESSIAN_STEP * r_v;
    for _ in 0..4 {
        let mut warm = r0;
        let f0 = eng.objective(x, &mut warm);
        let vals: Vec<f64> = pairs
            .par_iter()
            .map(|&(j, k)| {
                let mut warm = r0;
                let mut probe = |dj: f64, dk: f64| {
                    let mut xt = x.to_vec();
                    xt[j] += dj;
                    xt[k] += dk;
                    eng.objective(&xt, &mut warm)
                };
                if j == k {
                    (probe(h, 0.0) - 2.0 * f0 + probe(-h, 0.0)) / (h * h)
                } else {
                    (probe(h, h) - probe(h, -h) - probe(-h, h) + probe(-h, -h))
                        / (4.0 * h * h)
                }
            })
            .collect();
        if vals.iter().all(|v| v.is_finite()) {
            entries = Some(vals);
            break;
        }
        // A probe left the admissible band: shrink the stencil.
        h *= 0.25;
    }
    let Some(vals) = entries else {
        return Err(Error::Numerics(
            "Hessian stencil could not stay inside the admissible chart".into(),
        ));
    };
    let mut mat = nalgebra::DMatrix::zeros(dim, dim);
    for (&(j, k), &val) in pairs.iter().zip(&vals) {
        mat[(j, k)] = val;
        mat[(k, j)] = val;
    }
    let eig = nalgebra::SymmetricEigen::new(mat);

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();

    let lambda_max = eigenvalues.iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
    let threshold = DEGENERACY_FRACTION * lambda_max;
    let mut degenerate = Vec::new();
    for &i in &order {
        let lambda = eig.eigenvalues[i];
        if lambda.abs() < threshold {
            let col = eig.eigenvectors.column(i);
            let mut mode = 1;
            let mut weight = -1.0;
            for m in 0..mmax {
                let w = col[m] * col[m] + col[mmax + m] * col[mmax + m];
                if w > weight {
                    weight = w;
                    mode = m + 1;
                }
            }
            degenerate.push((lambda, mode));
        }
    }
    let report = DegeneracyReport { eigenvalues: eigenvalues.clone(), degenerate, threshold };
    Ok((eigenvalues, report))
}

/// Relative disagreement between the analytic reduced gradient and
/// central finite differences at a deterministic, generically
/// non-critical probe point. (At a minimum the comparison would be
/// 0/0, so the probe deliberately stands away from critical points.)
fn gradient_probe<Mt: RadialMetricFns + ?Sized>(eng: &Engine<'_, Mt>, r_v: f64) -> f64 {
    let mm = eng.grid.mmax;
    let mut x: Vec<f64> = (0..2 * mm)
        .map(|j| {
            let m = (j % mm) + 1;
            let sign = if j < mm { 1.0 } else { -0.6 };
            sign * 0.12 * r_v / (m * m) as f64
        })
        .collect();
    let mut r0 = None;
    for _ in 0..20 {
        if let Some(p) = eng.project(&x, r_v) {
            r0 = Some(p);
            break;
        }
        x.iter_mut().for_each(|c| *c *= 0.5);
    }
    let Some(r0) = r0 else {
        return f64::INFINITY;
    };
    let (len, analytic) = eng.grad_pass(r0, &x);
    let h = 1e-5 * r_v;
    let mut fd = vec![0.0; 2 * mm];
    for (j, slot) in fd.iter_mut().enumerate() {
        let mut xp = x.clone();
        xp[j] += h;
        let mut warm = r0;
        let lp = eng.objective(&xp, &mut warm);
        xp[j] = x[j] - h;
        warm = r0;
        let lm = eng.objective(&xp, &mut warm);
        *slot = (lp - lm) / (2.0 * h);
    }
    let diff: f64 = analytic
        .iter()
        .zip(&fd)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let denom = fd.iter().map(|g| g * g).sum::<f64>().sqrt();
    diff / denom.max(1e-9 * len.max(1.0))
}

/// Length floor from the constant-curvature comparison: on charts with
/// curvature ≤ k, a closed embedded curve enclosing area v has length at
/// least √(4πv − kv²). Where that expression is undefined the floor is
/// vacuous (zero).
pub fn comparison_floor(k: f64, v: f64) -> f64 {
    predicates::j_k(k, v).unwrap_or(0.0)
}

/// Flux of the model calibration potential across the circle
/// |z| = √(tanh r).
///
/// The model chart is the disk |z| ≤ √(tanh(log 2)) with the metric
/// 16|z|²(1 − |z|⁴)⁻²|dz|², the pullback of the Poincaré-disk metric
/// 4|dz′|²/(1 − |z′|²)² under the two-sheeted branched covering
/// z ↦ z² (a cone point of angle 4π sits at the origin). On it lives
/// the potential
///
/// ```text
///   b(z) = −log Im w(z),   w(z) = (1 − iz²)/(z² − i),
/// ```
///
/// the pullback of the upper-half-plane Busemann function −log Im
/// through the holomorphic chart w; e^b is the leading factor of the
/// model solution u = u_peak · |z² − i|² / (1 − |z|⁴). Since Δb = 1 in
/// the chart metric, the flux ∮ *db across the circle of hyperbolic
/// radius r equals the enclosed area: twice the area of the hyperbolic
/// disk the chart double-covers, 8π sinh²r. The Hodge star on 1-forms
/// in two dimensions is conformally invariant, so the flux is computed
/// as the Euclidean line integral ∮ R ∂_R b dθ (counterclockwise) with
///
/// ```text
///   R ∂_R b = −R · Im(w′(z)e^{iθ}) / Im w(z),   z = R e^{iθ},
///   w′(z) = −4z/(z² − i)²,   Im w(z) = (1 − |z|⁴)/|z² − i|²,
/// ```
///
/// and cross-checked against the closed form; disagreement beyond
/// [`FLUX_CROSS_CHECK_TOL`] or a nonpositive result is reported as a
/// numerical failure. `u_peak` scales the solution but not d log u, so
/// the flux is independent of it; it is validated and otherwise unused.
pub fn singular_flux(r: f64, u_peak: f64) -> Result<f64> {
    if !(u_peak > 0.0) || !u_peak.is_finite() {
        return Err(Error::BadParameters(format!(
            "peak value must be positive and finite, got {u_peak}"
        )));
    }
    if !(r > 0.0 && r <= LN_2) {
        return Err(Error::OutOfChart(format!(
            "chart covers hyperbolic radii 0 < r ≤ log 2 ≈ {LN_2:.4}, got {r}"
        )));
    }
    let big_r = r.tanh().sqrt();
    let one_minus_r4 = 1.0 - big_r.powi(4);
    let flux = quad::trapezoid_periodic(
        &|theta| {
            let z = Complex64::from_polar(big_r, theta);
            let denom = z * z - Complex64::i();
            let w_im = one_minus_r4 / denom.norm_sqr();
            let wp = -4.0 * z / (denom * denom);
            -big_r * (wp * Complex64::from_polar(1.0, theta)).im / w_im
        },
        FLUX_GRID,
    );
    let expected = 8.0 * PI * r.sinh().powi(2);
    if !(flux > 0.0) {
        return Err(Error::Numerics(format!(
            "flux across the chart circle must be positive, got {flux}"
        )));
    }
    if (flux - expected).abs() > FLUX_CROSS_CHECK_TOL * expected.max(1.0) {
        return Err(Error::Numerics(format!(
            "flux {flux} disagrees with the area cross-check {expected}"
        )));
    }
    Ok(flux)
}
