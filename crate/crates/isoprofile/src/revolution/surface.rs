//! Rotationally symmetric metrics g = dr² + f(r)²dθ² and their two-way
//! conversion with profile functions.
//!
//! The dictionary: the circle at radius r has length 2πf(r), the disk it
//! bounds has area V(r) = 2π∫₀ʳ f, and when circles are the isoperimetric
//! minimizers the profile is I(V(r)) = 2πf(r). Writing H = I² this becomes
//!
//!   H′(v) = 4πf′(r),   H″(v) = 2f″(r)/f(r),   K(r) = −f″/f = −½H″,
//!
//! so a profile's square determines the metric through a first-order ODE
//! dr/dv = 1/I(v) and conversely the metric determines the profile by
//! quadrature. Both directions are implemented here on shared
//! piecewise-quintic storage.

use crate::error::{Error, Result};
use crate::numerics::{interp, quad, root};
use crate::revolution::profile::{GridProfile, Jet, Profile};
use std::f64::consts::PI;

/// Start of the area grid used when reconstructing a metric from a
/// profile. Small enough that the flat-pole approximation r = √(v/π)
/// is exact to double precision, large enough to avoid denormals.
pub const ORIGIN_AREA: f64 = 1e-8;

/// Relative tolerance on the pole anchor H′(0) = 4π required of profiles
/// fed to [`metric_from_profile`].
pub const ANCHOR_RTOL: f64 = 1e-6;

/// Grid resolution: nodes per decade of enclosed area.
const NODES_PER_DECADE: usize = 160;

/// A surface of revolution sampled on a radius grid, with the warping
/// function f stored as a piecewise quintic through exact 2-jets.
#[derive(Debug, Clone)]
pub struct RevolutionSurface {
    rs: Vec<f64>,
    /// (f, f′, f″) at each node.
    jets: Vec<(f64, f64, f64)>,
    /// Enclosed area V(r_i) at each node.
    vs: Vec<f64>,
    /// Quintic coefficients for f on [r_i, r_{i+1}] in powers of r − r_i.
    coeffs: Vec<[f64; 6]>,
}

impl RevolutionSurface {
    fn from_parts(rs: Vec<f64>, jets: Vec<(f64, f64, f64)>, vs: Vec<f64>) -> Result<Self> {
        if rs.len() < 2 || rs.len() != jets.len() || rs.len() != vs.len() {
            return Err(Error::BadParameters(
                "surface needs >= 2 radius nodes with jets and areas".into(),
            ));
        }
        if rs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::BadParameters("radius nodes must strictly increase".into()));
        }
        if let Some(i) = jets.iter().position(|j| !(j.0 > 0.0)) {
            return Err(Error::NonPositiveProfile(format!(
                "warping function f(r) = {} at r = {} must be positive",
                jets[i].0, rs[i]
            )));
        }
        let coeffs = (0..rs.len() - 1)
            .map(|i| interp::quintic_coeffs(rs[i], rs[i + 1], jets[i], jets[i + 1]))
            .collect();
        Ok(RevolutionSurface { rs, jets, vs, coeffs })
    }

    /// Sample a metric given by closures for f, f′, f″ on n uniform radius
    /// nodes covering [r_max·1e−6, r_max]; enclosed areas are accumulated
    /// by adaptive quadrature of 2πf starting from r = 0.
    pub fn from_functions<F, G, H>(f: F, fp: G, fpp: H, r_max: f64, n: usize) -> Result<Self>
    where
        F: Fn(f64) -> f64,
        G: Fn(f64) -> f64,
        H: Fn(f64) -> f64,
    {
        if !(r_max > 0.0) || n < 8 {
            return Err(Error::BadParameters(
                "from_functions needs r_max > 0 and at least 8 nodes".into(),
            ));
        }
        let r_lo = r_max * 1e-6;
        let rs: Vec<f64> = (0..n)
            .map(|i| r_lo + (r_max - r_lo) * i as f64 / (n - 1) as f64)
            .collect();
        let jets: Vec<(f64, f64, f64)> = rs.iter().map(|&r| (f(r), fp(r), fpp(r))).collect();
        let area = |a: f64, b: f64| -> Result<f64> {
            quad::adaptive(&|r: f64| 2.0 * PI * f(r), a, b, 1e-12, 1e-16)
        };
        let mut vs = Vec::with_capacity(n);
        let mut acc = area(0.0, r_lo)?;
        vs.push(acc);
        for i in 1..n {
            acc += area(rs[i - 1], rs[i])?;
            vs.push(acc);
        }
        Self::from_parts(rs, jets, vs)
    }

    pub fn r_min(&self) -> f64 {
        self.rs[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.rs.last().expect("nonempty surface")
    }

    pub fn v_max(&self) -> f64 {
        *self.vs.last().expect("nonempty surface")
    }

    pub fn nodes(&self) -> (&[f64], &[(f64, f64, f64)], &[f64]) {
        (&self.rs, &self.jets, &self.vs)
    }

    fn interval_of(&self, r: f64) -> usize {
        match self.rs.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(self.coeffs.len() - 1),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.coeffs.len() - 1),
        }
    }

    /// (f, f′, f″) at radius r (end intervals extrapolate).
    pub fn f_jet(&self, r: f64) -> (f64, f64, f64) {
        let i = self.interval_of(r);
        interp::poly_eval2(&self.coeffs[i], r - self.rs[i])
    }

    pub fn f_at(&self, r: f64) -> f64 {
        self.f_jet(r).0
    }

    /// Gauss curvature K(r) = −f″(r)/f(r).
    pub fn curvature_at(&self, r: f64) -> f64 {
        let (f, _, fpp) = self.f_jet(r);
        -fpp / f
    }

    /// Enclosed area V(r) = 2π∫₀ʳ f, evaluated through the node value
    /// plus the exact integral of the local quintic.
    pub fn v_at(&self, r: f64) -> f64 {
        let i = self.interval_of(r);
        let s = r - self.rs[i];
        let c = &self.coeffs[i];
        let mut integral = 0.0;
        for k in (0..6).rev() {
            integral = integral * s + c[k] / (k + 1) as f64;
        }
        self.vs[i] + 2.0 * PI * integral * s
    }

    /// Radius of the circle enclosing area v (inverse of [`v_at`]).
    pub fn r_of_v(&self, v: f64) -> Result<f64> {
        let (v0, v1) = (self.vs[0], self.v_max());
        if !(v >= v0 && v <= v1) {
            return Err(Error::DomainError(format!(
                "area {v} outside sampled range [{v0}, {v1}]"
            )));
        }
        let i = match self.vs.binary_search_by(|x| x.partial_cmp(&v).unwrap()) {
            Ok(i) => return Ok(self.rs[i]),
            Err(i) => (i - 1).min(self.coeffs.len() - 1),
        };
        let xtol = 1e-15 * (1.0 + self.rs[i + 1].abs());
        root::solve_bracketed(|r| self.v_at(r) - v, self.rs[i], self.rs[i + 1], xtol)
    }

    /// The profile jet at enclosed area v, read off the metric:
    /// H = (2πf)², H′ = 4πf′, H″ = 2f″/f.
    pub fn profile_jet(&self, v: f64) -> Result<Jet> {
        let r = self.r_of_v(v)?;
        let (f, fp, fpp) = self.f_jet(r);
        Ok(Jet {
            h: (2.0 * PI * f).powi(2),
            h1: 4.0 * PI * fp,
            h2: 2.0 * fpp / f,
        })
    }
}

/// Reconstruct the metric whose isoperimetric profile is the given one,
/// integrating dr/dv = 1/I(v) on a geometric area grid starting at
/// [`ORIGIN_AREA`]. Requires the smooth-pole anchors H(0) = 0 and
/// H′(0) = 4π (within [`ANCHOR_RTOL`]); profiles shaped like cusps
/// (H′(0) = 0) are rejected with [`Error::BadOrigin`].
pub fn metric_from_profile(p: &Profile, v_max: f64) -> Result<RevolutionSurface> {
    if !(v_max > 2.0 * ORIGIN_AREA) {
        return Err(Error::BadParameters(format!(
            "v_max = {v_max} must exceed {}",
            2.0 * ORIGIN_AREA
        )));
    }
    if v_max >= p.v_max() {
        return Err(Error::BadParameters(format!(
            "v_max = {v_max} reaches the profile's domain end {}",
            p.v_max()
        )));
    }
    let (d1, _) = p.anchors();
    if (d1 - 4.0 * PI).abs() > ANCHOR_RTOL * 4.0 * PI {
        return Err(Error::BadOrigin(format!(
            "H'(0) = {d1}, need 4π for a metric smooth at the pole"
        )));
    }
    let h0 = p.jet(0.0).h;
    if h0.abs() > 1e-6 * (1.0 + p.jet(v_max).h.abs()) {
        return Err(Error::BadOrigin(format!("H(0) = {h0}, need 0")));
    }

    // Geometric grid in v resolves the √v behavior of I near the pole.
    let decades = (v_max / ORIGIN_AREA).log10();
    let n = (decades * NODES_PER_DECADE as f64).ceil() as usize + 2;
    let ratio = (v_max / ORIGIN_AREA).powf(1.0 / (n - 1) as f64);
    let mut vs = Vec::with_capacity(n);
    let mut v = ORIGIN_AREA;
    for i in 0..n {
        vs.push(if i + 1 == n { v_max } else { v });
        v *= ratio;
    }

    let mut jets = Vec::with_capacity(n);
    for &vi in &vs {
        let j = p.jet(vi);
        if !(j.h > 0.0) {
            return Err(Error::NonPositiveProfile(format!(
                "H({vi}) = {} must be positive on (0, v_max]",
                j.h
            )));
        }
        let f = j.h.sqrt() / (2.0 * PI);
        jets.push((f, j.h1 / (4.0 * PI), 0.5 * j.h2 * f));
    }

    // r(v) by quadrature of 1/I. The substitution σ = √v turns the
    // integrable √v singularity at the pole into a smooth integrand
    // 2σ/I(σ²) → 1/√π, so plain adaptive Simpson converges fast.
    let mut rs = Vec::with_capacity(n);
    let mut r = (ORIGIN_AREA / PI).sqrt();
    rs.push(r);
    for i in 1..n {
        let (a, b) = (vs[i - 1].sqrt(), vs[i].sqrt());
        r += quad::adaptive(&|s: f64| 2.0 * s / p.i(s * s), a, b, 1e-12, 1e-16)?;
        rs.push(r);
    }

    RevolutionSurface::from_parts(rs, jets, vs)
}

/// Read the profile back off a surface of revolution as a grid profile
/// with nodes at the sampled areas.
pub fn profile_from_metric(s: &RevolutionSurface) -> Result<Profile> {
    let (_, jets, vs) = s.nodes();
    let profile_jets: Vec<Jet> = jets
        .iter()
        .map(|&(f, fp, fpp)| Jet {
            h: (2.0 * PI * f).powi(2),
            h1: 4.0 * PI * fp,
            h2: 2.0 * fpp / f,
        })
        .collect();
    Ok(Profile::Grid(GridProfile::from_jets(vs.to_vec(), profile_jets)?))
}

/// Anything that can serve as a rotationally symmetric ambient metric:
/// warping function, its slope, curvature data, and the antiderivative
/// G(r) = ∫₀ʳ f giving enclosed area 2πG.
pub trait RadialMetricFns {
    fn g(&self, r: f64) -> f64;
    fn g_prime(&self, r: f64) -> f64;
    fn g_second(&self, r: f64) -> f64;
    fn g_antider(&self, r: f64) -> f64;
}

/// Closed-form reference metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedMetric {
    /// f = r: the flat plane.
    Euclidean,
    /// f = sinh r: the curvature −1 plane.
    HyperbolicPlane,
    /// f = eʳ: a constant-curvature −1 funnel (no pole; circles have
    /// vanishing stability operator).
    Exponential,
    /// f = k^{−1/2} sin(√k r): the sphere of curvature k > 0.
    Sphere(f64),
}

impl RadialMetricFns for ClosedMetric {
    fn g(&self, r: f64) -> f64 {
        match self {
            ClosedMetric::Euclidean => r,
            ClosedMetric::HyperbolicPlane => r.sinh(),
            ClosedMetric::Exponential => r.exp(),
            ClosedMetric::Sphere(k) => (k.sqrt() * r).sin() / k.sqrt(),
        }
    }

    fn g_prime(&self, r: f64) -> f64 {
        match self {
            ClosedMetric::Euclidean => 1.0,
            ClosedMetric::HyperbolicPlane => r.cosh(),
            ClosedMetric::Exponential => r.exp(),
            ClosedMetric::Sphere(k) => (k.sqrt() * r).cos(),
        }
    }

    fn g_second(&self, r: f64) -> f64 {
        match self {
            ClosedMetric::Euclidean => 0.0,
            ClosedMetric::HyperbolicPlane => r.sinh(),
            ClosedMetric::Exponential => r.exp(),
            ClosedMetric::Sphere(k) => -k.sqrt() * (k.sqrt() * r).sin(),
        }
    }

    fn g_antider(&self, r: f64) -> f64 {
        match self {
            ClosedMetric::Euclidean => 0.5 * r * r,
            ClosedMetric::HyperbolicPlane => r.cosh() - 1.0,
            ClosedMetric::Exponential => r.exp() - 1.0,
            ClosedMetric::Sphere(k) => (1.0 - (k.sqrt() * r).cos()) / k,
        }
    }
}

impl RadialMetricFns for RevolutionSurface {
    fn g(&self, r: f64) -> f64 {
        self.f_jet(r).0
    }

    fn g_prime(&self, r: f64) -> f64 {
        self.f_jet(r).1
    }

    fn g_second(&self, r: f64) -> f64 {
        self.f_jet(r).2
    }

    fn g_antider(&self, r: f64) -> f64 {
        self.v_at(r) / (2.0 * PI)
    }
}

/// Geodesic curvature of the radial graph θ ↦ (ρ(θ), θ), oriented so
/// circles around the pole have κ = f′/f > 0:
///
///   κ = (−fρ″ + f′f² + 2f′ρ′²) / (f² + ρ′²)^{3/2},   f = f(ρ).
///
/// The first variation of length under a radial perturbation φ is
/// ∫κφ f dθ, which is what the finite-difference oracle checks.
pub fn geodesic_curvature<M: RadialMetricFns + ?Sized>(
    m: &M,
    rho: f64,
    rho_p: f64,
    rho_pp: f64,
) -> f64 {
    let f = m.g(rho);
    let fp = m.g_prime(rho);
    let w = (f * f + rho_p * rho_p).sqrt();
    (-f * rho_pp + fp * f * f + 2.0 * fp * rho_p * rho_p) / (w * w * w)
}

/// Length ∮√(f(ρ)² + ρ′²) dθ of a radial graph; `curve(θ) = (ρ, ρ′)`.
/// Periodic trapezoid rule, spectrally accurate for smooth curves.
pub fn curve_length<M, C>(m: &M, curve: &C, n: usize) -> f64
where
    M: RadialMetricFns + ?Sized,
    C: Fn(f64) -> (f64, f64),
{
    quad::trapezoid_periodic(
        &|t| {
            let (rho, rho_p) = curve(t);
            let f = m.g(rho);
            (f * f + rho_p * rho_p).sqrt()
        },
        n,
    )
}

/// Area ∮G(ρ) dθ enclosed by a radial graph around the pole.
pub fn enclosed_area<M, C>(m: &M, curve: &C, n: usize) -> f64
where
    M: RadialMetricFns + ?Sized,
    C: Fn(f64) -> (f64, f64),
{
    quad::trapezoid_periodic(&|t| m.g_antider(curve(t).0), n)
}

/// Stability coefficient of the circle at radius r: the second variation
/// of length at fixed area on Fourier mode m has sign m² − q with
///
///   q(r) = f′(r)² − f″(r)f(r),
///
/// so every nonconstant mode is strictly stable iff q < 1.
pub fn circle_q<M: RadialMetricFns + ?Sized>(m: &M, r: f64) -> f64 {
    let f = m.g(r);
    m.g_prime(r).powi(2) - m.g_second(r) * f
}

/// Distance from q to the spectrum {m² : m ≥ 1} of the circle Laplacian,
/// and the mode attaining it. Zero margin means a resonant (neutral)
/// direction for the circle's stability operator.
pub fn resonance_margin(q: f64) -> (u32, f64) {
    let center = q.max(0.0).sqrt().round().max(1.0) as u32;
    let mut best = (center, f64::INFINITY);
    for m in center.saturating_sub(1).max(1)..=center + 1 {
        let d = (q - (m as f64) * (m as f64)).abs();
        if d < best.1 {
            best = (m, d);
        }
    }
    best
}

/// Stability data scanned over every node circle of a surface.
#[derive(Debug, Clone, Copy)]
pub struct StabilityScan {
    pub q_min: f64,
    pub q_max: f64,
    /// True iff q < 1 at every node: all nonconstant modes positive.
    pub strictly_stable: bool,
    /// Smallest distance from any node's q to the spectrum {m²}.
    pub min_margin: f64,
    /// Mode attaining `min_margin`.
    pub resonant_mode: u32,
}

pub fn stability_scan(s: &RevolutionSurface) -> StabilityScan {
    let (rs, _, _) = s.nodes();
    let mut out = StabilityScan {
        q_min: f64::INFINITY,
        q_max: f64::NEG_INFINITY,
        strictly_stable: true,
        min_margin: f64::INFINITY,
        resonant_mode: 1,
    };
    for &r in rs {
        let q = circle_q(s, r);
        out.q_min = out.q_min.min(q);
        out.q_max = out.q_max.max(q);
        if q >= 1.0 {
            out.strictly_stable = false;
        }
        let (mode, margin) = resonance_margin(q);
        if margin < out.min_margin {
            out.min_margin = margin;
            out.resonant_mode = mode;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::close;

    fn sup_rel_profile_error(p: &Profile, truth: &Profile, v_lo: f64, v_hi: f64) -> f64 {
        let mut worst: f64 = 0.0;
        let n = 400;
        for i in 0..=n {
            let v = v_lo * (v_hi / v_lo).powf(i as f64 / n as f64);
            let a = p.i(v);
            let b = truth.i(v);
            worst = worst.max((a - b).abs() / b);
        }
        worst
    }

    #[test]
    fn flat_profile_reconstructs_flat_metric() {
        let s = metric_from_profile(&Profile::Euclidean, 10.0).unwrap();
        // f(r) = r and V(r) = πr².
        for &r in &[0.001, 0.3, 1.0, (10.0 / PI).sqrt() * 0.99] {
            assert!(close(s.f_at(r), r, 1e-9, 1e-12), "f at {r}");
            assert!(close(s.v_at(r), PI * r * r, 1e-9, 1e-12), "V at {r}");
        }
        let back = profile_from_metric(&s).unwrap();
        assert!(sup_rel_profile_error(&back, &Profile::Euclidean, 1e-6, 9.99) < 1e-8);
    }

    #[test]
    fn hyperbolic_roundtrip_and_inverse() {
        let v_max = 2.0 * PI * (3.0_f64.cosh() - 1.0);
        let s = metric_from_profile(&Profile::Hyperbolic, v_max).unwrap();
        for &v in &[1e-6, 1e-3, 0.5, 10.0, v_max * 0.999] {
            let r = s.r_of_v(v).unwrap();
            assert!(close(s.f_at(r), r.sinh(), 1e-8, 1e-12), "f at v={v}");
            assert!(close(s.v_at(r), v, 1e-12, 1e-15), "v_at∘r_of_v at {v}");
        }
        let back = profile_from_metric(&s).unwrap();
        assert!(sup_rel_profile_error(&back, &Profile::Hyperbolic, 1e-6, v_max * 0.999) < 1e-8);
    }

    #[test]
    fn sphere_metric_recovers_bol_fiala_profile() {
        let k = 2.0;
        let m = ClosedMetric::Sphere(k);
        let r_max = 0.98 * PI / k.sqrt();
        let s = RevolutionSurface::from_functions(
            |r| m.g(r),
            |r| m.g_prime(r),
            |r| m.g_second(r),
            r_max,
            1200,
        )
        .unwrap();
        // V(r) = 2π(1 − cos(√k r))/k.
        assert!(close(s.v_max(), 2.0 * PI * m.g_antider(r_max), 1e-10, 0.0));
        let p = profile_from_metric(&s).unwrap();
        let truth = Profile::ConstantCurvature(k);
        assert!(sup_rel_profile_error(&p, &truth, 1e-5, s.v_max() * 0.999) < 1e-6);
    }

    #[test]
    fn curvature_identity_links_metric_and_profile() {
        // K(r) = −f″/f must equal −½H″(V(r)) for the reconstructed metric.
        let v_max = 2.0 * PI * (3.0_f64.cosh() - 1.0);
        for (p, want) in [(&Profile::Hyperbolic, -1.0), (&Profile::Euclidean, 0.0)] {
            let s = metric_from_profile(p, v_max.min(p.v_max() * 0.5).min(40.0)).unwrap();
            for i in 0..40 {
                let r = s.r_min() + (s.r_max() - s.r_min()) * (i as f64 + 0.5) / 40.0;
                let k_metric = s.curvature_at(r);
                let k_profile = p.curvature(s.v_at(r));
                assert!((k_metric - want).abs() < 1e-4, "K at r={r}: {k_metric}");
                assert!((k_metric - k_profile).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn origin_anchor_gate_rejects_cusp_profiles() {
        match metric_from_profile(&Profile::Linear, 5.0) {
            Err(Error::BadOrigin(_)) => {}
            other => panic!("expected BadOrigin, got {other:?}"),
        }
        match metric_from_profile(&Profile::VLogV, 5.0) {
            Err(Error::BadOrigin(_)) => {}
            other => panic!("expected BadOrigin, got {other:?}"),
        }
        // Domain end guard: the sphere profile closes at 4π/k.
        match metric_from_profile(&Profile::ConstantCurvature(1.0), 4.0 * PI) {
            Err(Error::BadParameters(_)) => {}
            other => panic!("expected BadParameters, got {other:?}"),
        }
    }

    #[test]
    fn nonpositive_warping_is_rejected() {
        let out = RevolutionSurface::from_functions(
            |r| 1.0 - r,
            |_| -1.0,
            |_| 0.0,
            2.0,
            64,
        );
        match out {
            Err(Error::NonPositiveProfile(_)) => {}
            other => panic!("expected NonPositiveProfile, got {other:?}"),
        }
    }

    #[test]
    fn circle_curvature_closed_forms() {
        // Circles: κ = f′/f.
        let e = ClosedMetric::Euclidean;
        assert!(close(geodesic_curvature(&e, 2.0, 0.0, 0.0), 0.5, 1e-15, 0.0));
        let h = ClosedMetric::HyperbolicPlane;
        let r0 = 1.3;
        assert!(close(
            geodesic_curvature(&h, r0, 0.0, 0.0),
            r0.cosh() / r0.sinh(),
            1e-14,
            0.0
        ));
        // Off-center unit-speed checks: a Euclidean straight line through
        // (d, 0) has ρ(θ) = d secθ and zero geodesic curvature.
        let d = 0.7;
        for &t in &[0.0_f64, 0.4, -0.9] {
            let rho = d / t.cos();
            let rho_p = d * t.tan() / t.cos();
            let rho_pp = d * (t.tan().powi(2) / t.cos() + 1.0 / t.cos().powi(3));
            let kappa = geodesic_curvature(&e, rho, rho_p, rho_pp);
            assert!(kappa.abs() < 1e-13, "line curvature {kappa} at θ={t}");
        }
    }

    #[test]
    fn offcenter_euclidean_circle_has_curvature_one_over_radius() {
        // Circle of radius a centered at distance c: solve for ρ(θ) on the
        // near branch and check κ = 1/a pointwise.
        let (c, a) = (1.0, 0.5);
        let e = ClosedMetric::Euclidean;
        for i in 0..12 {
            let t = -0.45 + 0.08 * i as f64;
            // ρ² − 2ρc cosθ + c² − a² = 0, near root.
            let disc = (c * t.cos()).powi(2) - (c * c - a * a);
            let rho = c * t.cos() + disc.sqrt();
            // Implicit derivatives.
            let rho_p = -rho * c * t.sin() / (rho - c * t.cos());
            let rho_pp = (-2.0 * rho_p * c * t.sin() - rho * c * t.cos() - rho_p * rho_p)
                / (rho - c * t.cos());
            let kappa = geodesic_curvature(&e, rho, rho_p, rho_pp);
            assert!(close(kappa, 1.0 / a, 1e-12, 0.0), "κ={kappa} at θ={t}");
        }
    }

    #[test]
    fn length_and_area_of_circles() {
        let e = ClosedMetric::Euclidean;
        let circle = |_t: f64| (1.0, 0.0);
        assert!(close(curve_length(&e, &circle, 256), 2.0 * PI, 1e-13, 0.0));
        assert!(close(enclosed_area(&e, &circle, 256), PI, 1e-13, 0.0));
        let h = ClosedMetric::HyperbolicPlane;
        let r0 = 0.8;
        let hc = |_t: f64| (r0, 0.0);
        assert!(close(curve_length(&h, &hc, 256), 2.0 * PI * r0.sinh(), 1e-13, 0.0));
        assert!(close(
            enclosed_area(&h, &hc, 256),
            2.0 * PI * (r0.cosh() - 1.0),
            1e-13,
            0.0
        ));
    }

    #[test]
    fn stability_hand_values() {
        // f = eʳ: q ≡ 0, margin 1 to the first mode.
        let q_exp = circle_q(&ClosedMetric::Exponential, 1.7);
        assert!(close(q_exp, 0.0, 0.0, 1e-14));
        assert_eq!(resonance_margin(q_exp), (1, 1.0));
        // f = sinh r and f = r and the sphere: q ≡ 1, resonant at m = 1
        // (the translational directions).
        for q in [
            circle_q(&ClosedMetric::HyperbolicPlane, 0.9),
            circle_q(&ClosedMetric::Euclidean, 2.4),
            circle_q(&ClosedMetric::Sphere(3.0), 0.5),
        ] {
            assert!(close(q, 1.0, 1e-13, 0.0));
            let (mode, margin) = resonance_margin(q);
            assert_eq!(mode, 1);
            assert!(margin < 1e-12);
        }
    }

    #[test]
    fn stability_scan_flags_resonance_of_round_metrics() {
        let s = metric_from_profile(&Profile::Hyperbolic, 30.0).unwrap();
        let scan = stability_scan(&s);
        assert!(scan.min_margin < 1e-6, "margin {}", scan.min_margin);
        assert_eq!(scan.resonant_mode, 1);
        assert!((scan.q_min - 1.0).abs() < 1e-6 && (scan.q_max - 1.0).abs() < 1e-6);
    }

    #[test]
    fn surface_implements_radial_metric_fns() {
        let s = metric_from_profile(&Profile::Hyperbolic, 30.0).unwrap();
        let r0 = 1.1;
        assert!(close(s.g(r0), r0.sinh(), 1e-8, 0.0));
        assert!(close(s.g_prime(r0), r0.cosh(), 1e-8, 0.0));
        assert!(close(s.g_antider(r0), r0.cosh() - 1.0, 1e-8, 1e-10));
        let kappa = geodesic_curvature(&s, r0, 0.0, 0.0);
        assert!(close(kappa, r0.cosh() / r0.sinh(), 1e-8, 0.0));
    }
}
