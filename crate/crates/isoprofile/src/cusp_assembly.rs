//! Constant-curvature −1 annuli, singular pants gluing, and sublevel
//! areas, plus the local double-cover model at a cone point.
//!
//! Every edge of a weighted level graph is realized as an annulus
//! A_{τ,c,c′} carrying the level function u ∈ [c, c′]: the circle at
//! level t has length τt, the area between levels is τ·Δt, and the metric
//! has curvature −1 with ‖∇u‖ = u. At a vertex the lone-side circle
//! exactly matches the two opposite-side circles joined at one point,
//! producing a cone point of angle 4π. Taken together the per-level
//! length sums are the weights scaled by u, so the area of {u ≤ t} is
//! exactly t: that identity is this module's central check.

use crate::error::{Error, Result};
use crate::exact::{rat_to_f64, rat_to_string, Ext, Rat};
use crate::level_graph::{Endpoint, LevelGraph, Renormalization, Weighting};
use crate::numerics::quad;
use crate::report;
use num::complex::Complex64;
use num::traits::Zero;
use serde::Serialize;
use std::f64::consts::LN_2;

/// Hyperbolic annulus A_{τ,c,c′}: the region c ≤ u ≤ c′ of the model
/// metric with circumference parameter τ. `lo` = c (0 encodes a cusp
/// end), `hi` = c′ (∞ encodes an anticusp end).
#[derive(Debug, Clone)]
pub struct Annulus {
    pub tau: Rat,
    pub lo: Rat,
    pub hi: Ext,
}

/// Closed-form geometry of an annulus.
#[derive(Debug, Clone)]
pub struct AnnulusGeometry {
    /// τ(c′−c); infinite exactly for an anticusp.
    pub area: Ext,
    /// Boundary circle at u = c, absent for a cusp (c = 0).
    pub boundary_lo: Option<Rat>,
    /// Boundary circle at u = c′, absent for an anticusp.
    pub boundary_hi: Option<Rat>,
    /// log(c′/c); infinite for cusps and anticusps.
    pub height: f64,
}

impl Annulus {
    pub fn new(tau: Rat, lo: Rat, hi: Ext) -> Result<Self> {
        if tau <= Rat::zero() {
            return Err(Error::BadParameters("annulus needs tau > 0".into()));
        }
        if lo < Rat::zero() || Ext::finite(lo.clone()) >= hi {
            return Err(Error::BadParameters(
                "annulus needs 0 <= c < c'".into(),
            ));
        }
        Ok(Annulus { tau, lo, hi })
    }

    /// Length of the level circle {u = t}, if t lies in [c, c′].
    pub fn circle_length_at(&self, t: &Rat) -> Option<Rat> {
        if *t >= self.lo && Ext::finite(t.clone()) <= self.hi {
            Some(&self.tau * t)
        } else {
            None
        }
    }

    /// Exact area of this annulus below level t: τ·|[c, c′] ∩ (0, t]|.
    pub fn area_below(&self, t: &Rat) -> Rat {
        let hi = match &self.hi {
            Ext::Finite(h) => h.min(t).clone(),
            Ext::Inf => t.clone(),
        };
        let lo = self.lo.clone().min(t.clone());
        if hi > lo {
            &self.tau * (hi - lo)
        } else {
            Rat::zero()
        }
    }

    /// Same computation performed entirely in floating point.
    pub fn area_below_f64(&self, t: f64) -> f64 {
        let hi = self.hi.to_f64().min(t);
        let lo = rat_to_f64(&self.lo).min(t);
        (self.tau_f64() * (hi - lo)).max(0.0)
    }

    pub fn tau_f64(&self) -> f64 {
        rat_to_f64(&self.tau)
    }

    /// The normalization isometry A_{τ,c,c′} ≅ A_{cτ,1,c′/c}; needs c > 0.
    pub fn normalized(&self) -> Result<Annulus> {
        if self.lo <= Rat::zero() {
            return Err(Error::BadParameters(
                "cannot normalize a cusp (c = 0)".into(),
            ));
        }
        let inv = Rat::new(self.lo.denom().clone(), self.lo.numer().clone());
        Annulus::new(
            &self.tau * &self.lo,
            Rat::new(1.into(), 1.into()),
            self.hi.scale(&inv),
        )
    }
}

/// Area, boundary lengths, and height of an annulus in closed form.
pub fn annulus_geometry(a: &Annulus) -> AnnulusGeometry {
    let area = a.hi.sub(&Ext::finite(a.lo.clone())).scale(&a.tau);
    let boundary_lo = if a.lo > Rat::zero() {
        Some(&a.tau * &a.lo)
    } else {
        None
    };
    let boundary_hi = a.hi.as_finite().map(|h| &a.tau * h);
    let height = if a.lo.is_zero() {
        f64::INFINITY
    } else {
        match &a.hi {
            Ext::Inf => f64::INFINITY,
            Ext::Finite(h) => rat_to_f64(&(h / &a.lo)).ln(),
        }
    };
    AnnulusGeometry { area, boundary_lo, boundary_hi, height }
}

/// Gluing record at one vertex: the lone-side circle is split at the
/// marked point (arc coordinate 0) into two sub-arcs matching the two
/// opposite-side circles, which touch there and form the 4π cone point.
#[derive(Debug, Clone)]
pub struct SingularVertex {
    pub id: String,
    pub value: i64,
    /// Renormalized level value at the vertex.
    pub u: Rat,
    /// The edge alone on its side of the vertex (the in-edge of a split,
    /// the out-edge of a merge) and its circle length.
    pub single_edge: usize,
    pub single_length: Rat,
    /// The two edges on the opposite side and their circle lengths; these
    /// are the sub-arc lengths on the single circle.
    pub double_edges: [usize; 2],
    pub double_lengths: [Rat; 2],
    /// Total angle at the cone point. 4π by construction.
    pub cone_angle: f64,
}

/// The assembled singular surface: one annulus per edge, one cone point
/// per vertex, immutable after construction. All queries are pure.
#[derive(Debug, Clone)]
pub struct SingularSurface {
    annuli: Vec<Annulus>,
    vertices: Vec<SingularVertex>,
    nu: u32,
}

/// Realize a weighted, renormalized level graph as a singular surface.
///
/// Boundary-length matching at each vertex is a theorem of the
/// construction (circle lengths are weight·u and weights are conserved);
/// it is nevertheless re-verified in exact arithmetic, and a mismatch
/// reports `GluingMismatch`, which indicates a bug upstream.
pub fn assemble_surface(
    g: &LevelGraph,
    w: &Weighting,
    r: &Renormalization,
) -> Result<SingularSurface> {
    if w.weights.len() != g.edges().len() || r.exponents.len() != g.vertices().len() {
        return Err(Error::BadParameters(
            "weighting/renormalization do not match the graph".into(),
        ));
    }

    let u_of = |ep: Endpoint| -> Ext {
        match ep {
            Endpoint::NegInf => Ext::zero(),
            Endpoint::PosInf => Ext::Inf,
            Endpoint::Vertex(i) => Ext::finite(r.value(i)),
        }
    };

    let mut annuli = Vec::with_capacity(g.edges().len());
    for (k, e) in g.edges().iter().enumerate() {
        let lo = match u_of(e.src) {
            Ext::Finite(x) => x,
            Ext::Inf => unreachable!("validated orientation"),
        };
        let hi = u_of(e.dst);
        annuli.push(Annulus::new(w.weights[k].clone(), lo, hi)?);
    }

    let mut vertices = Vec::with_capacity(g.vertices().len());
    for (i, v) in g.vertices().iter().enumerate() {
        let u = r.value(i);
        let (ins, outs) = g.incident(i);
        let (single, pair) = match (ins.len(), outs.len()) {
            (1, 2) => (ins[0], [outs[0], outs[1]]),
            (2, 1) => (outs[0], [ins[0], ins[1]]),
            _ => unreachable!("validated trivalence"),
        };
        let len = |e: usize| -> Result<Rat> {
            annuli[e].circle_length_at(&u).ok_or_else(|| {
                Error::GluingMismatch(format!(
                    "edge {e} has no circle at the level of vertex {:?}",
                    v.id
                ))
            })
        };
        let single_length = len(single)?;
        let double_lengths = [len(pair[0])?, len(pair[1])?];
        if single_length != &double_lengths[0] + &double_lengths[1] {
            return Err(Error::GluingMismatch(format!(
                "vertex {:?}: circle {} != {} + {}",
                v.id,
                rat_to_string(&single_length),
                rat_to_string(&double_lengths[0]),
                rat_to_string(&double_lengths[1]),
            )));
        }
        vertices.push(SingularVertex {
            id: v.id.clone(),
            value: v.value,
            u,
            single_edge: single,
            single_length,
            double_edges: pair,
            double_lengths,
            cone_angle: 4.0 * std::f64::consts::PI,
        });
    }

    Ok(SingularSurface { annuli, vertices, nu: r.nu })
}

impl SingularSurface {
    pub fn annuli(&self) -> &[Annulus] {
        &self.annuli
    }

    pub fn singular_vertices(&self) -> &[SingularVertex] {
        &self.vertices
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    /// Exact area of the sublevel set {u ≤ t}. Equal to t whenever
    /// 0 ≤ t; the identity is verified in tests, not assumed here.
    pub fn sublevel_area_exact(&self, t: &Rat) -> Rat {
        self.annuli
            .iter()
            .map(|a| a.area_below(t))
            .fold(Rat::zero(), |acc, x| acc + x)
    }

    /// Floating-point sublevel area (an independent rounding path used to
    /// cross-check the exact one).
    pub fn sublevel_area(&self, t: f64) -> f64 {
        self.annuli.iter().map(|a| a.area_below_f64(t)).sum()
    }

    /// Exact area of the band {s < u ≤ t}; `s ≤ t` required.
    pub fn band_area_exact(&self, s: &Rat, t: &Rat) -> Result<Rat> {
        if s > t {
            return Err(Error::NotSublevel(format!(
                "band needs s <= t, got s = {}, t = {}",
                rat_to_string(s),
                rat_to_string(t)
            )));
        }
        Ok(self.sublevel_area_exact(t) - self.sublevel_area_exact(s))
    }

    /// Injectivity-radius proxy at a cone point: half the shortest
    /// adjacent annulus height, capped at log 2. Renormalized level gaps
    /// have height ≥ 20·log 2, so the cap is what binds in practice.
    pub fn chart_radius(&self, vertex: usize) -> f64 {
        let v = &self.vertices[vertex];
        let mut h = f64::INFINITY;
        for e in [v.single_edge, v.double_edges[0], v.double_edges[1]] {
            h = h.min(annulus_geometry(&self.annuli[e]).height);
        }
        LN_2.min(0.5 * h)
    }

    /// Evaluate the local double-cover model at this cone point.
    pub fn model_at(&self, vertex: usize, z: Complex64) -> Result<ModelEval> {
        let u_p = rat_to_f64(&self.vertices[vertex].u);
        singular_model_eval(u_p, z, self.chart_radius(vertex))
    }

    pub fn to_dump(&self) -> SurfaceDump {
        let edges = self
            .annuli
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let geo = annulus_geometry(a);
                EdgeDump {
                    edge: k,
                    weight: rat_to_string(&a.tau),
                    c: rat_to_string(&a.lo),
                    c_prime: a.hi.to_string(),
                    area: match &geo.area {
                        Ext::Finite(x) => rat_to_string(x),
                        Ext::Inf => "inf".into(),
                    },
                    area_f64: geo.area.to_f64(),
                }
            })
            .collect();
        let vertices = self
            .vertices
            .iter()
            .map(|v| VertexDump {
                id: v.id.clone(),
                u: rat_to_string(&v.u),
                u_f64: rat_to_f64(&v.u),
                single_edge: v.single_edge,
                single_length: rat_to_string(&v.single_length),
                double_edges: v.double_edges,
                double_lengths: [
                    rat_to_string(&v.double_lengths[0]),
                    rat_to_string(&v.double_lengths[1]),
                ],
                cone_angle: v.cone_angle,
            })
            .collect();
        SurfaceDump { nu: self.nu, edges, vertices }
    }

    /// Deterministic JSON dump (17-digit floats, exact values as strings).
    pub fn to_json(&self) -> Result<String> {
        report::to_json_string(&self.to_dump())
    }

    /// CSV of (t, sublevel_area) over the given levels, floating path.
    pub fn sublevel_csv(&self, ts: &[f64]) -> Result<String> {
        let rows: Vec<Vec<f64>> = ts
            .iter()
            .map(|&t| vec![t, self.sublevel_area(t)])
            .collect();
        report::csv_string(&["t", "sublevel_area"], &rows)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceDump {
    pub nu: u32,
    pub edges: Vec<EdgeDump>,
    pub vertices: Vec<VertexDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeDump {
    pub edge: usize,
    pub weight: String,
    pub c: String,
    pub c_prime: String,
    pub area: String,
    pub area_f64: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexDump {
    pub id: String,
    pub u: String,
    pub u_f64: f64,
    pub single_edge: usize,
    pub single_length: String,
    pub double_edges: [usize; 2],
    pub double_lengths: [String; 2],
    pub cone_angle: f64,
}

/// Pointwise data of the local model at a cone point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModelEval {
    /// Model level function w₀(z) = u_p·|z²−i|²/(1−|z|⁴).
    pub w0: f64,
    /// Conformal factor λ(z) = 16|z|²(1−|z|⁴)^{−2} of g₀ = λ|dz|².
    pub conformal_factor: f64,
    /// Finite-difference Gaussian curvature of g₀; −1 away from 0.
    pub fd_curvature: f64,
    /// Finite-difference |∇w₀|_{g₀} / w₀; 1 away from 0.
    pub grad_ratio: f64,
}

/// w₀(z) = u_p·|z²−i|²/(1−|z|⁴); defined for |z| < 1, w₀(0) = u_p.
pub fn model_w0(u_p: f64, z: Complex64) -> f64 {
    let r2 = z.norm_sqr();
    u_p * (z * z - Complex64::i()).norm_sqr() / (1.0 - r2 * r2)
}

/// Conformal factor λ(z) = 16|z|²(1−|z|⁴)^{−2} of the model metric.
/// This is the pullback of the curvature −1 disk metric under z ↦ z²,
/// i.e. a double cover branched at 0: the cone point of angle 4π.
pub fn model_conformal_factor(z: Complex64) -> f64 {
    let r2 = z.norm_sqr();
    let d = 1.0 - r2 * r2;
    16.0 * r2 / (d * d)
}

/// Chart radius in the z-coordinate for a model radius parameter r:
/// the chart is |z| < √(tanh min(r, log 2)).
pub fn model_chart_radius(r: f64) -> f64 {
    r.min(LN_2).tanh().sqrt()
}

/// Evaluate the cone-point model at z with finite-difference diagnostics.
///
/// The diagnostics check the two defining identities away from the cone
/// point: Gaussian curvature −1 and ‖∇w₀‖ = w₀ in the model metric.
/// `r` is the chart radius parameter (capped at log 2); z must satisfy
/// 0 < |z| < √(tanh r).
pub fn singular_model_eval(u_p: f64, z: Complex64, r: f64) -> Result<ModelEval> {
    if !(u_p > 0.0) || !(r > 0.0) {
        return Err(Error::BadParameters(
            "model needs u_p > 0 and chart radius > 0".into(),
        ));
    }
    let rz = z.norm();
    let rmax = model_chart_radius(r);
    if rz == 0.0 || rz >= rmax {
        return Err(Error::OutOfChart(format!(
            "|z| = {rz:.6} outside (0, {rmax:.6})"
        )));
    }

    let w0 = model_w0(u_p, z);
    let lambda = model_conformal_factor(z);

    // Step small enough for accuracy, kept clear of the chart edge and
    // the cone point so all stencil points are evaluable.
    let h = 1e-4_f64.min(0.2 * (rmax - rz)).min(0.2 * rz);

    // K = −Δ(½ log λ)/λ for a conformal metric λ|dz|², flat Laplacian.
    let half_log_lambda = |p: Complex64| 0.5 * model_conformal_factor(p).ln();
    let lap = (half_log_lambda(z + h) + half_log_lambda(z - h)
        + half_log_lambda(z + Complex64::new(0.0, h))
        + half_log_lambda(z - Complex64::new(0.0, h))
        - 4.0 * half_log_lambda(z))
        / (h * h);
    let fd_curvature = -lap / lambda;

    // |∇w₀|_{g₀} = |∇w₀|_eucl / √λ.
    let wx = (model_w0(u_p, z + h) - model_w0(u_p, z - h)) / (2.0 * h);
    let wy = (model_w0(u_p, z + Complex64::new(0.0, h))
        - model_w0(u_p, z - Complex64::new(0.0, h)))
        / (2.0 * h);
    let grad_ratio = wx.hypot(wy) / (lambda.sqrt() * w0);

    Ok(ModelEval { w0, conformal_factor: lambda, fd_curvature, grad_ratio })
}

/// Hyperbolic distance from the cone point to |z| = ρ in the model
/// metric, in closed form: log((1+ρ²)/(1−ρ²)).
pub fn model_radial_distance(rho: f64) -> f64 {
    ((1.0 + rho * rho) / (1.0 - rho * rho)).ln()
}

/// Total angle at the cone point measured numerically: the circumference
/// of {|z| = ρ} divided by sinh of its geodesic distance from 0 (the
/// curvature −1 circumference law). Equals 4π exactly in closed form;
/// the numeric value uses quadrature for both ingredients.
pub fn cone_angle_numeric(rho: f64) -> Result<f64> {
    if !(0.0 < rho && rho * rho < 1.0) {
        return Err(Error::OutOfChart(format!("rho = {rho} outside (0, 1)")));
    }
    let circumference =
        quad::trapezoid_periodic(&|_t| model_conformal_factor(Complex64::from(rho)).sqrt() * rho, 64);
    let dist = quad::adaptive(
        &|s: f64| model_conformal_factor(Complex64::from(s)).sqrt(),
        0.0,
        rho,
        1e-12,
        1e-14,
    )?;
    Ok(circumference / dist.sinh())
}
