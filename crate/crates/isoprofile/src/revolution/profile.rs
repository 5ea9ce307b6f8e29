//! Isoperimetric profile functions I(v), stored through their square
//! H(v) = I²(v).
//!
//! H is the smooth object (I has a √v singularity at v = 0 for caps), so
//! closed forms and interpolants all work on H and expose the jet
//! (H, H′, H″). Curvature of the associated surface of revolution is
//! K = −½H″(v); the smooth-pole anchor is H′(0) = 4π.

use crate::error::{Error, Result};
use crate::numerics::interp;
use crate::report;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// The jet of H = I² at a point: value and first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub h: f64,
    pub h1: f64,
    pub h2: f64,
}

impl Jet {
    pub fn i(&self) -> f64 {
        self.h.max(0.0).sqrt()
    }

    /// Gauss curvature of the matching surface of revolution, −½H″.
    pub fn curvature(&self) -> f64 {
        -0.5 * self.h2
    }
}

/// A profile function, closed-form or interpolated.
#[derive(Debug, Clone)]
pub enum Profile {
    /// Flat plane: I = √(4πv), H = 4πv.
    Euclidean,
    /// Curvature −1 plane: I = √(v² + 4πv).
    Hyperbolic,
    /// Constant curvature k: H = 4πv − kv² (the Bol–Fiala comparison
    /// profile J_k; domain v ∈ [0, 4π/k] for k > 0).
    ConstantCurvature(f64),
    /// Cusp profile I(v) = v, H = v².
    Linear,
    /// I = v near 0 blending into I = v·log v; convex by construction.
    VLogV,
    /// Cap profile: quintic H on [0, δ], then I(v) = v beyond.
    Cap(CapData),
    /// C² piecewise-quintic interpolant on a grid.
    Grid(GridProfile),
    /// Pointwise min of cap profiles up to a seam, ambient profile after.
    Merged(MergedProfile),
}

/// Closed-form cap data: H is a single quintic on [0, δ] anchored by
/// (0, 4π, −2k) at 0 and (δ², 2δ, 2) at δ, then H = v² for v > δ.
#[derive(Debug, Clone, Copy)]
pub struct CapData {
    pub delta: f64,
    pub alpha: f64,
    pub k: f64,
    /// Monomial coefficients of the quintic in v.
    pub coeffs: [f64; 6],
}

#[derive(Debug, Clone)]
pub struct MergedProfile {
    pub caps: Vec<Profile>,
    pub ambient: Box<Profile>,
    /// Seam m·δ: min of caps below, ambient above.
    pub seam: f64,
}

/// Quintic-interpolated grid profile of H with explicit node jets.
#[derive(Debug, Clone)]
pub struct GridProfile {
    vs: Vec<f64>,
    jets: Vec<Jet>,
    /// Per-interval monomial coefficients in (v − v_i).
    coeffs: Vec<[f64; 6]>,
    /// Start anchors d1 = H′(0), d2 = H″(0).
    pub d1: f64,
    pub d2: f64,
}

impl GridProfile {
    /// Build from explicit jets at strictly increasing nodes.
    pub fn from_jets(vs: Vec<f64>, jets: Vec<Jet>) -> Result<GridProfile> {
        if vs.len() < 2 || vs.len() != jets.len() {
            return Err(Error::BadParameters(
                "grid profile needs >= 2 nodes with matching jets".into(),
            ));
        }
        if vs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::BadParameters(
                "grid profile nodes must strictly increase".into(),
            ));
        }
        let coeffs = (0..vs.len() - 1)
            .map(|i| {
                interp::quintic_coeffs(
                    vs[i],
                    vs[i + 1],
                    (jets[i].h, jets[i].h1, jets[i].h2),
                    (jets[i + 1].h, jets[i + 1].h1, jets[i + 1].h2),
                )
            })
            .collect();
        let (d1, d2) = (jets[0].h1, jets[0].h2);
        Ok(GridProfile { vs, jets, coeffs, d1, d2 })
    }

    /// Build from plain (v, H) nodes, estimating derivative jets by
    /// central finite differences; the v = 0 end takes its jet from the
    /// anchors (d1, d2) when the grid starts at 0.
    pub fn from_nodes(vs: Vec<f64>, hs: Vec<f64>, d1: f64, d2: f64) -> Result<GridProfile> {
        if vs.len() < 3 || vs.len() != hs.len() {
            return Err(Error::BadParameters(
                "grid profile needs >= 3 (v, I2) nodes".into(),
            ));
        }
        let n = vs.len();
        let mut jets = Vec::with_capacity(n);
        for i in 0..n {
            let (h1, h2) = if i == 0 && vs[0] == 0.0 {
                (d1, d2)
            } else if i == 0 {
                one_sided_jet(&vs, &hs, 0)
            } else if i == n - 1 {
                one_sided_jet(&vs, &hs, n - 1)
            } else {
                central_jet(&vs, &hs, i)
            };
            jets.push(Jet { h: hs[i], h1, h2 });
        }
        GridProfile::from_jets(vs, jets)
    }

    pub fn v_max(&self) -> f64 {
        *self.vs.last().expect("nonempty grid")
    }

    pub fn nodes(&self) -> (&[f64], &[Jet]) {
        (&self.vs, &self.jets)
    }

    fn eval(&self, v: f64) -> Jet {
        let i = match self.vs.binary_search_by(|x| x.partial_cmp(&v).unwrap()) {
            Ok(i) => i.min(self.coeffs.len() - 1),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.coeffs.len() - 1),
        };
        let (h, h1, h2) = interp::poly_eval2(&self.coeffs[i], v - self.vs[i]);
        Jet { h, h1, h2 }
    }
}

/// Three-point nonuniform central difference jet at interior node i.
fn central_jet(vs: &[f64], hs: &[f64], i: usize) -> (f64, f64) {
    let (x0, x1, x2) = (vs[i - 1], vs[i], vs[i + 1]);
    let (y0, y1, y2) = (hs[i - 1], hs[i], hs[i + 1]);
    let (a, b) = (x1 - x0, x2 - x1);
    let d1 = (b / (a * (a + b))) * (y1 - y0) + (a / (b * (a + b))) * (y2 - y1);
    let d2 = 2.0 * ((y2 - y1) / b - (y1 - y0) / a) / (a + b);
    (d1, d2)
}

/// Quadratic-fit one-sided jet at an end node.
fn one_sided_jet(vs: &[f64], hs: &[f64], i: usize) -> (f64, f64) {
    let (j0, j1, j2) = if i == 0 { (0, 1, 2) } else { (i, i - 1, i - 2) };
    let (x0, x1, x2) = (vs[j0], vs[j1], vs[j2]);
    let (y0, y1, y2) = (hs[j0], hs[j1], hs[j2]);
    // Lagrange quadratic through the three nodes, evaluated at x0.
    let d1 = y0 * (2.0 * x0 - x1 - x2) / ((x0 - x1) * (x0 - x2))
        + y1 * (2.0 * x0 - x0 - x2) / ((x1 - x0) * (x1 - x2))
        + y2 * (2.0 * x0 - x0 - x1) / ((x2 - x0) * (x2 - x1));
    let d2 = 2.0
        * (y0 / ((x0 - x1) * (x0 - x2))
            + y1 / ((x1 - x0) * (x1 - x2))
            + y2 / ((x2 - x0) * (x2 - x1)));
    (d1, d2)
}

/// Smootherstep S(s) = 6s⁵ − 15s⁴ + 10s³ on [0,1], C² at both ends.
fn smootherstep(s: f64) -> (f64, f64) {
    if s <= 0.0 {
        (0.0, 0.0)
    } else if s >= 1.0 {
        (1.0, 0.0)
    } else {
        let s2 = s * s;
        let s3 = s2 * s;
        (
            s3 * (6.0 * s2 - 15.0 * s + 10.0),
            s2 * (30.0 * s2 - 60.0 * s + 30.0),
        )
    }
}

/// The blend multiplier m(x) with I(v) = v·m(log v): m = 1 for x ≤ 0,
/// m(x) = x for x ≥ 2, C² monotone in between with m′ = S(x/2).
/// Returns (m, m′, m″).
fn vlogv_multiplier(x: f64) -> (f64, f64, f64) {
    if x <= 0.0 {
        (1.0, 0.0, 0.0)
    } else if x >= 2.0 {
        (x, 1.0, 0.0)
    } else {
        let s = 0.5 * x;
        let (sv, sd) = smootherstep(s);
        // m(x) = 1 + 2∫₀^{x/2} S = 1 + 2(s⁶ − 3s⁵ + 2.5s⁴).
        let s4 = s.powi(4);
        let m = 1.0 + 2.0 * (s4 * s * s - 3.0 * s4 * s + 2.5 * s4);
        (m, sv, 0.5 * sd)
    }
}

impl Profile {
    /// Named presets: "euclidean", "hyperbolic", "bolfiala:<k>",
    /// "linear", "vlogv".
    pub fn preset(name: &str) -> Result<Profile> {
        if let Some(k) = name.strip_prefix("bolfiala:") {
            let k: f64 = k
                .parse()
                .map_err(|_| Error::BadParameters(format!("bad curvature in {name:?}")))?;
            return Ok(Profile::ConstantCurvature(k));
        }
        match name {
            "euclidean" => Ok(Profile::Euclidean),
            "hyperbolic" => Ok(Profile::Hyperbolic),
            "linear" => Ok(Profile::Linear),
            "vlogv" => Ok(Profile::VLogV),
            _ => Err(Error::BadParameters(format!("unknown profile preset {name:?}"))),
        }
    }

    /// Largest v where the profile is defined and positive (∞ when
    /// unbounded).
    pub fn v_max(&self) -> f64 {
        match self {
            Profile::Euclidean | Profile::Hyperbolic | Profile::Linear | Profile::VLogV => {
                f64::INFINITY
            }
            Profile::ConstantCurvature(k) => {
                if *k > 0.0 {
                    4.0 * PI / k
                } else {
                    f64::INFINITY
                }
            }
            Profile::Cap(_) => f64::INFINITY,
            Profile::Grid(g) => g.v_max(),
            Profile::Merged(m) => m.ambient.v_max(),
        }
    }

    /// Jet of H = I² at v.
    pub fn jet(&self, v: f64) -> Jet {
        match self {
            Profile::Euclidean => Jet { h: 4.0 * PI * v, h1: 4.0 * PI, h2: 0.0 },
            Profile::Hyperbolic => Jet {
                h: v * v + 4.0 * PI * v,
                h1: 2.0 * v + 4.0 * PI,
                h2: 2.0,
            },
            Profile::ConstantCurvature(k) => Jet {
                h: 4.0 * PI * v - k * v * v,
                h1: 4.0 * PI - 2.0 * k * v,
                h2: -2.0 * k,
            },
            Profile::Linear => Jet { h: v * v, h1: 2.0 * v, h2: 2.0 },
            Profile::VLogV => {
                if v <= 0.0 {
                    return Jet { h: 0.0, h1: 0.0, h2: 2.0 };
                }
                let (m, m1, m2) = vlogv_multiplier(v.ln());
                Jet {
                    h: v * v * m * m,
                    h1: 2.0 * v * m * (m + m1),
                    h2: 2.0 * (m * m + 3.0 * m * m1 + m1 * m1 + m * m2),
                }
            }
            Profile::Cap(c) => {
                if v <= c.delta {
                    let (h, h1, h2) = interp::poly_eval2(&c.coeffs, v);
                    Jet { h, h1, h2 }
                } else {
                    Jet { h: v * v, h1: 2.0 * v, h2: 2.0 }
                }
            }
            Profile::Grid(g) => g.eval(v),
            Profile::Merged(m) => {
                if v >= m.seam {
                    m.ambient.jet(v)
                } else {
                    m.caps
                        .iter()
                        .map(|c| c.jet(v))
                        .min_by(|a, b| a.h.partial_cmp(&b.h).unwrap())
                        .expect("merged profile has at least one cap")
                }
            }
        }
    }

    /// I(v) = √H(v).
    pub fn i(&self, v: f64) -> f64 {
        self.jet(v).i()
    }

    /// Gauss curvature −½H″ of the associated surface at area v.
    pub fn curvature(&self, v: f64) -> f64 {
        self.jet(v).curvature()
    }

    /// Anchor data (H′(0), H″(0)).
    pub fn anchors(&self) -> (f64, f64) {
        match self {
            Profile::Grid(g) => (g.d1, g.d2),
            _ => {
                let j = self.jet(0.0);
                (j.h1, j.h2)
            }
        }
    }

    /// Sample into a grid profile (used for JSON export of closed forms).
    pub fn sample(&self, vs: &[f64]) -> Result<GridProfile> {
        let jets = vs.iter().map(|&v| self.jet(v)).collect();
        GridProfile::from_jets(vs.to_vec(), jets)
    }

    pub fn to_json(&self, vs_if_closed: &[f64]) -> Result<String> {
        let g = match self {
            Profile::Grid(g) => g.clone(),
            other => other.sample(vs_if_closed)?,
        };
        let (vs, jets) = g.nodes();
        let dump = ProfileJson {
            grid: vs
                .iter()
                .zip(jets)
                .map(|(&v, j)| ProfileNode { v, i2: j.h })
                .collect(),
            anchors: AnchorJson { d1: g.d1, d2: g.d2 },
        };
        report::to_json_string(&dump)
    }

    pub fn from_json(text: &str) -> Result<Profile> {
        let parsed: ProfileJson = serde_json::from_str(text)?;
        let vs: Vec<f64> = parsed.grid.iter().map(|n| n.v).collect();
        let hs: Vec<f64> = parsed.grid.iter().map(|n| n.i2).collect();
        Ok(Profile::Grid(GridProfile::from_nodes(
            vs,
            hs,
            parsed.anchors.d1,
            parsed.anchors.d2,
        )?))
    }

    /// CSV of (v, I(v), K(v)) rows at the given sample points.
    pub fn csv(&self, vs: &[f64]) -> Result<String> {
        let rows: Vec<Vec<f64>> = vs
            .iter()
            .map(|&v| {
                let j = self.jet(v);
                vec![v, j.i(), j.curvature()]
            })
            .collect();
        report::csv_string(&["v", "I", "K"], &rows)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ProfileJson {
    grid: Vec<ProfileNode>,
    anchors: AnchorJson,
}

#[derive(Debug, Serialize, Deserialize)]
struct ProfileNode {
    v: f64,
    #[serde(rename = "I2")]
    i2: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct AnchorJson {
    d1: f64,
    d2: f64,
}

/// K(v) = −½(I²)″(v) for any profile.
pub fn curvature_of_profile(p: &Profile, v: f64) -> f64 {
    p.curvature(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::close;

    #[test]
    fn closed_form_jets() {
        let e = Profile::Euclidean.jet(2.0);
        assert!(close(e.h, 8.0 * PI, 1e-15, 0.0));
        assert!(close(e.i(), (8.0 * PI).sqrt(), 1e-15, 0.0));
        assert_eq!(e.curvature(), 0.0);

        let h = Profile::Hyperbolic.jet(3.0);
        assert!(close(h.h, 9.0 + 12.0 * PI, 1e-15, 0.0));
        assert_eq!(h.curvature(), -1.0);

        // Constant curvature k: K ≡ k.
        let s = Profile::ConstantCurvature(100.0);
        assert!(close(s.curvature(0.01), 100.0, 1e-15, 0.0));
        assert!((s.v_max() - 4.0 * PI / 100.0).abs() < 1e-15);

        // Cusp: I(v) = v has K ≡ −1.
        assert_eq!(Profile::Linear.curvature(5.0), -1.0);
        assert_eq!(curvature_of_profile(&Profile::Linear, 0.1), -1.0);
    }

    #[test]
    fn hyperbolic_is_constant_curvature_minus_one() {
        for &v in &[0.0, 0.5, 2.0, 100.0] {
            let a = Profile::Hyperbolic.jet(v);
            let b = Profile::ConstantCurvature(-1.0).jet(v);
            assert!(close(a.h, b.h, 1e-15, 0.0));
            assert!(close(a.h1, b.h1, 1e-15, 0.0));
            assert_eq!(a.h2, b.h2);
        }
    }

    #[test]
    fn vlogv_blends_exactly() {
        // I(v) = v for v ≤ 1.
        for &v in &[1e-6, 0.3, 1.0] {
            let j = Profile::VLogV.jet(v);
            assert!(close(j.h, v * v, 1e-14, 1e-300), "v={v}");
            assert!(close(j.h1, 2.0 * v, 1e-14, 0.0));
            assert!(close(j.h2, 2.0, 1e-12, 0.0));
        }
        // I(v) = v log v for v ≥ e².
        for &v in &[f64::exp(2.0), 10.0, 1e6] {
            let j = Profile::VLogV.jet(v);
            let i = v * v.ln();
            assert!(close(j.h, i * i, 1e-13, 0.0), "v={v}");
            // H″ = 2(log²v + 3 log v + 1) there.
            let x = v.ln();
            assert!(close(j.h2, 2.0 * (x * x + 3.0 * x + 1.0), 1e-12, 0.0));
        }
    }

    #[test]
    fn vlogv_is_convex_and_blend_is_c2() {
        // Convexity of I: I″ ≥ 0 ⟺ (m′ + m″) ≥ 0; probe I″ via H-jet:
        // I″ = (H″ − H′²/(2H)) / (2√H).
        let mut prev_i1 = 0.0;
        for j in 0..2000 {
            let v = 1e-3 * (1.0065_f64).powi(j); // spans the blend window
            let jet = Profile::VLogV.jet(v);
            let i1 = jet.h1 / (2.0 * jet.h.sqrt());
            if j > 0 {
                assert!(i1 >= prev_i1 - 1e-12, "I′ dips at v = {v}");
            }
            prev_i1 = i1;
        }
        // C² seams: jets continuous at v = 1 and v = e².
        for &seam in &[1.0, f64::exp(2.0)] {
            let a = Profile::VLogV.jet(seam * (1.0 - 1e-9));
            let b = Profile::VLogV.jet(seam * (1.0 + 1e-9));
            assert!(close(a.h, b.h, 1e-7, 0.0));
            assert!(close(a.h1, b.h1, 1e-6, 0.0));
            assert!(close(a.h2, b.h2, 1e-5, 1e-6));
        }
    }

    #[test]
    fn grid_profile_reproduces_quadratics() {
        // H = 4πv − 3v² sampled on a coarse grid must be exact (quintic
        // interpolation of a quadratic).
        let vs: Vec<f64> = (0..=10).map(|i| i as f64 * 0.4).collect();
        let src = Profile::ConstantCurvature(3.0);
        let g = src.sample(&vs).unwrap();
        let p = Profile::Grid(g);
        for &v in &[0.05, 0.77, 1.93, 3.21, 3.99] {
            let a = p.jet(v);
            let b = src.jet(v);
            assert!(close(a.h, b.h, 1e-13, 1e-13), "v={v}");
            assert!(close(a.h1, b.h1, 1e-12, 1e-12));
            assert!(close(a.h2, b.h2, 1e-11, 1e-11));
        }
        assert_eq!(p.v_max(), 4.0);
    }

    #[test]
    fn from_nodes_estimates_jets() {
        let vs: Vec<f64> = (0..=40).map(|i| i as f64 * 0.1).collect();
        let hs: Vec<f64> = vs.iter().map(|&v| 4.0 * PI * v - v * v).collect();
        let g = GridProfile::from_nodes(vs, hs, 4.0 * PI, -2.0).unwrap();
        let p = Profile::Grid(g);
        let j = p.jet(1.234);
        assert!(close(j.h, 4.0 * PI * 1.234 - 1.234 * 1.234, 1e-10, 0.0));
        assert!(close(j.curvature(), 1.0, 1e-8, 0.0));
    }

    #[test]
    fn json_round_trip() {
        let vs: Vec<f64> = (0..=50).map(|i| i as f64 * 0.1).collect();
        let text = Profile::Hyperbolic.to_json(&vs).unwrap();
        assert!(text.contains("\"I2\""));
        assert!(text.contains("\"anchors\""));
        let p = Profile::from_json(&text).unwrap();
        for &v in &[0.3, 2.2, 4.9] {
            assert!(close(p.i(v), Profile::Hyperbolic.i(v), 1e-9, 1e-12), "v={v}");
        }
        // Closed-form profiles serialize through sampling.
        let p2 = Profile::from_json(&Profile::Euclidean.to_json(&vs).unwrap()).unwrap();
        assert!(close(p2.i(1.0), (4.0 * PI).sqrt(), 1e-9, 0.0));
    }

    #[test]
    fn presets_resolve() {
        assert!(matches!(Profile::preset("euclidean"), Ok(Profile::Euclidean)));
        assert!(matches!(Profile::preset("vlogv"), Ok(Profile::VLogV)));
        match Profile::preset("bolfiala:2.5") {
            Ok(Profile::ConstantCurvature(k)) => assert_eq!(k, 2.5),
            other => panic!("unexpected: {other:?}"),
        }
        assert!(Profile::preset("nope").is_err());
        assert!(Profile::preset("bolfiala:x").is_err());
    }

    #[test]
    fn csv_emits_curvature() {
        let csv = Profile::ConstantCurvature(2.0).csv(&[0.1, 0.2]).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "v,I,K");
        assert!(lines.next().unwrap().ends_with("2.0000000000000000e0"));
    }
}
