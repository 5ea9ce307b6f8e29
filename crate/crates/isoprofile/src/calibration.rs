//! Calibration lower bounds for the isoperimetric profile and the
//! pipe-clearing coverage check on singular surfaces.
//!
//! A 1-form ω with ‖ω‖ ≤ 1 and dω = u·vol forces length(∂V) ≥ ∫_V u for
//! any region V sandwiched between sublevels of u; families of regions
//! where the bound is attained pin the profile down exactly. On a
//! singular surface the sublevel family B_t attains area t with boundary
//! length t, except near each critical value c where smoothing excludes
//! the window (c/2, 2c); the pipe-clearing families C and D re-cover that
//! window using a spare component of the critical level.

use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, rat_to_f64, rat_to_string, Ext, Rat};
use crate::numerics::quad;
use crate::report::{self, CheckItem, VerificationReport};
use crate::cusp_assembly::SingularSurface;
use num::traits::Zero;
use serde::Serialize;
use std::f64::consts::TAU;

/// The linear calibration bound I(v) ≥ c·v from a form with dω = c·vol,
/// ‖ω‖ ≤ 1. Nonnegative inputs expected; the bound is linear in v and
/// nondecreasing in c.
pub fn calibration_lower_bound(c: f64, v: f64) -> f64 {
    debug_assert!(c >= 0.0 && v >= 0.0);
    c * v
}

/// Result of a rearrangement bound on a rotationally symmetric disk
/// V = {r ≤ r₀} with metric dr² + f(r)²dθ².
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RearrangementBound {
    /// ∫_V u dA = 2π·g(r₀), where g solves g′ = u·f, g(0) = 0.
    pub integral: f64,
    /// length(∂V) = 2π·f(r₀); always ≥ `integral`.
    pub boundary_length: f64,
    /// max over the grid of g/f — must stay ≤ 1 for ω = g·dθ to
    /// calibrate (‖ω‖ ≤ 1); 1 is attained where the bound is tight.
    pub calibration_max_ratio: f64,
    /// Whether the bound is attained at ∂V (g(r₀) = f(r₀) within 1e−9).
    pub equality: bool,
}

/// Lower-bound length(∂V) by ∫_V u for V = {r ≤ r₀}, u nondecreasing.
///
/// Constructs the calibrating form ω = g(r)dθ with g′ = u·f by
/// quadrature. Fails with `NotSublevel` if u is not nondecreasing on the
/// sample grid (V is then not sandwiched between sublevels of u), with
/// `HypothesisFailure` if ‖ω‖ ≤ 1 fails (the density is too large for f),
/// and with `NonPositiveProfile` if f ≤ 0 inside the disk.
pub fn rearrangement_bound<F, U>(
    f: &F,
    u: &U,
    r0: f64,
    samples: usize,
) -> Result<RearrangementBound>
where
    F: Fn(f64) -> f64,
    U: Fn(f64) -> f64,
{
    if !(r0 > 0.0) || samples < 2 {
        return Err(Error::BadParameters(
            "rearrangement needs r0 > 0 and at least 2 samples".into(),
        ));
    }
    let grid: Vec<f64> = (0..=samples)
        .map(|i| r0 * i as f64 / samples as f64)
        .collect();
    for w in grid.windows(2) {
        if u(w[1]) < u(w[0]) - 1e-12 * u(w[0]).abs().max(1.0) {
            return Err(Error::NotSublevel(format!(
                "density decreases between r = {} and r = {}",
                w[0], w[1]
            )));
        }
        if f(w[1]) <= 0.0 {
            return Err(Error::NonPositiveProfile(format!(
                "f(r) <= 0 at r = {}",
                w[1]
            )));
        }
    }

    // g(r) = ∫₀^r u·f and the ratio check g/f ≤ 1 along the grid.
    let mut max_ratio = f64::NEG_INFINITY;
    let mut g_prev = 0.0;
    let mut g_at = vec![0.0; grid.len()];
    for i in 1..grid.len() {
        let seg = quad::adaptive(&|r| u(r) * f(r), grid[i - 1], grid[i], 1e-12, 1e-15)?;
        g_prev += seg;
        g_at[i] = g_prev;
        max_ratio = max_ratio.max(g_prev / f(grid[i]));
    }
    if max_ratio > 1.0 + 1e-9 {
        return Err(Error::HypothesisFailure(format!(
            "calibration norm exceeds 1 (max g/f = {max_ratio:.6})"
        )));
    }

    let integral = TAU * g_prev;
    let boundary_length = TAU * f(r0);
    Ok(RearrangementBound {
        integral,
        boundary_length,
        calibration_max_ratio: max_ratio,
        equality: (boundary_length - integral).abs()
            <= 1e-9 * boundary_length.abs().max(1.0),
    })
}

/// Which family a covered area interval comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    /// Sublevel sets B_t, area t.
    Sublevel,
    /// C_{e,s} = B_{c/2} ∪ (P(e) ∩ {u ≤ s}); recovers areas above c.
    ClearingC,
    /// D_{e,s} = B_{2c} ∖ (P(e) ∩ {s < u ≤ 2c}); recovers areas below 2c.
    ClearingD,
}

/// A 1-parameter family of calibrated regions with its exact affine area
/// map area(s) = slope·s + offset on the parameter interval [s_lo, s_hi].
#[derive(Debug, Clone)]
pub struct CalibratedFamily {
    pub kind: FamilyKind,
    /// Edge whose pants piece the family modifies (C/D families only).
    pub edge: Option<usize>,
    /// Critical value the family clears (C/D families only).
    pub critical_value: Option<Rat>,
    pub s_lo: Rat,
    pub s_hi: Ext,
    pub slope: Rat,
    pub offset: Rat,
}

impl CalibratedFamily {
    pub fn area_at(&self, s: &Rat) -> Rat {
        &self.slope * s + &self.offset
    }

    pub fn area_lo(&self) -> Rat {
        self.area_at(&self.s_lo)
    }

    pub fn area_hi(&self) -> Ext {
        match &self.s_hi {
            Ext::Finite(s) => Ext::finite(self.area_at(s)),
            Ext::Inf => Ext::Inf,
        }
    }

    fn dump(&self) -> FamilyDump {
        FamilyDump {
            kind: self.kind,
            edge: self.edge,
            critical_value: self.critical_value.as_ref().map(rat_to_string),
            s_lo: rat_to_string(&self.s_lo),
            s_hi: self.s_hi.to_string(),
            slope: rat_to_string(&self.slope),
            offset: rat_to_string(&self.offset),
            area_lo: rat_to_string(&self.area_lo()),
            area_hi: self.area_hi().to_string(),
            area_lo_f64: rat_to_f64(&self.area_lo()),
            area_hi_f64: self.area_hi().to_f64(),
        }
    }
}

/// Pipe-clearing analysis at one critical value.
#[derive(Debug, Clone)]
pub struct CriticalCoverage {
    pub vertex: String,
    pub value: i64,
    /// The critical value c = u(vertex); also area(B_c).
    pub critical_value: Rat,
    /// Exclusion window (c/2, 2c) where plain sublevels are unusable.
    pub exclusion: (Rat, Rat),
    /// Spare edge chosen (maximizing weight·c″), if the critical level
    /// is disconnected.
    pub chosen_edge: Option<usize>,
    pub families: Vec<CalibratedFamily>,
    /// Exact slack area(C_max) − area(D_min); ∞ when c″ = ∞.
    pub slack_exact: Option<Ext>,
    /// The coarse chain bound (1/4)·weight·c″ − 2c that the construction
    /// guarantees nonnegative; tight for weight 1/2, c″ = 16c.
    pub slack_coarse: Option<Ext>,
    pub covered: bool,
    /// Uncovered sub-interval of the exclusion window, if any.
    pub gap: Option<(Rat, Ext)>,
}

/// Full pipe-clearing coverage report for a singular surface.
#[derive(Debug, Clone)]
pub struct CoverageReport {
    pub sublevel_family: CalibratedFamily,
    pub entries: Vec<CriticalCoverage>,
    pub covered: bool,
}

impl CoverageReport {
    /// True iff every area in (0, t] is realized by some family.
    pub fn covered_up_to(&self, t: &Rat) -> bool {
        self.entries
            .iter()
            .filter_map(|e| e.gap.as_ref())
            .all(|(lo, _)| lo >= t)
    }

    /// Error out (NoSpareComponent) if any critical value was left
    /// uncovered; gap bounds are included in the message.
    pub fn ensure_complete(&self) -> Result<()> {
        for e in &self.entries {
            if !e.covered {
                let (lo, hi) = e.gap.as_ref().expect("uncovered entry has a gap");
                return Err(Error::NoSpareComponent(format!(
                    "critical value {} (vertex {:?}): uncovered area interval ({}, {})",
                    rat_to_string(&e.critical_value),
                    e.vertex,
                    rat_to_string(lo),
                    hi
                )));
            }
        }
        Ok(())
    }

    /// Per-critical-value pass/fail lines for the property suite.
    pub fn verification(&self) -> VerificationReport {
        let mut rep = VerificationReport::new(None);
        for e in &self.entries {
            let name = format!("pipe_clearing[{}]", e.vertex);
            match (&e.slack_exact, &e.slack_coarse) {
                (Some(se), Some(sc)) => {
                    let ok = e.covered
                        && *se >= Ext::zero()
                        && *sc >= Ext::zero();
                    rep.push(
                        CheckItem::new(name, ok)
                            .measured(se.to_f64())
                            .bound(0.0)
                            .details(format!(
                                "exact slack {}, coarse chain slack {}",
                                se, sc
                            )),
                    );
                }
                _ => {
                    rep.push(CheckItem::new(name, false).details(format!(
                        "no spare component at critical value {}",
                        rat_to_string(&e.critical_value)
                    )));
                }
            }
        }
        rep
    }

    pub fn to_dump(&self) -> CoverageDump {
        CoverageDump {
            covered: self.covered,
            sublevel_family: self.sublevel_family.dump(),
            entries: self
                .entries
                .iter()
                .map(|e| CriticalDump {
                    vertex: e.vertex.clone(),
                    value: e.value,
                    critical_value: rat_to_string(&e.critical_value),
                    critical_value_f64: rat_to_f64(&e.critical_value),
                    exclusion: [
                        rat_to_string(&e.exclusion.0),
                        rat_to_string(&e.exclusion.1),
                    ],
                    chosen_edge: e.chosen_edge,
                    families: e.families.iter().map(CalibratedFamily::dump).collect(),
                    slack_exact: e.slack_exact.as_ref().map(|x| x.to_string()),
                    slack_coarse: e.slack_coarse.as_ref().map(|x| x.to_string()),
                    covered: e.covered,
                    gap: e
                        .gap
                        .as_ref()
                        .map(|(lo, hi)| [rat_to_string(lo), hi.to_string()]),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        report::to_json_string(&self.to_dump())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageDump {
    pub covered: bool,
    pub sublevel_family: FamilyDump,
    pub entries: Vec<CriticalDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyDump {
    pub kind: FamilyKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub critical_value: Option<String>,
    pub s_lo: String,
    pub s_hi: String,
    pub slope: String,
    pub offset: String,
    pub area_lo: String,
    pub area_hi: String,
    pub area_lo_f64: f64,
    pub area_hi_f64: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalDump {
    pub vertex: String,
    pub value: i64,
    pub critical_value: String,
    pub critical_value_f64: f64,
    pub exclusion: [String; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chosen_edge: Option<usize>,
    pub families: Vec<FamilyDump>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack_coarse: Option<String>,
    pub covered: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<[String; 2]>,
}

/// Exclusion windows of distinct critical values must be disjoint:
/// 2·c_i < c_{i+1}/2 for consecutive critical values. Holds with large
/// margin for renormalized levels (ratio ≥ 32); asserted, not assumed.
pub fn exclusions_disjoint(sorted_criticals: &[Rat]) -> bool {
    sorted_criticals
        .windows(2)
        .all(|w| rat_int(2) * &w[0] < &w[1] / rat_int(2))
}

/// Run the pipe-clearing coverage analysis on an assembled surface.
///
/// For each critical value c (with exclusion window (c/2, 2c)) the spare
/// components of the level {u = c} are the annuli strictly straddling c,
/// i.e. not incident to the cone point. The chosen spare edge builds the
/// C and D families; the window is covered iff max C area ≥ min D area.
/// Surfaces with a connected critical level get a reported gap instead
/// of an error; `CoverageReport::ensure_complete` upgrades it to
/// `NoSpareComponent`.
pub fn pipe_clearing_coverage(s: &SingularSurface) -> Result<CoverageReport> {
    let half = rat(1, 2);
    let two = rat_int(2);

    let mut criticals: Vec<Rat> = s.singular_vertices().iter().map(|v| v.u.clone()).collect();
    criticals.sort();
    if !exclusions_disjoint(&criticals) {
        return Err(Error::BadParameters(
            "exclusion windows of consecutive critical values overlap".into(),
        ));
    }

    let sublevel_family = CalibratedFamily {
        kind: FamilyKind::Sublevel,
        edge: None,
        critical_value: None,
        s_lo: Rat::zero(),
        s_hi: Ext::Inf,
        slope: rat_int(1),
        offset: Rat::zero(),
    };

    let mut entries = Vec::with_capacity(s.singular_vertices().len());
    for v in s.singular_vertices() {
        let c = v.u.clone();
        let exclusion = (&half * &c, &two * &c);

        // Spare components: annuli strictly straddling level c, excluding
        // the three incident to the cone point.
        let incident = [v.single_edge, v.double_edges[0], v.double_edges[1]];
        let mut best: Option<(usize, Ext)> = None;
        for (k, a) in s.annuli().iter().enumerate() {
            if incident.contains(&k) {
                continue;
            }
            if a.lo < c && Ext::finite(c.clone()) < a.hi {
                let score = a.hi.scale(&a.tau);
                let better = match &best {
                    None => true,
                    Some((_, s0)) => score > *s0,
                };
                if better {
                    best = Some((k, score));
                }
            }
        }

        let entry = match best {
            None => CriticalCoverage {
                vertex: v.id.clone(),
                value: v.value,
                critical_value: c,
                exclusion: exclusion.clone(),
                chosen_edge: None,
                families: vec![],
                slack_exact: None,
                slack_coarse: None,
                covered: false,
                gap: Some((exclusion.0, Ext::finite(exclusion.1))),
            },
            Some((k, _)) => {
                let a = &s.annuli()[k];
                let w = a.tau.clone();
                let c_lo = a.lo.clone(); // c′ of the spare edge
                let c_hi = a.hi.clone(); // c″ of the spare edge

                // C_{e,s}: area c/2 + w(s − c/2), s from 2c′ (above the
                // lower neighbor's smoothing window) to c″/2 (below the
                // upper one's).
                let c_family = CalibratedFamily {
                    kind: FamilyKind::ClearingC,
                    edge: Some(k),
                    critical_value: Some(c.clone()),
                    s_lo: &two * &c_lo,
                    s_hi: c_hi.scale(&half),
                    slope: w.clone(),
                    offset: (&exclusion.0) * (rat_int(1) - &w),
                };
                // D_{e,s}: area 2c − w(2c − s) for s in [2c′, 2c].
                let d_family = CalibratedFamily {
                    kind: FamilyKind::ClearingD,
                    edge: Some(k),
                    critical_value: Some(c.clone()),
                    s_lo: &two * &c_lo,
                    s_hi: Ext::finite(exclusion.1.clone()),
                    slope: w.clone(),
                    offset: (&exclusion.1) * (rat_int(1) - &w),
                };

                let c_max = c_family.area_hi();
                let d_min = d_family.area_lo();
                let covered = Ext::finite(d_min.clone()) <= c_max;
                let gap = if covered {
                    None
                } else {
                    let hi = Ext::finite(d_min.clone());
                    match &c_max {
                        Ext::Finite(cm) => Some((cm.clone(), hi)),
                        Ext::Inf => unreachable!("infinite C max always covers"),
                    }
                };
                let slack_exact = match &c_max {
                    Ext::Finite(cm) => Ext::finite(cm - &d_min),
                    Ext::Inf => Ext::Inf,
                };
                // (1/4)·w·c″ − 2c, the §-chain's coarse lower bound on
                // the slack; nonnegative by the weighted-value floor.
                let slack_coarse = match &c_hi {
                    Ext::Finite(ch) => {
                        Ext::finite(rat(1, 4) * &w * ch - &exclusion.1)
                    }
                    Ext::Inf => Ext::Inf,
                };

                CriticalCoverage {
                    vertex: v.id.clone(),
                    value: v.value,
                    critical_value: c,
                    exclusion,
                    chosen_edge: Some(k),
                    families: vec![c_family, d_family],
                    slack_exact: Some(slack_exact),
                    slack_coarse: Some(slack_coarse),
                    covered,
                    gap,
                }
            }
        };
        entries.push(entry);
    }

    let covered = entries.iter().all(|e| e.covered);
    Ok(CoverageReport { sublevel_family, entries, covered })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cusp_assembly::assemble_surface;
    use crate::level_graph::{
        assign_weights, random_graph, renormalize_levels, triply_punctured_raw, validate_graph,
        GeneratorOptions, RawEdge, RawGraph, RawVertex,
    };

    fn assemble(raw: &RawGraph) -> SingularSurface {
        let g = validate_graph(raw).unwrap();
        let w = assign_weights(&g).unwrap();
        let r = renormalize_levels(&g, None).unwrap();
        assemble_surface(&g, &w, &r).unwrap()
    }

    /// Split at value 0 with a bi-infinite spare strand alongside.
    fn split_with_spare_raw() -> RawGraph {
        RawGraph {
            vertices: vec![RawVertex { id: "p".into(), f: 0 }],
            edges: vec![
                RawEdge { src: "-inf".into(), dst: "p".into() },
                RawEdge { src: "p".into(), dst: "+inf".into() },
                RawEdge { src: "p".into(), dst: "+inf".into() },
                RawEdge { src: "-inf".into(), dst: "+inf".into() },
            ],
            nu: None,
        }
    }

    #[test]
    fn linear_bound_examples() {
        // Constant-curvature cusp: I(v) = v, so c=1 gives the profile.
        assert_eq!(calibration_lower_bound(1.0, 5.0), 5.0);
        // Ball bound with rho = 1 at v = 2.
        assert_eq!(calibration_lower_bound(1.0, 2.0), 2.0);
        assert_eq!(calibration_lower_bound(0.0, 123.0), 0.0);
        // Linear in v, nondecreasing in c.
        assert_eq!(
            calibration_lower_bound(0.7, 3.0) + calibration_lower_bound(0.7, 4.0),
            calibration_lower_bound(0.7, 7.0)
        );
        assert!(calibration_lower_bound(0.8, 3.0) >= calibration_lower_bound(0.7, 3.0));
    }

    #[test]
    fn rearrangement_constant_density_is_area() {
        // f = e^r, u ≡ 1: the bound equals the disk area 2π(e^{r0} − 1).
        let r0 = 1.25;
        let b = rearrangement_bound(&|r: f64| r.exp(), &|_| 1.0, r0, 64).unwrap();
        let area = TAU * (r0.exp() - 1.0);
        assert!((b.integral - area).abs() < 1e-9 * area);
        assert!(b.boundary_length > b.integral);
        assert!((b.calibration_max_ratio - (1.0 - (-r0).exp())).abs() < 1e-9);
    }

    #[test]
    fn rearrangement_cosh_matches_closed_form() {
        // f = cosh, u = tanh: ∫_V u dA = 2π(cosh r0 − 1), within 1e−8.
        let r0 = 1.0;
        let b = rearrangement_bound(&|r: f64| r.cosh(), &|r: f64| r.tanh(), r0, 64).unwrap();
        let closed = TAU * (r0.cosh() - 1.0);
        assert!(
            (b.integral - closed).abs() < 1e-8,
            "got {}, want {closed}",
            b.integral
        );
        assert!((b.boundary_length - TAU * r0.cosh()).abs() < 1e-12);
        assert!(!b.equality);
    }

    #[test]
    fn rearrangement_rejects_decreasing_density() {
        // A disk is a sublevel of u only if u is nondecreasing in r.
        let b = rearrangement_bound(&|r: f64| r.exp(), &|r: f64| 2.0 - r, 1.0, 32);
        assert!(matches!(b, Err(Error::NotSublevel(_))));
        // Euclidean disk with the borderline density u = 1/r decreases too.
        let b = rearrangement_bound(&|r: f64| r, &|r: f64| 1.0 / r.max(1e-300), 1.0, 32);
        assert!(matches!(b, Err(Error::NotSublevel(_))));
    }

    #[test]
    fn rearrangement_rejects_oversized_density() {
        // u ≡ 100 against f = e^r: g = 100(e^r − 1) overtakes f.
        let b = rearrangement_bound(&|r: f64| r.exp(), &|_| 100.0, 1.0, 32);
        assert!(matches!(b, Err(Error::HypothesisFailure(_))));
    }

    #[test]
    fn exclusion_disjointness() {
        assert!(exclusions_disjoint(&[rat_int(1), rat_int(16), rat_int(4096)]));
        // Ratio 4 is exactly the failure threshold: 2c = c'/2.
        assert!(!exclusions_disjoint(&[rat_int(1), rat_int(4)]));
        assert!(exclusions_disjoint(&[rat_int(1), rat_int(5)]));
    }

    #[test]
    fn boundary_tight_chain_arithmetic() {
        // weight 1/2, critical value 1, spare edge top c″ = 16:
        // (1/4)·w·c″ − 2c = 2 − 2 = 0 exactly.
        let slack = rat(1, 4) * rat(1, 2) * rat_int(16) - rat_int(2) * rat_int(1);
        assert!(slack.is_zero());
    }

    #[test]
    fn split_with_spare_is_covered() {
        let s = assemble(&split_with_spare_raw());
        let cov = pipe_clearing_coverage(&s).unwrap();
        assert!(cov.covered);
        assert_eq!(cov.entries.len(), 1);
        let e = &cov.entries[0];
        // Spare strand is the bi-infinite edge (index 3).
        assert_eq!(e.chosen_edge, Some(3));
        assert!(matches!(e.slack_exact, Some(Ext::Inf)));
        assert!(e.gap.is_none());
        cov.ensure_complete().unwrap();
        assert!(cov.verification().all_passed());
        // Exclusion window around c = 1: (1/2, 2).
        assert_eq!(e.exclusion, (rat(1, 2), rat_int(2)));
    }

    #[test]
    fn triply_punctured_reports_gap() {
        let s = assemble(&triply_punctured_raw());
        let cov = pipe_clearing_coverage(&s).unwrap();
        assert!(!cov.covered);
        let e = &cov.entries[0];
        assert_eq!(e.chosen_edge, None);
        // Gap is the whole exclusion window around c = 256.
        let (lo, hi) = e.gap.as_ref().unwrap();
        assert_eq!(*lo, rat_int(128));
        assert_eq!(*hi, Ext::finite(rat_int(512)));
        assert!(cov.covered_up_to(&rat_int(128)));
        assert!(!cov.covered_up_to(&rat_int(200)));
        assert!(matches!(
            cov.ensure_complete(),
            Err(Error::NoSpareComponent(_))
        ));
        assert!(!cov.verification().all_passed());
    }

    #[test]
    fn generated_disconnected_graphs_fully_covered() {
        let opts = GeneratorOptions { max_vertices: 30, all_levels_disconnected: true };
        for seed in 0..40u64 {
            let raw = random_graph(seed, &opts);
            let s = assemble(&raw);
            let cov = pipe_clearing_coverage(&s).unwrap();
            assert!(cov.covered, "seed {seed}");
            for e in &cov.entries {
                // The chain's coarse bound must also hold exactly.
                match e.slack_coarse.as_ref().unwrap() {
                    Ext::Finite(x) => assert!(*x >= Rat::zero(), "seed {seed}"),
                    Ext::Inf => {}
                }
            }
        }
    }

    #[test]
    fn coverage_is_deterministic() {
        let s = assemble(&split_with_spare_raw());
        let a = pipe_clearing_coverage(&s).unwrap().to_json().unwrap();
        let b = pipe_clearing_coverage(&s).unwrap().to_json().unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"ClearingC\""));
    }

    #[test]
    fn c_family_area_map_matches_formula() {
        let s = assemble(&split_with_spare_raw());
        let cov = pipe_clearing_coverage(&s).unwrap();
        let fam = &cov.entries[0].families[0];
        assert_eq!(fam.kind, FamilyKind::ClearingC);
        // Three edges cross the seed level, so the spare strand carries
        // weight 1/3; with c = 1: area(s) = s/3 + 1/3, so area(2) = 1.
        assert_eq!(fam.slope, rat(1, 3));
        assert_eq!(fam.area_at(&rat_int(2)), rat_int(1));
        assert!(fam.slope > Rat::zero());
        let fam_d = &cov.entries[0].families[1];
        // D at s = 2c gives exactly area 2c, for any weight.
        assert_eq!(fam_d.area_at(&rat_int(2)), rat_int(2));
    }
}
