//! Cross-module property suite: every library invariant executed as a
//! seeded batch of checks and aggregated into one machine-readable
//! report.
//!
//! The suite is the engine behind the `verify` command, so it is total:
//! invariant violations (and any internal errors, demoted to failing
//! entries) become check items, never `Err` returns, and a fixed seed
//! yields a byte-identical report. Each family of checks draws from its
//! own RNG stream, so selecting a subset of targets never changes the
//! samples another family sees.

use std::f64::consts::PI;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::calibration::{calibration_lower_bound, pipe_clearing_coverage};
use crate::conformal::{conformal_solve, vanishing_profile_construction, VanishingData};
use crate::cusp_assembly::{
    assemble_surface, cone_angle_numeric, model_chart_radius, SingularSurface,
};
use crate::error::{Error, Result};
use crate::exact::{rat, rat_to_f64, rat_to_string, Ext, Rat};
use crate::level_graph::{
    assign_weights, check_weight_bounds, conservation_holds, level_sums, random_graph,
    renormalize_levels, triply_punctured_raw, validate_graph, GeneratorOptions, LevelGraph,
    RawEdge, RawGraph, RawVertex, Weighting,
};
use crate::numerics::quad;
use crate::oracle::{comparison_floor, competitor_search};
use crate::report::{CheckItem, VerificationReport};
use crate::revolution::{
    curve_length, geodesic_curvature, j_k, metric_from_profile, profile_from_metric,
    shape_predicates, ClosedMetric, Profile, RadialMetricFns,
};

/// Random graphs checked for exact weight conservation and edge floors.
const GRAPH_SAMPLES: usize = 100;
/// Random graphs assembled into singular surfaces.
const ASSEMBLY_SAMPLES: usize = 8;
/// Exact sublevel-area probes per assembled surface.
const LEVEL_PROBES: usize = 50;
/// Exact band-area probes per assembled surface.
const BAND_PROBES: usize = 20;
/// Disconnected-level graphs run through pipe-clearing coverage.
const COVERAGE_SAMPLES: usize = 12;
/// Perturbed circles for the first-variation cross-check.
const VARIATION_CURVES: usize = 20;
/// Random volume pairs per profile for the subadditivity sample.
const SHAPE_PAIRS: usize = 10_000;

// Distinct RNG streams keep the families' samples independent of which
// targets were selected.
const GRAPH_STREAM: u64 = 11;
const ASSEMBLY_STREAM: u64 = 12;
const CALIBRATION_STREAM: u64 = 13;
const REV_STREAM: u64 = 14;
const ORACLE_STREAM: u64 = 16;

/// Module families selectable for a suite run, mirroring the command
/// groups of the front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteTarget {
    /// Level-graph weighting, floors, and renormalization.
    Graph,
    /// Singular-surface assembly and calibrated coverage.
    Surface,
    /// Surfaces of revolution: profiles, curvatures, shape predicates.
    Rev,
    /// Conformal solves and the vanishing-profile construction.
    Conformal,
    /// Competitor search and its comparison floors.
    Oracle,
}

impl SuiteTarget {
    pub const ALL: [SuiteTarget; 5] = [
        SuiteTarget::Graph,
        SuiteTarget::Surface,
        SuiteTarget::Rev,
        SuiteTarget::Conformal,
        SuiteTarget::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteTarget::Graph => "graph",
            SuiteTarget::Surface => "surface",
            SuiteTarget::Rev => "rev",
            SuiteTarget::Conformal => "conformal",
            SuiteTarget::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for SuiteTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<SuiteTarget> {
        match s.to_ascii_lowercase().as_str() {
            "graph" => Ok(SuiteTarget::Graph),
            "surface" => Ok(SuiteTarget::Surface),
            "rev" => Ok(SuiteTarget::Rev),
            "conformal" => Ok(SuiteTarget::Conformal),
            "oracle" => Ok(SuiteTarget::Oracle),
            other => Err(Error::BadParameters(format!(
                "unknown suite target {other:?}; expected graph|surface|rev|conformal|oracle"
            ))),
        }
    }
}

/// Run the selected check families with the given seed. An empty
/// selection runs all of them; duplicates are ignored and the families
/// always execute in a fixed order, so the same selection and seed
/// produce a byte-identical serialized report.
pub fn property_suite(targets: &[SuiteTarget], seed: u64) -> VerificationReport {
    let mut rep = VerificationReport::new(Some(seed));
    for fam in SuiteTarget::ALL {
        if !(targets.is_empty() || targets.contains(&fam)) {
            continue;
        }
        match fam {
            SuiteTarget::Graph => graph_checks(&mut rep, seed),
            SuiteTarget::Surface => {
                assembly_checks(&mut rep, seed);
                calibration_checks(&mut rep, seed);
            }
            SuiteTarget::Rev => rev_checks(&mut rep, seed),
            SuiteTarget::Conformal => conformal_checks(&mut rep),
            SuiteTarget::Oracle => oracle_checks(&mut rep, seed),
        }
    }
    rep
}

/// Per-level forensic audit of a weighting: one item per probe level,
/// plus a summary that, when sums deviate from 1, lists the edges
/// crossing every broken level. A single corrupted weight is pinpointed
/// this way, because exactly the levels its edge crosses go bad.
pub fn weight_audit(g: &LevelGraph, w: &Weighting) -> VerificationReport {
    let mut rep = VerificationReport::new(None);
    let mut suspects: Option<Vec<usize>> = None;
    for (t, sum) in level_sums(g, w) {
        let ok = sum.is_one();
        let mut item = CheckItem::new(format!("level_sum[t = {t}]"), ok)
            .measured(rat_to_f64(&sum))
            .bound(1.0);
        if !ok {
            let crossing = g.edges_crossing(t);
            item = item.details(format!(
                "weights across the level sum to {}, not 1; crossing edges {:?}",
                rat_to_string(&sum),
                crossing
            ));
            suspects = Some(match suspects {
                None => crossing,
                Some(prev) => prev.into_iter().filter(|e| crossing.contains(e)).collect(),
            });
        }
        rep.push(item);
    }
    match suspects {
        None => {
            rep.check_bool("weight conservation at every level", true);
        }
        Some(sus) => {
            rep.push(
                CheckItem::new("weight conservation at every level", false).details(format!(
                    "edges crossing every failing level (corruption candidates): {sus:?}"
                )),
            );
        }
    }
    rep
}

fn family_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn summarize(bad: &[String]) -> String {
    let shown: Vec<&str> = bad.iter().take(3).map(String::as_str).collect();
    if bad.len() > 3 {
        format!("{} (+{} more)", shown.join("; "), bad.len() - 3)
    } else {
        shown.join("; ")
    }
}

fn push_aggregate(rep: &mut VerificationReport, name: impl Into<String>, bad: Vec<String>) {
    rep.push(CheckItem::new(name, bad.is_empty()).details(summarize(&bad)));
}

/// Same graph, new vertex names and a shuffled vertex order; edge order
/// (and hence the weight vector layout) is preserved.
fn relabeled_copy(raw: &RawGraph, rng: &mut ChaCha12Rng) -> RawGraph {
    let mut order: Vec<usize> = (0..raw.vertices.len()).collect();
    order.shuffle(rng);
    let mut map = std::collections::BTreeMap::new();
    for (pos, &old) in order.iter().enumerate() {
        map.insert(raw.vertices[old].id.clone(), format!("w{pos}"));
    }
    RawGraph {
        vertices: order
            .iter()
            .map(|&old| RawVertex {
                id: map[&raw.vertices[old].id].clone(),
                f: raw.vertices[old].f,
            })
            .collect(),
        edges: raw
            .edges
            .iter()
            .map(|e| RawEdge {
                src: map.get(&e.src).cloned().unwrap_or_else(|| e.src.clone()),
                dst: map.get(&e.dst).cloned().unwrap_or_else(|| e.dst.clone()),
            })
            .collect(),
        nu: raw.nu,
    }
}

fn graph_checks(rep: &mut VerificationReport, seed: u64) {
    let mut rng = family_rng(seed, GRAPH_STREAM);
    let opts = GeneratorOptions::default();
    let mut build_bad = Vec::new();
    let mut conservation_bad = Vec::new();
    let mut bounds_bad = Vec::new();
    let mut relabel_bad = Vec::new();

    for i in 0..GRAPH_SAMPLES {
        let gseed = rng.random::<u64>();
        let raw = random_graph(gseed, &opts);
        let g = match validate_graph(&raw) {
            Ok(g) => g,
            Err(e) => {
                build_bad.push(format!("graph {i}: {e}"));
                continue;
            }
        };
        let w = match assign_weights(&g) {
            Ok(w) => w,
            Err(e) => {
                build_bad.push(format!("graph {i}: {e}"));
                continue;
            }
        };

        if !conservation_holds(&g, &w) {
            let broken: Vec<String> = level_sums(&g, &w)
                .into_iter()
                .filter(|(_, s)| !s.is_one())
                .map(|(t, s)| format!("t = {t}: {}", rat_to_string(&s)))
                .take(2)
                .collect();
            conservation_bad.push(format!("graph {i}: {}", broken.join(", ")));
        }

        match renormalize_levels(&g, None) {
            Ok(r) => {
                let b = check_weight_bounds(&g, &w, &r);
                if !b.all_passed() {
                    let first = b
                        .checks
                        .iter()
                        .find(|c| !c.passed)
                        .map(|c| c.name.clone())
                        .unwrap_or_default();
                    bounds_bad.push(format!("graph {i}: {first}"));
                }
            }
            Err(e) => build_bad.push(format!("graph {i}: {e}")),
        }

        let relabeled = relabeled_copy(&raw, &mut rng);
        match validate_graph(&relabeled).and_then(|g2| assign_weights(&g2)) {
            Ok(w2) => {
                if w2.weights != w.weights {
                    relabel_bad.push(format!("graph {i}: weights changed"));
                }
            }
            Err(e) => relabel_bad.push(format!("graph {i}: {e}")),
        }
    }

    push_aggregate(rep, "weights: generated graphs validate and renormalize", build_bad);
    push_aggregate(
        rep,
        format!("weights: every level sum equals one on {GRAPH_SAMPLES} random graphs"),
        conservation_bad,
    );
    push_aggregate(rep, "weights: per-edge weight and value floors hold on every graph", bounds_bad);
    push_aggregate(rep, "weights: recursion invariant under vertex relabeling", relabel_bad);
}

fn assemble_from_raw(raw: &RawGraph) -> Result<(Weighting, SingularSurface)> {
    let g = validate_graph(raw)?;
    let w = assign_weights(&g)?;
    let r = renormalize_levels(&g, None)?;
    let s = assemble_surface(&g, &w, &r)?;
    Ok((w, s))
}

fn assembly_checks(rep: &mut VerificationReport, seed: u64) {
    let mut rng = family_rng(seed, ASSEMBLY_STREAM);
    let mut build_bad = Vec::new();
    let mut linear_bad = Vec::new();
    let mut band_bad = Vec::new();
    let mut glue_bad = Vec::new();
    let mut cone_bad = Vec::new();
    let mut cone_worst = 0.0f64;

    for i in 0..ASSEMBLY_SAMPLES {
        let gseed = rng.random::<u64>();
        let raw = random_graph(gseed, &GeneratorOptions::default());
        let (w, s) = match assemble_from_raw(&raw) {
            Ok(x) => x,
            Err(e) => {
                build_bad.push(format!("graph {i}: {e}"));
                continue;
            }
        };

        // Exact linearity area(B_t) = t, probing both small levels and
        // levels in the neighborhood of renormalized vertex values.
        for j in 0..LEVEL_PROBES {
            let t: Rat = if j % 2 == 0 || s.singular_vertices().is_empty() {
                rat(rng.random_range(1..10_000), rng.random_range(1..100))
            } else {
                let vs = s.singular_vertices();
                let u = vs[rng.random_range(0..vs.len())].u.clone();
                u + rat(rng.random_range(-64i64..=64), 64)
            };
            if t <= Rat::zero() {
                continue;
            }
            let a = s.sublevel_area_exact(&t);
            if a != t {
                linear_bad.push(format!(
                    "graph {i}: area({}) = {}",
                    rat_to_string(&t),
                    rat_to_string(&a)
                ));
            }
        }

        // Exact band identity area{s < u <= t} = t - s.
        for _ in 0..BAND_PROBES {
            let mut t1: Rat = rat(rng.random_range(1..10_000), rng.random_range(1..100));
            let mut t2: Rat = rat(rng.random_range(1..10_000), rng.random_range(1..100));
            if t1 > t2 {
                std::mem::swap(&mut t1, &mut t2);
            }
            match s.band_area_exact(&t1, &t2) {
                Ok(a) => {
                    if a != &t2 - &t1 {
                        band_bad.push(format!(
                            "graph {i}: band ({}, {}] has area {}",
                            rat_to_string(&t1),
                            rat_to_string(&t2),
                            rat_to_string(&a)
                        ));
                    }
                }
                Err(e) => band_bad.push(format!("graph {i}: {e}")),
            }
        }

        // Gluing: the lone circle at each vertex splits into the two
        // opposite circles, every length being weight * u exactly.
        for (vi, v) in s.singular_vertices().iter().enumerate() {
            if v.single_length != &v.double_lengths[0] + &v.double_lengths[1] {
                glue_bad.push(format!("graph {i} vertex {vi}: sub-arcs do not sum"));
            }
            if v.single_length != &w.weights[v.single_edge] * &v.u {
                glue_bad.push(format!("graph {i} vertex {vi}: lone circle length off"));
            }
            for side in 0..2 {
                if v.double_lengths[side] != &w.weights[v.double_edges[side]] * &v.u {
                    glue_bad.push(format!(
                        "graph {i} vertex {vi}: sub-arc {side} not weight-proportional"
                    ));
                }
            }

            let rho = model_chart_radius(s.chart_radius(vi));
            match cone_angle_numeric(rho) {
                Ok(angle) => cone_worst = cone_worst.max((angle - 4.0 * PI).abs()),
                Err(e) => cone_bad.push(format!("graph {i} vertex {vi}: {e}")),
            }
        }
    }

    push_aggregate(rep, "assembly: generated graphs assemble", build_bad);
    push_aggregate(rep, "assembly: sublevel area equals the level exactly", linear_bad);
    push_aggregate(rep, "assembly: band area equals the level difference exactly", band_bad);
    push_aggregate(rep, "assembly: vertex circles split by child weights exactly", glue_bad);
    if cone_bad.is_empty() {
        rep.check_le("assembly: cone angle at every vertex is 4\u{3c0}", cone_worst, 1e-6);
    } else {
        rep.push(
            CheckItem::new("assembly: cone angle at every vertex is 4\u{3c0}", false)
                .details(summarize(&cone_bad)),
        );
    }
}

fn calibration_checks(rep: &mut VerificationReport, seed: u64) {
    let mut rng = family_rng(seed, CALIBRATION_STREAM);

    let mut worst_add = 0.0f64;
    let mut mono_ok = true;
    for _ in 0..200 {
        let c = rng.random_range(0.0..10.0);
        let v1 = rng.random_range(0.0..50.0);
        let v2 = rng.random_range(0.0..50.0);
        let gap = (calibration_lower_bound(c, v1 + v2)
            - calibration_lower_bound(c, v1)
            - calibration_lower_bound(c, v2))
        .abs();
        worst_add = worst_add.max(gap / (1.0 + c * (v1 + v2)));
        let c2 = c + rng.random_range(0.0..5.0);
        if calibration_lower_bound(c, v1) > calibration_lower_bound(c2, v1) {
            mono_ok = false;
        }
    }
    rep.check_le("calibration: lower bound additive in volume", worst_add, 1e-12);
    rep.check_bool("calibration: lower bound nondecreasing in the calibration constant", mono_ok);

    let opts = GeneratorOptions { max_vertices: 40, all_levels_disconnected: true };
    let mut build_bad = Vec::new();
    let mut cover_bad = Vec::new();
    let mut ineq_bad = Vec::new();
    let mut idem_bad = Vec::new();
    for i in 0..COVERAGE_SAMPLES {
        let gseed = rng.random::<u64>();
        let raw = random_graph(gseed, &opts);
        let s = match assemble_from_raw(&raw) {
            Ok((_, s)) => s,
            Err(e) => {
                build_bad.push(format!("graph {i}: {e}"));
                continue;
            }
        };
        match pipe_clearing_coverage(&s) {
            Ok(cov) => {
                if let Err(e) = cov.ensure_complete() {
                    cover_bad.push(format!("graph {i}: {e}"));
                }
                let ver = cov.verification();
                if !ver.all_passed() {
                    let first = ver
                        .checks
                        .iter()
                        .find(|c| !c.passed)
                        .map(|c| c.name.clone())
                        .unwrap_or_default();
                    ineq_bad.push(format!("graph {i}: {first}"));
                }
                let again = pipe_clearing_coverage(&s).and_then(|c2| c2.to_json());
                match (cov.to_json(), again) {
                    (Ok(a), Ok(b)) => {
                        if a != b {
                            idem_bad.push(format!("graph {i}: reports differ"));
                        }
                    }
                    _ => idem_bad.push(format!("graph {i}: serialization failed")),
                }
            }
            Err(e) => cover_bad.push(format!("graph {i}: {e}")),
        }
    }
    push_aggregate(rep, "calibration: disconnected-level graphs assemble", build_bad);
    push_aggregate(
        rep,
        "calibration: coverage is complete when every level is disconnected",
        cover_bad,
    );
    push_aggregate(rep, "calibration: exchange inequality holds at every critical value", ineq_bad);
    push_aggregate(rep, "calibration: coverage re-runs are identical", idem_bad);

    // A connected critical level must leave an uncovered interval.
    let gap_name = "calibration: a connected critical level leaves an uncovered interval";
    let item = match assemble_from_raw(&triply_punctured_raw()) {
        Ok((_, s)) => match pipe_clearing_coverage(&s) {
            Ok(cov) => match cov.entries.iter().find_map(|e| e.gap.as_ref()) {
                Some((lo, hi)) => {
                    let hi_str = match hi {
                        Ext::Inf => "inf".to_string(),
                        Ext::Finite(x) => rat_to_string(x),
                    };
                    CheckItem::new(gap_name, true).details(format!(
                        "uncovered interval ({}, {hi_str})",
                        rat_to_string(lo)
                    ))
                }
                None => CheckItem::new(gap_name, false).details("no gap entry reported"),
            },
            Err(e) => CheckItem::new(gap_name, false).details(format!("error: {e}")),
        },
        Err(e) => CheckItem::new(gap_name, false).details(format!("error: {e}")),
    };
    rep.push(item);
}

fn rev_checks(rep: &mut VerificationReport, seed: u64) {
    let mut rng = family_rng(seed, REV_STREAM);

    let cases: [(&str, Profile, f64); 3] = [
        ("flat", Profile::Euclidean, 40.0),
        ("curvature -1", Profile::Hyperbolic, 2.0 * PI * (3.0f64.cosh() - 1.0)),
        ("curvature +1 cap", Profile::ConstantCurvature(1.0), 0.88 * 4.0 * PI),
    ];
    for (tag, p, v_built) in &cases {
        let round_name = format!("revolution[{tag}]: profile-metric roundtrip sup relative error");
        let curv_name =
            format!("revolution[{tag}]: metric curvature matches the profile second difference");
        let built = metric_from_profile(p, *v_built)
            .and_then(|s| profile_from_metric(&s).map(|back| (back, s)));
        match built {
            Ok((back, s)) => {
                let hi = 0.995 * v_built;
                let mut worst = 0.0f64;
                for i in 0..=120 {
                    let v = 1e-6 * (hi / 1e-6).powf(i as f64 / 120.0);
                    let truth = p.i(v);
                    worst = worst.max((back.i(v) - truth).abs() / truth);
                }
                rep.check_le(round_name, worst, 1e-6);

                let mut worst_k = 0.0f64;
                let mut k_bad = Vec::new();
                for i in 0..25 {
                    let v = 1e-3 * (0.97 * v_built / 1e-3).powf((i as f64 + 0.5) / 25.0);
                    match s.r_of_v(v) {
                        Ok(r) => {
                            let k_metric = s.curvature_at(r);
                            let h = 1e-3 * v.max(1e-2);
                            let sq = |x: f64| {
                                let iv = p.i(x);
                                iv * iv
                            };
                            let k_fd = -0.5 * (sq(v + h) - 2.0 * sq(v) + sq(v - h)) / (h * h);
                            worst_k =
                                worst_k.max((k_fd - k_metric).abs() / k_metric.abs().max(1.0));
                        }
                        Err(e) => k_bad.push(format!("v = {v}: {e}")),
                    }
                }
                if k_bad.is_empty() {
                    rep.check_le(curv_name, worst_k, 1e-4);
                } else {
                    rep.push(CheckItem::new(curv_name, false).details(summarize(&k_bad)));
                }
            }
            Err(e) => {
                rep.push(CheckItem::new(round_name, false).details(format!("error: {e}")));
                rep.push(CheckItem::new(curv_name, false).details(format!("error: {e}")));
            }
        }
    }

    // First variation of length under a radial field phi: the analytic
    // integral of kappa * phi * f against a central difference of the
    // length itself.
    let metrics = [
        ClosedMetric::Euclidean,
        ClosedMetric::HyperbolicPlane,
        ClosedMetric::Sphere(0.8),
    ];
    let mut worst_var = 0.0f64;
    for j in 0..VARIATION_CURVES {
        let m = &metrics[j % metrics.len()];
        let r0 = rng.random_range(0.6..1.5);
        let mut base_c = [0.0f64; 5];
        let mut base_s = [0.0f64; 5];
        for mm in 1..=4usize {
            let scale = 0.06 * r0 / (mm * mm) as f64;
            base_c[mm] = rng.random_range(-1.0..1.0) * scale;
            base_s[mm] = rng.random_range(-1.0..1.0) * scale;
        }
        let mut var_c = [0.0f64; 5];
        let mut var_s = [0.0f64; 5];
        // A guaranteed mean component keeps the variation away from the
        // kernel of the length differential, so the relative comparison
        // below is well conditioned.
        var_c[0] = rng.random_range(0.5..1.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        for mm in 1..=4usize {
            var_c[mm] = rng.random_range(-1.0..1.0);
            var_s[mm] = rng.random_range(-1.0..1.0);
        }
        let rho_jet = |t: f64| -> (f64, f64, f64) {
            let mut r = r0;
            let mut rp = 0.0;
            let mut rpp = 0.0;
            for mm in 1..=4usize {
                let (sn, cs) = (mm as f64 * t).sin_cos();
                r += base_c[mm] * cs + base_s[mm] * sn;
                rp += mm as f64 * (base_s[mm] * cs - base_c[mm] * sn);
                rpp -= (mm * mm) as f64 * (base_c[mm] * cs + base_s[mm] * sn);
            }
            (r, rp, rpp)
        };
        let phi_jet = |t: f64| -> (f64, f64) {
            let mut p = var_c[0];
            let mut pp = 0.0;
            for mm in 1..=4usize {
                let (sn, cs) = (mm as f64 * t).sin_cos();
                p += var_c[mm] * cs + var_s[mm] * sn;
                pp += mm as f64 * (var_s[mm] * cs - var_c[mm] * sn);
            }
            (p, pp)
        };
        let n = 1024;
        let len_at = |eps: f64| {
            curve_length(
                m,
                &|t: f64| {
                    let (r, rp, _) = rho_jet(t);
                    let (p, pp) = phi_jet(t);
                    (r + eps * p, rp + eps * pp)
                },
                n,
            )
        };
        let eps = 1e-5 * r0;
        let fd = (len_at(eps) - len_at(-eps)) / (2.0 * eps);
        let analytic = quad::trapezoid_periodic(
            &|t: f64| {
                let (r, rp, rpp) = rho_jet(t);
                geodesic_curvature(m, r, rp, rpp) * phi_jet(t).0 * m.g(r)
            },
            n,
        );
        worst_var = worst_var.max((fd - analytic).abs() / analytic.abs().max(1e-3));
    }
    rep.check_le(
        "revolution: geodesic curvature matches the first variation of length",
        worst_var,
        1e-5,
    );

    // The constant-curvature cap profile is the comparison bound itself.
    let cap_name = "revolution: constant-curvature cap profile equals the comparison bound";
    let mut cap_worst = 0.0f64;
    let mut cap_err: Option<String> = None;
    for k in [0.5, 2.0, 100.0] {
        let p = Profile::ConstantCurvature(k);
        for i in 1..40 {
            let v = (4.0 * PI / k) * i as f64 / 40.0;
            match j_k(k, v) {
                Ok(truth) => cap_worst = cap_worst.max((p.i(v) - truth).abs()),
                Err(e) => cap_err = Some(format!("k = {k}, v = {v}: {e}")),
            }
        }
    }
    match cap_err {
        None => {
            rep.check_le(cap_name, cap_worst, 0.0);
        }
        Some(msg) => rep.push(CheckItem::new(cap_name, false).details(msg)),
    }

    for (tag, p, hi) in [
        ("flat", Profile::Euclidean, 100.0),
        ("curvature -1", Profile::Hyperbolic, 100.0),
        ("curvature +1 cap", Profile::ConstantCurvature(1.0), 0.99 * 4.0 * PI),
    ] {
        let sr = shape_predicates(&p, 1e-4, hi, SHAPE_PAIRS, rng.random::<u64>());
        let ok = sr.subadditive && sr.ratio_nonincreasing;
        let mut item = CheckItem::new(
            format!("revolution[{tag}]: shape predicates imply subadditivity on {SHAPE_PAIRS} pairs"),
            ok,
        )
        .measured(sr.max_subadditivity_gap)
        .bound(0.0);
        if let Some(ce) = sr.counterexample {
            item = item.details(format!("violated at v = {}, v' = {}", ce.v, ce.v_prime));
        }
        rep.push(item);
    }
}

fn conformal_checks(rep: &mut VerificationReport) {
    for (tag, p) in [("linear", Profile::Linear), ("vlogv", Profile::VLogV)] {
        let prefix = format!("conformal[{tag}]");
        match conformal_solve(&p, 2, 1.0).and_then(|sol| sol.invariants_report()) {
            Ok(sub) => {
                for mut item in sub.checks {
                    item.name = format!("{prefix}: {}", item.name);
                    rep.push(item);
                }
            }
            Err(e) => rep.push(
                CheckItem::new(format!("{prefix}: solution invariants"), false)
                    .details(format!("error: {e}")),
            ),
        }
    }

    // Every band the construction reports must meet its targets, with
    // the boundary measure re-evaluated directly at the band levels.
    let targets: Vec<(f64, f64)> = [1.0, 10.0, 100.0]
        .iter()
        .flat_map(|&v| [1e-4, 1e-2, 1e-1].iter().map(move |&e| (v, e)))
        .collect();
    let data = VanishingData::euclidean_default();
    match vanishing_profile_construction(&data, &targets) {
        Ok(c) => {
            let mut vol_deficit = f64::NEG_INFINITY;
            let mut bdry_excess = f64::NEG_INFINITY;
            for b in &c.bands {
                vol_deficit = vol_deficit.max(b.v_star - b.volume);
                let direct = (data.level_measure)(b.s) + (data.level_measure)(b.t);
                bdry_excess = bdry_excess.max(direct - b.eps).max(b.boundary - b.eps);
            }
            rep.check_le("vanishing: band volume reaches every target", vol_deficit, 0.0);
            rep.check_le("vanishing: band boundary stays under every target", bdry_excess, 0.0);
            for mut item in c.report.checks {
                item.name = format!("vanishing: {}", item.name);
                rep.push(item);
            }
        }
        Err(e) => rep.push(
            CheckItem::new("vanishing: construction on a 3x3 target grid", false)
                .details(format!("error: {e}")),
        ),
    }
}

fn oracle_checks(rep: &mut VerificationReport, seed: u64) {
    let mut rng = family_rng(seed, ORACLE_STREAM);
    let cases: [(&str, ClosedMetric, f64, f64, f64); 3] = [
        ("flat plane", ClosedMetric::Euclidean, 0.0, 4.0, PI),
        (
            "curvature -1 plane",
            ClosedMetric::HyperbolicPlane,
            -1.0,
            4.0,
            2.0 * PI * (1.0f64.cosh() - 1.0),
        ),
        (
            "curvature +1 sphere",
            ClosedMetric::Sphere(1.0),
            1.0,
            1.5,
            2.0 * PI * (1.0 - 0.9f64.cos()),
        ),
    ];

    let floor_name = "oracle: every competitor clears the curvature comparison floor";
    let proj_name = "oracle: projected competitor area error";
    let mut floor_margin = f64::INFINITY;
    let mut proj_worst = 0.0f64;
    let mut search_bad = Vec::new();
    for (tag, m, k, r_limit, v) in &cases {
        match competitor_search(m, *r_limit, *v, 5, 4, rng.random::<u64>()) {
            Ok(out) => {
                let floor = comparison_floor(*k, *v) - 1e-6;
                for &l in &out.trial_lengths {
                    floor_margin = floor_margin.min(l - floor);
                }
                floor_margin = floor_margin.min(out.best_length - floor);
                proj_worst = proj_worst.max((out.best.area - v).abs());
            }
            Err(e) => search_bad.push(format!("{tag}: {e}")),
        }
    }
    if search_bad.is_empty() {
        rep.check_ge(floor_name, floor_margin, 0.0);
        rep.check_le(proj_name, proj_worst, 1e-10);
    } else {
        rep.push(CheckItem::new(floor_name, false).details(summarize(&search_bad)));
        rep.push(CheckItem::new(proj_name, false).details(summarize(&search_bad)));
    }

    let mono_seed = rng.random::<u64>();
    let few = competitor_search(&ClosedMetric::Euclidean, 4.0, PI, 4, 3, mono_seed);
    let many = competitor_search(&ClosedMetric::Euclidean, 4.0, PI, 4, 8, mono_seed);
    match (few, many) {
        (Ok(a), Ok(b)) => {
            rep.check_le(
                "oracle: best length nonincreasing in trial count",
                b.best_length - a.best_length,
                0.0,
            );
            rep.check_bool(
                "oracle: per-trial results reproducible across trial counts",
                b.trial_lengths[..a.trial_lengths.len()] == a.trial_lengths[..],
            );
        }
        (a, b) => {
            let mut msgs = Vec::new();
            if let Err(e) = a {
                msgs.push(e.to_string());
            }
            if let Err(e) = b {
                msgs.push(e.to_string());
            }
            rep.push(
                CheckItem::new("oracle: best length nonincreasing in trial count", false)
                    .details(msgs.join("; ")),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::level_graph::two_vertex_raw;
    use crate::report;

    #[test]
    fn default_run_passes_every_check() {
        let rep = property_suite(&[], 7);
        assert!(rep.checks.len() >= 25, "suite unexpectedly small: {}", rep.checks.len());
        let failing: Vec<&str> = rep
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        assert!(failing.is_empty(), "failing checks: {failing:?}");
    }

    #[test]
    fn fixed_seed_reports_are_byte_identical() {
        let a = report::to_json_string(&property_suite(&[], 42)).unwrap();
        let b = report::to_json_string(&property_suite(&[], 42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn targets_restrict_the_families() {
        let oracle = property_suite(&[SuiteTarget::Oracle], 3);
        assert!(!oracle.checks.is_empty());
        assert!(
            oracle.checks.iter().all(|c| c.name.starts_with("oracle")),
            "stray items: {:?}",
            oracle.checks.iter().map(|c| &c.name).collect::<Vec<_>>()
        );
        let graph = property_suite(&[SuiteTarget::Graph], 3);
        assert!(graph.checks.iter().all(|c| c.name.starts_with("weights")));
    }

    #[test]
    fn corrupted_weight_is_pinpointed() {
        let g = validate_graph(&two_vertex_raw()).unwrap();
        let mut w = assign_weights(&g).unwrap();
        assert!(weight_audit(&g, &w).all_passed());

        // Edge 0 is the only one crossing levels below the first vertex,
        // so corrupting it breaks exactly those level sums.
        w.weights[0] = rat(3, 4);
        let audit = weight_audit(&g, &w);
        assert!(!audit.all_passed());
        let pin = audit
            .checks
            .iter()
            .find(|c| c.name == "weight conservation at every level")
            .unwrap();
        assert!(!pin.passed);
        assert!(pin.details.contains("[0]"), "details: {}", pin.details);
        assert!(audit.checks.iter().any(|c| c.name.starts_with("level_sum[") && !c.passed));
        assert!(audit.checks.iter().any(|c| c.name.starts_with("level_sum[") && c.passed));
    }

    #[test]
    fn target_names_parse() {
        for t in SuiteTarget::ALL {
            assert_eq!(t.name().parse::<SuiteTarget>().unwrap(), t);
        }
        assert!("bogus".parse::<SuiteTarget>().is_err());
    }
}
