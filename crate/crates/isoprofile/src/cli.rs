//! Command-line front end: every pipeline stage behind one binary, with
//! reproducible reports.
//!
//! Exit codes: 0 when every check in the run passed, 1 when at least one
//! check failed, 2 for command-line usage errors, 3 when a computation
//! could not run at all (the error is printed to stderr as a single
//! structured JSON line carrying [`Error::code`]).
//!
//! The main report always prints to stdout and is byte-identical for the
//! same command line and seed. `--out DIR` additionally writes the
//! report and any plot data to files, plus a `run_meta.json` sidecar
//! holding the wall-clock timestamp; the sidecar is the only place a
//! timestamp ever appears, which is what keeps reports diffable.
//! `ISOPROFILE_THREADS` caps the worker pool.

use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::calibration::pipe_clearing_coverage;
use crate::conformal::{
    asymptotic_diagnostics, conformal_solve, vanishing_profile_construction, VanishingData,
};
use crate::cusp_assembly::{
    assemble_surface, cone_angle_numeric, model_chart_radius, SingularSurface,
};
use crate::error::{Error, Result};
use crate::exact::{rat_to_f64, rat_to_string, Ext};
use crate::level_graph::{
    assign_weights, check_weight_bounds, renormalize_levels, LevelGraph, Weighting,
};
use crate::oracle::{
    comparison_floor, competitor_search, singular_flux, GRADIENT_CHECK_RTOL,
};
use crate::report::{self, CheckItem, VerificationReport};
use crate::revolution::{
    build_cap, merge_profiles, metric_from_profile, profile_from_metric, shape_predicates,
    stability_scan, ClosedMetric, Profile,
};
use crate::suite::{property_suite, weight_audit, SuiteTarget};

/// Entry point for the binary: parses `std::env::args`, runs, and
/// returns the process exit code.
pub fn main() -> i32 {
    run(std::env::args_os())
}

/// Parse and execute a full command line (first element = program name).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    apply_thread_cap();
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let usage_ok =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if usage_ok { 0 } else { 2 };
        }
    };
    match dispatch(cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let line = json!({"error": {"code": e.code(), "message": e.to_string()}});
            eprintln!("{line}");
            3
        }
    }
}

fn apply_thread_cap() {
    if let Ok(s) = std::env::var("ISOPROFILE_THREADS") {
        if let Ok(n) = s.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "isoprofile",
    version,
    about = "Exact and numerical workbench for isoperimetric profiles of surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Family,
}

#[derive(Subcommand, Debug)]
enum Family {
    /// Level graphs: validation, exact edge weights, renormalized values.
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },
    /// Singular surfaces: assembly, sublevel areas, calibrated coverage.
    Surface {
        #[command(subcommand)]
        action: SurfaceAction,
    },
    /// Surfaces of revolution: profiles, metrics, caps, stability, merges.
    Rev {
        #[command(subcommand)]
        action: RevAction,
    },
    /// Conformal stretches: level solves, blow-up diagnostics, vanishing bands.
    Conformal {
        #[command(subcommand)]
        action: ConformalAction,
    },
    /// Brute-force oracles: competitor search and singular flux.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
    /// Run the cross-module property suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    /// Directory for report and plot-data files (stdout always gets the report).
    #[arg(long = "out", value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GraphIn {
    /// Graph description JSON ({"vertices": [...], "edges": [...]}).
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Subcommand, Debug)]
enum GraphAction {
    /// Parse and validate a graph description.
    Validate(GraphIn),
    /// Assign exact edge weights; audit level sums and edge floors.
    Weights(GraphIn),
    /// Renormalize vertex values onto the fast-growth scale.
    Renormalize(GraphRenormArgs),
}

#[derive(Args, Debug)]
struct GraphRenormArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Growth exponent override (defaults to the least admissible one).
    #[arg(long)]
    nu: Option<u32>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Subcommand, Debug)]
enum SurfaceAction {
    /// Assemble the singular surface and dump annuli and cone points.
    Assemble(GraphIn),
    /// Tabulate sublevel areas and check they equal the level.
    Areas(AreasArgs),
    /// Pipe-clearing coverage; an uncovered interval fails the run.
    Coverage(GraphIn),
}

#[derive(Args, Debug)]
struct AreasArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Largest level to tabulate.
    #[arg(long, default_value_t = 1000.0)]
    tmax: f64,
    /// Number of levels.
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Subcommand, Debug)]
enum RevAction {
    /// Sample a profile to CSV and check its shape predicates.
    Profile(ProfileArgs),
    /// Realize a profile as a metric and verify the roundtrip.
    Metric(ProfileArgs),
    /// Build a cap with prescribed curvature scale, neck, and reach.
    Cap(CapArgs),
    /// Scan circle stability and spectral resonances of a realized metric.
    Stability(ProfileArgs),
    /// Merge cap profiles under an ambient profile.
    Merge(MergeArgs),
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// Profile preset: euclidean | hyperbolic | bolfiala:K | linear | vlogv.
    #[arg(long, conflicts_with = "input")]
    preset: Option<String>,
    /// Profile JSON file (grid of v and I^2 values with end anchors).
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Largest volume to sample or realize.
    #[arg(long, default_value_t = 10.0)]
    vmax: f64,
    /// Number of sample points.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct CapArgs {
    /// Neck volume: the profile is linear from delta out to alpha.
    #[arg(long)]
    delta: f64,
    /// Requested pole curvature scale.
    #[arg(long)]
    k: f64,
    /// Reach of the linear band.
    #[arg(long)]
    alpha: f64,
    /// Number of CSV sample points.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct MergeArgs {
    /// Cap profiles (preset name or JSON file path); repeatable.
    #[arg(long = "cap", value_name = "SPEC", required = true)]
    caps: Vec<String>,
    /// Ambient profile (preset name or JSON file path).
    #[arg(long)]
    ambient: String,
    /// Per-cap seam scale; the merged seam sits at m*delta.
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Subcommand, Debug)]
enum ConformalAction {
    /// Integrate the stretched-end level/volume correspondence.
    Solve(SolveArgs),
    /// Blow-up diagnostics: integral identity, asymptote, completeness.
    Diagnostics(SolveArgs),
    /// Construct bands with prescribed volume and vanishing boundary.
    Vanishing(VanishingArgs),
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Profile preset: linear | vlogv (or any convex profile file).
    #[arg(long, default_value = "vlogv", conflicts_with = "input")]
    preset: String,
    /// Profile JSON file.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Dimension parameter of the level equation.
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Seam level where the conformal factor is 1.
    #[arg(long, default_value_t = 1.0)]
    t0: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct VanishingArgs {
    /// Band volume targets.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 10.0, 100.0])]
    vstar: Vec<f64>,
    /// Band boundary targets.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1e-4, 1e-2, 1e-1])]
    eps: Vec<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Subcommand, Debug)]
enum OracleAction {
    /// Fourier competitor search against the parallel circle.
    Search(SearchArgs),
    /// Flux of the model calibrating form across a chart circle.
    Flux(FluxArgs),
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Ambient metric: euclidean | hyperbolic | exponential | sphere:K.
    #[arg(long, default_value = "euclidean")]
    metric: String,
    /// Radial ceiling of the search band.
    #[arg(long, default_value_t = 4.0)]
    rlimit: f64,
    /// Target enclosed area.
    #[arg(long)]
    area: f64,
    /// Highest Fourier mode of the competitors.
    #[arg(long, default_value_t = 8)]
    modes: usize,
    /// Random restarts.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative slack against the circle and the comparison floor.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct FluxArgs {
    /// Chart radius (0 < r <= log 2).
    #[arg(long)]
    r: f64,
    /// Peak value of the singular density (cancels; must be positive).
    #[arg(long, default_value_t = 1.0)]
    upeak: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict to families: graph|surface|rev|conformal|oracle.
    #[arg(long, value_delimiter = ',')]
    targets: Vec<String>,
    #[command(flatten)]
    out: OutArgs,
}

fn dispatch(cmd: Family) -> Result<bool> {
    match cmd {
        Family::Graph { action } => match action {
            GraphAction::Validate(a) => graph_validate(a),
            GraphAction::Weights(a) => graph_weights(a),
            GraphAction::Renormalize(a) => graph_renormalize(a),
        },
        Family::Surface { action } => match action {
            SurfaceAction::Assemble(a) => surface_assemble(a),
            SurfaceAction::Areas(a) => surface_areas(a),
            SurfaceAction::Coverage(a) => surface_coverage(a),
        },
        Family::Rev { action } => match action {
            RevAction::Profile(a) => rev_profile(a),
            RevAction::Metric(a) => rev_metric(a),
            RevAction::Cap(a) => rev_cap(a),
            RevAction::Stability(a) => rev_stability(a),
            RevAction::Merge(a) => rev_merge(a),
        },
        Family::Conformal { action } => match action {
            ConformalAction::Solve(a) => conformal_solve_cmd(a),
            ConformalAction::Diagnostics(a) => conformal_diagnostics_cmd(a),
            ConformalAction::Vanishing(a) => conformal_vanishing_cmd(a),
        },
        Family::Oracle { action } => match action {
            OracleAction::Search(a) => oracle_search(a),
            OracleAction::Flux(a) => oracle_flux(a),
        },
        Family::Verify(a) => verify_cmd(a),
    }
}

/// Print the report, optionally write artifacts and the timestamp
/// sidecar, and reduce to the exit-relevant pass/fail bit.
fn finish(
    out: &OutArgs,
    name: &str,
    rep: VerificationReport,
    mut artifacts: Vec<(String, String)>,
) -> Result<bool> {
    let json = report::to_json_string(&rep)?;
    println!("{json}");
    if let Some(dir) = &out.out {
        fs::create_dir_all(dir)?;
        artifacts.insert(0, (format!("{name}_report.json"), format!("{json}\n")));
        for (file, content) in &artifacts {
            fs::write(dir.join(file), content)?;
        }
        let stamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let meta = report::to_json_string(&json!({"command": name, "unix_time": stamp}))?;
        fs::write(dir.join("run_meta.json"), format!("{meta}\n"))?;
    }
    Ok(rep.all_passed())
}

fn load_graph(path: &Path) -> Result<LevelGraph> {
    let text = fs::read_to_string(path)?;
    crate::level_graph::from_json(&text)
}

fn load_profile(preset: &Option<String>, input: &Option<PathBuf>) -> Result<Profile> {
    match (preset, input) {
        (Some(name), None) => Profile::preset(name),
        (None, Some(path)) => Profile::from_json(&fs::read_to_string(path)?),
        (None, None) => Err(Error::BadParameters(
            "a profile is required: pass --preset NAME or --in FILE".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap rejects conflicting flags"),
    }
}

/// Preset name or JSON file path, for flags that accept either.
fn profile_spec(spec: &str) -> Result<Profile> {
    if Path::new(spec).exists() {
        Profile::from_json(&fs::read_to_string(spec)?)
    } else {
        Profile::preset(spec)
    }
}

fn metric_spec(spec: &str) -> Result<(ClosedMetric, f64)> {
    if let Some(k) = spec.strip_prefix("sphere:") {
        let k: f64 = k
            .parse()
            .map_err(|_| Error::BadParameters(format!("bad curvature in {spec:?}")))?;
        if !(k > 0.0) {
            return Err(Error::BadParameters(format!("sphere curvature {k} must be positive")));
        }
        return Ok((ClosedMetric::Sphere(k), k));
    }
    match spec {
        "euclidean" => Ok((ClosedMetric::Euclidean, 0.0)),
        "hyperbolic" => Ok((ClosedMetric::HyperbolicPlane, -1.0)),
        "exponential" => Ok((ClosedMetric::Exponential, -1.0)),
        other => Err(Error::BadParameters(format!(
            "unknown metric {other:?}; expected euclidean|hyperbolic|exponential|sphere:K"
        ))),
    }
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::BadParameters(format!("{name} = {x} must be positive and finite")))
    }
}

fn ext_str(e: &Ext) -> String {
    match e {
        Ext::Inf => "inf".to_string(),
        Ext::Finite(x) => rat_to_string(x),
    }
}

fn graph_validate(a: GraphIn) -> Result<bool> {
    let g = load_graph(&a.input)?;
    let mut rep = VerificationReport::new(None);
    rep.push(
        CheckItem::new("graph validates (trivalent, value-oriented, gap-free)", true).details(
            format!(
                "{} vertices, {} edges, {} seed edges, default growth exponent {}, \
                 all levels disconnected: {}",
                g.vertices().len(),
                g.edges().len(),
                g.n_seed(),
                g.default_nu(),
                g.levels_all_disconnected()
            ),
        ),
    );
    let echo = report::to_json_string(&g.to_raw())?;
    finish(&a.out, "graph_validate", rep, vec![("graph.json".into(), format!("{echo}\n"))])
}

fn weights_artifact(g: &LevelGraph, w: &Weighting) -> Result<String> {
    let raw = g.to_raw();
    let edges: Vec<_> = raw
        .edges
        .iter()
        .zip(&w.weights)
        .enumerate()
        .map(|(k, (e, wt))| {
            json!({
                "index": k,
                "src": e.src,
                "dst": e.dst,
                "weight": rat_to_string(wt),
                "weight_float": rat_to_f64(wt),
            })
        })
        .collect();
    report::to_json_string(&json!({ "edges": edges }))
}

fn graph_weights(a: GraphIn) -> Result<bool> {
    let g = load_graph(&a.input)?;
    let w = assign_weights(&g)?;
    let mut rep = weight_audit(&g, &w);
    let r = renormalize_levels(&g, None)?;
    rep.merge(check_weight_bounds(&g, &w, &r));
    let artifact = weights_artifact(&g, &w)?;
    finish(&a.out, "graph_weights", rep, vec![("weights.json".into(), format!("{artifact}\n"))])
}

fn graph_renormalize(a: GraphRenormArgs) -> Result<bool> {
    let g = load_graph(&a.input)?;
    let r = renormalize_levels(&g, a.nu)?;
    let mut rep = VerificationReport::new(None);
    rep.push(
        CheckItem::new("renormalization admissible", true)
            .details(format!("growth exponent {}, {} vertices", r.nu, r.exponents.len())),
    );
    let vertices: Vec<_> = g
        .vertices()
        .iter()
        .zip(&r.exponents)
        .map(|(v, &e)| {
            json!({
                "id": v.id,
                "value": v.value,
                "exponent_base16": e,
                "log2_u": 4.0 * e as f64,
            })
        })
        .collect();
    let artifact =
        report::to_json_string(&json!({"nu": r.nu, "vertices": vertices}))?;
    finish(
        &a.out,
        "graph_renormalize",
        rep,
        vec![("renormalization.json".into(), format!("{artifact}\n"))],
    )
}

fn assemble(g: &LevelGraph) -> Result<(Weighting, SingularSurface)> {
    let w = assign_weights(g)?;
    let r = renormalize_levels(g, None)?;
    let s = assemble_surface(g, &w, &r)?;
    Ok((w, s))
}

fn surface_assemble(a: GraphIn) -> Result<bool> {
    let g = load_graph(&a.input)?;
    let (w, s) = assemble(&g)?;
    let mut rep = VerificationReport::new(None);
    rep.push(CheckItem::new("surface assembled", true).details(format!(
        "{} annuli, {} cone points, growth exponent {}",
        s.annuli().len(),
        s.singular_vertices().len(),
        s.nu()
    )));
    let mut glue_ok = true;
    let mut cone_worst = 0.0f64;
    for (vi, v) in s.singular_vertices().iter().enumerate() {
        glue_ok &= v.single_length == &v.double_lengths[0] + &v.double_lengths[1];
        glue_ok &= v.single_length == &w.weights[v.single_edge] * &v.u;
        let rho = model_chart_radius(s.chart_radius(vi));
        cone_worst = cone_worst.max((cone_angle_numeric(rho)? - 4.0 * std::f64::consts::PI).abs());
    }
    rep.check_bool("vertex circles split exactly by child weights", glue_ok);
    rep.check_le("cone angle at every vertex is 4\u{3c0}", cone_worst, 1e-6);
    finish(
        &a.out,
        "surface_assemble",
        rep,
        vec![("surface.json".into(), format!("{}\n", s.to_json()?))],
    )
}

fn surface_areas(a: AreasArgs) -> Result<bool> {
    positive("tmax", a.tmax)?;
    if a.samples == 0 {
        return Err(Error::BadParameters("samples must be at least 1".into()));
    }
    let g = load_graph(&a.input)?;
    let (_, s) = assemble(&g)?;
    let ts: Vec<f64> = (1..=a.samples).map(|j| a.tmax * j as f64 / a.samples as f64).collect();
    let mut worst = 0.0f64;
    for &t in &ts {
        worst = worst.max((s.sublevel_area(t) - t).abs() / t.max(1.0));
    }
    let mut rep = VerificationReport::new(None);
    rep.check_le("sublevel area equals the level (floating path)", worst, 1e-12);
    finish(
        &a.out,
        "surface_areas",
        rep,
        vec![("sublevel_areas.csv".into(), s.sublevel_csv(&ts)?)],
    )
}

fn surface_coverage(a: GraphIn) -> Result<bool> {
    let g = load_graph(&a.input)?;
    let (_, s) = assemble(&g)?;
    let cov = pipe_clearing_coverage(&s)?;
    let mut rep = cov.verification();
    for e in &cov.entries {
        if let Some((lo, hi)) = &e.gap {
            rep.push(
                CheckItem::new(format!("coverage gap at the critical value of {:?}", e.vertex), false)
                    .details(format!(
                        "uncovered area interval ({}, {})",
                        rat_to_string(lo),
                        ext_str(hi)
                    )),
            );
        }
    }
    rep.check_bool("coverage complete at every critical value", cov.covered);
    finish(
        &a.out,
        "surface_coverage",
        rep,
        vec![("coverage.json".into(), format!("{}\n", cov.to_json()?))],
    )
}

/// Sample grid for profile plots: v = vmax*j/samples, capped inside the
/// profile's domain.
fn profile_grid(p: &Profile, vmax: f64, samples: usize) -> Result<Vec<f64>> {
    positive("vmax", vmax)?;
    if samples == 0 {
        return Err(Error::BadParameters("samples must be at least 1".into()));
    }
    let hi = if p.v_max().is_finite() { vmax.min(0.999 * p.v_max()) } else { vmax };
    Ok((1..=samples).map(|j| hi * j as f64 / samples as f64).collect())
}

fn rev_profile(a: ProfileArgs) -> Result<bool> {
    let p = load_profile(&a.preset, &a.input)?;
    let vs = profile_grid(&p, a.vmax, a.samples)?;
    let hi = vs[vs.len() - 1];
    let sr = shape_predicates(&p, 1e-4 * hi, hi, 2000, 0);
    let mut rep = VerificationReport::new(None);
    rep.push(
        CheckItem::new("profile is nondecreasing-ratio and subadditive on samples", sr.subadditive)
            .measured(sr.max_subadditivity_gap)
            .bound(0.0),
    );
    let artifacts = vec![
        ("profile.csv".to_string(), p.csv(&vs)?),
        ("profile.json".to_string(), format!("{}\n", p.to_json(&vs)?)),
    ];
    finish(&a.out, "rev_profile", rep, artifacts)
}

fn rev_metric(a: ProfileArgs) -> Result<bool> {
    let p = load_profile(&a.preset, &a.input)?;
    positive("vmax", a.vmax)?;
    let s = metric_from_profile(&p, a.vmax)?;
    let back = profile_from_metric(&s)?;
    let mut worst = 0.0f64;
    for i in 0..=120 {
        let v = 1e-6 * (0.995 * a.vmax / 1e-6).powf(i as f64 / 120.0);
        worst = worst.max((back.i(v) - p.i(v)).abs() / p.i(v));
    }
    let mut rep = VerificationReport::new(None);
    rep.check_le("profile-metric roundtrip sup relative error", worst, 1e-6);
    let (rs, jets, vols) = s.nodes();
    let rows: Vec<Vec<f64>> = rs
        .iter()
        .zip(jets)
        .zip(vols)
        .map(|((&r, &(f, fp, fpp)), &v)| vec![r, f, fp, fpp, v])
        .collect();
    let csv = report::csv_string(&["r", "f", "f_prime", "f_second", "V"], &rows)?;
    finish(&a.out, "rev_metric", rep, vec![("metric.csv".into(), csv)])
}

fn rev_cap(a: CapArgs) -> Result<bool> {
    positive("delta", a.delta)?;
    positive("k", a.k)?;
    positive("alpha", a.alpha)?;
    let cb = build_cap(a.delta, a.k, a.alpha)?;
    let vs: Vec<f64> = (1..=a.samples).map(|j| a.alpha * j as f64 / a.samples as f64).collect();
    let mut band_worst = 0.0f64;
    for &v in vs.iter().filter(|&&v| v >= a.delta) {
        band_worst = band_worst.max((cb.profile.i(v) - v).abs() / v);
    }
    let j0 = cb.profile.jet(0.0);
    let mut floor_worst = f64::NEG_INFINITY;
    let eta = 2.0 * std::f64::consts::PI / cb.k_real;
    for i in 1..=400 {
        let v = eta * i as f64 / 400.0;
        let floor = 4.0 * std::f64::consts::PI * v - cb.k_real * v * v;
        floor_worst = floor_worst.max(floor - cb.profile.jet(v).h);
    }
    let mut rep = VerificationReport::new(None);
    rep.check_le(
        "pole anchor (I\u{b2})'(0) = 4\u{3c0}",
        (j0.h1 - 4.0 * std::f64::consts::PI).abs(),
        1e-10,
    );
    rep.check_le(
        "pole curvature matches the request",
        (j0.curvature() - a.k).abs() / a.k,
        1e-4,
    );
    rep.check_le("linear band identity I(v) = v beyond the neck", band_worst, 1e-12);
    rep.check_le(
        "comparison floor at the achieved curvature scale",
        floor_worst,
        1e-12,
    );
    rep.push(
        CheckItem::new("achieved curvature scale", true)
            .measured(cb.k_real)
            .details(format!(
                "largest Gauss curvature over the cap (floors hold at this scale); \
                 measured properties at the requested scale: monotone {}, \
                 dominates requested floor {}, curvature within request {}",
                cb.flags.monotone,
                cb.flags.dominates_requested_floor,
                cb.flags.curvature_within_request
            )),
    );
    let artifacts = vec![
        ("cap_profile.csv".to_string(), cb.profile.csv(&vs)?),
        ("cap_profile.json".to_string(), format!("{}\n", cb.profile.to_json(&vs)?)),
    ];
    finish(&a.out, "rev_cap", rep, artifacts)
}

fn rev_stability(a: ProfileArgs) -> Result<bool> {
    let p = load_profile(&a.preset, &a.input)?;
    positive("vmax", a.vmax)?;
    let s = metric_from_profile(&p, a.vmax)?;
    let scan = stability_scan(&s);
    let mut rep = VerificationReport::new(None);
    rep.push(
        CheckItem::new("circle stability scan", true)
            .measured(scan.min_margin)
            .details(format!(
                "q in [{}, {}], strictly stable: {}, nearest resonance at mode {}",
                scan.q_min, scan.q_max, scan.strictly_stable, scan.resonant_mode
            )),
    );
    let artifact = report::to_json_string(&json!({
        "q_min": scan.q_min,
        "q_max": scan.q_max,
        "strictly_stable": scan.strictly_stable,
        "min_margin": scan.min_margin,
        "resonant_mode": scan.resonant_mode,
    }))?;
    finish(&a.out, "rev_stability", rep, vec![("stability.json".into(), format!("{artifact}\n"))])
}

fn rev_merge(a: MergeArgs) -> Result<bool> {
    positive("delta", a.delta)?;
    let caps: Vec<Profile> = a.caps.iter().map(|s| profile_spec(s)).collect::<Result<_>>()?;
    let ambient = profile_spec(&a.ambient)?;
    let outcome = merge_profiles(&caps, &ambient, caps.len(), a.delta)?;
    let mut rep = VerificationReport::new(None);
    rep.push(CheckItem::new("merged profile verified", true).details(format!(
        "seam at {}, unique minimizer below the seam: {:?}",
        outcome.seam, outcome.unique_minimizer
    )));
    let vs = profile_grid(&outcome.profile, 2.0 * outcome.seam, a.samples)?;
    finish(
        &a.out,
        "rev_merge",
        rep,
        vec![("merged_profile.csv".into(), outcome.profile.csv(&vs)?)],
    )
}

fn conformal_solve_cmd(a: SolveArgs) -> Result<bool> {
    let preset = if a.input.is_some() { None } else { Some(a.preset.clone()) };
    let p = load_profile(&preset, &a.input)?;
    let sol = conformal_solve(&p, a.n, a.t0)?;
    let mut rep = sol.invariants_report()?;
    rep.push(CheckItem::new("blow-up level", true).details(match sol.tau {
        Some(tau) => format!("tau = {tau}"),
        None => "none below the volume ceiling".to_string(),
    }));
    let rows: Vec<Vec<f64>> = sol
        .ts
        .iter()
        .zip(&sol.vs)
        .zip(&sol.fs)
        .zip(&sol.ks)
        .map(|(((&t, &v), &f), &k)| vec![t, v, f, k])
        .collect();
    let csv = report::csv_string(&["t", "V", "f", "K"], &rows)?;
    finish(&a.out, "conformal_solve", rep, vec![("solution.csv".into(), csv)])
}

fn conformal_diagnostics_cmd(a: SolveArgs) -> Result<bool> {
    let preset = if a.input.is_some() { None } else { Some(a.preset.clone()) };
    let p = load_profile(&preset, &a.input)?;
    let sol = conformal_solve(&p, a.n, a.t0)?;
    let rep = asymptotic_diagnostics(&sol)?;
    finish(&a.out, "conformal_diagnostics", rep, Vec::new())
}

fn conformal_vanishing_cmd(a: VanishingArgs) -> Result<bool> {
    let mut targets = Vec::new();
    for &v in &a.vstar {
        for &e in &a.eps {
            targets.push((positive("vstar", v)?, positive("eps", e)?));
        }
    }
    let data = VanishingData::euclidean_default();
    let c = vanishing_profile_construction(&data, &targets)?;
    let mut rep = c.report;
    rep.push(CheckItem::new("completeness certificate", true).details(c.certificate.clone()));
    let rows: Vec<Vec<f64>> = c
        .bands
        .iter()
        .map(|b| vec![b.v_star, b.eps, b.s, b.t, b.volume, b.boundary])
        .collect();
    let csv = report::csv_string(&["v_star", "eps", "s", "t", "volume", "boundary"], &rows)?;
    finish(&a.out, "conformal_vanishing", rep, vec![("bands.csv".into(), csv)])
}

fn oracle_search(a: SearchArgs) -> Result<bool> {
    positive("tol", a.tol)?;
    positive("area", a.area)?;
    let (metric, k) = metric_spec(&a.metric)?;
    let out = competitor_search(&metric, a.rlimit, a.area, a.modes, a.trials, a.seed)?;
    let mut rep = VerificationReport::new(Some(a.seed));
    let improvement = (out.circle_length - out.best_length) / out.circle_length;
    rep.check_le("relative improvement over the parallel circle", improvement, a.tol);
    let floor = comparison_floor(k, a.area);
    rep.check_ge("best length against the curvature comparison floor", out.best_length, floor - a.tol);
    rep.check_le("projected area error", (out.best.area - a.area).abs(), 1e-10);
    rep.check_le(
        "analytic gradient agrees with finite differences",
        out.gradient_check,
        GRADIENT_CHECK_RTOL,
    );
    let degenerate: Vec<String> = out
        .degeneracy
        .degenerate
        .iter()
        .map(|(lambda, mode)| format!("mode {mode} (eigenvalue {lambda})"))
        .collect();
    rep.push(
        CheckItem::new("flagged near-degenerate modes", true)
            .measured(degenerate.len() as f64)
            .details(degenerate.join("; ")),
    );
    let summary = report::to_json_string(&json!({
        "seed": a.seed,
        "metric": a.metric,
        "area": a.area,
        "circle_radius": out.circle_radius,
        "circle_length": out.circle_length,
        "best_length": out.best_length,
        "trial_lengths": out.trial_lengths,
        "hessian_spectrum": out.best.hessian_spectrum,
        "comparison_floor": floor,
    }))?;
    let artifacts = vec![
        ("search.json".to_string(), format!("{summary}\n")),
        ("best_curve.csv".to_string(), out.best.csv_string(out.best.grid)?),
    ];
    finish(&a.out, "oracle_search", rep, artifacts)
}

fn oracle_flux(a: FluxArgs) -> Result<bool> {
    let flux = singular_flux(a.r, a.upeak)?;
    let closed = 8.0 * std::f64::consts::PI * a.r.sinh().powi(2);
    let mut rep = VerificationReport::new(None);
    rep.check_ge("flux is positive", flux, 0.0);
    rep.check_le(
        "flux matches twice the model disk area",
        (flux - closed).abs() / closed.max(1e-300),
        1e-6,
    );
    let artifact = report::to_json_string(&json!({
        "r": a.r,
        "u_peak": a.upeak,
        "flux": flux,
        "twice_disk_area": closed,
    }))?;
    finish(&a.out, "oracle_flux", rep, vec![("flux.json".into(), format!("{artifact}\n"))])
}

fn verify_cmd(a: VerifyArgs) -> Result<bool> {
    let targets: Vec<SuiteTarget> =
        a.targets.iter().map(|s| s.parse()).collect::<Result<_>>()?;
    let rep = property_suite(&targets, a.seed);
    finish(&a.out, "verify", rep, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    fn graph_json(raw: &crate::level_graph::RawGraph) -> String {
        report::to_json_string(raw).unwrap()
    }

    fn run_args(args: &[&str]) -> i32 {
        let argv: Vec<String> =
            std::iter::once("isoprofile".to_string()).chain(args.iter().map(|s| s.to_string())).collect();
        run(argv)
    }

    #[test]
    fn verify_exits_zero_on_restricted_pass() {
        assert_eq!(run_args(&["verify", "--seed", "7", "--targets", "graph"]), 0);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["bogus-subcommand"]), 2);
        assert_eq!(run_args(&["rev", "cap", "--delta", "0.1"]), 2);
    }

    #[test]
    fn module_errors_exit_three() {
        assert_eq!(run_args(&["oracle", "flux", "--r", "5.0"]), 3);
        assert_eq!(
            run_args(&["oracle", "search", "--area", "1.0", "--tol", "0", "--trials", "1"]),
            3
        );
    }

    #[test]
    fn weights_pass_on_anchor_graph() {
        let f = write_temp(&graph_json(&crate::level_graph::two_vertex_raw()));
        let path = f.path().to_str().unwrap();
        assert_eq!(run_args(&["graph", "weights", "--in", path]), 0);
        assert_eq!(run_args(&["graph", "validate", "--in", path]), 0);
        assert_eq!(run_args(&["graph", "renormalize", "--in", path]), 0);
    }

    #[test]
    fn connected_critical_level_fails_coverage() {
        let f = write_temp(&graph_json(&crate::level_graph::triply_punctured_raw()));
        let path = f.path().to_str().unwrap();
        assert_eq!(run_args(&["surface", "coverage", "--in", path]), 1);
        // Assembly itself is fine; only coverage reports the gap.
        assert_eq!(run_args(&["surface", "assemble", "--in", path]), 0);
    }

    #[test]
    fn cap_command_emits_linear_band() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        assert_eq!(
            run_args(&[
                "rev", "cap", "--delta", "0.1", "--k", "100", "--alpha", "10", "--out", out
            ]),
            0
        );
        let csv = std::fs::read_to_string(dir.path().join("cap_profile.csv")).unwrap();
        let row = csv
            .lines()
            .find(|l| l.starts_with("5.0000000000000000e0,"))
            .expect("v = 5 row present");
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[1], "5.0000000000000000e0", "I(5) = 5 in {row}");
        assert!(dir.path().join("rev_cap_report.json").exists());
        assert!(dir.path().join("run_meta.json").exists());
    }

    #[test]
    fn malformed_input_reports_parse_location() {
        let f = write_temp("{\"vertices\": [");
        let path = f.path().to_str().unwrap();
        assert_eq!(run_args(&["graph", "validate", "--in", path]), 3);
    }
}
