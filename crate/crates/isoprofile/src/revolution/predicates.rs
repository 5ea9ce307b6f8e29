//! Profile-level predicates: merging cap profiles into an ambient one
//! under an explicit hypothesis checklist, subadditivity / shape checks,
//! and the constant-curvature comparison family J_k with its companion
//! bounds.

use crate::error::{Error, Result};
use crate::revolution::profile::{MergedProfile, Profile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::f64::consts::PI;

/// Relative slack for grid monotonicity / agreement checks.
const GRID_RTOL: f64 = 1e-9;

/// Grid points per checked interval.
const GRID_N: usize = 400;

/// Result of merging m cap profiles into an ambient profile at the seam
/// m·δ: below the seam the merged profile is the pointwise minimum of
/// the caps, above it the ambient profile.
#[derive(Debug, Clone)]
pub struct MergeOutcome {
    pub profile: Profile,
    pub seam: f64,
    /// Index of the cap that attains the minimum at every checked point
    /// below the seam while strictly beating each other cap somewhere
    /// (None for a single cap, for ties, or when leadership alternates).
    pub unique_minimizer: Option<usize>,
}

fn cap_reach(p: &Profile, delta: f64) -> f64 {
    match p {
        Profile::Cap(c) => c.alpha,
        _ => 2.0 * delta,
    }
}

/// Merge m cap profiles into `ambient` with seam m·δ, after verifying
/// the hypothesis checklist on grids:
///
/// 1. every cap is nondecreasing with I/v nonincreasing,
/// 2. the ambient profile is nondecreasing beyond the seam,
/// 3. the minimum of the caps agrees with the ambient at the seam,
/// 4. every cap agrees with the ambient on [mδ, mα].
///
/// Violations surface as [`Error::HypothesisFailure`] naming the bullet.
pub fn merge_profiles(
    caps: &[Profile],
    ambient: &Profile,
    m: usize,
    delta: f64,
) -> Result<MergeOutcome> {
    if caps.is_empty() || m != caps.len() {
        return Err(Error::BadParameters(format!(
            "merge needs m == number of caps, got m = {m} with {} caps",
            caps.len()
        )));
    }
    if !(delta > 0.0) {
        return Err(Error::BadParameters(format!("seam scale δ = {delta} must be positive")));
    }
    let seam = m as f64 * delta;
    let window_end = m as f64
        * caps
            .iter()
            .map(|c| cap_reach(c, delta))
            .fold(f64::INFINITY, f64::min);

    // 1. Cap shape bullets on (0, window_end].
    for (j, cap) in caps.iter().enumerate() {
        let mut prev_i = 0.0;
        let mut prev_ratio = f64::INFINITY;
        for step in 1..=GRID_N {
            let v = window_end * step as f64 / GRID_N as f64;
            let i = cap.i(v);
            if i < prev_i - GRID_RTOL * (1.0 + i.abs()) {
                return Err(Error::HypothesisFailure(format!(
                    "cap profile nondecreasing (cap {j}): I({v}) = {i} dips below {prev_i}"
                )));
            }
            let ratio = i / v;
            if ratio > prev_ratio + GRID_RTOL * (1.0 + ratio.abs()) {
                return Err(Error::HypothesisFailure(format!(
                    "cap profile I/v nonincreasing (cap {j}): ratio rises to {ratio} at v = {v}"
                )));
            }
            prev_i = i;
            prev_ratio = ratio;
        }
    }

    // 2. Ambient monotone beyond the seam.
    let mut prev = ambient.i(seam);
    for step in 1..=GRID_N {
        let v = seam + (window_end - seam) * step as f64 / GRID_N as f64;
        let i = ambient.i(v);
        if i < prev - GRID_RTOL * (1.0 + i.abs()) {
            return Err(Error::HypothesisFailure(format!(
                "ambient profile nondecreasing: I({v}) = {i} dips below {prev}"
            )));
        }
        prev = i;
    }

    // 3. Seam agreement.
    let min_at_seam = caps
        .iter()
        .map(|c| c.i(seam))
        .fold(f64::INFINITY, f64::min);
    let ambient_at_seam = ambient.i(seam);
    if (min_at_seam - ambient_at_seam).abs() > GRID_RTOL * (1.0 + ambient_at_seam.abs()) {
        return Err(Error::HypothesisFailure(format!(
            "profiles agree at the seam: caps give {min_at_seam}, ambient gives {ambient_at_seam} at v = {seam}"
        )));
    }

    // 4. Ambient equals every cap on the window beyond the seam.
    for (j, cap) in caps.iter().enumerate() {
        for step in 0..=GRID_N {
            let v = seam + (window_end - seam) * step as f64 / GRID_N as f64;
            let (a, b) = (cap.i(v), ambient.i(v));
            if (a - b).abs() > GRID_RTOL * (1.0 + b.abs()) {
                return Err(Error::HypothesisFailure(format!(
                    "ambient matches cap profiles beyond the seam: cap {j} gives {a}, ambient {b} at v = {v}"
                )));
            }
        }
    }

    // Minimizer bookkeeping below the seam: a cap leads uniquely when it
    // attains the minimum everywhere and strictly beats each other cap
    // somewhere.
    let unique_minimizer = if caps.len() < 2 {
        None
    } else {
        let mut attains = vec![true; caps.len()];
        let mut beats = vec![vec![false; caps.len()]; caps.len()];
        for step in 1..=GRID_N {
            let v = seam * step as f64 / GRID_N as f64;
            let vals: Vec<f64> = caps.iter().map(|c| c.i(v)).collect();
            let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let tol = 1e-12 * (1.0 + min.abs());
            for (j, &x) in vals.iter().enumerate() {
                if x > min + tol {
                    attains[j] = false;
                }
                for (o, &y) in vals.iter().enumerate() {
                    if x < y - tol {
                        beats[j][o] = true;
                    }
                }
            }
        }
        let winners: Vec<usize> = (0..caps.len())
            .filter(|&j| attains[j] && (0..caps.len()).all(|o| o == j || beats[j][o]))
            .collect();
        match winners.as_slice() {
            [j] => Some(*j),
            _ => None,
        }
    };

    Ok(MergeOutcome {
        profile: Profile::Merged(MergedProfile {
            caps: caps.to_vec(),
            ambient: Box::new(ambient.clone()),
            seam,
        }),
        seam,
        unique_minimizer,
    })
}

/// Shape verdict for a profile-like function: the ratio test, and a
/// randomized subadditivity certificate when it passes.
#[derive(Debug, Clone)]
pub struct ShapeReport {
    /// v ↦ F(v)/v nonincreasing across the checked grid.
    pub ratio_nonincreasing: bool,
    pub pairs_checked: usize,
    /// max over sampled pairs of F(v+v′) − F(v) − F(v′); ≤ 0 when
    /// subadditivity holds on the sample.
    pub max_subadditivity_gap: f64,
    /// Certificate: ratio test passed and no sampled pair violated
    /// subadditivity.
    pub subadditive: bool,
    /// A concrete violating pair when one was found.
    pub counterexample: Option<SubadditivityCounterexample>,
}

#[derive(Debug, Clone, Copy)]
pub struct SubadditivityCounterexample {
    pub v: f64,
    pub v_prime: f64,
    /// F(v + v′).
    pub joint: f64,
    /// F(v) + F(v′).
    pub split: f64,
}

/// Check F(v)/v nonincreasing on a log grid over [v_lo, v_hi], then
/// probe F(v+v′) ≤ F(v)+F(v′) on `pairs` seeded random pairs. The ratio
/// property implies subadditivity (write v+v′ = v·(v+v′)/v ..., i.e.
/// F(v+v′) = v·F(v+v′)/(v+v′) + v′·F(v+v′)/(v+v′) ≤ v·F(v)/v + v′·F(v′)/v′),
/// so a certified report never carries a counterexample.
pub fn shape_predicates_fn<F: Fn(f64) -> f64>(
    f: F,
    v_lo: f64,
    v_hi: f64,
    pairs: usize,
    seed: u64,
) -> ShapeReport {
    assert!(v_lo > 0.0 && v_hi > v_lo, "need 0 < v_lo < v_hi");
    let mut ratio_ok = true;
    let mut prev = f64::INFINITY;
    for i in 0..=GRID_N {
        let v = v_lo * (v_hi / v_lo).powf(i as f64 / GRID_N as f64);
        let r = f(v) / v;
        if r > prev + GRID_RTOL * (1.0 + r.abs()) {
            ratio_ok = false;
        }
        prev = r;
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let (a, b) = (v_lo.ln(), (v_hi / 2.0).ln());
    let mut max_gap = f64::NEG_INFINITY;
    let mut counterexample = None;
    for _ in 0..pairs {
        let v = rng.random_range(a..=b).exp();
        let vp = rng.random_range(a..=b).exp();
        let joint = f(v + vp);
        let split = f(v) + f(vp);
        let gap = joint - split;
        max_gap = max_gap.max(gap);
        if gap > GRID_RTOL * (1.0 + split.abs()) && counterexample.is_none() {
            counterexample = Some(SubadditivityCounterexample { v, v_prime: vp, joint, split });
        }
    }
    ShapeReport {
        ratio_nonincreasing: ratio_ok,
        pairs_checked: pairs,
        max_subadditivity_gap: max_gap,
        subadditive: ratio_ok && counterexample.is_none(),
        counterexample,
    }
}

/// [`shape_predicates_fn`] applied to a profile's I(v).
pub fn shape_predicates(p: &Profile, v_lo: f64, v_hi: f64, pairs: usize, seed: u64) -> ShapeReport {
    shape_predicates_fn(|v| p.i(v), v_lo, v_hi, pairs, seed)
}

/// Pointwise minimum of two profile-like functions (the shape
/// properties are closed under min).
pub fn min_of<F, G>(f: F, g: G) -> impl Fn(f64) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    move |v| f(v).min(g(v))
}

/// Splice: f on [0, δ], g on (δ, ∞).
pub fn splice_at<F, G>(delta: f64, f: F, g: G) -> impl Fn(f64) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    move |v| if v <= delta { f(v) } else { g(v) }
}

/// The constant-curvature comparison profile J_k(v) = √(4πv − kv²): the
/// profile of the curvature-k model space (sphere cap / plane /
/// hyperbolic disk).
pub fn j_k(k: f64, v: f64) -> Result<f64> {
    let h = 4.0 * PI * v - k * v * v;
    if h < 0.0 {
        return Err(Error::DomainError(format!(
            "4πv − kv² = {h} < 0 at v = {v}, k = {k}"
        )));
    }
    Ok(h.sqrt())
}

/// Volume threshold below which the comparison floor J_k applies on
/// possibly-incomplete surfaces: 2π/k for k > 0, unbounded otherwise.
pub fn eta_threshold(k: f64) -> f64 {
    if k > 0.0 {
        2.0 * PI / k
    } else {
        f64::INFINITY
    }
}

/// Curvature bound below which a hyperbolic annulus of area a and waist
/// length L admits no isoperimetric comparison:
/// ρ(a, L) = −((4/L)·acosh(1 + a/2π))².
pub fn rho_ultrahyperbolic(a: f64, len: f64) -> Result<f64> {
    if !(a > 0.0) || !(len > 0.0) {
        return Err(Error::BadParameters(format!(
            "need positive area and length, got a = {a}, L = {len}"
        )));
    }
    let t = (4.0 / len) * (1.0 + a / (2.0 * PI)).acosh();
    Ok(-(t * t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::close;
    use crate::revolution::cap::build_cap;
    use crate::revolution::profile::{GridProfile, Jet};

    /// Closed-form monotone cap: H = v² + 4πv(1 − v/δ)³ on [0, δ], v²
    /// beyond. C² at δ, nondecreasing for δ > π, ratio nonincreasing,
    /// and exactly representable on a grid with δ/16 spacing (quartic).
    fn cap_jet(v: f64, delta: f64) -> Jet {
        if v >= delta {
            return Jet { h: v * v, h1: 2.0 * v, h2: 2.0 };
        }
        let u = v / delta;
        let w = 1.0 - u;
        Jet {
            h: v * v + 4.0 * PI * v * w * w * w,
            h1: 2.0 * v + 4.0 * PI * w * w * (1.0 - 4.0 * u),
            h2: 2.0 + (24.0 * PI / delta) * w * (2.0 * u - 1.0),
        }
    }

    fn example_monotone_cap(delta: f64, reach: f64) -> Profile {
        let step = delta / 16.0;
        let n = (reach / step).ceil() as usize;
        let vs: Vec<f64> = (0..=n).map(|i| i as f64 * step).collect();
        let jets: Vec<Jet> = vs.iter().map(|&v| cap_jet(v, delta)).collect();
        Profile::Grid(GridProfile::from_jets(vs, jets).unwrap())
    }

    #[test]
    fn identical_caps_merge_into_cap_then_ambient() {
        let delta = 2.0 * PI;
        let cap = example_monotone_cap(delta, 30.0);
        let out = merge_profiles(&[cap.clone(), cap], &Profile::Linear, 2, delta).unwrap();
        assert_eq!(out.unique_minimizer, None);
        let seam = 2.0 * delta;
        assert!(close(out.seam, seam, 1e-15, 0.0));
        // Below the seam: the cap profile (here both identical).
        for &v in &[0.3, 2.0, delta, 1.5 * delta, seam * 0.999] {
            let want = cap_jet(v, delta).h.max(0.0).sqrt();
            assert!(close(out.profile.i(v), want, 1e-11, 1e-12), "v = {v}");
        }
        // Beyond: the ambient I(v) = v.
        for &v in &[seam, seam + 1.0, 3.0 * seam] {
            assert!(close(out.profile.i(v), v, 1e-12, 0.0), "v = {v}");
        }
    }

    #[test]
    fn strictly_lower_cap_is_flagged_as_unique_minimizer() {
        let d1 = 2.0 * PI;
        let d2 = 4.0;
        let cap1 = example_monotone_cap(d1, 30.0);
        let cap2 = example_monotone_cap(d2, 30.0);
        let out = merge_profiles(&[cap1, cap2.clone()], &Profile::Linear, 2, d1).unwrap();
        assert_eq!(out.unique_minimizer, Some(1));
        // The merged profile coincides with the lower cap below the seam.
        for &v in &[0.5, 3.0, 5.0, 9.0] {
            assert!(close(out.profile.i(v), cap2.i(v), 1e-11, 1e-12), "v = {v}");
        }
    }

    #[test]
    fn non_monotone_cap_fails_the_checklist_by_name() {
        // The quintic cap dips, so the first bullet must fire.
        let cap = build_cap(0.1, 100.0, 10.0).unwrap().profile;
        match merge_profiles(&[cap], &Profile::Linear, 1, 0.1) {
            Err(Error::HypothesisFailure(msg)) => {
                assert!(msg.contains("nondecreasing"), "message: {msg}");
            }
            other => panic!("expected HypothesisFailure, got {other:?}"),
        }
    }

    #[test]
    fn seam_disagreement_fails_by_name() {
        let cap = example_monotone_cap(2.0 * PI, 30.0);
        match merge_profiles(&[cap], &Profile::Hyperbolic, 1, 2.0 * PI) {
            Err(Error::HypothesisFailure(msg)) => {
                assert!(msg.contains("seam"), "message: {msg}");
            }
            other => panic!("expected HypothesisFailure, got {other:?}"),
        }
    }

    #[test]
    fn cap_count_mismatch_is_rejected() {
        let cap = example_monotone_cap(2.0 * PI, 30.0);
        match merge_profiles(&[cap], &Profile::Linear, 3, 2.0 * PI) {
            Err(Error::BadParameters(_)) => {}
            other => panic!("expected BadParameters, got {other:?}"),
        }
    }

    #[test]
    fn sqrt_profile_is_certified_subadditive() {
        let rep = shape_predicates_fn(|v| v.sqrt(), 1e-3, 8.0, 10_000, 7);
        assert!(rep.ratio_nonincreasing);
        assert!(rep.subadditive);
        assert!(rep.counterexample.is_none());
        assert!(rep.max_subadditivity_gap <= 0.0, "gap {}", rep.max_subadditivity_gap);
        assert_eq!(rep.pairs_checked, 10_000);
        // Spot value: F(2) = √2 ≤ 2F(1) = 2.
        assert!(2.0_f64.sqrt() <= 2.0);
    }

    #[test]
    fn convex_power_yields_counterexample() {
        let rep = shape_predicates_fn(|v| v * v, 0.5, 8.0, 2_000, 7);
        assert!(!rep.ratio_nonincreasing);
        assert!(!rep.subadditive);
        let ce = rep.counterexample.expect("violation must be sampled");
        assert!(ce.joint > ce.split);
        // The classic doubling violation: F(2) = 4 > 2F(1) = 2.
        assert!((2.0f64 * 2.0) > 2.0 * 1.0);
        assert!(rep.max_subadditivity_gap > 0.0);
    }

    #[test]
    fn min_closure_preserves_the_shape_property() {
        let f1 = |v: f64| j_k(1.0, v).unwrap();
        let f2 = |v: f64| j_k(2.0, v).unwrap();
        let rep = shape_predicates_fn(min_of(f1, f2), 1e-3, 6.0, 10_000, 11);
        assert!(rep.ratio_nonincreasing);
        assert!(rep.subadditive);
    }

    #[test]
    fn splice_preserves_the_shape_property() {
        // √(4πv) out to v = 4π, then I(v) = v: ratios √(4π/v) ↓ then 1.
        let spliced = splice_at(4.0 * PI, |v: f64| (4.0 * PI * v).sqrt(), |v: f64| v);
        let rep = shape_predicates_fn(spliced, 1e-3, 100.0, 10_000, 13);
        assert!(rep.ratio_nonincreasing);
        assert!(rep.subadditive);
    }

    #[test]
    fn profile_wrapper_certifies_real_profiles() {
        let rep = shape_predicates(&Profile::Hyperbolic, 1e-3, 50.0, 5_000, 3);
        assert!(rep.ratio_nonincreasing && rep.subadditive);
        let rep = shape_predicates(&Profile::Euclidean, 1e-3, 50.0, 5_000, 3);
        assert!(rep.ratio_nonincreasing && rep.subadditive);
    }

    #[test]
    fn comparison_profile_values() {
        // Frozen formula values for the comparison family.
        assert!(close(j_k(-1.0, 1.0).unwrap(), (4.0 * PI + 1.0).sqrt(), 1e-15, 0.0));
        assert!((j_k(-1.0, 1.0).unwrap() - 3.6832554).abs() < 1e-6);
        for &k in &[-3.0, 0.0, 1.0, 100.0] {
            assert_eq!(j_k(k, 0.0).unwrap(), 0.0);
        }
        match j_k(1.0, 20.0) {
            Err(Error::DomainError(_)) => {}
            other => panic!("expected DomainError, got {other:?}"),
        }
        // The sphere profile is exactly J_k: equality case of the floor.
        for i in 1..=20 {
            let k = 2.0;
            let v = (4.0 * PI / k) * i as f64 / 21.0;
            assert!(close(Profile::ConstantCurvature(k).i(v), j_k(k, v).unwrap(), 1e-15, 0.0));
        }
    }

    #[test]
    fn threshold_and_ultrahyperbolic_bound() {
        assert!(close(eta_threshold(100.0), 2.0 * PI / 100.0, 1e-16, 0.0));
        assert_eq!(eta_threshold(-1.0), f64::INFINITY);
        assert_eq!(eta_threshold(0.0), f64::INFINITY);

        // ρ(2π, 1) = −(4·acosh 2)².
        let rho = rho_ultrahyperbolic(2.0 * PI, 1.0).unwrap();
        let want = -(4.0 * 2.0_f64.acosh()).powi(2);
        assert!(close(rho, want, 1e-15, 0.0));
        assert!((rho + 27.7500496).abs() < 1e-6, "rho = {rho}");

        assert!(rho_ultrahyperbolic(-1.0, 1.0).is_err());
        assert!(rho_ultrahyperbolic(2.0 * PI, 0.0).is_err());
    }
}
