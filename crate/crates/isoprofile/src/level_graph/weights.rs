//! Exact dyadic edge weights and the base-16 level renormalization.
//!
//! Weights are seeded with 1/N on the edges crossing level 1/2 and pushed
//! outward through vertices: away from the seed a split halves and a merge
//! sums, so every weight is an integer over N·2^k and each regular level's
//! weights sum to exactly 1.

use super::{Endpoint, LevelGraph};
use crate::error::{Error, Result};
use crate::exact::{level_scale, level_scale_log2, pow2, rat, rat_int, rat_to_f64, Rat};
use crate::report::{CheckItem, VerificationReport};
use num::traits::{One, Zero};

/// Exact weight per edge, indexed like `graph.edges()`.
#[derive(Debug, Clone)]
pub struct Weighting {
    pub weights: Vec<Rat>,
}

impl Weighting {
    /// Sum of weights over edges crossing the regular level t.
    pub fn level_sum(&self, g: &LevelGraph, t: f64) -> Rat {
        g.edges_crossing(t)
            .into_iter()
            .map(|i| self.weights[i].clone())
            .fold(Rat::zero(), |a, b| a + b)
    }
}

/// Compute the exact weighting of a validated graph.
pub fn assign_weights(g: &LevelGraph) -> Result<Weighting> {
    let ne = g.edges().len();
    let mut w: Vec<Option<Rat>> = vec![None; ne];

    // Seed: the gap containing level 1/2.
    let seed_probe = match g.value_range() {
        None => 0.5,
        Some((lo, hi)) => {
            if 0.5 < lo as f64 {
                lo as f64 - 0.5
            } else if 0.5 > hi as f64 {
                hi as f64 + 0.5
            } else {
                0.5
            }
        }
    };
    let seed_edges = g.edges_crossing(seed_probe);
    let n = seed_edges.len();
    debug_assert_eq!(n, g.n_seed());
    let share = rat(1, n as i64);
    for i in seed_edges {
        w[i] = Some(share.clone());
    }

    let (lo, hi) = match g.value_range() {
        None => {
            return Ok(Weighting {
                weights: w.into_iter().map(|x| x.expect("seeded")).collect(),
            })
        }
        Some(r) => r,
    };

    // Upward sweep: vertices strictly above the seed level, in increasing
    // value order. All inputs of such a vertex cross the gap just below
    // it, which is already weighted.
    let seed_level = seed_probe;
    let take = |w: &[Option<Rat>], i: usize| -> Rat {
        w[i].clone().expect("edge weighted by sweep order")
    };
    for nval in lo..=hi {
        if (nval as f64) < seed_level {
            continue;
        }
        let v = g.vertex_at(nval).expect("interval of values");
        let (ins, outs) = g.incident(v);
        match (ins.len(), outs.len()) {
            (1, 2) => {
                let parent = take(&w, ins[0]);
                let half = &parent * rat(1, 2);
                for o in outs {
                    w[o] = Some(half.clone());
                }
            }
            (2, 1) => {
                let sum = take(&w, ins[0]) + take(&w, ins[1]);
                w[outs[0]] = Some(sum);
            }
            _ => unreachable!("validated trivalence"),
        }
    }

    // Downward sweep: vertices strictly below the seed level, in
    // decreasing value order; the gap just above each is already weighted.
    for nval in (lo..=hi).rev() {
        if (nval as f64) > seed_level {
            continue;
        }
        let v = g.vertex_at(nval).expect("interval of values");
        let (ins, outs) = g.incident(v);
        match (ins.len(), outs.len()) {
            (1, 2) => {
                let sum = take(&w, outs[0]) + take(&w, outs[1]);
                w[ins[0]] = Some(sum);
            }
            (2, 1) => {
                let half = take(&w, outs[0]) * rat(1, 2);
                for i in ins {
                    w[i] = Some(half.clone());
                }
            }
            _ => unreachable!("validated trivalence"),
        }
    }

    let weights: Vec<Rat> = w
        .into_iter()
        .map(|x| x.ok_or_else(|| Error::Numerics("edge missed by weight sweep".into())))
        .collect::<Result<_>>()?;

    for wt in &weights {
        if *wt <= Rat::zero() {
            return Err(Error::Numerics("non-positive weight".into()));
        }
    }
    Ok(Weighting { weights })
}

/// Renormalized level values: vertex at value n carries 16^(n(|n|+ν)),
/// held as the exact integer exponent.
#[derive(Debug, Clone)]
pub struct Renormalization {
    pub nu: u32,
    /// Per-vertex exponent E(n) = n(|n|+ν), aligned with `graph.vertices()`.
    pub exponents: Vec<i64>,
}

impl Renormalization {
    /// Exact renormalized value of vertex i.
    pub fn value(&self, i: usize) -> Rat {
        crate::exact::pow16(self.exponents[i])
    }

    /// Renormalized value of an arbitrary integer level.
    pub fn value_at(&self, n: i64) -> Rat {
        level_scale(n, self.nu)
    }

    pub fn log2_value_at(&self, n: i64) -> f64 {
        level_scale_log2(n, self.nu)
    }
}

/// Compute the renormalization, checking N ≤ 2^ν.
pub fn renormalize_levels(g: &LevelGraph, nu: Option<u32>) -> Result<Renormalization> {
    let nu = nu.unwrap_or_else(|| g.default_nu());
    if nu == 0 {
        return Err(Error::NuTooSmall("nu must be at least 1".into()));
    }
    if g.n_seed() > (1usize << nu.min(62)) {
        return Err(Error::NuTooSmall(format!(
            "N = {} exceeds 2^nu = 2^{}",
            g.n_seed(),
            nu
        )));
    }
    let exponents = g
        .vertices()
        .iter()
        .map(|v| crate::exact::level_scale_exponent(v.value, nu))
        .collect();
    Ok(Renormalization { nu, exponents })
}

/// Check the two edge-weight lower bounds on every edge:
///
/// 1. weight(e) ≥ (1/N)·2^(−|n''|−1), n'' the finite endpoint value
///    nearest the edge's upper end (upper if finite, else lower; edges
///    with no finite endpoint use exponent 0, i.e. bound (1/N)/2).
/// 2. weight(e)·u(upper) ≥ 8·u(lower) for edges with two finite
///    endpoints (open-ended edges pass trivially: u(−∞) = 0, u(+∞) = ∞).
///
/// Both are theorems of the construction; a failure indicates a bug and
/// is reported with its margin.
pub fn check_weight_bounds(
    g: &LevelGraph,
    w: &Weighting,
    r: &Renormalization,
) -> VerificationReport {
    let mut report = VerificationReport::new(None);
    let n = rat_int(g.n_seed() as i64);

    for (k, e) in g.edges().iter().enumerate() {
        let anchor = match (e.src, e.dst) {
            (_, Endpoint::Vertex(i)) => Some(g.vertices()[i].value),
            (Endpoint::Vertex(i), _) => Some(g.vertices()[i].value),
            _ => None,
        };
        let exponent = anchor.map_or(0, |v| v.abs());
        let bound = pow2(-exponent - 1) / &n;
        let weight = &w.weights[k];
        let passed = *weight >= bound;
        let margin = rat_to_f64(&(weight / &bound));
        report.push(
            CheckItem::new(format!("edge_weight_floor[{k}]"), passed)
                .measured(margin)
                .bound(1.0)
                .details(format!(
                    "weight {} vs (1/N)*2^-{}",
                    crate::exact::rat_to_string(weight),
                    exponent + 1
                )),
        );

        if let (Endpoint::Vertex(i), Endpoint::Vertex(j)) = (e.src, e.dst) {
            // weight(e)·u(p'') ≥ 8·u(p), exact; margin reported in log2.
            let u_lo = r.value(i);
            let u_hi = r.value(j);
            let lhs = weight * &u_hi;
            let rhs = rat_int(8) * &u_lo;
            let passed = lhs >= rhs;
            let ratio = lhs / rhs;
            let margin_log2 = rat_to_f64(&ratio).log2();
            report.push(
                CheckItem::new(format!("edge_value_floor[{k}]"), passed)
                    .measured(margin_log2)
                    .bound(0.0)
                    .details(format!(
                        "log2(weight*u_hi / (8 u_lo)), values {} -> {}",
                        g.vertices()[i].value,
                        g.vertices()[j].value
                    )),
            );
        }
    }
    report
}

/// Exact per-level weight sums at every probe level; all must equal 1.
pub fn level_sums(g: &LevelGraph, w: &Weighting) -> Vec<(f64, Rat)> {
    g.probe_levels()
        .into_iter()
        .map(|t| (t, w.level_sum(g, t)))
        .collect()
}

/// Convenience: true iff every probe level's weights sum to exactly 1.
pub fn conservation_holds(g: &LevelGraph, w: &Weighting) -> bool {
    level_sums(g, w).into_iter().all(|(_, s)| s.is_one())
}
