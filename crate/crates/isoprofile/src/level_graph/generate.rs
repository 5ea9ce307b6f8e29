//! Seeded random generator for valid trivalent level graphs.
//!
//! Sweeps values bottom to top maintaining a pool of upward-growing
//! strands: each step inserts one split or merge vertex, so trivalence
//! and the consecutive-value rule hold by construction. Strands remaining
//! at the top become edges to +∞.

use super::{RawEdge, RawGraph, RawVertex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

#[derive(Debug, Clone)]
pub struct GeneratorOptions {
    /// Upper bound on vertex count (actual count is sampled).
    pub max_vertices: usize,
    /// Force every regular level to be crossed by ≥ 2 edges.
    pub all_levels_disconnected: bool,
}

impl Default for GeneratorOptions {
    fn default() -> Self {
        GeneratorOptions { max_vertices: 40, all_levels_disconnected: false }
    }
}

/// Generate a random valid graph description. Deterministic in `seed`.
pub fn random_graph(seed: u64, opts: &GeneratorOptions) -> RawGraph {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let floor = if opts.all_levels_disconnected { 2usize } else { 1 };
    let ceil = 8usize;

    let n_vertices = rng.random_range(0..=opts.max_vertices);
    // Anchor the value interval so it often straddles 0 and 1.
    let v_start: i64 = if n_vertices == 0 {
        0
    } else {
        rng.random_range(-(n_vertices as i64)..=2)
    };

    // Strand = open upward edge; records its source endpoint name.
    let mut strands: Vec<String> = Vec::new();
    let initial = rng.random_range(floor.max(1)..=floor.max(3));
    for _ in 0..initial {
        strands.push("-inf".to_string());
    }

    let mut vertices = Vec::with_capacity(n_vertices);
    let mut edges = Vec::new();

    for i in 0..n_vertices {
        let id = format!("v{i}");
        let value = v_start + i as i64;

        // A split needs 1 strand and adds 1; a merge needs 2 and removes 1.
        let can_split = strands.len() < ceil;
        let can_merge = strands.len() >= floor + 1 && strands.len() >= 2;
        let split = match (can_split, can_merge) {
            (true, true) => rng.random_bool(0.5),
            (true, false) => true,
            (false, true) => false,
            (false, false) => unreachable!("floor < ceil keeps a move available"),
        };

        if split {
            let k = rng.random_range(0..strands.len());
            let src = strands.swap_remove(k);
            edges.push(RawEdge { src, dst: id.clone() });
            strands.push(id.clone());
            strands.push(id.clone());
        } else {
            let k1 = rng.random_range(0..strands.len());
            let s1 = strands.swap_remove(k1);
            let k2 = rng.random_range(0..strands.len());
            let s2 = strands.swap_remove(k2);
            edges.push(RawEdge { src: s1, dst: id.clone() });
            edges.push(RawEdge { src: s2, dst: id.clone() });
            strands.push(id.clone());
        }
        vertices.push(RawVertex { id, f: value });
    }

    for src in strands {
        edges.push(RawEdge { src, dst: "+inf".to_string() });
    }

    RawGraph { vertices, edges, nu: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level_graph::validate_graph;
    use crate::level_graph::weights::{assign_weights, conservation_holds};

    #[test]
    fn generated_graphs_validate_and_conserve() {
        for seed in 0..50u64 {
            let raw = random_graph(seed, &GeneratorOptions::default());
            let g = validate_graph(&raw)
                .unwrap_or_else(|e| panic!("seed {seed} produced invalid graph: {e}"));
            let w = assign_weights(&g).unwrap();
            assert!(conservation_holds(&g, &w), "seed {seed}");
        }
    }

    #[test]
    fn disconnected_mode_keeps_two_strands_everywhere() {
        let opts = GeneratorOptions { max_vertices: 30, all_levels_disconnected: true };
        for seed in 0..50u64 {
            let raw = random_graph(seed, &opts);
            let g = validate_graph(&raw).unwrap();
            assert!(g.levels_all_disconnected(), "seed {seed}");
        }
    }

    #[test]
    fn generator_is_deterministic() {
        let a = random_graph(7, &GeneratorOptions::default());
        let b = random_graph(7, &GeneratorOptions::default());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
