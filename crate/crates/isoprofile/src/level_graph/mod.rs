//! Trivalent level graphs: validation, exact dyadic edge weights, and the
//! base-16 level renormalization.
//!
//! A level graph abstracts a Morse sweep of a surface: vertices carry
//! distinct consecutive integer values, edges are oriented by increasing
//! value, and each vertex is trivalent counting open ends (in, out) =
//! (1,2) or (2,1). Ends of the surface appear as edges to −∞ / +∞.

mod generate;
mod weights;

pub use generate::{random_graph, GeneratorOptions};
pub use weights::{
    assign_weights, check_weight_bounds, conservation_holds, level_sums, renormalize_levels,
    Renormalization, Weighting,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Raw JSON schema: `{"vertices": [{"id", "f"}], "edges": [{"src", "dst"}],
/// "nu": optional}` with `"-inf"` / `"+inf"` as open endpoints.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawGraph {
    pub vertices: Vec<RawVertex>,
    pub edges: Vec<RawEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawVertex {
    pub id: String,
    pub f: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawEdge {
    pub src: String,
    pub dst: String,
}

/// Endpoint of an oriented edge: a vertex (by index) or an open end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    NegInf,
    Vertex(usize),
    PosInf,
}

#[derive(Debug, Clone)]
pub struct Vertex {
    pub id: String,
    pub value: i64,
}

#[derive(Debug, Clone, Copy)]
pub struct Edge {
    pub src: Endpoint,
    pub dst: Endpoint,
}

/// A validated level graph.
#[derive(Debug, Clone)]
pub struct LevelGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    /// Count of edges crossing the seed level 1/2.
    n_seed: usize,
    /// Requested renormalization exponent, if the description carried one.
    nu_request: Option<u32>,
    levels_all_disconnected: bool,
}

impl LevelGraph {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_seed(&self) -> usize {
        self.n_seed
    }

    pub fn nu_request(&self) -> Option<u32> {
        self.nu_request
    }

    pub fn levels_all_disconnected(&self) -> bool {
        self.levels_all_disconnected
    }

    /// Smallest ν ≥ 1 with N ≤ 2^ν (or the requested ν when present).
    pub fn default_nu(&self) -> u32 {
        if let Some(nu) = self.nu_request {
            return nu;
        }
        let mut nu = 1u32;
        while (1usize << nu) < self.n_seed {
            nu += 1;
        }
        nu
    }

    /// (min, max) vertex value, None for a vertex-free graph.
    pub fn value_range(&self) -> Option<(i64, i64)> {
        let lo = self.vertices.iter().map(|v| v.value).min()?;
        let hi = self.vertices.iter().map(|v| v.value).max()?;
        Some((lo, hi))
    }

    /// Value of an endpoint on the extended line.
    pub fn endpoint_value(&self, e: Endpoint) -> EndpointValue {
        match e {
            Endpoint::NegInf => EndpointValue::NegInf,
            Endpoint::PosInf => EndpointValue::PosInf,
            Endpoint::Vertex(i) => EndpointValue::Finite(self.vertices[i].value),
        }
    }

    /// Does edge `e` cross the regular (non-integer) level t?
    pub fn edge_crosses(&self, e: &Edge, t: f64) -> bool {
        debug_assert!(t.fract() != 0.0 || !t.is_finite());
        let lo = match self.endpoint_value(e.src) {
            EndpointValue::NegInf => f64::NEG_INFINITY,
            EndpointValue::Finite(v) => v as f64,
            EndpointValue::PosInf => unreachable!("edge starts at +inf"),
        };
        let hi = match self.endpoint_value(e.dst) {
            EndpointValue::PosInf => f64::INFINITY,
            EndpointValue::Finite(v) => v as f64,
            EndpointValue::NegInf => unreachable!("edge ends at -inf"),
        };
        lo < t && t < hi
    }

    /// Indices of edges crossing the regular level t.
    pub fn edges_crossing(&self, t: f64) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edge_crosses(&self.edges[i], t))
            .collect()
    }

    /// Regular probe levels, one per gap: below the bottom vertex, between
    /// consecutive vertices, above the top (half-integer offsets).
    pub fn probe_levels(&self) -> Vec<f64> {
        match self.value_range() {
            None => vec![0.5],
            Some((lo, hi)) => {
                let mut ts = vec![lo as f64 - 0.5];
                for n in lo..hi {
                    ts.push(n as f64 + 0.5);
                }
                ts.push(hi as f64 + 0.5);
                ts
            }
        }
    }

    /// Vertex index at integer value n, if any.
    pub fn vertex_at(&self, n: i64) -> Option<usize> {
        self.vertices.iter().position(|v| v.value == n)
    }

    /// Edges into / out of vertex i.
    pub fn incident(&self, i: usize) -> (Vec<usize>, Vec<usize>) {
        let mut ins = Vec::new();
        let mut outs = Vec::new();
        for (j, e) in self.edges.iter().enumerate() {
            if e.dst == Endpoint::Vertex(i) {
                ins.push(j);
            }
            if e.src == Endpoint::Vertex(i) {
                outs.push(j);
            }
        }
        (ins, outs)
    }

    pub fn to_raw(&self) -> RawGraph {
        let name = |ep: Endpoint, open: &str| match ep {
            Endpoint::Vertex(i) => self.vertices[i].id.clone(),
            _ => open.to_string(),
        };
        RawGraph {
            vertices: self
                .vertices
                .iter()
                .map(|v| RawVertex { id: v.id.clone(), f: v.value })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    src: name(e.src, "-inf"),
                    dst: name(e.dst, "+inf"),
                })
                .collect(),
            nu: self.nu_request,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointValue {
    NegInf,
    Finite(i64),
    PosInf,
}

/// Validate a raw description into a [`LevelGraph`].
///
/// Checks: unique ids, distinct integer values forming a consecutive
/// interval, edges oriented by increasing value, trivalence (1,2)/(2,1)
/// per vertex counting open ends, and no empty regular level. Reports the
/// `levels_all_disconnected` flag (≥ 2 edges across every regular level).
pub fn validate_graph(raw: &RawGraph) -> Result<LevelGraph> {
    let mut by_id: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, v) in raw.vertices.iter().enumerate() {
        if v.id == "-inf" || v.id == "+inf" {
            return Err(Error::BadParameters(format!(
                "vertex id {:?} collides with an open-end marker",
                v.id
            )));
        }
        if by_id.insert(&v.id, i).is_some() {
            return Err(Error::BadParameters(format!("duplicate vertex id {:?}", v.id)));
        }
    }

    // Distinct values forming a consecutive integer interval.
    let mut values: Vec<i64> = raw.vertices.iter().map(|v| v.f).collect();
    values.sort_unstable();
    for w in values.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateCriticalValue(format!(
                "two vertices share value {}",
                w[0]
            )));
        }
        if w[1] != w[0] + 1 {
            return Err(Error::ValueGap(format!(
                "no vertex between values {} and {}",
                w[0], w[1]
            )));
        }
    }

    let vertices: Vec<Vertex> = raw
        .vertices
        .iter()
        .map(|v| Vertex { id: v.id.clone(), value: v.f })
        .collect();

    let resolve = |name: &str, is_src: bool| -> Result<Endpoint> {
        match name {
            "-inf" => {
                if is_src {
                    Ok(Endpoint::NegInf)
                } else {
                    Err(Error::BadParameters("edge ends at -inf".into()))
                }
            }
            "+inf" => {
                if is_src {
                    Err(Error::BadParameters("edge starts at +inf".into()))
                } else {
                    Ok(Endpoint::PosInf)
                }
            }
            id => by_id
                .get(id)
                .map(|&i| Endpoint::Vertex(i))
                .ok_or_else(|| Error::BadParameters(format!("unknown vertex id {id:?}"))),
        }
    };

    let mut edges = Vec::with_capacity(raw.edges.len());
    for (k, e) in raw.edges.iter().enumerate() {
        let src = resolve(&e.src, true)?;
        let dst = resolve(&e.dst, false)?;
        let lo = match src {
            Endpoint::NegInf => i64::MIN,
            Endpoint::Vertex(i) => vertices[i].value,
            Endpoint::PosInf => unreachable!(),
        };
        let hi = match dst {
            Endpoint::PosInf => i64::MAX,
            Endpoint::Vertex(i) => vertices[i].value,
            Endpoint::NegInf => unreachable!(),
        };
        if lo >= hi {
            return Err(Error::BadParameters(format!(
                "edge {k} not oriented by increasing value ({} -> {})",
                e.src, e.dst
            )));
        }
        edges.push(Edge { src, dst });
    }

    let graph = LevelGraph {
        vertices,
        edges,
        n_seed: 0,
        nu_request: raw.nu,
        levels_all_disconnected: false,
    };

    // Trivalence, counting open ends.
    for i in 0..graph.vertices.len() {
        let (ins, outs) = graph.incident(i);
        let pat = (ins.len(), outs.len());
        if pat != (1, 2) && pat != (2, 1) {
            return Err(Error::TrivalenceViolation(format!(
                "vertex {:?} has (in, out) = ({}, {})",
                graph.vertices[i].id, pat.0, pat.1
            )));
        }
    }

    // Every regular level crossed by at least one edge.
    let mut all_disconnected = true;
    let mut n_seed = None;
    for t in graph.probe_levels() {
        let crossing = graph.edges_crossing(t).len();
        if crossing == 0 {
            return Err(Error::EmptyLevel(format!("no edge crosses level {t}")));
        }
        if crossing < 2 {
            all_disconnected = false;
        }
        // The probe at the gap containing 1/2 defines N. For a graph
        // spanning [m, M] the gap probes are m−0.5, m+0.5, ..., M+0.5;
        // exactly one gap contains 1/2.
        let gap_contains_half = match graph.value_range() {
            None => true,
            Some((lo, hi)) => {
                let lo = lo as f64;
                let hi = hi as f64;
                if 0.5 < lo {
                    t == lo - 0.5
                } else if 0.5 > hi {
                    t == hi + 0.5
                } else {
                    t == 0.5
                }
            }
        };
        if gap_contains_half {
            n_seed = Some(crossing);
        }
    }

    Ok(LevelGraph {
        n_seed: n_seed.expect("one probe gap contains level 1/2"),
        levels_all_disconnected: all_disconnected,
        ..graph
    })
}

/// Parse and validate a JSON graph description.
pub fn from_json(text: &str) -> Result<LevelGraph> {
    let raw: RawGraph = serde_json::from_str(text)?;
    validate_graph(&raw)
}

/// The triply-punctured-sphere graph: one vertex at value 1, one edge in
/// from −∞, two out to +∞. Its critical level is connected, so the
/// area-exchange trick has no spare component there.
pub fn triply_punctured_raw() -> RawGraph {
    RawGraph {
        vertices: vec![RawVertex { id: "a".into(), f: 1 }],
        edges: vec![
            RawEdge { src: "-inf".into(), dst: "a".into() },
            RawEdge { src: "a".into(), dst: "+inf".into() },
            RawEdge { src: "a".into(), dst: "+inf".into() },
        ],
        nu: Some(1),
    }
}

/// The two-vertex anchor graph used in hand-checked examples: a split at
/// value 0 fed from −∞, one child splitting again at value 1, the other
/// child running to +∞.
pub fn two_vertex_raw() -> RawGraph {
    RawGraph {
        vertices: vec![
            RawVertex { id: "a".into(), f: 0 },
            RawVertex { id: "b".into(), f: 1 },
        ],
        edges: vec![
            RawEdge { src: "-inf".into(), dst: "a".into() },
            RawEdge { src: "a".into(), dst: "b".into() },
            RawEdge { src: "a".into(), dst: "+inf".into() },
            RawEdge { src: "b".into(), dst: "+inf".into() },
            RawEdge { src: "b".into(), dst: "+inf".into() },
        ],
        nu: Some(1),
    }
}

/// Two parallel bi-infinite edges, no vertices.
pub fn vertex_free_raw() -> RawGraph {
    RawGraph {
        vertices: vec![],
        edges: vec![
            RawEdge { src: "-inf".into(), dst: "+inf".into() },
            RawEdge { src: "-inf".into(), dst: "+inf".into() },
        ],
        nu: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_free_graph_is_valid() {
        let g = validate_graph(&vertex_free_raw()).unwrap();
        assert_eq!(g.n_seed(), 2);
        assert!(g.levels_all_disconnected());
        assert_eq!(g.default_nu(), 1);
        assert!(g.value_range().is_none());
    }

    #[test]
    fn triply_punctured_has_seed_one_and_connected_level() {
        let g = validate_graph(&triply_punctured_raw()).unwrap();
        assert_eq!(g.n_seed(), 1);
        assert!(!g.levels_all_disconnected());
        assert_eq!(g.value_range(), Some((1, 1)));
    }

    #[test]
    fn two_vertex_graph_has_seed_two() {
        let g = validate_graph(&two_vertex_raw()).unwrap();
        assert_eq!(g.n_seed(), 2);
        assert_eq!(g.value_range(), Some((0, 1)));
    }

    #[test]
    fn rejects_three_outgoing_edges() {
        let raw = RawGraph {
            vertices: vec![RawVertex { id: "a".into(), f: 0 }],
            edges: vec![
                RawEdge { src: "-inf".into(), dst: "a".into() },
                RawEdge { src: "a".into(), dst: "+inf".into() },
                RawEdge { src: "a".into(), dst: "+inf".into() },
                RawEdge { src: "a".into(), dst: "+inf".into() },
            ],
            nu: None,
        };
        match validate_graph(&raw) {
            Err(Error::TrivalenceViolation(_)) => {}
            other => panic!("expected trivalence violation, got {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicate_values_and_gaps() {
        let raw = RawGraph {
            vertices: vec![
                RawVertex { id: "a".into(), f: 0 },
                RawVertex { id: "b".into(), f: 0 },
            ],
            edges: vec![],
            nu: None,
        };
        assert!(matches!(
            validate_graph(&raw),
            Err(Error::DuplicateCriticalValue(_))
        ));

        let raw = RawGraph {
            vertices: vec![
                RawVertex { id: "a".into(), f: 0 },
                RawVertex { id: "b".into(), f: 2 },
            ],
            edges: vec![],
            nu: None,
        };
        assert!(matches!(validate_graph(&raw), Err(Error::ValueGap(_))));
    }

    #[test]
    fn rejects_wrong_orientation_and_unknown_ids() {
        let mut raw = two_vertex_raw();
        raw.edges.push(RawEdge { src: "b".into(), dst: "a".into() });
        assert!(matches!(validate_graph(&raw), Err(Error::BadParameters(_))));

        let mut raw = two_vertex_raw();
        raw.edges[0].dst = "zz".into();
        assert!(matches!(validate_graph(&raw), Err(Error::BadParameters(_))));
    }

    #[test]
    fn json_round_trip() {
        let text = serde_json::to_string(&two_vertex_raw()).unwrap();
        let g = from_json(&text).unwrap();
        assert_eq!(g.edges().len(), 5);
        let back = serde_json::to_string(&g.to_raw()).unwrap();
        let g2 = from_json(&back).unwrap();
        assert_eq!(g2.n_seed(), g.n_seed());
    }

    #[test]
    fn empty_level_detected() {
        // The empty graph has a regular level crossed by nothing.
        let raw = RawGraph { vertices: vec![], edges: vec![], nu: None };
        assert!(matches!(validate_graph(&raw), Err(Error::EmptyLevel(_))));
    }
}
