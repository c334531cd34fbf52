//! Decorated trees `T` with per-vertex level-set graphs `Γ_o`.
//!
//! Ids are positional: vertex, edge and `Γ_o`-vertex ids equal their index,
//! arc ids equal index + 1 so that loop entries can carry a sign.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asymptotic::{AsymptoticData, Eps, FourTuple};
use crate::exactnum::{cmp_angle, AngleSpec, IntPair};

pub mod blowup;
pub mod dot;
pub mod paths;
pub mod stratum;
pub mod validate;

pub use blowup::{blow_up, phi_eval, BlowArc, BlowNode, BlowUp, Step};
pub use dot::{render_gamma, render_graph};
pub use paths::{path_set_pairing, Path, PathSet};
pub use stratum::{homotopy_signature, stratum_data, StratumData};
pub use validate::{check_exists, validate_graph, vertex_pair, EdgeReport, Existence, ExistenceReport};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaVertex {
    pub id: usize,
    pub m: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaArc {
    pub id: usize,
    pub from: usize,
    pub to: usize,
    pub eminus: usize,
    pub eplus: usize,
}

/// The graph `Γ_o` together with its loops `ℓ_oe`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexGraph {
    pub vertices: Vec<GammaVertex>,
    pub arcs: Vec<GammaArc>,
    /// Edge id to the arc ids of `ℓ_oe` in cyclic order.
    #[serde(with = "usize_keys")]
    pub loops: BTreeMap<usize, Vec<i64>>,
}

/// Maps keyed by ids; JSON object keys are strings, also inside tagged enums.
pub(crate) mod usize_keys {
    use std::collections::BTreeMap;

    use serde::de::{DeserializeOwned, Error};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer, T: Serialize>(m: &BTreeMap<usize, T>, s: S) -> Result<S::Ok, S::Error> {
        let v: BTreeMap<String, &T> = m.iter().map(|(k, v)| (k.to_string(), v)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, T: DeserializeOwned>(d: D) -> Result<BTreeMap<usize, T>, D::Error> {
        let raw = BTreeMap::<String, T>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| k.parse().map(|k| (k, v)).map_err(|_| D::Error::custom(format!("key {k:?} is not an id"))))
            .collect()
    }
}

impl VertexGraph {
    pub fn arc(&self, id: usize) -> &GammaArc {
        &self.arcs[id - 1]
    }

    /// Loop of edge `e` as 0-based arc indices.
    pub fn loop_indices(&self, e: usize) -> Vec<usize> {
        self.loops.get(&e).map_or_else(Vec::new, |l| l.iter().map(|&a| a as usize - 1).collect())
    }

    pub fn valency(&self, v: usize) -> usize {
        self.arcs.iter().map(|a| (a.from == v) as usize + (a.to == v) as usize).sum()
    }

    pub fn b1(&self) -> i64 {
        self.arcs.len() as i64 - self.vertices.len() as i64 + 1
    }

    /// A circle through the given labels with every arc labeled `(eminus, eplus)`.
    pub fn circle(labels: &[i64], eminus: usize, eplus: usize) -> VertexGraph {
        let k = labels.len();
        let vertices = labels.iter().enumerate().map(|(id, &m)| GammaVertex { id, m }).collect();
        let arcs = (0..k).map(|j| GammaArc { id: j + 1, from: j, to: (j + 1) % k, eminus, eplus }).collect();
        let cyc: Vec<i64> = (1..=k as i64).collect();
        let loops = [(eminus, cyc.clone()), (eplus, cyc)].into_iter().collect();
        VertexGraph { vertices, arcs, loops }
    }

    /// One label-0 vertex with a self-loop arc per `(eminus, eplus)` pair.
    ///
    /// Works when one edge labels every arc (a bouquet of circles).
    pub fn bouquet(pairs: &[(usize, usize)]) -> VertexGraph {
        let arcs: Vec<GammaArc> = pairs
            .iter()
            .enumerate()
            .map(|(j, &(eminus, eplus))| GammaArc { id: j + 1, from: 0, to: 0, eminus, eplus })
            .collect();
        let mut loops: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
        for a in &arcs {
            loops.entry(a.eminus).or_default().push(a.id as i64);
            if a.eplus != a.eminus {
                loops.entry(a.eplus).or_default().push(a.id as i64);
            }
        }
        VertexGraph { vertices: vec![GammaVertex { id: 0, m: 0 }], arcs, loops }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VertexLabel {
    ZeroInt { m: i64 },
    ZeroEnd { tuple: FourTuple },
    PiInt { m: i64 },
    PiEnd { tuple: FourTuple },
    Interior {
        tuples: Vec<FourTuple>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma: Option<VertexGraph>,
    },
}

impl VertexLabel {
    pub fn gamma(&self) -> Option<&VertexGraph> {
        match self {
            VertexLabel::Interior { gamma, .. } => gamma.as_ref(),
            _ => None,
        }
    }

    pub fn tuples(&self) -> &[FourTuple] {
        match self {
            VertexLabel::Interior { tuples, .. } => tuples,
            VertexLabel::ZeroEnd { tuple } | VertexLabel::PiEnd { tuple } => std::slice::from_ref(tuple),
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub angle: AngleSpec,
    pub label: VertexLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: usize,
    pub from: usize,
    pub to: usize,
    pub pair: IntPair,
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if self.from == v {
            self.to
        } else {
            self.from
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DecoratedGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

/// Problems that prevent a graph from being read at all.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("json: {0}")]
    Json(String),
    #[error("vertex at position {pos} has id {id}")]
    VertexId { pos: usize, id: usize },
    #[error("edge at position {pos} has id {id}")]
    EdgeId { pos: usize, id: usize },
    #[error("edge {edge} references missing vertex {vertex}")]
    DanglingEdge { edge: usize, vertex: usize },
    #[error("vertex {vertex}: Γ vertex at position {pos} has id {id}")]
    GammaVertexId { vertex: usize, pos: usize, id: usize },
    #[error("vertex {vertex}: arc at position {pos} has id {id} (arc ids start at 1)")]
    ArcId { vertex: usize, pos: usize, id: usize },
    #[error("vertex {vertex}: arc {arc} references missing Γ vertex {target}")]
    DanglingArc { vertex: usize, arc: usize, target: usize },
    #[error("vertex {vertex}: arc {arc} references missing edge {edge}")]
    ArcEdge { vertex: usize, arc: usize, edge: usize },
    #[error("vertex {vertex}: loop of edge {edge} references missing arc {arc}")]
    LoopArc { vertex: usize, edge: usize, arc: i64 },
}

/// Which incident edges lie below and above each vertex.
#[derive(Debug, Clone)]
pub struct Topology {
    pub incident: Vec<Vec<usize>>,
    /// `E₋(o)`: edges on which `o` is the larger angle.
    pub lower: Vec<Vec<usize>>,
    /// `E₊(o)`: edges on which `o` is the smaller angle.
    pub upper: Vec<Vec<usize>>,
}

impl DecoratedGraph {
    pub fn from_json(s: &str) -> Result<DecoratedGraph, LoadError> {
        let g: DecoratedGraph = serde_json::from_str(s).map_err(|e| LoadError::Json(e.to_string()))?;
        g.check_structure()?;
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    /// Reference integrity; everything else is reported by validation.
    pub fn check_structure(&self) -> Result<(), LoadError> {
        let nv = self.vertices.len();
        for (pos, v) in self.vertices.iter().enumerate() {
            if v.id != pos {
                return Err(LoadError::VertexId { pos, id: v.id });
            }
        }
        for (pos, e) in self.edges.iter().enumerate() {
            if e.id != pos {
                return Err(LoadError::EdgeId { pos, id: e.id });
            }
            for x in [e.from, e.to] {
                if x >= nv {
                    return Err(LoadError::DanglingEdge { edge: e.id, vertex: x });
                }
            }
        }
        for v in &self.vertices {
            let Some(g) = v.label.gamma() else { continue };
            for (pos, gv) in g.vertices.iter().enumerate() {
                if gv.id != pos {
                    return Err(LoadError::GammaVertexId { vertex: v.id, pos, id: gv.id });
                }
            }
            for (pos, a) in g.arcs.iter().enumerate() {
                if a.id != pos + 1 {
                    return Err(LoadError::ArcId { vertex: v.id, pos, id: a.id });
                }
                for x in [a.from, a.to] {
                    if x >= g.vertices.len() {
                        return Err(LoadError::DanglingArc { vertex: v.id, arc: a.id, target: x });
                    }
                }
                for e in [a.eminus, a.eplus] {
                    if e >= self.edges.len() {
                        return Err(LoadError::ArcEdge { vertex: v.id, arc: a.id, edge: e });
                    }
                }
            }
            for (&e, l) in &g.loops {
                if e >= self.edges.len() {
                    return Err(LoadError::ArcEdge { vertex: v.id, arc: 0, edge: e });
                }
                for &a in l {
                    if a == 0 || a.unsigned_abs() as usize > g.arcs.len() {
                        return Err(LoadError::LoopArc { vertex: v.id, edge: e, arc: a });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn topology(&self) -> Topology {
        let n = self.vertices.len();
        let mut t = Topology { incident: vec![vec![]; n], lower: vec![vec![]; n], upper: vec![vec![]; n] };
        for e in &self.edges {
            t.incident[e.from].push(e.id);
            if e.to != e.from {
                t.incident[e.to].push(e.id);
            }
            match cmp_angle(&self.vertices[e.from].angle, &self.vertices[e.to].angle) {
                Ordering::Less => {
                    t.upper[e.from].push(e.id);
                    t.lower[e.to].push(e.id);
                }
                Ordering::Greater => {
                    t.lower[e.from].push(e.id);
                    t.upper[e.to].push(e.id);
                }
                Ordering::Equal => {}
            }
        }
        t
    }

    /// Lower and upper vertex of an edge.
    pub fn edge_ends(&self, e: usize) -> (usize, usize) {
        let ed = &self.edges[e];
        if cmp_angle(&self.vertices[ed.from].angle, &self.vertices[ed.to].angle) == Ordering::Greater {
            (ed.to, ed.from)
        } else {
            (ed.from, ed.to)
        }
    }

    pub fn valency(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.from == v) as usize + (e.to == v) as usize).sum()
    }

    pub fn is_multivalent(&self, v: usize) -> bool {
        self.valency(v) > 1
    }

    /// The data set `Â` read off the labels.
    pub fn derived_data(&self) -> AsymptoticData {
        let mut c_plus = 0;
        let mut c_minus = 0;
        let mut tuples = Vec::new();
        for v in &self.vertices {
            match &v.label {
                VertexLabel::ZeroInt { m } => c_plus += m,
                VertexLabel::PiInt { m } => c_minus -= m,
                VertexLabel::ZeroEnd { tuple } | VertexLabel::PiEnd { tuple } => tuples.push(*tuple),
                VertexLabel::Interior { tuples: ts, .. } => tuples.extend(ts.iter().copied()),
            }
        }
        AsymptoticData { c_minus, c_plus, tuples }
    }

    /// Total number of `Γ_o` vertices over multivalent vertices.
    pub fn gamma_vertex_count(&self) -> usize {
        self.vertices.iter().filter_map(|v| v.label.gamma()).map(|g| g.vertices.len()).sum()
    }

    /// The `(0,−,·)` tuples housed at multivalent interior vertices.
    pub fn b_tuples(&self) -> Vec<(usize, FourTuple)> {
        let mut out = Vec::new();
        for v in &self.vertices {
            if let VertexLabel::Interior { tuples, gamma: Some(_) } = &v.label {
                for t in tuples {
                    if t.delta == 0 && t.eps == Eps::Minus {
                        out.push((v.id, *t));
                    }
                }
            }
        }
        out
    }
}
