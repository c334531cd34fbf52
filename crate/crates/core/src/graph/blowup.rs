//! The blow-up `Γ*_o` and evaluation of the class `φ_o`.
//!
//! Each vertex `υ` with `m_υ ≠ 0` is replaced by one node per half-arc.
//! Connector arcs join these nodes into the circle `ℓ*υ`: the head of an
//! inbound arc `γ` connects forward to the tail of its successor in
//! `ℓ_{o e}` for `e ∈ E₋`, and the tail of an outbound arc connects forward
//! to the head of its predecessor in `ℓ_{o e}` for `e ∈ E₊`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::validate::loop_maps;
use super::{DecoratedGraph, VertexGraph};
use crate::exactnum::{IntPair, Rational};
use crate::linalg::express_in_span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowNode {
    /// A label-0 vertex of `Γ_o`, kept as is.
    Kept(usize),
    /// The head (`inbound = true`) or tail of an arc at a nonzero-label vertex.
    Half { arc: usize, inbound: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowArcKind {
    /// The lift of arc index `arc` of `Γ_o`.
    Lifted { arc: usize },
    /// An arc of `ℓ*υ` labeled by the loop edge it comes from.
    Connector { vertex: usize, edge: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlowArc {
    pub from: BlowNode,
    pub to: BlowNode,
    pub kind: BlowArcKind,
}

/// One traversal of a blow-up arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub arc: usize,
    pub forward: bool,
}

impl Step {
    pub fn start(&self, b: &BlowUp) -> BlowNode {
        let a = &b.arcs[self.arc];
        if self.forward {
            a.from
        } else {
            a.to
        }
    }

    pub fn end(&self, b: &BlowUp) -> BlowNode {
        let a = &b.arcs[self.arc];
        if self.forward {
            a.to
        } else {
            a.from
        }
    }

    pub fn reversed(&self) -> Step {
        Step { arc: self.arc, forward: !self.forward }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowUp {
    pub vertex: usize,
    pub arcs: Vec<BlowArc>,
    /// `ℓ*_oe` for each incident edge, in the order of `edge_ids`.
    pub edge_ids: Vec<usize>,
    pub lifted_loops: Vec<Vec<Step>>,
    /// Vertices `υ` with `m_υ ≠ 0` and their circles `ℓ*υ`.
    pub circle_vertices: Vec<usize>,
    pub circles: Vec<Vec<Step>>,
    /// Values of `φ_o` on the lifted loops and on the circles.
    pub edge_values: Vec<IntPair>,
    pub circle_values: Vec<IntPair>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowUpError {
    #[error("vertex {0} has no vertex graph")]
    NoGamma(usize),
    #[error("the loop is not closed at step {0}")]
    NotClosed(usize),
    #[error("the loop is not in the span of the lifted loops and circles")]
    NotInSpan,
    #[error("φ takes the non-integral value ({0}, {1})")]
    NonIntegral(String, String),
}

fn node(gm: &VertexGraph, arc: usize, inbound: bool) -> BlowNode {
    let a = &gm.arcs[arc];
    let v = if inbound { a.to } else { a.from };
    if gm.vertices[v].m == 0 {
        BlowNode::Kept(v)
    } else {
        BlowNode::Half { arc, inbound }
    }
}

/// Builds `Γ*_o` for the multivalent vertex `o` of `T`.
pub fn blow_up(t: &DecoratedGraph, o: usize) -> Result<BlowUp, BlowUpError> {
    let gm = t.vertices[o].label.gamma().ok_or(BlowUpError::NoGamma(o))?;
    let topo = t.topology();
    let lower = &topo.lower[o];
    let maps = loop_maps(gm);
    let mut arcs: Vec<BlowArc> = (0..gm.arcs.len())
        .map(|i| BlowArc { from: node(gm, i, false), to: node(gm, i, true), kind: BlowArcKind::Lifted { arc: i } })
        .collect();
    // connector index keyed by (start half, end half)
    let mut connector = std::collections::BTreeMap::new();
    let mut circle_vertices = Vec::new();
    for u in gm.vertices.iter().filter(|x| x.m != 0).map(|x| x.id) {
        circle_vertices.push(u);
        for (i, a) in gm.arcs.iter().enumerate() {
            if a.to == u {
                let j = maps.succ[&a.eminus][&i];
                let (f, to) = (BlowNode::Half { arc: i, inbound: true }, BlowNode::Half { arc: j, inbound: false });
                connector.insert((f, to), arcs.len());
                arcs.push(BlowArc { from: f, to, kind: BlowArcKind::Connector { vertex: u, edge: a.eminus } });
            }
            if a.from == u {
                let j = maps.pred[&a.eplus][&i];
                let (f, to) = (BlowNode::Half { arc: i, inbound: false }, BlowNode::Half { arc: j, inbound: true });
                connector.insert((f, to), arcs.len());
                arcs.push(BlowArc { from: f, to, kind: BlowArcKind::Connector { vertex: u, edge: a.eplus } });
            }
        }
    }
    let mut edge_ids: Vec<usize> = gm.loops.keys().copied().collect();
    edge_ids.sort();
    let mut lifted_loops = Vec::new();
    for &e in &edge_ids {
        let l = gm.loop_indices(e);
        let mut steps = Vec::new();
        for k in 0..l.len() {
            let (a, b) = (l[k], l[(k + 1) % l.len()]);
            steps.push(Step { arc: a, forward: true });
            let (ha, tb) = (node(gm, a, true), node(gm, b, false));
            if ha != tb {
                let s = if lower.contains(&e) {
                    Step { arc: connector[&(ha, tb)], forward: true }
                } else {
                    Step { arc: connector[&(tb, ha)], forward: false }
                };
                steps.push(s);
            }
        }
        lifted_loops.push(steps);
    }
    let mut circles = Vec::new();
    for &u in &circle_vertices {
        let mine: Vec<usize> = (0..arcs.len())
            .filter(|&i| matches!(arcs[i].kind, BlowArcKind::Connector { vertex, .. } if vertex == u))
            .collect();
        let start = mine[0];
        let mut steps = vec![Step { arc: start, forward: true }];
        let mut at = arcs[start].to;
        while at != arcs[start].from {
            let next = *mine.iter().find(|&&i| arcs[i].from == at).expect("connector circle is closed");
            steps.push(Step { arc: next, forward: true });
            at = arcs[next].to;
            if steps.len() > mine.len() {
                break;
            }
        }
        circles.push(steps);
    }
    let edge_values = edge_ids.iter().map(|&e| t.edges[e].pair).collect();
    let p_hat = t.vertices[o].angle.pair().map(|p| p.primitive()).unwrap_or(IntPair::ZERO);
    let circle_values = circle_vertices.iter().map(|&u| gm.vertices[u].m * p_hat).collect();
    Ok(BlowUp { vertex: o, arcs, edge_ids, lifted_loops, circle_vertices, circles, edge_values, circle_values })
}

impl BlowUp {
    /// Signed arc-count vector of a step sequence.
    pub fn chain(&self, steps: &[Step]) -> Vec<i64> {
        let mut v = vec![0; self.arcs.len()];
        for s in steps {
            v[s.arc] += if s.forward { 1 } else { -1 };
        }
        v
    }

    pub fn is_closed(&self, steps: &[Step]) -> Result<(), BlowUpError> {
        for k in 0..steps.len() {
            let next = &steps[(k + 1) % steps.len()];
            if steps[k].end(self) != next.start(self) {
                return Err(BlowUpError::NotClosed(k));
            }
        }
        Ok(())
    }

    /// The connector from half `from` to half `to`, if there is one.
    pub fn connector(&self, from: BlowNode, to: BlowNode) -> Option<usize> {
        self.arcs
            .iter()
            .position(|x| x.from == from && x.to == to && matches!(x.kind, BlowArcKind::Connector { .. }))
    }
}

/// `φ_o` on a closed step sequence of `Γ*_o`.
pub fn phi_eval(b: &BlowUp, steps: &[Step]) -> Result<IntPair, BlowUpError> {
    if steps.is_empty() {
        return Ok(IntPair::ZERO);
    }
    b.is_closed(steps)?;
    let to_rat = |v: Vec<i64>| v.into_iter().map(|x| Rational::from_integer(x.into())).collect::<Vec<_>>();
    let mut gens = Vec::new();
    let mut vals = Vec::new();
    for (l, q) in b.lifted_loops.iter().zip(&b.edge_values) {
        gens.push(to_rat(b.chain(l)));
        vals.push(*q);
    }
    for (c, q) in b.circles.iter().zip(&b.circle_values) {
        gens.push(to_rat(b.chain(c)));
        vals.push(*q);
    }
    let target = to_rat(b.chain(steps));
    let coef = express_in_span(&gens, &target).ok_or(BlowUpError::NotInSpan)?;
    let mut x = Rational::from_integer(0.into());
    let mut y = x.clone();
    for (c, q) in coef.iter().zip(&vals) {
        x += c * Rational::from_integer(q.p.into());
        y += c * Rational::from_integer(q.pp.into());
    }
    if !x.is_integer() || !y.is_integer() {
        return Err(BlowUpError::NonIntegral(x.to_string(), y.to_string()));
    }
    use num_traits::ToPrimitive;
    Ok(IntPair::new(x.to_integer().to_i64().unwrap_or(i64::MAX), y.to_integer().to_i64().unwrap_or(i64::MAX)))
}
