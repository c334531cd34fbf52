//! Concatenating path sets in `Γ_o` and their pairing with `φ_o`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::blowup::{blow_up, phi_eval, BlowNode, BlowUp, BlowUpError, Step};
use super::validate::loop_maps;
use super::DecoratedGraph;
use crate::exactnum::IntPair;

/// A directed path inside `ℓ_oe`: arc ids with travel directions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub edge: usize,
    pub steps: Vec<(usize, bool)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSet {
    pub vertex: usize,
    pub paths: Vec<Path>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("path {0} is empty")]
    EmptyPath(usize),
    #[error("path {path}: arc {arc} is not on the loop of edge {edge}")]
    OffLoop { path: usize, arc: usize, edge: usize },
    #[error("path {path}: steps {step} and {next} do not follow the loop")]
    Broken { path: usize, step: usize, next: usize },
    #[error("paths {0} and {1} carry the same edge label")]
    SameLabel(usize, usize),
    #[error("path {0} does not end on the arc where the next path starts")]
    Unjoined(usize),
    #[error("the set is not closed: first and last traversals differ")]
    NotClosed,
    #[error(transparent)]
    BlowUp(#[from] BlowUpError),
}

impl PathSet {
    /// The same set traversed backwards.
    pub fn reversed(&self) -> PathSet {
        let paths = self
            .paths
            .iter()
            .rev()
            .map(|p| Path { edge: p.edge, steps: p.steps.iter().rev().map(|&(a, f)| (a, !f)).collect() })
            .collect();
        PathSet { vertex: self.vertex, paths }
    }
}

/// Checks the path-set axioms and lifts the set to `Γ*_o`.
///
/// Consecutive paths share their junction arc: a traversal in the same
/// direction is counted once, an opposite one turns around at a vertex.
pub fn lift(t: &DecoratedGraph, set: &PathSet) -> Result<(BlowUp, Vec<Step>), PathError> {
    let o = set.vertex;
    let b = blow_up(t, o)?;
    let gm = t.vertices[o].label.gamma().expect("blow_up checked the graph");
    let maps = loop_maps(gm);
    let lower = t.topology().lower[o].clone();
    let node = |arc: usize, inbound: bool| {
        let a = &gm.arcs[arc];
        let v = if inbound { a.to } else { a.from };
        if gm.vertices[v].m == 0 {
            BlowNode::Kept(v)
        } else {
            BlowNode::Half { arc, inbound }
        }
    };
    // the connector step realizing the transition a → b inside ℓ_e
    let transition = |e: usize, a: usize, bb: usize| -> Option<Step> {
        let (ha, tb) = (node(a, true), node(bb, false));
        if ha == tb {
            return None;
        }
        Some(if lower.contains(&e) {
            Step { arc: b.connector(ha, tb).expect("connector exists"), forward: true }
        } else {
            Step { arc: b.connector(tb, ha).expect("connector exists"), forward: false }
        })
    };
    let mut out: Vec<Step> = Vec::new();
    for (pi, p) in set.paths.iter().enumerate() {
        if p.steps.is_empty() {
            return Err(PathError::EmptyPath(pi));
        }
        if pi > 0 && set.paths[pi - 1].edge == p.edge {
            return Err(PathError::SameLabel(pi - 1, pi));
        }
        let succ = maps.succ.get(&p.edge).ok_or(PathError::OffLoop { path: pi, arc: p.steps[0].0, edge: p.edge })?;
        let pred = &maps.pred[&p.edge];
        let steps: Vec<(usize, bool)> = p
            .steps
            .iter()
            .map(|&(id, f)| {
                let i = id.wrapping_sub(1);
                if i < gm.arcs.len() && succ.contains_key(&i) {
                    Ok((i, f))
                } else {
                    Err(PathError::OffLoop { path: pi, arc: id, edge: p.edge })
                }
            })
            .collect::<Result<_, _>>()?;
        let mut first = 0;
        if pi > 0 {
            let prev = set.paths[pi - 1].steps.last().unwrap();
            if prev.0 != p.steps[0].0 {
                return Err(PathError::Unjoined(pi - 1));
            }
            if prev.1 == p.steps[0].1 {
                first = 1;
            }
        }
        for k in 0..steps.len() {
            let (a, fa) = steps[k];
            if k >= first {
                out.push(Step { arc: a, forward: fa });
            }
            let Some(&(c, fc)) = steps.get(k + 1) else { break };
            match (fa, fc) {
                (true, true) if succ[&a] == c => {
                    if let Some(s) = transition(p.edge, a, c) {
                        out.push(s);
                    }
                }
                (false, false) if pred[&a] == c => {
                    if let Some(s) = transition(p.edge, c, a) {
                        out.push(s.reversed());
                    }
                }
                (x, y) if x != y && a == c => {}
                _ => return Err(PathError::Broken { path: pi, step: k, next: k + 1 }),
            }
        }
    }
    Ok((b, out))
}

/// The pairing `−φ_o(μ̂)` of a closed path set.
///
/// The set must start and end with the same traversal; `μ̂` is the lift
/// with the final repeat of that traversal removed.
pub fn path_set_pairing(t: &DecoratedGraph, set: &PathSet) -> Result<IntPair, PathError> {
    let (first, last) = match (set.paths.first(), set.paths.last()) {
        (Some(f), Some(l)) if !f.steps.is_empty() && !l.steps.is_empty() => (f.steps[0], *l.steps.last().unwrap()),
        _ => return Err(PathError::NotClosed),
    };
    if first != last {
        return Err(PathError::NotClosed);
    }
    let (b, mut steps) = lift(t, set)?;
    steps.pop();
    let v = phi_eval(&b, &steps)?;
    Ok(-v)
}
