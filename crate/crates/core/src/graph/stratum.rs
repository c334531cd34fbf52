//! Stratum data of a graph and its homotopy signature.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::DecoratedGraph;
use crate::asymptotic::{Eps, FourTuple};
use crate::exactnum::{cmp_angle, AngleSpec};
use crate::symmetry::{exact_angle_key, Coder};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumData {
    /// `(0,−,·)` tuples housed at multivalent vertices, with their vertex.
    pub b: Vec<(usize, FourTuple)>,
    pub c: usize,
    /// `Γ` vertices `(o, υ)` grouped by the angle of `o`, in angle order.
    pub partition: Vec<Vec<(usize, usize)>>,
    pub m: usize,
    pub dim: i64,
}

/// Angles fixed by `(0,+,·)` tuples and by `B`.
pub fn pinned_angles(t: &DecoratedGraph) -> Vec<AngleSpec> {
    let mut out: Vec<AngleSpec> = Vec::new();
    let mut add = |a: AngleSpec| {
        if !out.iter().any(|x| x.same_angle(&a)) {
            out.push(a);
        }
    };
    for v in &t.vertices {
        for tu in v.label.tuples() {
            let in_b = tu.eps == Eps::Minus && v.label.gamma().is_some();
            if tu.delta == 0 && (tu.eps == Eps::Plus || in_b) {
                if let Some(a) = tu.angle() {
                    add(a);
                }
            }
        }
    }
    out.sort_by(cmp_angle);
    out
}

pub fn stratum_data(t: &DecoratedGraph) -> StratumData {
    let a = t.derived_data();
    let b = t.b_tuples();
    let mut c = 0;
    let mut groups: Vec<(AngleSpec, Vec<(usize, usize)>)> = Vec::new();
    for v in &t.vertices {
        let Some(g) = v.label.gamma() else { continue };
        c += g.vertices.iter().filter(|x| x.m == 0).count();
        let slot = match groups.iter().position(|(x, _)| x.same_angle(&v.angle)) {
            Some(i) => i,
            None => {
                groups.push((v.angle.clone(), Vec::new()));
                groups.len() - 1
            }
        };
        groups[slot].1.extend(g.vertices.iter().map(|x| (v.id, x.id)));
    }
    groups.sort_by(|x, y| cmp_angle(&x.0, &y.0));
    let pinned = pinned_angles(t);
    let m = groups
        .iter()
        .filter(|(ang, _)| matches!(ang, AngleSpec::Interior(_)) && !pinned.iter().any(|p| p.same_angle(ang)))
        .count();
    let dim = a.n_plus() as i64 + b.len() as i64 + c as i64 + m as i64 + 2;
    StratumData { b, c, partition: groups.into_iter().map(|(_, g)| g).collect(), m, dim }
}

/// Combinatorial angle keys: pinned angles by value, free ones by position.
fn signature_keys(t: &DecoratedGraph) -> Vec<String> {
    let cuts = pinned_angles(t);
    let is_cut = |a: &AngleSpec| cuts.iter().any(|x| x.same_angle(a));
    let mut free: Vec<AngleSpec> = Vec::new();
    for v in &t.vertices {
        if matches!(v.angle, AngleSpec::Interior(_)) && !is_cut(&v.angle) && !free.iter().any(|x| x.same_angle(&v.angle)) {
            free.push(v.angle.clone());
        }
    }
    free.sort_by(cmp_angle);
    t.vertices
        .iter()
        .map(|v| {
            if !matches!(v.angle, AngleSpec::Interior(_)) || is_cut(&v.angle) {
                format!("L{}", exact_angle_key(&v.angle))
            } else {
                let comp = cuts.iter().filter(|x| cmp_angle(x, &v.angle) == Ordering::Less).count();
                let rank = free.iter().position(|x| x.same_angle(&v.angle)).unwrap_or(0);
                format!("F{comp}.{rank}")
            }
        })
        .collect()
}

/// A key equal for graphs that differ by a homotopy of free angles.
pub fn homotopy_signature(t: &DecoratedGraph) -> String {
    Coder::with_keys(t, signature_keys(t)).canonical().code
}

/// Per-vertex signature keys, exposed for diagnostics.
pub fn angle_keys(t: &DecoratedGraph) -> BTreeMap<usize, String> {
    signature_keys(t).into_iter().enumerate().collect()
}
