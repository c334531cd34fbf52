//! Surgery helpers shared by the moves.

use std::collections::{BTreeMap, BTreeSet};

use crate::exactnum::{cmp_angle, AngleSpec, IntPair};
use crate::graph::stratum::pinned_angles;
use crate::graph::validate::monovalent_edge_pair;
use crate::graph::{vertex_pair, DecoratedGraph, GammaArc, GammaVertex, VertexGraph};

/// `Σ_{E₊} Q − Σ_{E₋} Q` demanded at `v` by its label.
pub(crate) fn flux(t: &DecoratedGraph, v: usize) -> IntPair {
    if t.valency(v) == 1 {
        let e = t.edges.iter().find(|e| e.from == v || e.to == v).expect("valency 1");
        let lower = t.edge_ends(e.id).0 == v;
        let q = monovalent_edge_pair(t, v, lower).unwrap_or(IntPair::ZERO);
        if lower {
            q
        } else {
            -q
        }
    } else {
        -vertex_pair(t, v)
    }
}

/// Sets every `Q_e` to the flux of the component below `e`.
pub(crate) fn recompute_pairs(t: &mut DecoratedGraph) {
    let fl: Vec<IntPair> = (0..t.vertices.len()).map(|v| flux(t, v)).collect();
    let n = t.vertices.len();
    for e in 0..t.edges.len() {
        let (lo, _) = t.edge_ends(e);
        let mut seen = vec![false; n];
        let mut stack = vec![lo];
        seen[lo] = true;
        let mut sum = IntPair::ZERO;
        while let Some(x) = stack.pop() {
            sum = sum + fl[x];
            for f in &t.edges {
                if f.id == e {
                    continue;
                }
                let y = if f.from == x {
                    f.to
                } else if f.to == x {
                    f.from
                } else {
                    continue;
                };
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        t.edges[e].pair = sum;
    }
}

/// Drops vertices and edges and renumbers the rest, `Γ` labels included.
pub(crate) fn compact(t: &DecoratedGraph, drop_v: &BTreeSet<usize>, drop_e: &BTreeSet<usize>) -> DecoratedGraph {
    let vmap: BTreeMap<usize, usize> =
        (0..t.vertices.len()).filter(|v| !drop_v.contains(v)).enumerate().map(|(i, v)| (v, i)).collect();
    let emap: BTreeMap<usize, usize> =
        (0..t.edges.len()).filter(|e| !drop_e.contains(e)).enumerate().map(|(i, e)| (e, i)).collect();
    let me = |e: usize| emap.get(&e).copied().unwrap_or(usize::MAX);
    let mut vertices = Vec::new();
    for v in &t.vertices {
        let Some(&id) = vmap.get(&v.id) else { continue };
        let mut nv = v.clone();
        nv.id = id;
        if let crate::graph::VertexLabel::Interior { gamma: Some(gm), .. } = &mut nv.label {
            for a in &mut gm.arcs {
                a.eminus = me(a.eminus);
                a.eplus = me(a.eplus);
            }
            gm.loops = std::mem::take(&mut gm.loops)
                .into_iter()
                .filter_map(|(e, l)| emap.get(&e).map(|&ne| (ne, l)))
                .collect();
        }
        vertices.push(nv);
    }
    let mut edges = Vec::new();
    for e in &t.edges {
        let Some(&id) = emap.get(&e.id) else { continue };
        let mut ne = e.clone();
        ne.id = id;
        ne.from = vmap.get(&e.from).copied().unwrap_or(usize::MAX);
        ne.to = vmap.get(&e.to).copied().unwrap_or(usize::MAX);
        edges.push(ne);
    }
    DecoratedGraph { vertices, edges }
}

/// Deletes arcs (0-based) and identifies the `merge` vertices into one labeled `label`.
pub(crate) fn contract_gamma(gm: &VertexGraph, merge: &[usize], label: i64, delete: &BTreeSet<usize>) -> VertexGraph {
    let rep = merge.first().copied();
    let mut vmap = vec![usize::MAX; gm.vertices.len()];
    let mut vertices = Vec::new();
    for x in &gm.vertices {
        if merge.contains(&x.id) && Some(x.id) != rep {
            continue;
        }
        vmap[x.id] = vertices.len();
        let m = if Some(x.id) == rep { label } else { x.m };
        vertices.push(GammaVertex { id: vertices.len(), m });
    }
    if let Some(r) = rep {
        for &x in merge {
            vmap[x] = vmap[r];
        }
    }
    let mut amap = vec![0i64; gm.arcs.len()];
    let mut arcs = Vec::new();
    for (i, a) in gm.arcs.iter().enumerate() {
        if delete.contains(&i) {
            continue;
        }
        arcs.push(GammaArc { id: arcs.len() + 1, from: vmap[a.from], to: vmap[a.to], eminus: a.eminus, eplus: a.eplus });
        amap[i] = arcs.len() as i64;
    }
    let loops = gm
        .loops
        .iter()
        .map(|(&e, l)| {
            let nl: Vec<i64> = l
                .iter()
                .filter(|&&a| !delete.contains(&(a.unsigned_abs() as usize - 1)))
                .map(|&a| a.signum() * amap[a.unsigned_abs() as usize - 1])
                .collect();
            (e, nl)
        })
        .collect();
    VertexGraph { vertices, arcs, loops }
}

/// Removes a bivalent `Γ` vertex by joining its two arcs; `None` if it is not bivalent.
pub(crate) fn smooth_vertex(gm: &VertexGraph, v: usize) -> Option<VertexGraph> {
    let ins: Vec<usize> = (0..gm.arcs.len()).filter(|&i| gm.arcs[i].to == v).collect();
    let outs: Vec<usize> = (0..gm.arcs.len()).filter(|&i| gm.arcs[i].from == v).collect();
    if ins.len() != 1 || outs.len() != 1 || ins[0] == outs[0] {
        return None;
    }
    let (a, b) = (ins[0], outs[0]);
    if gm.arcs[a].eminus != gm.arcs[b].eminus || gm.arcs[a].eplus != gm.arcs[b].eplus {
        return None;
    }
    let mut g = gm.clone();
    g.arcs[a].to = gm.arcs[b].to;
    let del: BTreeSet<usize> = [b].into_iter().collect();
    let mut out = contract_gamma(&g, &[], 0, &del);
    // drop the now isolated vertex
    let keep: Vec<usize> = (0..out.vertices.len()).filter(|&x| x != v).collect();
    let mut vmap = vec![usize::MAX; out.vertices.len()];
    for (i, &x) in keep.iter().enumerate() {
        vmap[x] = i;
    }
    out.vertices = keep.iter().enumerate().map(|(i, &x)| GammaVertex { id: i, m: out.vertices[x].m }).collect();
    for arc in &mut out.arcs {
        arc.from = vmap[arc.from];
        arc.to = vmap[arc.to];
    }
    Some(out)
}

/// Whether a pinned angle or a multivalent angle (other than `skip`) lies strictly between `a` and `b`.
pub(crate) fn blocked_between(t: &DecoratedGraph, a: &AngleSpec, b: &AngleSpec, skip: &[usize]) -> bool {
    let (lo, hi) = if cmp_angle(a, b) == std::cmp::Ordering::Greater { (b, a) } else { (a, b) };
    let inside = |x: &AngleSpec| {
        cmp_angle(lo, x) == std::cmp::Ordering::Less && cmp_angle(x, hi) == std::cmp::Ordering::Less
    };
    pinned_angles(t).iter().any(inside)
        || t.vertices
            .iter()
            .any(|v| !skip.contains(&v.id) && v.label.gamma().is_some() && inside(&v.angle))
}

/// Whether the angle of `v` is fixed by one of its tuples.
pub(crate) fn is_pinned(t: &DecoratedGraph, v: usize) -> bool {
    t.vertices[v].label.gamma().is_some() && !t.vertices[v].label.tuples().is_empty()
}

/// Replaces edge `from` by `to` in every vertex graph.
pub(crate) fn rename_edge(t: &mut DecoratedGraph, from: usize, to: usize) {
    for v in &mut t.vertices {
        if let crate::graph::VertexLabel::Interior { gamma: Some(gm), .. } = &mut v.label {
            for a in &mut gm.arcs {
                if a.eminus == from {
                    a.eminus = to;
                }
                if a.eplus == from {
                    a.eplus = to;
                }
            }
            if let Some(l) = gm.loops.remove(&from) {
                gm.loops.insert(to, l);
            }
        }
    }
}
