//! Refinements toward generic graphs and degenerations toward deeper strata.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::arcs::collapse_arc;
use super::edit::{blocked_between, compact, is_pinned};
use super::{gamma_of, CollapseOutcome, StrataError};
use crate::asymptotic::{lambda_set, Eps, FourTuple};
use crate::exactnum::{angle_strictly_between, cmp_angle, AngleSpec, IntPair};
use crate::graph::stratum::pinned_angles;
use crate::graph::validate::loop_maps;
use crate::graph::{validate_graph, DecoratedGraph, Edge, GammaArc, GammaVertex, Vertex, VertexGraph, VertexLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Refinement {
    /// Peel a label-0 4-valent vertex off the `Γ_o` vertex `v`.
    ReduceVertex { o: usize, v: usize },
    /// Move two edges on one side of `o` to a new trivalent vertex; `angle` defaults to one next to `θ_o`.
    SplitTrivalent { o: usize, v: usize, side: Side, angle: Option<AngleSpec> },
}

pub(crate) fn checked(t: DecoratedGraph) -> Result<DecoratedGraph, StrataError> {
    let r = validate_graph(&t);
    if r.is_ok() {
        Ok(t)
    } else {
        Err(StrataError::Invalid(r.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")))
    }
}

fn gamma_valency(gm: &VertexGraph, v: usize) -> usize {
    gm.arcs.iter().map(|a| (a.from == v) as usize + (a.to == v) as usize).sum()
}

fn set_gamma(t: &DecoratedGraph, o: usize, gm: VertexGraph) -> DecoratedGraph {
    let mut t2 = t.clone();
    if let VertexLabel::Interior { gamma, .. } = &mut t2.vertices[o].label {
        *gamma = Some(gm);
    }
    t2
}

fn insert_in_loop(gm: &mut VertexGraph, e: usize, anchor: usize, new_id: usize, after: bool) {
    let l = gm.loops.entry(e).or_default();
    let pos = l.iter().position(|&x| x.unsigned_abs() as usize == anchor).unwrap_or(l.len());
    l.insert(if after { pos + 1 } else { pos }, new_id as i64);
}

pub fn refine(t: &DecoratedGraph, mv: &Refinement) -> Result<DecoratedGraph, StrataError> {
    match *mv {
        Refinement::ReduceVertex { o, v } => reduce_vertex(t, o, v),
        Refinement::SplitTrivalent { o, v, side, angle } => split_trivalent(t, o, v, side, angle),
    }
}

fn reduce_vertex(t: &DecoratedGraph, o: usize, v: usize) -> Result<DecoratedGraph, StrataError> {
    let gm = gamma_of(t, o)?;
    if v >= gm.vertices.len() {
        return Err(StrataError::Inapplicable(format!("no vertex {v} in the graph of {o}")));
    }
    let val = gamma_valency(gm, v);
    if !(val > 4 || (val == 4 && gm.vertices[v].m != 0)) {
        return Err(StrataError::Inapplicable(format!("vertex {v} has valency {val} and label {}", gm.vertices[v].m)));
    }
    let maps = loop_maps(gm);
    let mut last = None;
    for h1 in 0..gm.arcs.len() {
        for forward in [true, false] {
            let a = &gm.arcs[h1];
            if (forward && a.to != v) || (!forward && a.from != v) {
                continue;
            }
            let step = if forward { &maps.succ } else { &maps.pred };
            let (Some(&h2), Some(&h3)) =
                (step.get(&a.eminus).and_then(|m| m.get(&h1)), step.get(&a.eplus).and_then(|m| m.get(&h1)))
            else {
                continue;
            };
            if h2 == h3 {
                continue;
            }
            let mut g = gm.clone();
            let va = g.vertices.len();
            g.vertices.push(GammaVertex { id: va, m: 0 });
            let id = g.arcs.len() + 1;
            let (em, ep) = (gm.arcs[h3].eminus, gm.arcs[h2].eplus);
            if forward {
                g.arcs[h1].to = va;
                g.arcs[h2].from = va;
                g.arcs[h3].from = va;
                g.arcs.push(GammaArc { id, from: v, to: va, eminus: em, eplus: ep });
            } else {
                g.arcs[h1].from = va;
                g.arcs[h2].to = va;
                g.arcs[h3].to = va;
                g.arcs.push(GammaArc { id, from: va, to: v, eminus: em, eplus: ep });
            }
            insert_in_loop(&mut g, em, h3 + 1, id, !forward);
            insert_in_loop(&mut g, ep, h2 + 1, id, !forward);
            match checked(set_gamma(t, o, g)) {
                Ok(t2) => return Ok(t2),
                Err(e) => last = Some(e),
            }
        }
    }
    Err(last.unwrap_or_else(|| StrataError::Inapplicable("no regrouping of three half-arcs".into())))
}

/// Nearest vertex or `Λ` angle beyond `θ_o` on the given side.
fn neighbour_angle(t: &DecoratedGraph, o: usize, side: Side) -> AngleSpec {
    let th = t.vertices[o].angle;
    let mut cands: Vec<AngleSpec> = t.vertices.iter().map(|v| v.angle).collect();
    cands.extend(lambda_set(&t.derived_data()).angles());
    cands.push(AngleSpec::Zero);
    cands.push(AngleSpec::Pi);
    let beyond = |a: &AngleSpec| match side {
        Side::Upper => cmp_angle(a, &th) == Ordering::Greater,
        Side::Lower => cmp_angle(a, &th) == Ordering::Less,
    };
    let mut best: Option<AngleSpec> = None;
    for a in cands.into_iter().filter(beyond) {
        best = match best {
            None => Some(a),
            Some(b) => {
                let closer = match side {
                    Side::Upper => cmp_angle(&a, &b) == Ordering::Less,
                    Side::Lower => cmp_angle(&a, &b) == Ordering::Greater,
                };
                Some(if closer { a } else { b })
            }
        };
    }
    best.expect("0 or π lies beyond any interior angle")
}

fn split_trivalent(
    t: &DecoratedGraph,
    o: usize,
    v: usize,
    side: Side,
    angle: Option<AngleSpec>,
) -> Result<DecoratedGraph, StrataError> {
    let gm = gamma_of(t, o)?;
    if gm.vertices.len() < 2 || v >= gm.vertices.len() {
        return Err(StrataError::Inapplicable("a Y-insertion needs a vertex graph with two vertices".into()));
    }
    if gamma_valency(gm, v) != 4 || gm.vertices[v].m != 0 {
        return Err(StrataError::Inapplicable(format!("vertex {v} is not a 4-valent label-0 vertex")));
    }
    let sided = |a: &GammaArc| if side == Side::Upper { a.eplus } else { a.eminus };
    let across = |a: &GammaArc| if side == Side::Upper { a.eminus } else { a.eplus };
    let ins: Vec<usize> = (0..gm.arcs.len()).filter(|&i| gm.arcs[i].to == v).collect();
    let outs: Vec<usize> = (0..gm.arcs.len()).filter(|&i| gm.arcs[i].from == v).collect();
    if ins.len() != 2 || outs.len() != 2 {
        return Err(StrataError::Inapplicable("the vertex needs two incoming and two outgoing half-arcs".into()));
    }
    let (e, e2) = (sided(&gm.arcs[ins[0]]), sided(&gm.arcs[ins[1]]));
    if e == e2 {
        return Err(StrataError::Inapplicable("both edges on that side coincide".into()));
    }
    let in_of = |x: usize| ins.iter().copied().find(|&i| sided(&gm.arcs[i]) == x);
    let out_of = |x: usize| outs.iter().copied().find(|&i| sided(&gm.arcs[i]) == x);
    let (Some(ie), Some(ie2), Some(oe), Some(oe2)) = (in_of(e), in_of(e2), out_of(e), out_of(e2)) else {
        return Err(StrataError::Inapplicable("the loops through the vertex do not pair up".into()));
    };
    let maps = loop_maps(gm);
    let through = |i: usize, o: usize| {
        let f = across(&gm.arcs[i]);
        across(&gm.arcs[o]) == f && maps.succ.get(&f).and_then(|m| m.get(&i)) == Some(&o)
    };
    if !through(ie, oe2) || !through(ie2, oe) {
        return Err(StrataError::Inapplicable("the opposite loops do not pass straight through".into()));
    }

    // removing v joins arcs into chains: in-half i_e continues as o_e′, i_e′ as o_e
    let next: BTreeMap<usize, usize> = [(ie, oe2), (ie2, oe)].into_iter().collect();
    let mut chain_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut chains: Vec<Vec<usize>> = Vec::new();
    for start in 0..gm.arcs.len() {
        let a = &gm.arcs[start];
        if a.from == v || (a.to != v) {
            continue;
        }
        let mut chain = vec![start];
        let mut cur = start;
        while gm.arcs[cur].to == v {
            cur = next[&cur];
            chain.push(cur);
        }
        for &x in &chain {
            chain_of.insert(x, chains.len());
        }
        chains.push(chain);
    }
    if (0..gm.arcs.len()).any(|i| (gm.arcs[i].from == v || gm.arcs[i].to == v) && !chain_of.contains_key(&i)) {
        return Err(StrataError::Inapplicable("the arcs at the vertex close up on themselves".into()));
    }
    let ehat = t.edges.len();
    let mut arcs: Vec<GammaArc> = Vec::new();
    let mut new_id: BTreeMap<usize, usize> = BTreeMap::new();
    let vid = |x: usize| x - usize::from(x > v);
    for i in 0..gm.arcs.len() {
        if chain_of.contains_key(&i) {
            continue;
        }
        let a = &gm.arcs[i];
        arcs.push(GammaArc { id: arcs.len() + 1, from: vid(a.from), to: vid(a.to), ..a.clone() });
        new_id.insert(i, arcs.len());
    }
    let mut chain_id = Vec::new();
    for chain in &chains {
        let first = &gm.arcs[chain[0]];
        let last = &gm.arcs[*chain.last().expect("nonempty chain")];
        let f = across(first);
        if chain.iter().any(|&x| across(&gm.arcs[x]) != f) {
            return Err(StrataError::Inapplicable("a joined arc would carry two labels".into()));
        }
        let (eminus, eplus) = if side == Side::Upper { (f, ehat) } else { (ehat, f) };
        arcs.push(GammaArc { id: arcs.len() + 1, from: vid(first.from), to: vid(last.to), eminus, eplus });
        chain_id.push(arcs.len());
    }
    let image = |x: usize| chain_of.get(&x).map_or_else(|| new_id[&x], |&c| chain_id[c]) as i64;
    let collapse = |seq: Vec<i64>| -> Vec<i64> {
        let mut out: Vec<i64> = Vec::new();
        for x in seq {
            if out.last() != Some(&x) {
                out.push(x);
            }
        }
        while out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
        out
    };
    let rotated = |x: usize, start: usize| -> Vec<usize> {
        let l = gm.loop_indices(x);
        let p = l.iter().position(|&i| i == start).unwrap_or(0);
        l[p..].iter().chain(&l[..p]).copied().collect()
    };
    let mut loops: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for &f in gm.loops.keys() {
        if f != e && f != e2 {
            loops.insert(f, collapse(gm.loop_indices(f).into_iter().map(image).collect()));
        }
    }
    let hat: Vec<i64> = rotated(e, oe).into_iter().chain(rotated(e2, oe2)).map(image).collect();
    loops.insert(ehat, collapse(hat));
    let vertices: Vec<GammaVertex> =
        gm.vertices.iter().filter(|x| x.id != v).enumerate().map(|(i, x)| GammaVertex { id: i, m: x.m }).collect();
    let g = VertexGraph { vertices, arcs, loops };

    let np = t.vertices.len();
    let q = t.edges[e].pair + t.edges[e2].pair;
    let bouquet = match side {
        Side::Upper => VertexGraph::bouquet(&[(ehat, e), (ehat, e2)]),
        Side::Lower => VertexGraph::bouquet(&[(e, ehat), (e2, ehat)]),
    };
    let build = |ang: AngleSpec| -> DecoratedGraph {
        let mut t2 = set_gamma(t, o, g.clone());
        t2.vertices.push(Vertex { id: np, angle: ang, label: VertexLabel::Interior { tuples: vec![], gamma: Some(bouquet.clone()) } });
        for x in [e, e2] {
            let ed = &mut t2.edges[x];
            if ed.from == o {
                ed.from = np;
            } else {
                ed.to = np;
            }
        }
        let (from, to) = if side == Side::Upper { (o, np) } else { (np, o) };
        t2.edges.push(Edge { id: ehat, from, to, pair: q });
        t2
    };
    if let Some(a) = angle {
        return checked(build(a));
    }
    let th = t.vertices[o].angle;
    let mut far = neighbour_angle(t, o, side);
    let mut last = None;
    for _ in 0..30 {
        let (lo, hi) = if side == Side::Upper { (th, far) } else { (far, th) };
        let a = angle_strictly_between(&lo, &hi)?;
        match checked(build(a)) {
            Ok(t2) => return Ok(t2),
            Err(err) => last = Some(err),
        }
        far = a;
    }
    Err(last.unwrap_or_else(|| StrataError::Inapplicable("no admissible angle".into())))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MoveKind {
    Coincide { a: usize, b: usize },
    Pin { vertex: usize },
    Merge { edge: usize },
    Absorb { vertex: usize },
    Collapse { vertex: usize, arc: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degeneration {
    pub kind: MoveKind,
    pub graph: DecoratedGraph,
    /// The result lives on a different data set.
    pub boundary: bool,
}

fn free_multivalent(t: &DecoratedGraph, v: usize) -> bool {
    t.vertices[v].label.gamma().is_some() && !is_pinned(t, v)
}

/// Moves `b` to the angle of `a`.
pub fn coincide(t: &DecoratedGraph, a: usize, b: usize) -> Result<DecoratedGraph, StrataError> {
    if a == b || a >= t.vertices.len() || b >= t.vertices.len() {
        return Err(StrataError::Inapplicable("two distinct vertices are needed".into()));
    }
    if !free_multivalent(t, a) || !free_multivalent(t, b) {
        return Err(StrataError::Inapplicable("both vertices must be multivalent with free angles".into()));
    }
    if t.edges.iter().any(|e| (e.from == a && e.to == b) || (e.from == b && e.to == a)) {
        return Err(StrataError::Inapplicable("the vertices are adjacent".into()));
    }
    let (ta, tb) = (t.vertices[a].angle, t.vertices[b].angle);
    if ta.same_angle(&tb) || blocked_between(t, &ta, &tb, &[a, b]) {
        return Err(StrataError::Inapplicable("another angle lies between".into()));
    }
    let mut t2 = t.clone();
    t2.vertices[b].angle = ta;
    checked(t2)
}

/// Moves a free multivalent vertex onto the adjacent pinned angle `target`.
pub fn pin(t: &DecoratedGraph, o: usize, target: &AngleSpec) -> Result<DecoratedGraph, StrataError> {
    if o >= t.vertices.len() || !free_multivalent(t, o) {
        return Err(StrataError::Inapplicable("the vertex must be multivalent with a free angle".into()));
    }
    if !pinned_angles(t).iter().any(|x| x.same_angle(target)) {
        return Err(StrataError::Inapplicable(format!("{target} is not a pinned angle")));
    }
    let th = t.vertices[o].angle;
    if th.same_angle(target) || blocked_between(t, &th, target, &[o]) {
        return Err(StrataError::Inapplicable("the pinned angle is not adjacent".into()));
    }
    let mut t2 = t.clone();
    t2.vertices[o].angle = *target;
    checked(t2)
}

/// Cyclic merges of `p` points `X` and `q` points `Y`, `X₁` first.
fn cyclic_merges(p: usize, q: usize) -> Vec<Vec<(bool, usize)>> {
    fn shuffles(xs: &[(bool, usize)], ys: &[(bool, usize)], acc: &mut Vec<(bool, usize)>, out: &mut Vec<Vec<(bool, usize)>>) {
        if xs.is_empty() && ys.is_empty() {
            out.push(acc.clone());
            return;
        }
        if let Some((&x, rest)) = xs.split_first() {
            acc.push(x);
            shuffles(rest, ys, acc, out);
            acc.pop();
        }
        if let Some((&y, rest)) = ys.split_first() {
            acc.push(y);
            shuffles(xs, rest, acc, out);
            acc.pop();
        }
    }
    let xs: Vec<(bool, usize)> = (1..p).map(|i| (true, i)).collect();
    let mut out = Vec::new();
    for r in 0..q {
        let ys: Vec<(bool, usize)> = (0..q).map(|j| (false, (j + r) % q)).collect();
        let mut acc = vec![(true, 0)];
        shuffles(&xs, &ys, &mut acc, &mut out);
    }
    out
}

/// Slides the two ends of `e` together, merging their vertex graphs along the circle of `e`.
pub fn merge_edge(t: &DecoratedGraph, e: usize) -> Result<Vec<DecoratedGraph>, StrataError> {
    if e >= t.edges.len() {
        return Err(StrataError::Inapplicable(format!("no edge {e}")));
    }
    let (u, w) = t.edge_ends(e);
    let (gu, gw) = (gamma_of(t, u)?, gamma_of(t, w)?);
    let (tu, tw) = (t.vertices[u].angle, t.vertices[w].angle);
    let targets: Vec<AngleSpec> = match (is_pinned(t, u), is_pinned(t, w)) {
        (true, true) => return Err(StrataError::Inapplicable("both ends are pinned".into())),
        (true, false) => vec![tu],
        (false, true) => vec![tw],
        (false, false) => vec![tu, tw],
    };
    if blocked_between(t, &tu, &tw, &[u, w]) {
        return Err(StrataError::Inapplicable("another angle lies between the ends".into()));
    }
    let alphas: Vec<usize> = gu.loop_indices(e);
    let betas: Vec<usize> = gw.loop_indices(e);
    let (p, q) = (alphas.len(), betas.len());
    if p == 0 || q == 0 {
        return Err(StrataError::Invalid("edge loop missing".into()));
    }
    let nu = gu.vertices.len();
    let mut found: Vec<DecoratedGraph> = Vec::new();
    let mut last = None;
    for order in cyclic_merges(p, q) {
        let g = overlay(gu, gw, e, &alphas, &betas, &order, nu);
        for &ang in &targets {
            let mut t2 = t.clone();
            let VertexLabel::Interior { tuples: tw_tuples, .. } = &t.vertices[w].label else { unreachable!() };
            if let VertexLabel::Interior { tuples, gamma } = &mut t2.vertices[u].label {
                tuples.extend(tw_tuples.iter().copied());
                *gamma = Some(g.clone());
            }
            t2.vertices[u].angle = ang;
            for (i, ed) in t2.edges.iter_mut().enumerate() {
                if i == e {
                    continue;
                }
                if ed.from == w {
                    ed.from = u;
                }
                if ed.to == w {
                    ed.to = u;
                }
            }
            let dv: BTreeSet<usize> = [w].into_iter().collect();
            let de: BTreeSet<usize> = [e].into_iter().collect();
            match checked(compact(&t2, &dv, &de)) {
                Ok(x) => {
                    if !found.contains(&x) {
                        found.push(x);
                    }
                }
                Err(err) => last = Some(err),
            }
        }
    }
    if found.is_empty() {
        return Err(last.unwrap_or_else(|| StrataError::Inapplicable("no merge validates".into())));
    }
    Ok(found)
}

fn overlay(
    gu: &VertexGraph,
    gw: &VertexGraph,
    e: usize,
    alphas: &[usize],
    betas: &[usize],
    order: &[(bool, usize)],
    nu: usize,
) -> VertexGraph {
    let mut vertices: Vec<GammaVertex> = gu.vertices.clone();
    vertices.extend(gw.vertices.iter().map(|x| GammaVertex { id: x.id + nu, m: x.m }));
    let alpha_set: BTreeSet<usize> = alphas.iter().copied().collect();
    let beta_set: BTreeSet<usize> = betas.iter().copied().collect();
    let mut arcs: Vec<GammaArc> = Vec::new();
    let mut umap = BTreeMap::new();
    for (i, a) in gu.arcs.iter().enumerate() {
        if !alpha_set.contains(&i) {
            arcs.push(GammaArc { id: arcs.len() + 1, ..a.clone() });
            umap.insert(i, arcs.len());
        }
    }
    let mut wmap = BTreeMap::new();
    for (i, a) in gw.arcs.iter().enumerate() {
        if !beta_set.contains(&i) {
            arcs.push(GammaArc { id: arcs.len() + 1, from: a.from + nu, to: a.to + nu, ..a.clone() });
            wmap.insert(i, arcs.len());
        }
    }
    // new arcs between consecutive points, with the covering α and β
    let n = order.len();
    let mut cover_a: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut cover_b: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut covering_b: Vec<(usize, usize)> = Vec::with_capacity(n);
    let mut cur_a = 0;
    let start_b = order.iter().position(|x| !x.0).map(|k| order[k].1).unwrap_or(0);
    let mut cur_b = (start_b + betas.len() - 1) % betas.len();
    let point = |(is_x, i): (bool, usize)| if is_x { gu.arcs[alphas[i]].from } else { gw.arcs[betas[i]].from + nu };
    for k in 0..n {
        let (is_x, i) = order[k];
        if is_x {
            cur_a = i;
        } else {
            cur_b = i;
        }
        let al = &gu.arcs[alphas[cur_a]];
        let be = &gw.arcs[betas[cur_b]];
        arcs.push(GammaArc { id: arcs.len() + 1, from: point(order[k]), to: point(order[(k + 1) % n]), eminus: al.eminus, eplus: be.eplus });
        cover_a.entry(cur_a).or_default().push(arcs.len());
        covering_b.push((cur_b, arcs.len()));
    }
    // each β starts at its own point, so its subarcs are read from the first Y on
    let first_y = order.iter().position(|x| !x.0).unwrap_or(0);
    for k in 0..n {
        let (j, id) = covering_b[(first_y + k) % n];
        cover_b.entry(j).or_default().push(id);
    }
    let mut loops: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    let remap = |l: &[i64], map: &BTreeMap<usize, usize>, split: &BTreeMap<usize, Vec<usize>>, idx: &[usize]| -> Vec<i64> {
        let mut out = Vec::new();
        for &x in l {
            let i = x.unsigned_abs() as usize - 1;
            if let Some(&ni) = map.get(&i) {
                out.push(ni as i64);
            } else if let Some(pos) = idx.iter().position(|&a| a == i) {
                out.extend(split.get(&pos).into_iter().flatten().map(|&a| a as i64));
            }
        }
        out
    };
    for (&f, l) in &gu.loops {
        if f != e {
            loops.insert(f, remap(l, &umap, &cover_a, alphas));
        }
    }
    for (&f, l) in &gw.loops {
        if f != e {
            loops.insert(f, remap(l, &wmap, &cover_b, betas));
        }
    }
    VertexGraph { vertices, arcs, loops }
}

/// Moves `o` onto the angle of its adjacent `(0,−)` leaves at `target`, absorbing them.
pub fn absorb(t: &DecoratedGraph, o: usize, target: &AngleSpec) -> Result<Degeneration, StrataError> {
    let gm = gamma_of(t, o)?;
    let th = t.vertices[o].angle;
    if is_pinned(t, o) && !th.same_angle(target) {
        return Err(StrataError::Inapplicable("the vertex is pinned elsewhere".into()));
    }
    if th.same_angle(target) || blocked_between(t, &th, target, &[o]) {
        return Err(StrataError::Inapplicable("the leaf angle is not adjacent".into()));
    }
    let mut leaves: Vec<(usize, usize)> = Vec::new();
    for ed in &t.edges {
        let x = ed.other(o);
        if (ed.from != o && ed.to != o) || x == o {
            continue;
        }
        let lv = &t.vertices[x];
        let leafish = t.valency(x) == 1
            && lv.label.gamma().is_none()
            && matches!(lv.label, VertexLabel::Interior { .. })
            && lv.angle.same_angle(target);
        if leafish {
            leaves.push((x, ed.id));
        }
    }
    if leaves.is_empty() {
        return Err(StrataError::Inapplicable("no leaf at that angle".into()));
    }
    let mut g = gm.clone();
    let mut drop_arcs = BTreeSet::new();
    let mut new_tuples: Vec<FourTuple> = t.vertices[o].label.tuples().to_vec();
    for &(x, ed) in &leaves {
        let l = gm.loop_indices(ed);
        let [a] = l.as_slice() else {
            return Err(StrataError::Inapplicable(format!("the loop of edge {ed} is not a single arc")));
        };
        let arc = &gm.arcs[*a];
        if arc.from != arc.to {
            return Err(StrataError::Inapplicable(format!("the loop of edge {ed} is not a self-loop")));
        }
        for tu in t.vertices[x].label.tuples() {
            g.vertices[arc.from].m -= tu.pair.gcd();
            new_tuples.push(*tu);
        }
        drop_arcs.insert(*a);
    }
    let dropped: Vec<i64> = drop_arcs.iter().map(|&a| a as i64 + 1).collect();
    for l in g.loops.values_mut() {
        l.retain(|x| !dropped.contains(&x.abs()));
    }
    for &(_, ed) in &leaves {
        g.loops.remove(&ed);
    }
    let g = super::edit::contract_gamma(&g, &[], 0, &drop_arcs);
    let mut t2 = t.clone();
    t2.vertices[o].angle = *target;
    let remaining = t.valency(o) - leaves.len();
    let boundary = remaining < 2;
    if boundary {
        let (minus, rest): (Vec<FourTuple>, Vec<FourTuple>) =
            new_tuples.into_iter().partition(|x| x.delta == 0 && x.eps == Eps::Minus);
        let mut tuples = rest;
        let sum = minus.iter().fold(IntPair::ZERO, |acc, x| acc + x.pair);
        if !sum.is_zero() {
            tuples.push(FourTuple { delta: 0, eps: Eps::Minus, pair: sum });
        }
        t2.vertices[o].label = VertexLabel::Interior { tuples, gamma: None };
    } else {
        t2.vertices[o].label = VertexLabel::Interior { tuples: new_tuples, gamma: Some(g) };
    }
    let dv: BTreeSet<usize> = leaves.iter().map(|x| x.0).collect();
    let de: BTreeSet<usize> = leaves.iter().map(|x| x.1).collect();
    let graph = checked(compact(&t2, &dv, &de))?;
    Ok(Degeneration { kind: MoveKind::Absorb { vertex: o }, graph, boundary })
}

/// Every single degeneration of `t` that validates.
pub fn degenerations(t: &DecoratedGraph) -> Vec<Degeneration> {
    let mut out: Vec<Degeneration> = Vec::new();
    let n = t.vertices.len();
    let interior = |kind: MoveKind, graph: DecoratedGraph| Degeneration { kind, graph, boundary: false };
    for a in 0..n {
        for b in 0..n {
            if let Ok(g) = coincide(t, a, b) {
                out.push(interior(MoveKind::Coincide { a, b }, g));
            }
        }
    }
    let pinned = pinned_angles(t);
    for o in 0..n {
        for ang in &pinned {
            if let Ok(g) = pin(t, o, ang) {
                out.push(interior(MoveKind::Pin { vertex: o }, g));
            }
        }
    }
    for e in 0..t.edges.len() {
        for g in merge_edge(t, e).unwrap_or_default() {
            out.push(interior(MoveKind::Merge { edge: e }, g));
        }
    }
    for o in 0..n {
        if t.vertices[o].label.gamma().is_none() {
            continue;
        }
        let mut seen: Vec<AngleSpec> = Vec::new();
        for ed in &t.edges {
            if ed.from != o && ed.to != o {
                continue;
            }
            let ang = t.vertices[ed.other(o)].angle;
            if seen.iter().any(|x| x.same_angle(&ang)) {
                continue;
            }
            seen.push(ang);
            if let Ok(d) = absorb(t, o, &ang) {
                out.push(d);
            }
        }
    }
    for o in 0..n {
        let Some(gm) = t.vertices[o].label.gamma() else { continue };
        for arc in 1..=gm.arcs.len() {
            let kind = MoveKind::Collapse { vertex: o, arc };
            match collapse_arc(t, o, arc) {
                Ok(CollapseOutcome::Internal { graph }) => out.push(interior(kind, graph)),
                Ok(CollapseOutcome::BoundarySameMerge { graph, .. }) | Ok(CollapseOutcome::BoundaryCancel { graph, .. }) => {
                    out.push(Degeneration { kind, graph, boundary: true })
                }
                _ => {}
            }
        }
    }
    out
}
