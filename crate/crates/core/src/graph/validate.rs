//! Structural validation of decorated graphs and the existence test.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{DecoratedGraph, Topology, VertexGraph, VertexLabel};
use crate::asymptotic::{validate_data, Eps};
use crate::exactnum::{alpha_positive_on, cmp_angle, negative_witness, AngleSpec, IntPair, Positivity};
use crate::linalg::solve_integer;
use crate::report::Report;

/// `P_o` of a vertex.
pub fn vertex_pair(g: &DecoratedGraph, v: usize) -> IntPair {
    match &g.vertices[v].label {
        VertexLabel::ZeroInt { m } | VertexLabel::PiInt { m } => IntPair::new(0, -m),
        VertexLabel::ZeroEnd { tuple } | VertexLabel::PiEnd { tuple } => tuple.pair,
        VertexLabel::Interior { tuples, .. } => {
            if g.valency(v) == 1 && tuples.len() == 1 {
                tuples[0].pair
            } else {
                tuples.iter().fold(IntPair::ZERO, |acc, t| acc + t.eps.sign() * t.pair)
            }
        }
    }
}

/// The pair the edge at a monovalent vertex must carry.
pub fn monovalent_edge_pair(g: &DecoratedGraph, v: usize, v_is_lower: bool) -> Option<IntPair> {
    Some(match &g.vertices[v].label {
        VertexLabel::ZeroInt { m } | VertexLabel::PiInt { m } => IntPair::new(0, -m),
        VertexLabel::ZeroEnd { tuple } => -tuple.eps.sign() * tuple.pair,
        VertexLabel::PiEnd { tuple } => tuple.eps.sign() * tuple.pair,
        VertexLabel::Interior { tuples, .. } => {
            let t = tuples.first()?;
            if v_is_lower {
                t.pair
            } else {
                -t.pair
            }
        }
    })
}

fn is_tree(g: &DecoratedGraph) -> Result<(), String> {
    let n = g.vertices.len();
    if n < 2 {
        return Err(format!("a tree with {n} vertices has no edges"));
    }
    if g.edges.len() != n - 1 {
        return Err(format!("{} vertices need {} edges, found {}", n, n - 1, g.edges.len()));
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for e in &g.edges {
        if e.from == e.to {
            return Err(format!("edge {} is a self-loop", e.id));
        }
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        if a == b {
            return Err(format!("edge {} closes a cycle", e.id));
        }
        parent[a] = b;
    }
    Ok(())
}

pub fn validate_graph(g: &DecoratedGraph) -> Report {
    let mut r = Report::default();
    if let Err(msg) = g.check_structure() {
        r.push("structure", "graph", msg.to_string());
        return r;
    }
    if let Err(msg) = is_tree(g) {
        r.push("tree", "graph", msg);
        return r;
    }
    for v in &g.vertices {
        if !v.angle.is_valid() {
            r.push("angle-valid", format!("vertex {}", v.id), format!("{} names no angle", v.angle));
        }
    }
    if !r.is_ok() {
        return r;
    }
    for e in &g.edges {
        let (a, b) = (&g.vertices[e.from].angle, &g.vertices[e.to].angle);
        if a.same_angle(b) {
            r.push("edge-angles", format!("edge {}", e.id), "both ends have the same angle");
        }
        if e.pair.is_zero() {
            r.push("edge-pair-nonzero", format!("edge {}", e.id), "Q_e = (0,0)");
        }
    }
    if !r.is_ok() {
        return r;
    }
    let topo = g.topology();
    for v in &g.vertices {
        check_vertex(g, &topo, v.id, &mut r);
    }
    if !r.is_ok() {
        return r;
    }
    check_edge_rules(g, &topo, &mut r);
    r.extend(validate_data(&g.derived_data()));
    r
}

fn check_vertex(g: &DecoratedGraph, topo: &Topology, o: usize, r: &mut Report) {
    let v = &g.vertices[o];
    let subj = format!("vertex {o}");
    let deg = topo.incident[o].len();
    let endpoint = matches!(v.angle, AngleSpec::Zero | AngleSpec::Pi);
    let kind_ok = match (&v.label, &v.angle) {
        (VertexLabel::ZeroInt { .. } | VertexLabel::ZeroEnd { .. }, AngleSpec::Zero) => true,
        (VertexLabel::PiInt { .. } | VertexLabel::PiEnd { .. }, AngleSpec::Pi) => true,
        (VertexLabel::Interior { .. }, AngleSpec::Interior(_)) => true,
        _ => false,
    };
    if !kind_ok {
        r.push("label-kind", subj, format!("label does not fit angle {}", v.angle));
        return;
    }
    if endpoint && deg != 1 {
        r.push("endpoint-monovalent", subj.clone(), format!("vertex at {} has valency {deg}", v.angle));
    }
    match &v.label {
        VertexLabel::ZeroInt { m } if *m <= 0 => r.push("integer-sign", subj, format!("ZeroInt label {m} must be positive")),
        VertexLabel::PiInt { m } if *m >= 0 => r.push("integer-sign", subj, format!("PiInt label {m} must be negative")),
        VertexLabel::ZeroEnd { tuple } | VertexLabel::PiEnd { tuple } => {
            let want = if matches!(v.angle, AngleSpec::Zero) { 1 } else { -1 };
            if tuple.delta != want {
                r.push("end-tuple", subj.clone(), format!("{tuple} must have δ = {want}"));
            }
            for m in tuple.shape_problems() {
                r.push("end-tuple", subj.clone(), m);
            }
        }
        VertexLabel::Interior { tuples, gamma } => {
            for t in tuples {
                if t.delta != 0 {
                    r.push("tuple-angle", subj.clone(), format!("{t} has δ ≠ 0"));
                } else if t.angle().map_or(true, |a| cmp_angle(&a, &v.angle) != std::cmp::Ordering::Equal) {
                    r.push("tuple-angle", subj.clone(), format!("{t} does not define {}", v.angle));
                }
            }
            if deg == 1 {
                if tuples.len() != 1 || !tuples[0].is(0, Eps::Minus) {
                    r.push("monovalent-label", subj.clone(), "a monovalent vertex carries exactly one (0,−) tuple");
                }
                if gamma.is_some() {
                    r.push("gamma-presence", subj, "a monovalent vertex has a point as its graph");
                }
                return;
            }
            if tuples.is_empty() && deg < 3 {
                r.push("empty-label", subj.clone(), "an empty tuple set needs valency ≥ 3");
            }
            if topo.lower[o].is_empty() || topo.upper[o].is_empty() {
                r.push("extremal-multivalent", subj.clone(), "a multivalent vertex angle is a local extremum");
            }
            match gamma {
                None => r.push("gamma-presence", subj, "a multivalent vertex needs a vertex graph"),
                Some(gm) => {
                    check_gamma(g, topo, o, gm, r);
                    let mut want: Vec<(i64, i64)> =
                        tuples.iter().map(|t| (t.eps.sign(), t.pair.gcd())).collect();
                    let mut have: Vec<(i64, i64)> =
                        gm.vertices.iter().filter(|x| x.m != 0).map(|x| (x.m.signum(), x.m.abs())).collect();
                    want.sort();
                    have.sort();
                    if want != have {
                        r.push("gamma-labels", format!("vertex {o}"), format!("tuples need labels {want:?}, Γ has {have:?}"));
                    }
                }
            }
        }
        _ => {}
    }
}

/// Successor and predecessor maps of each loop, as 0-based arc indices.
pub(crate) struct LoopMaps {
    pub succ: BTreeMap<usize, BTreeMap<usize, usize>>,
    pub pred: BTreeMap<usize, BTreeMap<usize, usize>>,
}

pub(crate) fn loop_maps(gm: &VertexGraph) -> LoopMaps {
    let mut succ = BTreeMap::new();
    let mut pred = BTreeMap::new();
    for &e in gm.loops.keys() {
        let l = gm.loop_indices(e);
        let mut s = BTreeMap::new();
        let mut p = BTreeMap::new();
        for i in 0..l.len() {
            let j = (i + 1) % l.len();
            s.insert(l[i], l[j]);
            p.insert(l[j], l[i]);
        }
        succ.insert(e, s);
        pred.insert(e, p);
    }
    LoopMaps { succ, pred }
}

/// Integer vector of a loop over the arcs.
pub(crate) fn loop_vector(gm: &VertexGraph, e: usize) -> Vec<i64> {
    let mut v = vec![0; gm.arcs.len()];
    for &a in gm.loops.get(&e).into_iter().flatten() {
        v[a.unsigned_abs() as usize - 1] += a.signum();
    }
    v
}

/// Cycle vectors of the non-tree arcs of a spanning tree.
pub(crate) fn fundamental_cycles(gm: &VertexGraph) -> Vec<Vec<i64>> {
    let n = gm.vertices.len();
    // BFS tree: parent arc and direction
    let mut parent: Vec<Option<(usize, i64)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut tree_arc = vec![false; gm.arcs.len()];
    let mut queue = std::collections::VecDeque::new();
    if n == 0 {
        return vec![];
    }
    seen[0] = true;
    queue.push_back(0);
    while let Some(x) = queue.pop_front() {
        for (i, a) in gm.arcs.iter().enumerate() {
            let next = if a.from == x && !seen[a.to] {
                Some((a.to, 1))
            } else if a.to == x && !seen[a.from] {
                Some((a.from, -1))
            } else {
                None
            };
            if let Some((y, s)) = next {
                seen[y] = true;
                parent[y] = Some((i, s));
                tree_arc[i] = true;
                queue.push_back(y);
            }
        }
    }
    // path from root to x as a signed arc vector
    let root_path = |mut x: usize| {
        let mut v = vec![0i64; gm.arcs.len()];
        while let Some((i, s)) = parent[x] {
            v[i] += s;
            x = if s == 1 { gm.arcs[i].from } else { gm.arcs[i].to };
        }
        v
    };
    let mut out = Vec::new();
    for (i, a) in gm.arcs.iter().enumerate() {
        if tree_arc[i] {
            continue;
        }
        let pf = root_path(a.from);
        let pt = root_path(a.to);
        let mut c: Vec<i64> = pf.iter().zip(&pt).map(|(x, y)| x - y).collect();
        c[i] += 1;
        out.push(c);
    }
    out
}

fn gamma_connected(gm: &VertexGraph) -> bool {
    let n = gm.vertices.len();
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for a in &gm.arcs {
            for (u, w) in [(a.from, a.to), (a.to, a.from)] {
                if u == x && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Half-arc at a `Γ_o` vertex: `(arc index, true)` for the head, `false` for the tail.
pub(crate) type HalfArc = (usize, bool);

/// Components of the loop-transition graph on the half-arcs at `υ`.
pub(crate) fn link_components(gm: &VertexGraph, maps: &LoopMaps, u: usize) -> usize {
    let mut halves: Vec<HalfArc> = Vec::new();
    for (i, a) in gm.arcs.iter().enumerate() {
        if a.to == u {
            halves.push((i, true));
        }
        if a.from == u {
            halves.push((i, false));
        }
    }
    let idx = |h: &HalfArc| halves.iter().position(|x| x == h).unwrap();
    let mut adj = vec![Vec::new(); halves.len()];
    for s in maps.succ.values() {
        for (&a, &b) in s {
            if gm.arcs[a].to == u {
                let (x, y) = (idx(&(a, true)), idx(&(b, false)));
                adj[x].push(y);
                adj[y].push(x);
            }
        }
    }
    let mut comp = 0;
    let mut seen = vec![false; halves.len()];
    for s in 0..halves.len() {
        if seen[s] {
            continue;
        }
        comp += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    comp
}

fn check_gamma(g: &DecoratedGraph, topo: &Topology, o: usize, gm: &VertexGraph, r: &mut Report) {
    let subj = format!("vertex {o}");
    let lower: BTreeSet<usize> = topo.lower[o].iter().copied().collect();
    let upper: BTreeSet<usize> = topo.upper[o].iter().copied().collect();
    let incident: BTreeSet<usize> = topo.incident[o].iter().copied().collect();
    let before = r.violations.len();
    if gm.vertices.is_empty() {
        r.push("gamma-nonempty", subj, "the vertex graph has no vertices");
        return;
    }
    for a in &gm.arcs {
        if !lower.contains(&a.eminus) || !upper.contains(&a.eplus) {
            r.push(
                "arc-label",
                subj.clone(),
                format!("arc {} is labeled ({}, {}), which is not in E₋ × E₊", a.id, a.eminus, a.eplus),
            );
        }
    }
    if !gamma_connected(gm) {
        r.push("gamma-connected", subj.clone(), "the vertex graph is disconnected");
    }
    for x in &gm.vertices {
        let inn = gm.arcs.iter().filter(|a| a.to == x.id).count();
        let out = gm.arcs.iter().filter(|a| a.from == x.id).count();
        if inn != out {
            r.push("gamma-balance", subj.clone(), format!("Γ vertex {} has {inn} inbound and {out} outbound half-arcs", x.id));
        }
        if x.m == 0 && inn + out < 4 {
            r.push("zero-label-valency", subj.clone(), format!("zero-label vertex valency < 4 at Γ vertex {}", x.id));
        }
    }
    let deg = incident.len() as i64;
    if gm.b1() != deg - 1 {
        r.push("betti", subj.clone(), format!("b₁ = {} but the valency is {deg}", gm.b1()));
    }
    let keys: BTreeSet<usize> = gm.loops.keys().copied().collect();
    if keys != incident {
        r.push("loop-keys", subj.clone(), format!("loops are given for {keys:?}, incident edges are {incident:?}"));
    }
    if r.violations.len() > before {
        return;
    }
    for (&e, l) in &gm.loops {
        if l.iter().any(|&a| a < 0) {
            r.push("loop-orientation", subj.clone(), format!("loop of edge {e} traverses an arc backwards"));
            continue;
        }
        let listed: Vec<usize> = l.iter().map(|&a| a as usize - 1).collect();
        let mut sorted = listed.clone();
        sorted.sort();
        let labeled: Vec<usize> =
            (0..gm.arcs.len()).filter(|&i| gm.arcs[i].eminus == e || gm.arcs[i].eplus == e).collect();
        if sorted != labeled {
            r.push("loop-arcs", subj.clone(), format!("loop of edge {e} must traverse each arc labeled by {e} exactly once"));
            continue;
        }
        for i in 0..listed.len() {
            let (a, b) = (&gm.arcs[listed[i]], &gm.arcs[listed[(i + 1) % listed.len()]]);
            if a.to != b.from {
                r.push("loop-chain", subj.clone(), format!("in the loop of edge {e}, arc {} does not end where arc {} starts", a.id, b.id));
                break;
            }
        }
    }
    if r.violations.len() > before {
        return;
    }
    // Σ_{E₊} ℓ − Σ_{E₋} ℓ vanishes at chain level
    let mut rel = vec![0i64; gm.arcs.len()];
    for &e in &incident {
        let s = if upper.contains(&e) { 1 } else { -1 };
        for (x, y) in rel.iter_mut().zip(loop_vector(gm, e)) {
            *x += s * y;
        }
    }
    if rel.iter().any(|&x| x != 0) {
        r.push("loop-relation", subj.clone(), "Σ_{E₊}ℓ − Σ_{E₋}ℓ is not zero");
    }
    let cols: Vec<Vec<i64>> = incident.iter().map(|&e| loop_vector(gm, e)).collect();
    let a: Vec<Vec<BigInt>> =
        (0..gm.arcs.len()).map(|i| cols.iter().map(|c| BigInt::from(c[i])).collect()).collect();
    for c in fundamental_cycles(gm) {
        let b: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        if solve_integer(&a, &b).is_none() {
            r.push("loop-homology", subj.clone(), "the loops do not generate the integer first homology");
            break;
        }
    }
    let maps = loop_maps(gm);
    for x in &gm.vertices {
        // edge labels at x must be linked through the arcs at x
        let mut labels: BTreeSet<usize> = BTreeSet::new();
        let mut links: Vec<(usize, usize)> = Vec::new();
        for a in gm.arcs.iter().filter(|a| a.from == x.id || a.to == x.id) {
            labels.insert(a.eminus);
            labels.insert(a.eplus);
            links.push((a.eminus, a.eplus));
        }
        if !labels_connected(&labels, &links) {
            r.push("vertex-labels-connected", subj.clone(), format!("edge labels at Γ vertex {} split into several classes", x.id));
        }
        let bivalent = gm.valency(x.id) == 2;
        if !bivalent {
            for (i, a) in gm.arcs.iter().enumerate() {
                if a.to != x.id {
                    continue;
                }
                let s1 = maps.succ[&a.eminus][&i];
                let s2 = maps.succ[&a.eplus][&i];
                if s1 == s2 {
                    r.push(
                        "consecutive-arcs",
                        subj.clone(),
                        format!("arcs {} and {} are consecutive in two loops at a vertex that is not bivalent", a.id, s1 + 1),
                    );
                }
            }
        }
        if link_components(gm, &maps, x.id) != 1 {
            r.push("vertex-link", subj.clone(), format!("loop transitions at Γ vertex {} do not form one cycle", x.id));
        }
    }
    let _ = g;
}

fn labels_connected(labels: &BTreeSet<usize>, links: &[(usize, usize)]) -> bool {
    let Some(&first) = labels.iter().next() else { return true };
    let mut seen: BTreeSet<usize> = [first].into_iter().collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b) in links {
            if seen.contains(&a) != seen.contains(&b) {
                seen.insert(a);
                seen.insert(b);
                changed = true;
            }
        }
    }
    seen.len() == labels.len()
}

fn check_edge_rules(g: &DecoratedGraph, topo: &Topology, r: &mut Report) {
    for e in &g.edges {
        let (lo, hi) = g.edge_ends(e.id);
        for (v, is_lower) in [(lo, true), (hi, false)] {
            if topo.incident[v].len() != 1 {
                continue;
            }
            if let Some(q) = monovalent_edge_pair(g, v, is_lower) {
                if q != e.pair {
                    r.push("edge-rule", format!("edge {}", e.id), format!("monovalent vertex {v} requires {q}, edge has {}", e.pair));
                }
            }
        }
    }
    for v in 0..g.vertices.len() {
        if topo.incident[v].len() < 2 {
            continue;
        }
        let s = topo.lower[v].iter().fold(IntPair::ZERO, |acc, &e| acc + g.edges[e].pair)
            - topo.upper[v].iter().fold(IntPair::ZERO, |acc, &e| acc + g.edges[e].pair);
        let p = vertex_pair(g, v);
        if s != p {
            r.push("edge-rule", format!("vertex {v}"), format!("Σ_{{E₋}}Q − Σ_{{E₊}}Q = {s}, but P_o = {p}"));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Existence {
    Nonempty,
    Empty { edge: usize, witness: AngleSpec },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub edge: usize,
    pub pair: IntPair,
    pub lo: AngleSpec,
    pub hi: AngleSpec,
    pub positivity: Positivity,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceReport {
    pub verdict: Existence,
    pub edges: Vec<EdgeReport>,
    pub alerts: Vec<String>,
}

/// Whether a zero of `α_{Q_e}` is allowed at the end vertex `v`.
fn zero_allowed(g: &DecoratedGraph, v: usize) -> bool {
    g.valency(v) == 1
        && matches!(&g.vertices[v].label, VertexLabel::Interior { tuples, .. }
            if tuples.len() == 1 && tuples[0].is(0, Eps::Minus))
}

/// Positivity of `α_{Q_e}` along every edge.
pub fn check_exists(g: &DecoratedGraph) -> ExistenceReport {
    let mut edges = Vec::new();
    let mut verdict = Existence::Nonempty;
    let mut alerts = Vec::new();
    for e in &g.edges {
        let (lo, hi) = g.edge_ends(e.id);
        let (alo, ahi) = (g.vertices[lo].angle, g.vertices[hi].angle);
        let pos = match alpha_positive_on(e.pair, &alo, &ahi) {
            Ok(p) => p,
            Err(err) => {
                alerts.push(format!("edge {}: {err}", e.id));
                if verdict == Existence::Nonempty {
                    verdict = Existence::Empty { edge: e.id, witness: alo };
                }
                continue;
            }
        };
        let failure = match pos {
            Positivity::PositiveThroughout => None,
            Positivity::ZeroAtLo => (!zero_allowed(g, lo)).then_some(alo),
            Positivity::ZeroAtHi => (!zero_allowed(g, hi)).then_some(ahi),
            Positivity::ZeroAtBoth => {
                if !zero_allowed(g, lo) {
                    Some(alo)
                } else if !zero_allowed(g, hi) {
                    Some(ahi)
                } else {
                    None
                }
            }
            Positivity::Fails(root) => Some(negative_witness(e.pair, &alo, &ahi).ok().flatten().unwrap_or(root)),
        };
        if let (Some(w), Existence::Nonempty) = (failure, &verdict) {
            verdict = Existence::Empty { edge: e.id, witness: w };
        }
        edges.push(EdgeReport { edge: e.id, pair: e.pair, lo: alo, hi: ahi, positivity: pos, ok: failure.is_none() });
    }
    ExistenceReport { verdict, edges, alerts }
}
