//! Isomorphisms and automorphisms of decorated graphs.
//!
//! Canonical forms are rooted: each vertex graph `Γ_o` is traversed from
//! every possible start arc, following the successor and predecessor of
//! each arc in its two loops, and the lexicographically least encoding
//! wins. An automorphism of `Γ_o` fixing an arc is trivial, so the start
//! arcs achieving the minimum are in bijection with the local symmetries.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::exactnum::{cmp_angle, AngleSpec, Rational};
use crate::graph::validate::loop_maps;
use crate::graph::{DecoratedGraph, Topology, VertexGraph, VertexLabel};

/// A label-preserving map between two decorated graphs.
///
/// Arc maps use 0-based arc indices (arc id − 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Isomorphism {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    #[serde(with = "crate::graph::usize_keys")]
    pub gamma_vertices: BTreeMap<usize, Vec<usize>>,
    #[serde(with = "crate::graph::usize_keys")]
    pub arcs: BTreeMap<usize, Vec<usize>>,
}

impl Isomorphism {
    pub fn identity(t: &DecoratedGraph) -> Isomorphism {
        let mut gamma_vertices = BTreeMap::new();
        let mut arcs = BTreeMap::new();
        for v in &t.vertices {
            if let Some(g) = v.label.gamma() {
                gamma_vertices.insert(v.id, (0..g.vertices.len()).collect());
                arcs.insert(v.id, (0..g.arcs.len()).collect());
            }
        }
        Isomorphism {
            vertices: (0..t.vertices.len()).collect(),
            edges: (0..t.edges.len()).collect(),
            gamma_vertices,
            arcs,
        }
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &Isomorphism) -> Isomorphism {
        let vertices = self.vertices.iter().map(|&v| other.vertices[v]).collect();
        let edges = self.edges.iter().map(|&e| other.edges[e]).collect();
        let mut gamma_vertices = BTreeMap::new();
        let mut arcs = BTreeMap::new();
        for (&o, m) in &self.gamma_vertices {
            let o2 = self.vertices[o];
            gamma_vertices.insert(o, m.iter().map(|&x| other.gamma_vertices[&o2][x]).collect());
        }
        for (&o, m) in &self.arcs {
            let o2 = self.vertices[o];
            arcs.insert(o, m.iter().map(|&x| other.arcs[&o2][x]).collect());
        }
        Isomorphism { vertices, edges, gamma_vertices, arcs }
    }

    pub fn inverse(&self) -> Isomorphism {
        let inv = |m: &[usize]| {
            let mut out = vec![0; m.len()];
            for (i, &j) in m.iter().enumerate() {
                out[j] = i;
            }
            out
        };
        let mut gamma_vertices = BTreeMap::new();
        let mut arcs = BTreeMap::new();
        for (&o, m) in &self.gamma_vertices {
            gamma_vertices.insert(self.vertices[o], inv(m));
        }
        for (&o, m) in &self.arcs {
            arcs.insert(self.vertices[o], inv(m));
        }
        Isomorphism { vertices: inv(&self.vertices), edges: inv(&self.edges), gamma_vertices, arcs }
    }

    pub fn is_identity(&self) -> bool {
        let id = |m: &[usize]| m.iter().enumerate().all(|(i, &j)| i == j);
        id(&self.vertices)
            && id(&self.edges)
            && self.gamma_vertices.values().all(|m| id(m))
            && self.arcs.values().all(|m| id(m))
    }

    pub fn pow(&self, t: &DecoratedGraph, k: usize) -> Isomorphism {
        let mut acc = Isomorphism::identity(t);
        for _ in 0..k {
            acc = acc.then(self);
        }
        acc
    }

    /// Smallest `k ≥ 1` with `self^k = id`.
    pub fn order(&self, t: &DecoratedGraph) -> usize {
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc.then(self);
            k += 1;
            if k > 1 << 20 {
                break;
            }
        }
        let _ = t;
        k
    }
}

fn label_code(l: &VertexLabel) -> String {
    match l {
        VertexLabel::ZeroInt { m } => format!("Z{m}"),
        VertexLabel::PiInt { m } => format!("P{m}"),
        VertexLabel::ZeroEnd { tuple } => format!("ZE{tuple}"),
        VertexLabel::PiEnd { tuple } => format!("PE{tuple}"),
        VertexLabel::Interior { tuples, .. } => {
            let mut v: Vec<String> = tuples.iter().map(|t| t.to_string()).collect();
            v.sort();
            format!("I{}", v.join(""))
        }
    }
}

/// The exact angle as a canonical string.
pub fn exact_angle_key(a: &AngleSpec) -> String {
    match a.normalized() {
        AngleSpec::Zero => "0".into(),
        AngleSpec::Pi => "pi".into(),
        AngleSpec::Interior(p) => p.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaCanon {
    pub vertex_order: Vec<usize>,
    pub arc_order: Vec<usize>,
    pub edge_order: Vec<usize>,
    /// Start arcs achieving the least encoding.
    pub min_starts: Vec<usize>,
}

/// Arc, vertex and edge orders of the traversal from start arc `s`.
fn traverse(gm: &VertexGraph, succ_pred: &[[usize; 4]], s: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut arc_seen = vec![false; gm.arcs.len()];
    let mut arcs = Vec::with_capacity(gm.arcs.len());
    let mut verts = Vec::with_capacity(gm.vertices.len());
    let mut vseen = vec![false; gm.vertices.len()];
    let mut edges: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();
    arc_seen[s] = true;
    queue.push_back(s);
    while let Some(a) = queue.pop_front() {
        arcs.push(a);
        let arc = &gm.arcs[a];
        for v in [arc.from, arc.to] {
            if !vseen[v] {
                vseen[v] = true;
                verts.push(v);
            }
        }
        for e in [arc.eminus, arc.eplus] {
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
        for &b in &succ_pred[a] {
            if !arc_seen[b] {
                arc_seen[b] = true;
                queue.push_back(b);
            }
        }
    }
    for (i, seen) in arc_seen.iter().enumerate() {
        if !seen {
            arcs.push(i);
        }
    }
    for (v, seen) in vseen.iter().enumerate() {
        if !seen {
            verts.push(v);
        }
    }
    (arcs, verts, edges)
}

/// Least encoding of `Γ_o` with incident edges colored.
fn canon_gamma(gm: &VertexGraph, colors: &BTreeMap<usize, String>, forced: Option<usize>) -> (String, GammaCanon) {
    let maps = loop_maps(gm);
    let sp: Vec<[usize; 4]> = (0..gm.arcs.len())
        .map(|a| {
            let arc = &gm.arcs[a];
            let get = |m: &BTreeMap<usize, BTreeMap<usize, usize>>, e: usize| m.get(&e).and_then(|x| x.get(&a)).copied().unwrap_or(a);
            [get(&maps.succ, arc.eminus), get(&maps.pred, arc.eminus), get(&maps.succ, arc.eplus), get(&maps.pred, arc.eplus)]
        })
        .collect();
    let encode = |s: usize| {
        let (arcs, verts, edges) = traverse(gm, &sp, s);
        let pos = |order: &[usize], x: usize| order.iter().position(|&y| y == x).unwrap_or(usize::MAX);
        let mut code = String::new();
        for &v in &verts {
            code.push_str(&format!("v{};", gm.vertices[v].m));
        }
        for &e in &edges {
            code.push_str(&format!("e{};", colors.get(&e).map(String::as_str).unwrap_or("?")));
        }
        for &a in &arcs {
            let arc = &gm.arcs[a];
            code.push_str(&format!(
                "a{},{},{},{},{},{};",
                pos(&verts, arc.from),
                pos(&verts, arc.to),
                pos(&edges, arc.eminus),
                pos(&edges, arc.eplus),
                pos(&arcs, sp[a][0]),
                pos(&arcs, sp[a][2])
            ));
        }
        (code, arcs, verts, edges)
    };
    let mut best: Option<(String, Vec<usize>, Vec<usize>, Vec<usize>)> = None;
    let mut min_starts = Vec::new();
    for s in 0..gm.arcs.len() {
        let (code, arcs, verts, edges) = encode(s);
        match &best {
            Some((b, ..)) if code > *b => {}
            Some((b, ..)) if code == *b => min_starts.push(s),
            _ => {
                best = Some((code, arcs, verts, edges));
                min_starts = vec![s];
            }
        }
    }
    let (mut code, mut arcs, mut verts, mut edges) = best.unwrap_or_default();
    if let Some(f) = forced {
        let (c, a, v, e) = encode(f);
        code = c;
        arcs = a;
        verts = v;
        edges = e;
    }
    (code, GammaCanon { vertex_order: verts, arc_order: arcs, edge_order: edges, min_starts })
}

/// A canonical labeling of a rooted subtree.
#[derive(Debug, Clone)]
pub struct Sub {
    pub code: String,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub gammas: Vec<(usize, GammaCanon)>,
}

pub struct Coder<'a> {
    t: &'a DecoratedGraph,
    topo: Topology,
    keys: Vec<String>,
    labels: Vec<String>,
}

impl<'a> Coder<'a> {
    /// A coder using the exact vertex angles.
    pub fn exact(t: &'a DecoratedGraph) -> Self {
        let keys = t.vertices.iter().map(|v| exact_angle_key(&v.angle)).collect();
        Coder::with_keys(t, keys)
    }

    pub fn with_keys(t: &'a DecoratedGraph, keys: Vec<String>) -> Self {
        let labels = t.vertices.iter().map(|v| label_code(&v.label)).collect();
        Coder { t, topo: t.topology(), keys, labels }
    }

    /// Canonical labeling of the subtree at `v` away from `parent`.
    ///
    /// With `forced`, the vertex graph at `v` is read from that start arc.
    pub fn rooted(&self, v: usize, parent: Option<usize>, forced: Option<usize>) -> Sub {
        let t = self.t;
        let children: Vec<usize> = self.topo.incident[v].iter().copied().filter(|&e| Some(e) != parent).collect();
        let subs: BTreeMap<usize, Sub> =
            children.iter().map(|&e| (e, self.rooted(t.edges[e].other(v), Some(e), None))).collect();
        let mut colors: BTreeMap<usize, String> = BTreeMap::new();
        for &e in &self.topo.incident[v] {
            let dir = if self.topo.lower[v].contains(&e) { "-" } else { "+" };
            let c = match subs.get(&e) {
                Some(s) => format!("{dir}{}<{}>", t.edges[e].pair, s.code),
                None => format!("{dir}{}^", t.edges[e].pair),
            };
            colors.insert(e, c);
        }
        let head = format!("{}|{}", self.keys[v], self.labels[v]);
        let (code, order, gamma) = match t.vertices[v].label.gamma() {
            Some(gm) => {
                let (gcode, gc) = canon_gamma(gm, &colors, forced);
                let order: Vec<usize> = gc.edge_order.iter().copied().filter(|&e| Some(e) != parent).collect();
                (format!("({head}|{gcode})"), order, Some(gc))
            }
            None => {
                let mut order = children.clone();
                order.sort_by(|a, b| colors[a].cmp(&colors[b]));
                let cs: Vec<&str> = self.topo.incident[v].iter().map(|e| colors[e].as_str()).collect();
                let mut cs = cs;
                cs.sort();
                (format!("({head}|{})", cs.join(",")), order, None)
            }
        };
        let mut vertices = vec![v];
        let mut edges = Vec::new();
        let mut gammas = Vec::new();
        if let Some(gc) = gamma {
            gammas.push((v, gc));
        }
        for e in order {
            let s = &subs[&e];
            edges.push(e);
            vertices.extend(&s.vertices);
            edges.extend(&s.edges);
            gammas.extend(s.gammas.iter().cloned());
        }
        Sub { code, vertices, edges, gammas }
    }

    /// Center vertices of the tree.
    pub fn centers(&self) -> Vec<usize> {
        let n = self.t.vertices.len();
        let mut deg: Vec<usize> = (0..n).map(|v| self.topo.incident[v].len()).collect();
        let mut alive: BTreeSet<usize> = (0..n).collect();
        while alive.len() > 2 {
            let leaves: Vec<usize> = alive.iter().copied().filter(|&v| deg[v] <= 1).collect();
            for &l in &leaves {
                alive.remove(&l);
                for &e in &self.topo.incident[l] {
                    let w = self.t.edges[e].other(l);
                    if alive.contains(&w) {
                        deg[w] -= 1;
                    }
                }
            }
        }
        alive.into_iter().collect()
    }

    /// Canonical labeling of the whole tree, rooted at the least center.
    pub fn canonical(&self) -> Sub {
        self.centers()
            .into_iter()
            .map(|c| self.rooted(c, None, None))
            .min_by(|a, b| a.code.cmp(&b.code))
            .expect("a tree has a center")
    }
}

/// Canonical code of `T` with exact angles.
pub fn canonical_code(t: &DecoratedGraph) -> String {
    Coder::exact(t).canonical().code
}

/// The map sending the `i`-th item of labeling `a` to that of `b`.
fn map_between(t1: &DecoratedGraph, a: &Sub, b: &Sub) -> Isomorphism {
    let mut vertices = vec![usize::MAX; t1.vertices.len()];
    for (x, y) in a.vertices.iter().zip(&b.vertices) {
        vertices[*x] = *y;
    }
    let mut edges = vec![usize::MAX; t1.edges.len()];
    for (x, y) in a.edges.iter().zip(&b.edges) {
        edges[*x] = *y;
    }
    let mut gamma_vertices = BTreeMap::new();
    let mut arcs = BTreeMap::new();
    for ((o, ga), (_, gb)) in a.gammas.iter().zip(&b.gammas) {
        let mut vm = vec![usize::MAX; ga.vertex_order.len()];
        for (x, y) in ga.vertex_order.iter().zip(&gb.vertex_order) {
            vm[*x] = *y;
        }
        let mut am = vec![usize::MAX; ga.arc_order.len()];
        for (x, y) in ga.arc_order.iter().zip(&gb.arc_order) {
            am[*x] = *y;
        }
        gamma_vertices.insert(*o, vm);
        arcs.insert(*o, am);
    }
    Isomorphism { vertices, edges, gamma_vertices, arcs }
}

/// Checks that `iso` is a label-preserving isomorphism `t1 → t2`.
pub fn verify_isomorphism(t1: &DecoratedGraph, t2: &DecoratedGraph, iso: &Isomorphism) -> bool {
    let bij = |m: &[usize], n: usize| {
        m.len() == n && {
            let s: BTreeSet<usize> = m.iter().copied().collect();
            s.len() == n && s.iter().all(|&x| x < n)
        }
    };
    if t1.vertices.len() != t2.vertices.len() || t1.edges.len() != t2.edges.len() {
        return false;
    }
    if !bij(&iso.vertices, t1.vertices.len()) || !bij(&iso.edges, t1.edges.len()) {
        return false;
    }
    for v in &t1.vertices {
        let w = &t2.vertices[iso.vertices[v.id]];
        if cmp_angle(&v.angle, &w.angle) != Ordering::Equal || label_code(&v.label) != label_code(&w.label) {
            return false;
        }
    }
    for e in &t1.edges {
        let f = &t2.edges[iso.edges[e.id]];
        if e.pair != f.pair {
            return false;
        }
        let (a, b) = (iso.vertices[e.from], iso.vertices[e.to]);
        if !((f.from == a && f.to == b) || (f.from == b && f.to == a)) {
            return false;
        }
    }
    for v in &t1.vertices {
        let w = iso.vertices[v.id];
        match (v.label.gamma(), t2.vertices[w].label.gamma()) {
            (None, None) => {}
            (Some(g1), Some(g2)) => {
                let (Some(vm), Some(am)) = (iso.gamma_vertices.get(&v.id), iso.arcs.get(&v.id)) else {
                    return false;
                };
                if !bij(vm, g1.vertices.len()) || !bij(am, g1.arcs.len()) || g1.vertices.len() != g2.vertices.len() || g1.arcs.len() != g2.arcs.len() {
                    return false;
                }
                for x in &g1.vertices {
                    if g2.vertices[vm[x.id]].m != x.m {
                        return false;
                    }
                }
                for (i, a) in g1.arcs.iter().enumerate() {
                    let b = &g2.arcs[am[i]];
                    if b.from != vm[a.from] || b.to != vm[a.to] || b.eminus != iso.edges[a.eminus] || b.eplus != iso.edges[a.eplus] {
                        return false;
                    }
                }
                for (&e, l) in &g1.loops {
                    let Some(l2) = g2.loops.get(&iso.edges[e]) else { return false };
                    let mapped: Vec<usize> = l.iter().map(|&a| am[a as usize - 1]).collect();
                    let target: Vec<usize> = l2.iter().map(|&a| a as usize - 1).collect();
                    if mapped.len() != target.len() {
                        return false;
                    }
                    let Some(shift) = target.iter().position(|&x| Some(&x) == mapped.first()) else {
                        return mapped.is_empty();
                    };
                    if (0..mapped.len()).any(|i| mapped[i] != target[(i + shift) % target.len()]) {
                        return false;
                    }
                }
            }
            _ => return false,
        }
    }
    true
}

/// Some isomorphism `t1 → t2`, or `None`.
pub fn are_isomorphic(t1: &DecoratedGraph, t2: &DecoratedGraph) -> Option<Isomorphism> {
    if t1.vertices.len() != t2.vertices.len() {
        return None;
    }
    let (c1, c2) = (Coder::exact(t1), Coder::exact(t2));
    let a = c1.canonical();
    // try every center of t2 with the same code; centers are at most two
    for c in c2.centers() {
        let b = c2.rooted(c, None, None);
        if b.code == a.code {
            let iso = map_between(t1, &a, &b);
            if verify_isomorphism(t1, t2, &iso) {
                return Some(iso);
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutGroup {
    pub order: u64,
    pub diamond: usize,
    /// `n_o` for every multivalent vertex, `n_⋄` included when `⋄` is multivalent.
    #[serde(with = "crate::graph::usize_keys")]
    pub local_orders: BTreeMap<usize, usize>,
    /// One generator per nontrivial local group (all elements at `⋄` if it is not cyclic).
    pub generators: Vec<(usize, Isomorphism)>,
    /// Vertices fixed by every automorphism.
    pub fixed_vertices: Vec<usize>,
    /// An incident edge of `⋄` fixed by `Aut_⋄`, when there is one.
    pub distinguished_edge: Option<usize>,
    /// Size of the `Aut_⋄` orbit of the distinguished edge.
    pub distinguished_orbit: usize,
}

impl AutGroup {
    pub fn edge_fixing(&self) -> bool {
        self.distinguished_edge.is_some()
    }

    pub fn generator_at(&self, o: usize) -> Option<&Isomorphism> {
        self.generators.iter().find(|(v, _)| *v == o).map(|(_, g)| g)
    }
}

/// Orbit classes of vertices: equal rooted codes.
pub fn vertex_orbits(t: &DecoratedGraph) -> Vec<Vec<usize>> {
    let c = Coder::exact(t);
    let codes: Vec<String> = (0..t.vertices.len()).map(|v| c.rooted(v, None, None).code).collect();
    let mut classes: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (v, code) in codes.iter().enumerate() {
        classes.entry(code.as_str()).or_default().push(v);
    }
    classes.into_values().collect()
}

/// The vertex `⋄`: least angle among vertices fixed by every automorphism.
pub fn diamond(t: &DecoratedGraph) -> usize {
    let c = Coder::exact(t);
    let fixed: Vec<usize> = vertex_orbits(t).into_iter().filter(|o| o.len() == 1).map(|o| o[0]).collect();
    *fixed
        .iter()
        .min_by(|&&a, &&b| {
            cmp_angle(&t.vertices[a].angle, &t.vertices[b].angle)
                .then_with(|| c.rooted(a, None, None).code.cmp(&c.rooted(b, None, None).code))
        })
        .expect("a tree center is fixed")
}

/// Parent edge of every vertex when `T` hangs from `root`.
pub fn parent_edges(t: &DecoratedGraph, root: usize) -> Vec<Option<usize>> {
    let topo = t.topology();
    let mut parent = vec![None; t.vertices.len()];
    let mut seen = vec![false; t.vertices.len()];
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(v) = stack.pop() {
        for &e in &topo.incident[v] {
            let w = t.edges[e].other(v);
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(e);
                stack.push(w);
            }
        }
    }
    parent
}

/// The automorphism acting at `o` by the start arc `s`, trivially off `T_o`.
pub fn local_automorphism(t: &DecoratedGraph, o: usize, parent: Option<usize>, s0: usize, s: usize) -> Isomorphism {
    let c = Coder::exact(t);
    let a = c.rooted(o, parent, Some(s0));
    let b = c.rooted(o, parent, Some(s));
    let mut iso = Isomorphism::identity(t);
    let part = map_between(t, &a, &b);
    for (x, y) in a.vertices.iter().zip(&b.vertices) {
        iso.vertices[*x] = *y;
    }
    for e in &a.edges {
        iso.edges[*e] = part.edges[*e];
    }
    for (o2, _) in &a.gammas {
        iso.gamma_vertices.insert(*o2, part.gamma_vertices[o2].clone());
        iso.arcs.insert(*o2, part.arcs[o2].clone());
    }
    iso
}

pub fn aut_group(t: &DecoratedGraph) -> AutGroup {
    let d = diamond(t);
    let parents = parent_edges(t, d);
    let c = Coder::exact(t);
    let top = c.rooted(d, None, None);
    let mut order: u64 = 1;
    let mut local_orders = BTreeMap::new();
    let mut generators = Vec::new();
    let mut diamond_elements: Vec<Isomorphism> = Vec::new();
    for (o, gc) in &top.gammas {
        let n = gc.min_starts.len();
        order *= n as u64;
        local_orders.insert(*o, n);
        if n < 2 {
            continue;
        }
        let s0 = gc.min_starts[0];
        let elems: Vec<Isomorphism> =
            gc.min_starts[1..].iter().map(|&s| local_automorphism(t, *o, parents[*o], s0, s)).collect();
        if *o == d {
            diamond_elements = elems.clone();
        }
        match elems.iter().find(|g| g.order(t) == n) {
            Some(g) => generators.push((*o, g.clone())),
            None => generators.extend(elems.into_iter().map(|g| (*o, g))),
        }
    }
    let fixed_vertices: Vec<usize> = vertex_orbits(t).into_iter().filter(|o| o.len() == 1).map(|o| o[0]).collect();
    let topo = t.topology();
    // incident edges of ⋄ in canonical order
    let diamond_edges: Vec<usize> = match top.gammas.iter().find(|(o, _)| *o == d) {
        Some((_, gc)) => gc.edge_order.clone(),
        None => topo.incident[d].clone(),
    };
    let fixed_by_all = |e: usize| diamond_elements.iter().all(|g| g.edges[e] == e);
    let distinguished_edge = diamond_edges.iter().copied().find(|&e| fixed_by_all(e));
    let distinguished_orbit = match distinguished_edge {
        Some(_) => 1,
        None => {
            let e0 = diamond_edges[0];
            let imgs: BTreeSet<usize> = diamond_elements.iter().map(|g| g.edges[e0]).chain([e0]).collect();
            imgs.len()
        }
    };
    AutGroup { order, diamond: d, local_orders, generators, fixed_vertices, distinguished_edge, distinguished_orbit }
}

/// All automorphisms, by closing the generators. Intended for small groups.
pub fn aut_elements(t: &DecoratedGraph, g: &AutGroup) -> Vec<Isomorphism> {
    let mut seen: BTreeSet<Isomorphism> = BTreeSet::new();
    let id = Isomorphism::identity(t);
    let mut queue = vec![id.clone()];
    seen.insert(id);
    while let Some(x) = queue.pop() {
        for (_, gen) in &g.generators {
            let y = x.then(gen);
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

impl PartialOrd for Isomorphism {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Isomorphism {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.vertices, &self.edges, &self.gamma_vertices, &self.arcs).cmp(&(
            &other.vertices,
            &other.edges,
            &other.gamma_vertices,
            &other.arcs,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalSubgroup {
    pub k_t: usize,
    pub m_minus: i64,
    /// Rotation amount `n_o / k_T` at each fixed multivalent vertex.
    #[serde(with = "crate::graph::usize_keys")]
    pub rotations: BTreeMap<usize, usize>,
    pub generator: Isomorphism,
    /// False outside the regime where `Aut_⋄` fixes an incident edge.
    pub edge_fixing: bool,
}

pub fn canonical_diagonal(t: &DecoratedGraph) -> DiagonalSubgroup {
    let g = aut_group(t);
    let topo = t.topology();
    let e = g.distinguished_edge.unwrap_or(topo.incident[g.diamond][0]);
    let m_minus = t.edges[e].pair.gcd();
    let fixed: Vec<usize> = g.fixed_vertices.iter().copied().filter(|o| g.local_orders.contains_key(o)).collect();
    let mut k = m_minus.unsigned_abs() as usize;
    for o in &fixed {
        k = k.gcd(&g.local_orders[o]);
    }
    let k = k.max(1);
    let mut generator = Isomorphism::identity(t);
    let mut rotations = BTreeMap::new();
    for o in &fixed {
        let n = g.local_orders[o];
        rotations.insert(*o, n / k);
        if k > 1 {
            if let Some(gen) = g.generator_at(*o) {
                generator = generator.then(&gen.pow(t, n / k));
            }
        }
    }
    DiagonalSubgroup { k_t: k, m_minus, rotations, generator, edge_fixing: g.edge_fixing() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stabilizer {
    pub order: usize,
    pub generator: Isomorphism,
}

/// Whether an automorphism fixes every simplex block of the point.
pub fn fixes_blocks(g: &Isomorphism, r: &BTreeMap<usize, BTreeMap<usize, Rational>>) -> bool {
    r.iter().all(|(&o, block)| {
        let o2 = g.vertices[o];
        let Some(b2) = r.get(&o2) else { return false };
        let am = &g.arcs[&o];
        block.iter().all(|(&id, val)| b2.get(&(am[id - 1] + 1)) == Some(val))
    })
}

/// The largest subgroup of the canonical diagonal subgroup fixing `r`.
pub fn stabilizer(t: &DecoratedGraph, r: &BTreeMap<usize, BTreeMap<usize, Rational>>) -> Stabilizer {
    let diag = canonical_diagonal(t);
    let k = diag.k_t;
    let mut divisors: Vec<usize> = (1..=k).filter(|d| k % d == 0).collect();
    divisors.reverse();
    for d in divisors {
        let h = diag.generator.pow(t, k / d);
        if fixes_blocks(&h, r) {
            return Stabilizer { order: d, generator: h };
        }
    }
    Stabilizer { order: 1, generator: Isomorphism::identity(t) }
}
