//! Enumeration of strata for one data set and their codimension-one adjacencies.
//!
//! Generic graphs are built from trivalent trees on the ends, with the
//! `(0,+)` pairs placed as bivalent circles; deeper strata come from applying
//! degenerations to representatives.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use log::debug;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::edit::recompute_pairs;
use super::moves::{degenerations, MoveKind};
use super::{classify_codim1, Codim1, StrataError};
use crate::asymptotic::{lambda_set, moduli_dimension, validate_data, AsymptoticData, Eps, FourTuple};
use crate::exactnum::{angle_strictly_between, cmp_angle, AngleSpec, IntPair};
use crate::graph::{
    check_exists, homotopy_signature, stratum_data, validate_graph, DecoratedGraph, Edge, Existence, StratumData, Vertex,
    VertexGraph, VertexLabel,
};
use crate::symmetry::{aut_group, canonical_code};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Ends of the data set, `ç±` counted one by one.
    pub max_leaves: usize,
    pub max_codim: i64,
    pub max_entries: usize,
    /// Largest `|m|` on a vertex graph.
    pub max_label: i64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_leaves: 6, max_codim: 2, max_entries: 20000, max_label: 12 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    /// Homotopy signature; boundary entries are prefixed by their data set.
    pub key: String,
    pub representative: Option<DecoratedGraph>,
    pub cylinder: bool,
    pub stratum: Option<StratumData>,
    pub dim: i64,
    pub aut_order: u64,
    pub nonempty: bool,
    pub codim: i64,
    /// The entry lives on a different data set reached by a boundary move.
    pub boundary: bool,
    pub data: AsymptoticData,
}

fn is_nonempty(t: &DecoratedGraph) -> bool {
    check_exists(t).verdict == Existence::Nonempty
}

fn failing_edges(t: &DecoratedGraph) -> usize {
    check_exists(t).edges.iter().filter(|e| !e.ok).count()
}

fn entry_for(t: DecoratedGraph, key: String, boundary: bool) -> CensusEntry {
    let data = t.derived_data().sorted();
    let stratum = stratum_data(&t);
    CensusEntry {
        key,
        cylinder: false,
        dim: stratum.dim,
        codim: moduli_dimension(&data) - stratum.dim,
        aut_order: aut_group(&t).order,
        nonempty: is_nonempty(&t),
        stratum: Some(stratum),
        representative: Some(t),
        boundary,
        data,
    }
}

fn boundary_key(t: &DecoratedGraph) -> String {
    format!("{}|{}", t.derived_data().sorted().to_json(), homotopy_signature(t))
}

/// Unrooted trees with leaves `0..l` and trivalent nodes `l..2l−2`, as edge lists.
fn trivalent_trees(l: usize) -> Vec<Vec<(usize, usize)>> {
    if l < 2 {
        return vec![];
    }
    if l == 2 {
        return vec![vec![(0, 1)]];
    }
    let mut trees = vec![vec![(0, l), (1, l), (2, l)]];
    for leaf in 3..l {
        let node = l + leaf - 2;
        let mut next = Vec::new();
        for t in &trees {
            for i in 0..t.len() {
                let (a, b) = t[i];
                let mut nt = t.clone();
                nt[i] = (a, node);
                nt.push((node, b));
                nt.push((leaf, node));
                next.push(nt);
            }
        }
        trees = next;
    }
    trees
}

/// Every placement of `k` nodes into ordered lists over `slots` gaps.
fn slot_orders(k: usize, slots: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![vec![Vec::new(); slots]];
    for node in 0..k {
        let mut next = Vec::new();
        for lists in &out {
            for s in 0..slots {
                for pos in 0..=lists[s].len() {
                    let mut nl = lists.clone();
                    nl[s].insert(pos, node);
                    next.push(nl);
                }
            }
        }
        out = next;
    }
    out
}

fn cyclic_orders(labels: &[usize]) -> Vec<Vec<usize>> {
    fn perms(rest: &mut Vec<usize>, acc: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
        if rest.is_empty() {
            out.insert(acc.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            acc.push(x);
            perms(rest, acc, out);
            acc.pop();
            rest.insert(i, x);
        }
    }
    if labels.is_empty() {
        return vec![vec![]];
    }
    let mut out = BTreeSet::new();
    perms(&mut labels[1..].to_vec(), &mut vec![labels[0]], &mut out);
    out.into_iter().collect()
}

struct Setup {
    leaves: Vec<(AngleSpec, VertexLabel, usize)>,
    /// `(0,+)` tuples with the index of their point.
    plus: Vec<(FourTuple, usize)>,
    points: Vec<AngleSpec>,
}

fn setup(a: &AsymptoticData) -> Setup {
    let mut raw: Vec<(AngleSpec, VertexLabel)> = Vec::new();
    let mut plus = Vec::new();
    for _ in 0..a.c_plus {
        raw.push((AngleSpec::Zero, VertexLabel::ZeroInt { m: 1 }));
    }
    for _ in 0..a.c_minus {
        raw.push((AngleSpec::Pi, VertexLabel::PiInt { m: -1 }));
    }
    for tu in &a.tuples {
        match (tu.delta, tu.eps) {
            (1, _) => raw.push((AngleSpec::Zero, VertexLabel::ZeroEnd { tuple: *tu })),
            (-1, _) => raw.push((AngleSpec::Pi, VertexLabel::PiEnd { tuple: *tu })),
            (_, Eps::Minus) => {
                raw.push((AngleSpec::Interior(tu.pair), VertexLabel::Interior { tuples: vec![*tu], gamma: None }))
            }
            (_, Eps::Plus) => plus.push(*tu),
        }
    }
    let mut points: Vec<AngleSpec> = vec![AngleSpec::Zero, AngleSpec::Pi];
    points.extend(raw.iter().map(|x| x.0));
    points.extend(plus.iter().map(|t| AngleSpec::Interior(t.pair)));
    points.sort_by(cmp_angle);
    points.dedup_by(|x, y| x.same_angle(y));
    let idx = |ang: &AngleSpec| points.iter().position(|p| p.same_angle(ang)).expect("point listed");
    let leaves = raw.into_iter().map(|(ang, lab)| (ang, lab, idx(&ang))).collect();
    let plus = plus.into_iter().map(|t| (t, idx(&AngleSpec::Interior(t.pair)))).collect();
    Setup { leaves, plus, points }
}

/// All validated generic graphs on one tree.
fn generic_on_tree(s: &Setup, tree: &[(usize, usize)], bounds: &Bounds) -> Vec<DecoratedGraph> {
    let l = s.leaves.len();
    let k = l.saturating_sub(2);
    let nslots = s.points.len() - 1;
    let mut out = Vec::new();
    for lists in slot_orders(k, nslots) {
        let mut key = vec![(0usize, 0usize); l + k];
        for (i, leaf) in s.leaves.iter().enumerate() {
            key[i] = (2 * leaf.2, 0);
        }
        for (slot, list) in lists.iter().enumerate() {
            for (rank, &node) in list.iter().enumerate() {
                key[l + node] = (2 * slot + 1, rank);
            }
        }
        let balanced = (l..l + k).all(|n| {
            let nb: Vec<(usize, usize)> =
                tree.iter().filter_map(|&(a, b)| if a == n { Some(key[b]) } else if b == n { Some(key[a]) } else { None }).collect();
            nb.iter().any(|x| *x < key[n]) && nb.iter().any(|x| *x > key[n])
        });
        if !balanced {
            continue;
        }
        let Ok(node_angles) = slot_angles(&s.points, &lists) else { continue };
        out.extend(place_plus(s, tree, &key, &node_angles, bounds));
    }
    out
}

fn slot_angles(points: &[AngleSpec], lists: &[Vec<usize>]) -> Result<BTreeMap<usize, AngleSpec>, StrataError> {
    let mut out = BTreeMap::new();
    for (slot, list) in lists.iter().enumerate() {
        let hi = points[slot + 1];
        let mut lo = points[slot];
        for &node in list {
            let a = angle_strictly_between(&lo, &hi)?;
            out.insert(node, a);
            lo = a;
        }
    }
    Ok(out)
}

fn place_plus(
    s: &Setup,
    tree: &[(usize, usize)],
    key: &[(usize, usize)],
    node_angles: &BTreeMap<usize, AngleSpec>,
    bounds: &Bounds,
) -> Vec<DecoratedGraph> {
    let oriented: Vec<(usize, usize)> = tree.iter().map(|&(a, b)| if key[a] < key[b] { (a, b) } else { (b, a) }).collect();
    let options: Vec<Vec<usize>> = s
        .plus
        .iter()
        .map(|&(_, pi)| {
            let p = (2 * pi, 0);
            (0..oriented.len()).filter(|&i| key[oriented[i].0] < p && p < key[oriented[i].1]).collect()
        })
        .collect();
    if options.iter().any(|o| o.is_empty()) {
        return vec![];
    }
    let mut choices: Vec<Vec<usize>> = vec![vec![]];
    for opt in &options {
        choices = choices.iter().flat_map(|c| opt.iter().map(move |&i| [c.clone(), vec![i]].concat())).collect();
    }
    let mut out = Vec::new();
    for choice in choices {
        // per edge and point: the tuples placed there
        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (ti, &edge) in choice.iter().enumerate() {
            groups.entry((edge, s.plus[ti].1)).or_default().push(ti);
        }
        let group_list: Vec<((usize, usize), Vec<usize>)> = groups.into_iter().collect();
        let mut orders: Vec<Vec<Vec<usize>>> = vec![vec![]];
        for (_, members) in &group_list {
            let cyc = cyclic_orders(members);
            orders = orders.iter().flat_map(|o| cyc.iter().map(move |c| [o.clone(), vec![c.clone()]].concat())).collect();
        }
        for order in orders {
            if let Some(g) = assemble(s, &oriented, node_angles, &group_list, &order, bounds) {
                out.push(g);
            }
        }
    }
    out
}

fn assemble(
    s: &Setup,
    oriented: &[(usize, usize)],
    node_angles: &BTreeMap<usize, AngleSpec>,
    groups: &[((usize, usize), Vec<usize>)],
    order: &[Vec<usize>],
    bounds: &Bounds,
) -> Option<DecoratedGraph> {
    let l = s.leaves.len();
    let mut vertices: Vec<Vertex> = s
        .leaves
        .iter()
        .enumerate()
        .map(|(i, (ang, lab, _))| Vertex { id: i, angle: *ang, label: lab.clone() })
        .collect();
    for (&node, &ang) in node_angles {
        vertices.push(Vertex { id: l + node, angle: ang, label: VertexLabel::Interior { tuples: vec![], gamma: None } });
    }
    let mut circles: Vec<(usize, Vec<i64>)> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    for (ei, &(lo, hi)) in oriented.iter().enumerate() {
        let mut on_edge: Vec<(usize, &Vec<usize>)> =
            groups.iter().zip(order).filter(|(g, _)| g.0 .0 == ei).map(|(g, o)| (g.0 .1, o)).collect();
        on_edge.sort_by_key(|x| x.0);
        let mut prev = lo;
        for (pi, tuples) in on_edge {
            let id = vertices.len();
            let ts: Vec<FourTuple> = tuples.iter().map(|&t| s.plus[t].0).collect();
            let labels: Vec<i64> = ts.iter().map(|t| t.pair.gcd()).collect();
            if labels.iter().any(|m| m.abs() > bounds.max_label) {
                return None;
            }
            vertices.push(Vertex { id, angle: s.points[pi], label: VertexLabel::Interior { tuples: ts, gamma: None } });
            circles.push((id, labels));
            edges.push(Edge { id: edges.len(), from: prev, to: id, pair: IntPair::ZERO });
            prev = id;
        }
        edges.push(Edge { id: edges.len(), from: prev, to: hi, pair: IntPair::ZERO });
    }
    let mut t = DecoratedGraph { vertices, edges };
    let topo = t.topology();
    for node in l..l + node_angles.len() {
        let (lo, up) = (&topo.lower[node], &topo.upper[node]);
        let g = match (lo.as_slice(), up.as_slice()) {
            ([a], [b, c]) => VertexGraph::bouquet(&[(*a, *b), (*a, *c)]),
            ([a, b], [c]) => VertexGraph::bouquet(&[(*a, *c), (*b, *c)]),
            _ => return None,
        };
        if let VertexLabel::Interior { gamma, .. } = &mut t.vertices[node].label {
            *gamma = Some(g);
        }
    }
    for (id, labels) in circles {
        let (&[a], &[b]) = (topo.lower[id].as_slice(), topo.upper[id].as_slice()) else { return None };
        if let VertexLabel::Interior { gamma, .. } = &mut t.vertices[id].label {
            *gamma = Some(VertexGraph::circle(&labels, a, b));
        }
    }
    recompute_pairs(&mut t);
    validate_graph(&t).is_ok().then_some(t)
}

/// Variants per signature, each keyed by its canonical code.
type Classes = BTreeMap<String, BTreeMap<String, DecoratedGraph>>;

fn pick(variants: &BTreeMap<String, DecoratedGraph>) -> DecoratedGraph {
    if let Some(g) = variants.values().find(|g| is_nonempty(g)) {
        return g.clone();
    }
    let first = variants.values().next().expect("nonempty class");
    nonempty_nearby(first).unwrap_or_else(|| first.clone())
}

/// Angles strictly inside `(lo, hi)` from repeated bisection.
fn samples(lo: AngleSpec, hi: AngleSpec, depth: usize, out: &mut Vec<AngleSpec>) {
    if depth == 0 {
        return;
    }
    let Ok(mid) = angle_strictly_between(&lo, &hi) else { return };
    out.push(mid);
    samples(lo, mid, depth - 1, out);
    samples(mid, hi, depth - 1, out);
}

/// Moves free angles one at a time inside their components, looking for a nonempty graph
/// with the same signature.
fn nonempty_nearby(t: &DecoratedGraph) -> Option<DecoratedGraph> {
    let sig = homotopy_signature(t);
    let mut cur = t.clone();
    for _ in 0..2 {
        for v in 0..cur.vertices.len() {
            if cur.vertices[v].label.gamma().is_none() || !cur.vertices[v].label.tuples().is_empty() {
                continue;
            }
            let th = cur.vertices[v].angle;
            let mut marks: Vec<AngleSpec> = cur.vertices.iter().filter(|x| x.id != v).map(|x| x.angle).collect();
            marks.extend(lambda_set(&cur.derived_data()).angles());
            marks.push(AngleSpec::Zero);
            marks.push(AngleSpec::Pi);
            let below = marks.iter().filter(|a| cmp_angle(a, &th) == Ordering::Less).max_by(|a, b| cmp_angle(a, b));
            let above = marks.iter().filter(|a| cmp_angle(a, &th) == Ordering::Greater).min_by(|a, b| cmp_angle(a, b));
            let (Some(&lo), Some(&hi)) = (below, above) else { continue };
            let mut cands = Vec::new();
            samples(lo, hi, 4, &mut cands);
            for c in cands {
                let mut g = cur.clone();
                g.vertices[v].angle = c;
                if homotopy_signature(&g) != sig {
                    continue;
                }
                if is_nonempty(&g) {
                    return Some(g);
                }
                if failing_edges(&g) < failing_edges(&cur) {
                    cur = g;
                }
            }
        }
    }
    None
}

fn generic_classes(a: &AsymptoticData, bounds: &Bounds) -> Result<Classes, StrataError> {
    let s = setup(a);
    if s.leaves.len() > bounds.max_leaves {
        return Err(StrataError::BoundExceeded(format!("{} ends, at most {} allowed", s.leaves.len(), bounds.max_leaves)));
    }
    let trees = trivalent_trees(s.leaves.len());
    let found: Vec<Vec<(String, String, DecoratedGraph)>> = trees
        .par_iter()
        .map(|tree| {
            generic_on_tree(&s, tree, bounds)
                .into_iter()
                .map(|g| (homotopy_signature(&g), canonical_code(&g), g))
                .collect()
        })
        .collect();
    let mut classes: Classes = BTreeMap::new();
    for (sig, code, g) in found.into_iter().flatten() {
        classes.entry(sig).or_default().entry(code).or_insert(g);
    }
    debug!("{} generic classes from {} trees", classes.len(), trees.len());
    Ok(classes)
}

/// Interior strata of `a` within bounds.
pub fn census(a: &AsymptoticData, bounds: &Bounds) -> Result<Vec<CensusEntry>, StrataError> {
    Ok(census_full(a, bounds)?.into_iter().filter(|e| !e.boundary).collect())
}

/// Interior strata plus the boundary entries reached by one boundary move.
pub fn census_full(a: &AsymptoticData, bounds: &Bounds) -> Result<Vec<CensusEntry>, StrataError> {
    let rep = validate_data(a);
    if !rep.is_ok() {
        return Err(StrataError::Precondition(format!("invalid data: {rep}")));
    }
    if a.is_cylinder_shape() {
        return Ok(vec![CensusEntry {
            key: "cylinder".into(),
            representative: None,
            cylinder: true,
            stratum: None,
            dim: 1,
            aut_order: 1,
            nonempty: true,
            codim: 0,
            boundary: false,
            data: a.sorted(),
        }]);
    }
    let classes = generic_classes(a, bounds)?;
    let total = moduli_dimension(a);
    let mut entries: BTreeMap<String, CensusEntry> = BTreeMap::new();
    for (sig, variants) in &classes {
        entries.insert(sig.clone(), entry_for(pick(variants), sig.clone(), false));
    }
    let mut frontier: Vec<String> = entries.keys().cloned().collect();
    for _ in 0..bounds.max_codim {
        let reps: Vec<DecoratedGraph> =
            frontier.iter().filter_map(|k| entries[k].representative.clone()).collect();
        let results: Vec<Vec<(String, bool, DecoratedGraph)>> = reps
            .par_iter()
            .map(|t| {
                degenerations(t)
                    .into_iter()
                    .map(|d| {
                        let key = if d.boundary { boundary_key(&d.graph) } else { homotopy_signature(&d.graph) };
                        (key, d.boundary, d.graph)
                    })
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for (key, boundary, g) in results.into_iter().flatten() {
            if !boundary && total - stratum_data(&g).dim > bounds.max_codim {
                continue;
            }
            match entries.get_mut(&key) {
                Some(e) => {
                    if !e.nonempty && e.boundary == boundary && is_nonempty(&g) {
                        *e = entry_for(g, key, boundary);
                    }
                }
                None => {
                    let g = if is_nonempty(&g) { g } else { nonempty_nearby(&g).unwrap_or(g) };
                    entries.insert(key.clone(), entry_for(g, key.clone(), boundary));
                    if !boundary {
                        next.push(key);
                    }
                }
            }
            if entries.len() > bounds.max_entries {
                return Err(StrataError::BoundExceeded(format!("more than {} entries", bounds.max_entries)));
            }
        }
        frontier = next;
    }
    let mut out: Vec<CensusEntry> = entries.into_values().collect();
    out.sort_by(|x, y| (x.boundary, -x.dim, &x.key).cmp(&(y.boundary, -y.dim, &y.key)));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PictureClass {
    PairOfPants,
    ThreeRay,
    TwoCircle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetEdge {
    /// Index of the higher-dimensional entry.
    pub from: usize,
    pub to: usize,
    /// `None` when the lower graph matches none of the four patterns and the move does not name one.
    pub kind: Option<Codim1>,
    pub picture: Option<PictureClass>,
    pub via: MoveKind,
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumPoset {
    pub entries: Vec<CensusEntry>,
    pub edges: Vec<PosetEdge>,
}

fn kind_of_move(via: &MoveKind, lower: &DecoratedGraph) -> Option<Codim1> {
    match classify_codim1(lower) {
        c @ (Codim1::Type1 | Codim1::Type2 | Codim1::Type3 | Codim1::Type4) => return Some(c),
        _ => {}
    }
    match via {
        MoveKind::Coincide { .. } => Some(Codim1::Type1),
        MoveKind::Pin { .. } => Some(Codim1::Type4),
        MoveKind::Absorb { .. } => Some(Codim1::Type3),
        MoveKind::Merge { .. } | MoveKind::Collapse { .. } => None,
    }
}

/// The pictured local model of a Type2 or Type4 adjacency.
pub fn picture_class(kind: Codim1, lower: &DecoratedGraph) -> Option<PictureClass> {
    match kind {
        Codim1::Type4 => Some(PictureClass::PairOfPants),
        Codim1::Type2 => {
            let topo = lower.topology();
            let v = (0..lower.vertices.len())
                .find(|&v| lower.vertices[v].label.gamma().is_some() && lower.valency(v) == 4)?;
            match (topo.lower[v].len(), topo.upper[v].len()) {
                (2, 2) => Some(PictureClass::TwoCircle),
                (1, 3) | (3, 1) => Some(PictureClass::ThreeRay),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Codimension-one edges found by applying every degeneration to every representative.
pub fn adjacency(entries: &[CensusEntry], include_boundary: bool) -> StratumPoset {
    let index: BTreeMap<(bool, &str), usize> =
        entries.iter().enumerate().map(|(i, e)| ((e.boundary, e.key.as_str()), i)).collect();
    let found: Vec<Vec<PosetEdge>> = entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            let mut out: Vec<PosetEdge> = Vec::new();
            let Some(t) = e.representative.as_ref().filter(|_| !e.boundary) else { return out };
            for d in degenerations(t) {
                if d.boundary && !include_boundary {
                    continue;
                }
                let key = if d.boundary { boundary_key(&d.graph) } else { homotopy_signature(&d.graph) };
                let Some(&j) = index.get(&(d.boundary, key.as_str())) else { continue };
                if !d.boundary && entries[j].dim + 1 != e.dim {
                    continue;
                }
                if out.iter().any(|x| x.to == j) {
                    continue;
                }
                let kind = if d.boundary { None } else { kind_of_move(&d.kind, &d.graph) };
                let picture = kind.and_then(|k| picture_class(k, &d.graph));
                out.push(PosetEdge { from: i, to: j, kind, picture, via: d.kind, boundary: d.boundary });
            }
            out
        })
        .collect();
    let kept: Vec<CensusEntry> = entries.to_vec();
    StratumPoset { entries: kept, edges: found.into_iter().flatten().collect() }
}

impl StratumPoset {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("poset serializes")
    }

    /// Entries as nodes labeled by dimension, edges by their pattern.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph Poset {\n  rankdir=TB;\n");
        for (i, e) in self.entries.iter().enumerate() {
            let shape = if e.boundary { "box" } else { "ellipse" };
            let mark = if e.nonempty { "" } else { " (empty)" };
            let _ = writeln!(s, "  s{i} [label=\"{i}: dim {}{mark}\" shape={shape}];", e.dim);
        }
        for x in &self.edges {
            let kind = match (x.kind, x.boundary) {
                (Some(k), _) => format!("{k:?}"),
                (None, true) => "boundary".to_string(),
                (None, false) => "unclassified".to_string(),
            };
            let pic = x.picture.map_or_else(String::new, |p| format!(" {p:?}"));
            let _ = writeln!(s, "  s{} -> s{} [label=\"{kind}{pic}\"];", x.from, x.to);
        }
        s.push_str("}\n");
        s
    }
}
