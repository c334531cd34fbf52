//! Parallel arcs in a vertex graph: difference classes, collapses and splits.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::edit::{compact, contract_gamma, rename_edge, smooth_vertex};
use super::{gamma_of, StrataError};
use crate::asymptotic::{AsymptoticData, Eps, FourTuple};
use crate::exactnum::{sign_alpha_at, AngleSpec, ExactError, IntPair, Sign};
use crate::graph::validate::loop_vector;
use crate::graph::{validate_graph, DecoratedGraph, VertexGraph, VertexLabel};

/// Coefficients `c_e` with `γ − γ′ = Σ c_e ℓ_oe` and `Q = Σ c_e Q_e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceClass {
    #[serde(with = "crate::graph::usize_keys")]
    pub coefficients: BTreeMap<usize, i8>,
    pub q: IntPair,
}

fn check_arc(gm: &VertexGraph, o: usize, arc: usize) -> Result<(), StrataError> {
    if arc == 0 || arc > gm.arcs.len() {
        return Err(StrataError::NoArc { vertex: o, arc });
    }
    Ok(())
}

/// Arc indices (0-based) of every loop labeled by an edge of the given arcs.
fn close_under_labels(gm: &VertexGraph, seed: BTreeSet<usize>, exclude: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut set = seed;
    loop {
        let labels: BTreeSet<usize> = set.iter().flat_map(|&i| [gm.arcs[i].eminus, gm.arcs[i].eplus]).collect();
        let mut next = set.clone();
        for e in labels {
            next.extend(gm.loop_indices(e).into_iter().filter(|i| !exclude.contains(i)));
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

/// The growing-set construction for two arcs with common endpoints (1-based ids).
pub fn arc_difference_class(t: &DecoratedGraph, o: usize, g1: usize, g2: usize) -> Result<DifferenceClass, StrataError> {
    let gm = gamma_of(t, o)?;
    check_arc(gm, o, g1)?;
    check_arc(gm, o, g2)?;
    if g1 == g2 {
        return Err(StrataError::SameArc(g1));
    }
    let (a, b) = (gm.arc(g1), gm.arc(g2));
    if a.from != b.from || a.to != b.to {
        return Err(StrataError::EndpointsNotShared { a: g1, b: g2 });
    }
    let topo = t.topology();
    let exclude: BTreeSet<usize> = [g1 - 1, g2 - 1].into_iter().collect();
    let seed: BTreeSet<usize> = gm
        .loop_indices(a.eminus)
        .into_iter()
        .chain(gm.loop_indices(b.eplus))
        .filter(|i| !exclude.contains(i))
        .collect();
    let closure = close_under_labels(gm, seed, &exclude);
    let mut labeled: BTreeSet<usize> =
        closure.iter().flat_map(|&i| [gm.arcs[i].eminus, gm.arcs[i].eplus]).collect();
    labeled.insert(a.eminus);
    labeled.insert(b.eplus);
    let mut coefficients = BTreeMap::new();
    let mut q = IntPair::ZERO;
    for &e in &topo.incident[o] {
        let c: i8 = if !labeled.contains(&e) {
            0
        } else if topo.lower[o].contains(&e) {
            1
        } else {
            -1
        };
        coefficients.insert(e, c);
        q = q + (c as i64) * t.edges[e].pair;
    }
    let mut chain = vec![0i64; gm.arcs.len()];
    for (&e, &c) in &coefficients {
        for (x, y) in chain.iter_mut().zip(loop_vector(gm, e)) {
            *x += c as i64 * y;
        }
    }
    let mut want = vec![0i64; gm.arcs.len()];
    want[g1 - 1] += 1;
    want[g2 - 1] -= 1;
    if chain != want {
        return Err(StrataError::ChainIdentity { a: g1, b: g2 });
    }
    Ok(DifferenceClass { coefficients, q })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcedEqual {
    AlwaysEqual,
    EqualAtThisAngle,
    Independent,
}

/// The verdict for a difference pair `Q` at the angle `at`.
pub fn forced_by_pair(q: IntPair, at: &AngleSpec) -> Result<ForcedEqual, ExactError> {
    if q.is_zero() {
        return Ok(ForcedEqual::AlwaysEqual);
    }
    Ok(match sign_alpha_at(q, at)? {
        Sign::Zero => ForcedEqual::EqualAtThisAngle,
        _ => ForcedEqual::Independent,
    })
}

pub fn forced_equal(t: &DecoratedGraph, o: usize, g1: usize, g2: usize) -> Result<ForcedEqual, StrataError> {
    let class = arc_difference_class(t, o, g1, g2)?;
    Ok(forced_by_pair(class.q, &t.vertices[o].angle)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CancelSubcase {
    /// `Γ_o` was a circle through the two vertices: `o` goes and its edges join.
    DeleteVertex,
    /// Both ends were bivalent among more vertices: the arc goes and its neighbours join.
    DeleteArc,
    MergeToZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CollapseOutcome {
    Internal { graph: DecoratedGraph },
    BoundarySameMerge { data: AsymptoticData, graph: DecoratedGraph, tuple: FourTuple },
    BoundaryCancel { data: AsymptoticData, graph: DecoratedGraph, removed: Vec<FourTuple>, subcase: CancelSubcase },
    Rejected { reason: String },
}

impl CollapseOutcome {
    pub fn graph(&self) -> Option<&DecoratedGraph> {
        match self {
            CollapseOutcome::Internal { graph }
            | CollapseOutcome::BoundarySameMerge { graph, .. }
            | CollapseOutcome::BoundaryCancel { graph, .. } => Some(graph),
            CollapseOutcome::Rejected { .. } => None,
        }
    }
}

pub(crate) fn with_gamma(t: &DecoratedGraph, o: usize, gm: VertexGraph, tuples: Vec<FourTuple>) -> DecoratedGraph {
    let mut t2 = t.clone();
    t2.vertices[o].label = VertexLabel::Interior { tuples, gamma: Some(gm) };
    t2
}

fn rejected_by(g: &DecoratedGraph) -> Option<CollapseOutcome> {
    let r = validate_graph(g);
    (!r.is_ok()).then(|| CollapseOutcome::Rejected {
        reason: r.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
    })
}

fn tuple_for_label(tuples: &[FourTuple], m: i64, skip: Option<usize>) -> Option<usize> {
    (0..tuples.len()).find(|&i| Some(i) != skip && tuples[i].eps.sign() == m.signum() && tuples[i].pair.gcd() == m.abs())
}

pub(crate) fn tuple_from_label(m: i64, dir: IntPair) -> FourTuple {
    let eps = if m > 0 { Eps::Plus } else { Eps::Minus };
    FourTuple { delta: 0, eps, pair: m.abs() * dir }
}

/// Contracts one arc of `Γ_o` with distinct endpoints.
pub fn collapse_arc(t: &DecoratedGraph, o: usize, arc: usize) -> Result<CollapseOutcome, StrataError> {
    let gm = gamma_of(t, o)?;
    check_arc(gm, o, arc)?;
    let g = gm.arc(arc).clone();
    if g.from == g.to {
        return Err(StrataError::SelfLoop(arc));
    }
    let (m1, m2) = (gm.vertices[g.from].m, gm.vertices[g.to].m);
    let del: BTreeSet<usize> = [arc - 1].into_iter().collect();
    let tuples = t.vertices[o].label.tuples().to_vec();
    if m1 == 0 || m2 == 0 {
        let t2 = with_gamma(t, o, contract_gamma(gm, &[g.from, g.to], m1 + m2, &del), tuples);
        return Ok(rejected_by(&t2).unwrap_or(CollapseOutcome::Internal { graph: t2 }));
    }
    let i1 = tuple_for_label(&tuples, m1, None).ok_or_else(|| StrataError::Invalid(format!("no tuple carries label {m1}")))?;
    let i2 = tuple_for_label(&tuples, m2, Some(i1)).ok_or_else(|| StrataError::Invalid(format!("no tuple carries label {m2}")))?;
    let dir = t.vertices[o].angle.pair().map(|p| p.primitive()).unwrap_or(tuples[i1].pair.primitive());
    let removed = vec![tuples[i1], tuples[i2]];
    let mut rest: Vec<FourTuple> = tuples.iter().enumerate().filter(|(i, _)| *i != i1 && *i != i2).map(|(_, x)| *x).collect();
    let s = m1 + m2;
    if s != 0 {
        let nt = tuple_from_label(s, dir);
        rest.push(nt);
        let t2 = with_gamma(t, o, contract_gamma(gm, &[g.from, g.to], s, &del), rest);
        if let Some(r) = rejected_by(&t2) {
            return Ok(r);
        }
        return Ok(CollapseOutcome::BoundarySameMerge { data: t2.derived_data(), graph: t2, tuple: nt });
    }
    let bivalent = |x: usize| gm.valency(x) == 2;
    let (graph, subcase) = if gm.vertices.len() == 2 && bivalent(g.from) && bivalent(g.to) {
        let topo = t.topology();
        let (Some(&el), Some(&eu)) = (topo.lower[o].first(), topo.upper[o].first()) else {
            return Ok(CollapseOutcome::Rejected { reason: "the vertex has no edge on one side".into() });
        };
        if topo.incident[o].len() != 2 || !rest.is_empty() {
            return Ok(CollapseOutcome::Rejected { reason: "the circle carries more than the cancelling pair".into() });
        }
        let mut t2 = t.clone();
        let top = t.edges[eu].other(o);
        let e = &mut t2.edges[el];
        if e.from == o {
            e.from = top;
        } else {
            e.to = top;
        }
        rename_edge(&mut t2, eu, el);
        let dv: BTreeSet<usize> = [o].into_iter().collect();
        let de: BTreeSet<usize> = [eu].into_iter().collect();
        (compact(&t2, &dv, &de), CancelSubcase::DeleteVertex)
    } else if bivalent(g.from) && bivalent(g.to) {
        let merged = contract_gamma(gm, &[g.from, g.to], 0, &del);
        let id = g.from - usize::from(g.to < g.from);
        let Some(smoothed) = smooth_vertex(&merged, id) else {
            return Ok(CollapseOutcome::Rejected { reason: "the neighbouring arcs carry different labels".into() });
        };
        (with_gamma(t, o, smoothed, rest), CancelSubcase::DeleteArc)
    } else {
        (with_gamma(t, o, contract_gamma(gm, &[g.from, g.to], 0, &del), rest), CancelSubcase::MergeToZero)
    };
    if let Some(r) = rejected_by(&graph) {
        return Ok(r);
    }
    Ok(CollapseOutcome::BoundaryCancel { data: graph.derived_data(), graph, removed, subcase })
}

/// One output of a split: the arc it belongs to, `E^γ` in the ids of the input, and the new pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPiece {
    pub arc: usize,
    pub edges: Vec<usize>,
    pub q: IntPair,
    pub data: AsymptoticData,
    pub graph: DecoratedGraph,
}

/// Splits `o` along a set of parallel arcs (1-based ids) that are forced equal.
pub fn split_at_arcset(t: &DecoratedGraph, o: usize, arcs: &[usize]) -> Result<Vec<SplitPiece>, StrataError> {
    let gm = gamma_of(t, o)?;
    if arcs.len() < 2 {
        return Err(StrataError::Precondition("a parallel arc set needs at least two arcs".into()));
    }
    for &a in arcs {
        check_arc(gm, o, a)?;
    }
    let first = gm.arc(arcs[0]).clone();
    if first.from == first.to {
        return Err(StrataError::SelfLoop(arcs[0]));
    }
    let distinct: BTreeSet<usize> = arcs.iter().copied().collect();
    if distinct.len() != arcs.len() {
        return Err(StrataError::Precondition("repeated arc".into()));
    }
    for &a in arcs {
        let x = gm.arc(a);
        if x.from != first.from || x.to != first.to {
            return Err(StrataError::EndpointsNotShared { a: arcs[0], b: a });
        }
    }
    for (i, &a) in arcs.iter().enumerate() {
        for &b in &arcs[i + 1..] {
            if forced_equal(t, o, a, b)? == ForcedEqual::Independent {
                return Err(StrataError::Precondition(format!("arcs {a} and {b} are not forced equal")));
            }
        }
    }
    let dir = match t.vertices[o].angle {
        AngleSpec::Interior(p) => p.primitive(),
        _ => return Err(StrataError::Precondition("the vertex angle is not interior".into())),
    };
    let (v1, v2) = (first.from, first.to);
    let del: BTreeSet<usize> = arcs.iter().map(|a| a - 1).collect();
    let collapsed = contract_gamma(gm, &[v1, v2], 0, &del);
    let hub = v1 - usize::from(v2 < v1);
    let topo = t.topology();

    let mut closures = Vec::new();
    for &a in arcs {
        let e = gm.arc(a).eminus;
        let seed: BTreeSet<usize> = collapsed.loop_indices(e).into_iter().collect();
        if seed.is_empty() {
            return Err(StrataError::Precondition(format!("the loop through arc {a} lies inside the arc set")));
        }
        let set = close_under_labels(&collapsed, seed, &BTreeSet::new());
        let edges: BTreeSet<usize> =
            set.iter().flat_map(|&i| [collapsed.arcs[i].eminus, collapsed.arcs[i].eplus]).collect();
        closures.push((a, set, edges));
    }
    let mut covered = BTreeSet::new();
    for (_, _, edges) in &closures {
        if !covered.is_disjoint(edges) {
            return Err(StrataError::Precondition("the edge sets of two arcs overlap".into()));
        }
        covered.extend(edges.iter().copied());
    }
    let incident: BTreeSet<usize> = topo.incident[o].iter().copied().collect();
    if covered != incident {
        return Err(StrataError::Precondition("the edge sets do not cover the incident edges".into()));
    }

    let mut out = Vec::new();
    for (a, set, edges) in closures {
        let q = edges.iter().fold(IntPair::ZERO, |acc, &e| {
            if topo.lower[o].contains(&e) {
                acc + t.edges[e].pair
            } else {
                acc - t.edges[e].pair
            }
        });
        let mhat = if q.is_zero() {
            0
        } else {
            q.multiple_of(&dir)
                .ok_or_else(|| StrataError::Precondition(format!("Q = {q} is not a multiple of {dir}")))?
        };
        let sub = subgraph(&collapsed, &set, &edges);
        let hub_new = sub.1.get(&hub).copied();
        let mut sg = sub.0;
        let m_rest: i64 = sg.vertices.iter().filter(|x| Some(x.id) != hub_new).map(|x| x.m).sum();
        let mut vanish = false;
        if let Some(h) = hub_new {
            sg.vertices[h].m = mhat - m_rest;
            if sg.vertices[h].m == 0 && sg.valency(h) == 2 {
                if sg.vertices.len() == 1 {
                    vanish = true;
                } else if let Some(s) = smooth_vertex(&sg, h) {
                    sg = s;
                }
            }
        }
        let graph = assemble_piece(t, o, &edges, sg, dir, vanish)?;
        let rep = validate_graph(&graph);
        if !rep.is_ok() {
            return Err(StrataError::Invalid(rep.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")));
        }
        out.push(SplitPiece { arc: a, edges: edges.into_iter().collect(), q, data: graph.derived_data(), graph });
    }
    Ok(out)
}

/// The subgraph on the given arcs, with the map from old to new vertex ids.
fn subgraph(gm: &VertexGraph, arcs: &BTreeSet<usize>, edges: &BTreeSet<usize>) -> (VertexGraph, BTreeMap<usize, usize>) {
    let mut vmap = BTreeMap::new();
    for &i in arcs {
        for x in [gm.arcs[i].from, gm.arcs[i].to] {
            let n = vmap.len();
            vmap.entry(x).or_insert(n);
        }
    }
    let mut order: Vec<(usize, usize)> = vmap.iter().map(|(&o, &n)| (o, n)).collect();
    order.sort_by_key(|x| x.0);
    let vmap: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, (o, _))| (*o, i)).collect();
    let vertices = vmap.iter().map(|(&o, &n)| crate::graph::GammaVertex { id: n, m: gm.vertices[o].m }).collect();
    let amap: BTreeMap<usize, usize> = arcs.iter().enumerate().map(|(n, &i)| (i, n)).collect();
    let arcs_v = arcs
        .iter()
        .enumerate()
        .map(|(n, &i)| {
            let a = &gm.arcs[i];
            crate::graph::GammaArc { id: n + 1, from: vmap[&a.from], to: vmap[&a.to], eminus: a.eminus, eplus: a.eplus }
        })
        .collect();
    let loops = edges
        .iter()
        .map(|&e| {
            let l: Vec<i64> = gm
                .loops
                .get(&e)
                .into_iter()
                .flatten()
                .filter_map(|&x| amap.get(&(x.unsigned_abs() as usize - 1)).map(|&n| x.signum() * (n as i64 + 1)))
                .collect();
            (e, l)
        })
        .collect();
    (VertexGraph { vertices, arcs: arcs_v, loops }, vmap)
}

/// `T^γ`: the new vertex plus the components of `T − o` reached through `edges`.
fn assemble_piece(
    t: &DecoratedGraph,
    o: usize,
    edges: &BTreeSet<usize>,
    sg: VertexGraph,
    dir: IntPair,
    vanish: bool,
) -> Result<DecoratedGraph, StrataError> {
    let mut keep: BTreeSet<usize> = [o].into_iter().collect();
    let mut stack: Vec<usize> = edges.iter().map(|&e| t.edges[e].other(o)).collect();
    while let Some(x) = stack.pop() {
        if !keep.insert(x) {
            continue;
        }
        for e in &t.edges {
            if e.from == x || e.to == x {
                let y = e.other(x);
                if y != o && !keep.contains(&y) {
                    stack.push(y);
                }
            }
        }
    }
    let mut t2 = t.clone();
    let tuples: Vec<FourTuple> = sg.vertices.iter().filter(|x| x.m != 0).map(|x| tuple_from_label(x.m, dir)).collect();
    t2.vertices[o].label = VertexLabel::Interior { tuples, gamma: Some(sg) };
    let mut drop_v: BTreeSet<usize> = (0..t.vertices.len()).filter(|v| !keep.contains(v)).collect();
    let mut drop_e: BTreeSet<usize> =
        t.edges.iter().filter(|e| !keep.contains(&e.from) || !keep.contains(&e.to)).map(|e| e.id).collect();
    if vanish {
        let topo = t.topology();
        let lo: Vec<usize> = edges.iter().copied().filter(|e| topo.lower[o].contains(e)).collect();
        let hi: Vec<usize> = edges.iter().copied().filter(|e| topo.upper[o].contains(e)).collect();
        let ([el], [eu]) = (lo.as_slice(), hi.as_slice()) else {
            return Err(StrataError::Invalid("an invisible vertex needs one edge on each side".into()));
        };
        if t.edges[*el].pair != t.edges[*eu].pair {
            return Err(StrataError::Invalid("the joined edges carry different pairs".into()));
        }
        let top = t.edges[*eu].other(o);
        let e = &mut t2.edges[*el];
        if e.from == o {
            e.from = top;
        } else {
            e.to = top;
        }
        rename_edge(&mut t2, *eu, *el);
        drop_v.insert(o);
        drop_e.insert(*eu);
    }
    Ok(compact(&t2, &drop_v, &drop_e))
}
