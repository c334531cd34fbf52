//! Exact coordinates on `O_T` and the group actions on them.
//!
//! `τ` values are in units of `2π`. The block `r_o` is in units of
//! `2π·α_{Q_ê(o)}(θ_o)`, where `ê(o)` joins `o` toward `⋄` (the distinguished
//! edge at `⋄`). All constraints and translations are then rational.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{alpha_float, angle_float, alpha_ratio, parse_rational, rational_to_string, rat_int, ExactError, IntPair, Rational};
use crate::graph::DecoratedGraph;
use crate::linalg::{integer_rows, solve_integer};
use crate::report::Report;
use crate::symmetry::{aut_group, parent_edges, AutGroup, Isomorphism};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PointWire", into = "PointWire")]
pub struct OrbitPoint {
    pub tau_minus: Rational,
    pub tau: BTreeMap<usize, Rational>,
    pub r: BTreeMap<usize, BTreeMap<usize, Rational>>,
}

#[derive(Serialize, Deserialize)]
struct PointWire {
    tau_minus: String,
    tau: BTreeMap<usize, String>,
    r: BTreeMap<usize, BTreeMap<usize, String>>,
}

impl TryFrom<PointWire> for OrbitPoint {
    type Error = String;

    fn try_from(w: PointWire) -> Result<Self, String> {
        let p = |s: &str| parse_rational(s).ok_or_else(|| format!("bad rational {s:?}"));
        let tau = w.tau.iter().map(|(k, v)| Ok((*k, p(v)?))).collect::<Result<_, String>>()?;
        let r = w
            .r
            .iter()
            .map(|(o, b)| Ok((*o, b.iter().map(|(a, v)| Ok((*a, p(v)?))).collect::<Result<_, String>>()?)))
            .collect::<Result<_, String>>()?;
        Ok(OrbitPoint { tau_minus: p(&w.tau_minus)?, tau, r })
    }
}

impl From<OrbitPoint> for PointWire {
    fn from(x: OrbitPoint) -> Self {
        PointWire {
            tau_minus: rational_to_string(&x.tau_minus),
            tau: x.tau.iter().map(|(k, v)| (*k, rational_to_string(v))).collect(),
            r: x.r.iter().map(|(o, b)| (*o, b.iter().map(|(a, v)| (*a, rational_to_string(v))).collect())).collect(),
        }
    }
}

impl OrbitPoint {
    pub fn from_json(s: &str) -> Result<OrbitPoint, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("point serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupElement {
    Lattice { n: IntPair },
    VertexShift { vertex: usize, k: i64 },
    AutElt { iso: Isomorphism },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("unsupported-extension: Aut at the diamond vertex fixes no incident edge")]
    UnsupportedExtension,
    #[error("vertex {0} is not a multivalent vertex other than the diamond")]
    NotShiftable(usize),
    #[error("the element is not an automorphism of the graph")]
    NotAutomorphism,
    #[error("Γ vertex {1} of vertex {0} has label 0")]
    ZeroLabel(usize, usize),
    #[error("no such Γ vertex ({0}, {1})")]
    NoSuchVertex(usize, usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Reference data derived once per graph.
#[derive(Debug, Clone)]
pub struct Frame {
    pub aut: AutGroup,
    pub diamond: usize,
    /// Parent edge toward `⋄`.
    pub parent: Vec<Option<usize>>,
    /// `ê(o)` for each multivalent vertex.
    pub ref_edge: BTreeMap<usize, usize>,
    /// The edge `Ê` at `⋄` and the weight `m_Ê`.
    pub hat_edge: usize,
    pub hat_weight: i64,
    /// Primitive pair of `θ_o` for each multivalent vertex.
    pub at: BTreeMap<usize, IntPair>,
}

impl Frame {
    pub fn new(t: &DecoratedGraph) -> Frame {
        let aut = aut_group(t);
        let diamond = aut.diamond;
        let parent = parent_edges(t, diamond);
        let topo = t.topology();
        let hat_edge = aut.distinguished_edge.unwrap_or_else(|| topo.incident[diamond][0]);
        let mut ref_edge = BTreeMap::new();
        let mut at = BTreeMap::new();
        for v in &t.vertices {
            if v.label.gamma().is_none() {
                continue;
            }
            ref_edge.insert(v.id, parent[v.id].unwrap_or(hat_edge));
            at.insert(v.id, v.angle.pair().map(|p| p.primitive()).unwrap_or(IntPair::new(0, 1)));
        }
        Frame { hat_weight: aut.distinguished_orbit as i64, aut, diamond, parent, ref_edge, hat_edge, at }
    }

    pub fn multivalent(&self) -> impl Iterator<Item = usize> + '_ {
        self.ref_edge.keys().copied()
    }

    /// Multivalent vertices other than `⋄`.
    pub fn shiftable(&self) -> Vec<usize> {
        self.multivalent().filter(|&o| o != self.diamond).collect()
    }

    /// Whether `v` lies in `T_o`, the part of `T` hanging from `o`.
    pub fn in_subtree(&self, t: &DecoratedGraph, o: usize, v: usize) -> bool {
        let mut x = v;
        loop {
            if x == o {
                return true;
            }
            match self.parent[x] {
                Some(e) => x = t.edges[e].other(x),
                None => return false,
            }
        }
    }

    /// `α_N/α_{Q_ê(o)}` at `θ_o`.
    pub fn ratio(&self, t: &DecoratedGraph, n: IntPair, o: usize) -> Result<Rational, ExactError> {
        alpha_ratio(n, t.edges[self.ref_edge[&o]].pair, self.at[&o])
    }
}

pub fn validate_point(t: &DecoratedGraph, x: &OrbitPoint) -> Report {
    let f = Frame::new(t);
    validate_point_in(t, &f, x)
}

pub fn validate_point_in(t: &DecoratedGraph, f: &Frame, x: &OrbitPoint) -> Report {
    let mut rep = Report::default();
    let mv: BTreeSet<usize> = f.multivalent().collect();
    if x.tau.keys().copied().collect::<BTreeSet<_>>() != mv {
        rep.push("point-keys", "tau", "τ must have one entry per multivalent vertex");
    }
    if x.r.keys().copied().collect::<BTreeSet<_>>() != mv {
        rep.push("point-keys", "r", "r must have one block per multivalent vertex");
    }
    for &o in &mv {
        let Some(block) = x.r.get(&o) else { continue };
        let gm = t.vertices[o].label.gamma().expect("multivalent");
        let ids: BTreeSet<usize> = (1..=gm.arcs.len()).collect();
        if block.keys().copied().collect::<BTreeSet<_>>() != ids {
            rep.push("point-keys", format!("r[{o}]"), "block must list every arc id once");
            continue;
        }
        for (a, v) in block {
            if *v <= Rational::zero() {
                rep.push("point-positive", format!("r[{o}][{a}]"), format!("value {} is not positive", rational_to_string(v)));
            }
        }
        for (&e, l) in &gm.loops {
            let want = match f.ratio(t, t.edges[e].pair, o) {
                Ok(w) => w,
                Err(err) => {
                    rep.push("simplex-sum", format!("r[{o}] on e{e}"), err.to_string());
                    continue;
                }
            };
            let sum: Rational = l.iter().map(|&a| block[&(a.unsigned_abs() as usize)].clone()).sum();
            if sum != want {
                rep.push(
                    "simplex-sum",
                    format!("r[{o}] on e{e}"),
                    format!("loop sum {} differs from {}", rational_to_string(&sum), rational_to_string(&want)),
                );
            }
        }
    }
    rep
}

/// A point with `τ = 0` and `r` strictly inside every simplex.
///
/// Each arc lies on one `E₋` loop and one `E₊` loop, so `r_o` is a transport
/// plan between those loops; a uniform floor plus a max-flow completion
/// gives a strictly positive plan.
pub fn interior_point(t: &DecoratedGraph) -> Option<OrbitPoint> {
    let f = Frame::new(t);
    interior_point_in(t, &f)
}

pub fn interior_point_in(t: &DecoratedGraph, f: &Frame) -> Option<OrbitPoint> {
    let mut r = BTreeMap::new();
    let mut tau = BTreeMap::new();
    for o in f.multivalent() {
        let gm = t.vertices[o].label.gamma()?;
        let mut supply: BTreeMap<usize, Rational> = BTreeMap::new();
        for &e in gm.loops.keys() {
            supply.insert(e, f.ratio(t, t.edges[e].pair, o).ok()?);
        }
        let n = gm.arcs.len();
        let min = supply.values().min()?.clone();
        let mut eps = min / rat_int(2 * n as i64 + 2);
        let mut block = None;
        for _ in 0..40 {
            let mut res = supply.clone();
            for a in &gm.arcs {
                *res.get_mut(&a.eminus)? -= &eps;
                *res.get_mut(&a.eplus)? -= &eps;
            }
            if res.values().all(|v| *v >= Rational::zero()) {
                if let Some(flow) = transport(gm, &res) {
                    block = Some(flow.into_iter().enumerate().map(|(i, v)| (i + 1, v + &eps)).collect());
                    break;
                }
            }
            eps /= rat_int(2);
        }
        r.insert(o, block?);
        tau.insert(o, Rational::zero());
    }
    Some(OrbitPoint { tau_minus: Rational::zero(), tau, r })
}

/// A nonnegative arc flow meeting each loop's demand exactly, if one exists.
fn transport(gm: &crate::graph::VertexGraph, demand: &BTreeMap<usize, Rational>) -> Option<Vec<Rational>> {
    let lowers: BTreeSet<usize> = gm.arcs.iter().map(|a| a.eminus).collect();
    let mut flow = vec![Rational::zero(); gm.arcs.len()];
    let mut left: BTreeMap<usize, Rational> = demand.clone();
    // augmenting paths in the bipartite graph lower loop → arc → upper loop
    loop {
        let Some(&s) = lowers.iter().find(|e| left[*e] > Rational::zero()) else { break };
        // BFS over loops; forward along arcs from lower to upper, backward along arcs with flow
        let mut prev: BTreeMap<usize, (usize, bool)> = BTreeMap::new();
        let mut queue = VecDeque::from([s]);
        let mut seen = BTreeSet::from([s]);
        let mut target = None;
        while let Some(e) = queue.pop_front() {
            if !lowers.contains(&e) && left[&e] > Rational::zero() {
                target = Some(e);
                break;
            }
            for (i, a) in gm.arcs.iter().enumerate() {
                let (next, fwd) = if a.eminus == e {
                    (a.eplus, true)
                } else if a.eplus == e && flow[i] > Rational::zero() {
                    (a.eminus, false)
                } else {
                    continue;
                };
                if seen.insert(next) {
                    prev.insert(next, (i, fwd));
                    queue.push_back(next);
                }
            }
        }
        let target = target?;
        let mut path = Vec::new();
        let mut at = target;
        while at != s {
            let (i, fwd) = prev[&at];
            path.push((i, fwd));
            at = if fwd { gm.arcs[i].eminus } else { gm.arcs[i].eplus };
        }
        let mut amount = left[&s].clone().min(left[&target].clone());
        for &(i, fwd) in &path {
            if !fwd {
                amount = amount.min(flow[i].clone());
            }
        }
        for &(i, fwd) in &path {
            if fwd {
                flow[i] += &amount;
            } else {
                flow[i] -= &amount;
            }
        }
        *left.get_mut(&s)? -= &amount;
        *left.get_mut(&target)? -= &amount;
    }
    left.values().all(|v| v.is_zero()).then_some(flow)
}

/// Applies a group element.
pub fn act(t: &DecoratedGraph, g: &GroupElement, x: &OrbitPoint) -> Result<OrbitPoint, OrbitError> {
    let f = Frame::new(t);
    act_in(t, &f, g, x)
}

pub fn act_in(t: &DecoratedGraph, f: &Frame, g: &GroupElement, x: &OrbitPoint) -> Result<OrbitPoint, OrbitError> {
    let mut y = x.clone();
    match g {
        GroupElement::Lattice { n } => {
            let q = t.edges[f.hat_edge].pair;
            let d = n.pp as i128 * q.p as i128 - n.p as i128 * q.pp as i128;
            y.tau_minus -= Rational::from_integer(BigInt::from(d * f.hat_weight as i128));
            for o in f.multivalent() {
                let s = f.ratio(t, *n, o)?;
                *y.tau.get_mut(&o).expect("valid point") -= s;
            }
        }
        GroupElement::VertexShift { vertex, k } => {
            if !f.shiftable().contains(vertex) {
                return Err(OrbitError::NotShiftable(*vertex));
            }
            let qe = t.edges[f.parent[*vertex].expect("not the diamond")].pair;
            for o in f.multivalent() {
                if f.in_subtree(t, *vertex, o) {
                    let s = f.ratio(t, qe, o)? * rat_int(*k);
                    *y.tau.get_mut(&o).expect("valid point") -= s;
                }
            }
        }
        GroupElement::AutElt { iso } => return act_aut(t, f, iso, x),
    }
    Ok(y)
}

/// The rotation index `j` of `iso` at `⋄`: `iso` acts there as `gen^j`.
fn rotation_index(t: &DecoratedGraph, f: &Frame, iso: &Isomorphism) -> Option<(usize, usize)> {
    let d = f.diamond;
    let n = f.aut.local_orders.get(&d).copied().unwrap_or(1);
    let Some(gen) = f.aut.generator_at(d) else { return Some((0, n)) };
    let mut p = Isomorphism::identity(t);
    for j in 0..n {
        if p.arcs.get(&d) == iso.arcs.get(&d) {
            return Some((j, n));
        }
        p = p.then(gen);
    }
    None
}

fn act_aut(t: &DecoratedGraph, f: &Frame, iso: &Isomorphism, x: &OrbitPoint) -> Result<OrbitPoint, OrbitError> {
    if !crate::symmetry::verify_isomorphism(t, t, iso) || iso.vertices[f.diamond] != f.diamond {
        return Err(OrbitError::NotAutomorphism);
    }
    if !f.aut.edge_fixing() {
        return Err(OrbitError::UnsupportedExtension);
    }
    let (j, n) = rotation_index(t, f, iso).ok_or(OrbitError::NotAutomorphism)?;
    let z = Rational::new(BigInt::from(j), BigInt::from(n));
    let d = f.diamond;
    let qe = t.edges[f.hat_edge].pair;
    // branch edge at ⋄ for each vertex, and its position in the canonical cyclic order
    let gen = f.aut.generator_at(d);
    let branch_of = |v: usize| -> Option<usize> {
        let mut x = v;
        let mut last = None;
        while x != d {
            let e = f.parent[x]?;
            last = Some(e);
            x = t.edges[e].other(x);
        }
        last
    };
    let mut y = OrbitPoint { tau_minus: x.tau_minus.clone(), tau: BTreeMap::new(), r: BTreeMap::new() };
    for (&o, block) in &x.r {
        let am = &iso.arcs[&o];
        let img: BTreeMap<usize, Rational> = block.iter().map(|(&a, v)| (am[a - 1] + 1, v.clone())).collect();
        y.r.insert(iso.vertices[o], img);
    }
    for (&o, tau) in &x.tau {
        let shift = if o == d {
            z.clone()
        } else {
            let e1 = branch_of(o).expect("connected");
            let at = f.at[&o];
            let den = t.edges[f.ref_edge[&o]].pair;
            let ratio = |p: IntPair| alpha_ratio(p, den, at);
            if iso.edges[e1] == e1 {
                let diff = IntPair::new(qe.p - t.edges[e1].pair.p, qe.pp - t.edges[e1].pair.pp);
                &z * ratio(diff)? + &z * ratio(qe)?
            } else {
                // orbit of e1 under the generator, distinguished edge = least id, placed last
                let g = gen.expect("nontrivial orbit needs a generator");
                let mut orbit = vec![e1];
                let mut cur = g.edges[e1];
                while cur != e1 {
                    orbit.push(cur);
                    cur = g.edges[cur];
                }
                let dist = *orbit.iter().min().expect("nonempty");
                let len = orbit.len();
                // k with e1 = g^k(dist), 1..=len
                let mut k = len;
                let mut c = dist;
                for step in 1..=len {
                    c = g.edges[c];
                    if c == e1 {
                        k = step;
                        break;
                    }
                }
                let wraps = ((k - 1) % len + j) / len;
                rat_int(wraps as i64) * ratio(qe)? + &z * ratio(qe)?
            }
        };
        y.tau.insert(iso.vertices[o], tau - shift);
    }
    Ok(y)
}

/// Whether `x` and `y` lie in one orbit of the lattice and vertex shifts.
pub fn orbits_equal(t: &DecoratedGraph, x: &OrbitPoint, y: &OrbitPoint) -> bool {
    let f = Frame::new(t);
    orbits_equal_in(t, &f, x, y)
}

pub fn orbits_equal_in(t: &DecoratedGraph, f: &Frame, x: &OrbitPoint, y: &OrbitPoint) -> bool {
    if x.r != y.r || x.tau.keys().ne(y.tau.keys()) {
        return false;
    }
    let shift = f.shiftable();
    let q = t.edges[f.hat_edge].pair;
    let w = Rational::from_integer(f.hat_weight.into());
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    // unknowns: n, n′, then k_o for shiftable o
    let mut row = vec![Rational::zero(); 2 + shift.len()];
    row[0] = &w * rat_int(q.pp);
    row[1] = -&w * rat_int(q.p);
    rows.push(row);
    rhs.push(&y.tau_minus - &x.tau_minus);
    for o in f.multivalent() {
        let mut row = vec![Rational::zero(); 2 + shift.len()];
        let (Ok(a), Ok(b)) = (f.ratio(t, IntPair::new(1, 0), o), f.ratio(t, IntPair::new(0, 1), o)) else {
            return false;
        };
        row[0] = -a;
        row[1] = -b;
        for (i, &s) in shift.iter().enumerate() {
            if f.in_subtree(t, s, o) {
                let qe = t.edges[f.parent[s].expect("not the diamond")].pair;
                match f.ratio(t, qe, o) {
                    Ok(v) => row[2 + i] = -v,
                    Err(_) => return false,
                }
            }
        }
        rows.push(row);
        rhs.push(&y.tau[&o] - &x.tau[&o]);
    }
    let (a, b) = integer_rows(&rows, &rhs);
    solve_integer(&a, &b).is_some()
}

/// `Ψ_υ(x) ∈ [0, 2π)` for a Γ vertex `υ` of `o` with `m_υ ≠ 0`.
///
/// The path runs in `Γ_o` from the tail of the first arc of `ℓ_{oê(o)}` to `υ`.
pub fn reeb_invariant(t: &DecoratedGraph, o: usize, upsilon: usize, x: &OrbitPoint) -> Result<f64, OrbitError> {
    let f = Frame::new(t);
    reeb_invariant_in(t, &f, o, upsilon, x)
}

pub fn reeb_invariant_in(t: &DecoratedGraph, f: &Frame, o: usize, upsilon: usize, x: &OrbitPoint) -> Result<f64, OrbitError> {
    let gm = t.vertices[o].label.gamma().ok_or(OrbitError::NoSuchVertex(o, upsilon))?;
    let m = gm.vertices.get(upsilon).ok_or(OrbitError::NoSuchVertex(o, upsilon))?.m;
    if m == 0 {
        return Err(OrbitError::ZeroLabel(o, upsilon));
    }
    let e = f.ref_edge[&o];
    let base = gm.arc(gm.loops[&e][0].unsigned_abs() as usize).from;
    // signed arc sum along a BFS path from base to υ
    let mut dist: BTreeMap<usize, Rational> = BTreeMap::from([(base, Rational::zero())]);
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        for (i, a) in gm.arcs.iter().enumerate() {
            let val = &x.r[&o][&(i + 1)];
            for (from, to, s) in [(a.from, a.to, 1), (a.to, a.from, -1)] {
                if from == v && !dist.contains_key(&to) {
                    let dv = &dist[&v] + val * rat_int(s);
                    dist.insert(to, dv);
                    queue.push_back(to);
                }
            }
        }
    }
    let sum = dist[&upsilon].to_f64().unwrap_or(f64::NAN);
    let ph = f.at[&o];
    let theta = angle_float(&t.vertices[o].angle);
    let q = t.edges[e].pair;
    let (p, pp) = (ph.p as f64, ph.pp as f64);
    let det = p * q.pp as f64 - pp * q.p as f64;
    let two_pi = 2.0 * std::f64::consts::PI;
    let v = two_pi * x.tau[&o].to_f64().unwrap_or(f64::NAN);
    let coef = (p * p + pp * pp * theta.sin().powi(2)).sqrt() / (1.0 + 3.0 * theta.cos().powi(4)).sqrt();
    let r_phys = sum * two_pi * alpha_float(q, theta);
    Ok((det * v + coef * r_phys).rem_euclid(two_pi))
}
