//! Asymptotic data sets `Â`, the angle set `Λ_Â`, the moduli dimension and
//! the linear graph `T^Â`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{cmp_angle, defines_angle, sign_alpha_at, AngleSpec, IntPair, Sign};
use crate::graph::{check_exists, DecoratedGraph, Edge, Existence, ExistenceReport, Vertex, VertexGraph, VertexLabel};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Eps {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
}

impl Eps {
    pub fn sign(self) -> i64 {
        match self {
            Eps::Minus => -1,
            Eps::Plus => 1,
        }
    }
}

impl fmt::Display for Eps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Eps::Minus => "-",
            Eps::Plus => "+",
        })
    }
}

/// A 4-tuple `(δ, ε, (p, p′))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FourTuple {
    pub delta: i8,
    pub eps: Eps,
    pub pair: IntPair,
}

impl fmt::Display for FourTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.delta, self.eps, self.pair)
    }
}

impl FourTuple {
    pub fn new(delta: i8, eps: Eps, p: i64, pp: i64) -> Self {
        FourTuple { delta, eps, pair: IntPair::new(p, pp) }
    }

    pub fn plus(p: i64, pp: i64) -> Self {
        FourTuple::new(0, Eps::Plus, p, pp)
    }

    pub fn minus(p: i64, pp: i64) -> Self {
        FourTuple::new(0, Eps::Minus, p, pp)
    }

    pub fn is(&self, delta: i8, eps: Eps) -> bool {
        self.delta == delta && self.eps == eps
    }

    /// The angle this tuple contributes to `Λ_Â`.
    pub fn angle(&self) -> Option<AngleSpec> {
        match self.delta {
            1 => Some(AngleSpec::Zero),
            -1 => Some(AngleSpec::Pi),
            0 if defines_angle(self.pair).unwrap_or(false) => Some(AngleSpec::Interior(self.pair)),
            _ => None,
        }
    }

    /// Violations of the per-tuple shape rules.
    pub fn shape_problems(&self) -> Vec<String> {
        let IntPair { p, pp } = self.pair;
        let steep = 2 * (pp as i128) * (pp as i128) > 3 * (p as i128) * (p as i128);
        let mut out = Vec::new();
        if self.pair.is_zero() {
            out.push("the pair is (0,0)".to_string());
            return out;
        }
        match self.delta {
            0 => {
                if p < 0 && !steep {
                    out.push(format!("δ = 0 and p < 0 need 2p′² > 3p², got {}", self.pair));
                }
            }
            1 | -1 => {
                if p >= 0 {
                    out.push(format!("δ = ±1 needs p < 0, got {}", self.pair));
                } else {
                    // p < 0: p′/p < −√(3/2) iff p′ > 0 and 2p′² > 3p²
                    let toward = if self.delta == 1 { pp > 0 } else { pp < 0 };
                    let beyond = toward && steep;
                    let ok = match self.eps {
                        Eps::Plus => beyond,
                        Eps::Minus => !beyond,
                    };
                    if !ok {
                        out.push(format!("{} violates the ε rule for δ = {}", self.pair, self.delta));
                    }
                }
            }
            d => out.push(format!("δ = {d} is not in {{−1, 0, 1}}")),
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AsymptoticData {
    pub c_minus: i64,
    pub c_plus: i64,
    pub tuples: Vec<FourTuple>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaSource {
    CPlus,
    CMinus,
    Tuple(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaEntry {
    pub angle: AngleSpec,
    pub sources: Vec<LambdaSource>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaSet {
    pub entries: Vec<LambdaEntry>,
}

impl LambdaSet {
    pub fn angles(&self) -> Vec<AngleSpec> {
        self.entries.iter().map(|e| e.angle).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl AsymptoticData {
    pub fn new(c_minus: i64, c_plus: i64, tuples: Vec<FourTuple>) -> Self {
        AsymptoticData { c_minus, c_plus, tuples }
    }

    pub fn from_json(s: &str) -> Result<AsymptoticData, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("data serializes")
    }

    pub fn n_plus(&self) -> usize {
        self.tuples.iter().filter(|t| t.is(0, Eps::Plus)).count()
    }

    pub fn n_minus(&self) -> usize {
        self.tuples.iter().filter(|t| t.is(0, Eps::Minus)).count()
    }

    pub fn n_hat(&self) -> usize {
        self.tuples.iter().filter(|t| t.delta != 0).count()
    }

    /// `N₋ + N̂ + ç₋ + ç₊`, the number of concave-side ends.
    pub fn concave_count(&self) -> i64 {
        (self.n_minus() + self.n_hat()) as i64 + self.c_minus + self.c_plus
    }

    /// Same data with tuples in a canonical order.
    pub fn sorted(&self) -> AsymptoticData {
        let mut t = self.tuples.clone();
        t.sort();
        AsymptoticData { c_minus: self.c_minus, c_plus: self.c_plus, tuples: t }
    }

    /// The exactly-two-tuple shape `{(0,+,P), (0,−,P)}` with `P` primitive and no ç.
    pub fn is_cylinder_shape(&self) -> bool {
        self.c_minus == 0
            && self.c_plus == 0
            && self.tuples.len() == 2
            && self.tuples[0].delta == 0
            && self.tuples[1].delta == 0
            && self.tuples[0].eps != self.tuples[1].eps
            && self.tuples[0].pair == self.tuples[1].pair
            && self.tuples[0].pair.is_primitive()
    }
}

pub fn validate_data(a: &AsymptoticData) -> Report {
    let mut r = Report::default();
    if a.c_minus < 0 || a.c_plus < 0 {
        r.push("count-sign", "data", format!("ç₋ = {}, ç₊ = {} must be non-negative", a.c_minus, a.c_plus));
    }
    if a.tuples.is_empty() && a.c_minus == 0 && a.c_plus == 0 {
        r.push("nonempty-data", "data", "no ends at all");
        return r;
    }
    for (i, t) in a.tuples.iter().enumerate() {
        for msg in t.shape_problems() {
            r.push("tuple-shape", format!("tuple {i}"), msg);
        }
    }
    let sp: i128 = a.tuples.iter().map(|t| t.eps.sign() as i128 * t.pair.p as i128).sum();
    let spp: i128 = a.tuples.iter().map(|t| t.eps.sign() as i128 * t.pair.pp as i128).sum::<i128>()
        + a.c_plus as i128
        + a.c_minus as i128;
    if sp != 0 || spp != 0 {
        r.push("charge-balance", "data", format!("Σεp = {sp}, Σεp′ + ç₊ + ç₋ = {spp}; both must vanish"));
    }
    if a.tuples.len() == 2 && a.c_minus == 0 && a.c_plus == 0 {
        for (i, t) in a.tuples.iter().enumerate() {
            if !t.pair.is_primitive() {
                r.push("primitive-pairs", format!("tuple {i}"), format!("{} is not primitive", t.pair));
            }
        }
    }
    if r.is_ok() {
        let lam = lambda_set(a);
        if lam.len() == 1 && !a.is_cylinder_shape() {
            r.push("singleton-shape", "data", "Λ is a single angle but the data is not {(0,+,P),(0,−,P)}");
        }
        if lam.len() > 1 {
            for (end, entry) in [("minimal", &lam.entries[0]), ("maximal", &lam.entries[lam.len() - 1])] {
                let only_plus = entry
                    .sources
                    .iter()
                    .all(|s| matches!(s, LambdaSource::Tuple(i) if a.tuples[*i].is(0, Eps::Plus)));
                if only_plus {
                    r.push("extremal-source", "data", format!("the {end} angle {} comes only from (0,+) tuples", entry.angle));
                }
            }
        }
    }
    r
}

pub fn lambda_set(a: &AsymptoticData) -> LambdaSet {
    let mut raw: Vec<(AngleSpec, LambdaSource)> = Vec::new();
    if a.c_plus > 0 {
        raw.push((AngleSpec::Zero, LambdaSource::CPlus));
    }
    if a.c_minus > 0 {
        raw.push((AngleSpec::Pi, LambdaSource::CMinus));
    }
    for (i, t) in a.tuples.iter().enumerate() {
        if let Some(ang) = t.angle() {
            raw.push((ang.normalized(), LambdaSource::Tuple(i)));
        }
    }
    raw.sort_by(|x, y| cmp_angle(&x.0, &y.0).then(x.1.cmp(&y.1)));
    let mut entries: Vec<LambdaEntry> = Vec::new();
    for (ang, src) in raw {
        match entries.last_mut() {
            Some(e) if cmp_angle(&e.angle, &ang) == Ordering::Equal => e.sources.push(src),
            _ => entries.push(LambdaEntry { angle: ang, sources: vec![src] }),
        }
    }
    LambdaSet { entries }
}

/// `N₊ + 2(N₋ + N̂ + ç₋ + ç₊ − 1)`.
pub fn moduli_dimension(a: &AsymptoticData) -> i64 {
    a.n_plus() as i64 + 2 * (a.concave_count() - 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearGraph {
    Graph(DecoratedGraph),
    /// `Λ_Â` is one angle: the moduli space consists of `ℝ`-invariant cylinders.
    Cylinder { angle: AngleSpec },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("invalid data:\n{0}")]
    Invalid(Report),
    #[error("the {end} angle does not have a unique supplier")]
    NonUniqueSupplier { end: &'static str },
    #[error("edge rules are inconsistent: {0}")]
    Inconsistent(String),
}

fn interior_pair_sum(tuples: &[FourTuple]) -> IntPair {
    tuples.iter().fold(IntPair::ZERO, |acc, t| acc + t.eps.sign() * t.pair)
}

/// Label of an extremal vertex of the linear graph and the pair of its edge.
fn extremal_vertex(
    a: &AsymptoticData,
    entry: &LambdaEntry,
    bottom: bool,
) -> Result<(VertexLabel, IntPair), LinearError> {
    let end = if bottom { "minimal" } else { "maximal" };
    let tuples: Vec<FourTuple> = entry
        .sources
        .iter()
        .filter_map(|s| match s {
            LambdaSource::Tuple(i) => Some(a.tuples[*i]),
            _ => None,
        })
        .collect();
    let counted = entry.sources.iter().any(|s| matches!(s, LambdaSource::CPlus | LambdaSource::CMinus));
    match entry.angle {
        AngleSpec::Zero | AngleSpec::Pi => {
            let c = if bottom { a.c_plus } else { a.c_minus };
            match (counted, tuples.as_slice()) {
                (true, []) => {
                    if bottom {
                        Ok((VertexLabel::ZeroInt { m: c }, IntPair::new(0, -c)))
                    } else {
                        Ok((VertexLabel::PiInt { m: -c }, IntPair::new(0, c)))
                    }
                }
                (false, [t]) => {
                    let e = t.eps.sign();
                    if bottom {
                        Ok((VertexLabel::ZeroEnd { tuple: *t }, -e * t.pair))
                    } else {
                        Ok((VertexLabel::PiEnd { tuple: *t }, e * t.pair))
                    }
                }
                _ => Err(LinearError::NonUniqueSupplier { end }),
            }
        }
        AngleSpec::Interior(_) => match tuples.as_slice() {
            [t] if t.is(0, Eps::Minus) && !counted => {
                let q = if bottom { t.pair } else { -t.pair };
                Ok((VertexLabel::Interior { tuples: vec![*t], gamma: None }, q))
            }
            _ => Err(LinearError::NonUniqueSupplier { end }),
        },
    }
}

/// The linear graph `T^Â`, built upward from the minimal edge.
pub fn linear_graph(a: &AsymptoticData) -> Result<LinearGraph, LinearError> {
    let rep = validate_data(a);
    if !rep.is_ok() {
        return Err(LinearError::Invalid(rep));
    }
    let lam = lambda_set(a);
    if lam.len() == 1 {
        return Ok(LinearGraph::Cylinder { angle: lam.entries[0].angle });
    }
    let k = lam.len();
    let mut vertices = Vec::with_capacity(k);
    let mut pairs = Vec::with_capacity(k - 1);
    let (bottom, q0) = extremal_vertex(a, &lam.entries[0], true)?;
    vertices.push(Vertex { id: 0, angle: lam.entries[0].angle, label: bottom });
    pairs.push(q0);
    for i in 1..k - 1 {
        let entry = &lam.entries[i];
        let tuples: Vec<FourTuple> = entry
            .sources
            .iter()
            .map(|s| match s {
                LambdaSource::Tuple(j) => a.tuples[*j],
                _ => unreachable!("ç sources sit at 0 and π"),
            })
            .collect();
        let labels: Vec<i64> = tuples.iter().map(|t| t.eps.sign() * t.pair.gcd()).collect();
        let p_o = interior_pair_sum(&tuples);
        pairs.push(pairs[i - 1] - p_o);
        let gamma = VertexGraph::circle(&labels, i - 1, i);
        vertices.push(Vertex { id: i, angle: entry.angle, label: VertexLabel::Interior { tuples, gamma: Some(gamma) } });
    }
    let (top, qt) = extremal_vertex(a, &lam.entries[k - 1], false)?;
    vertices.push(Vertex { id: k - 1, angle: lam.entries[k - 1].angle, label: top });
    if pairs[k - 2] != qt {
        return Err(LinearError::Inconsistent(format!(
            "upward induction gives {} on the top edge, the top vertex requires {}",
            pairs[k - 2],
            qt
        )));
    }
    if let Some(i) = pairs.iter().position(|q| q.is_zero()) {
        return Err(LinearError::Inconsistent(format!("edge {i} gets the pair (0,0)")));
    }
    let edges = pairs.iter().enumerate().map(|(i, &pair)| Edge { id: i, from: i, to: i + 1, pair }).collect();
    Ok(LinearGraph::Graph(DecoratedGraph { vertices, edges }))
}

/// The existence decision for `Â` via its linear graph.
///
/// The α-criterion decides; the explicit determinant conditions are
/// evaluated alongside and any disagreement is reported as an alert.
pub fn check_linear_exists(a: &AsymptoticData) -> Result<ExistenceReport, LinearError> {
    let g = match linear_graph(a)? {
        LinearGraph::Cylinder { .. } => {
            return Ok(ExistenceReport { verdict: Existence::Nonempty, edges: vec![], alerts: vec![] });
        }
        LinearGraph::Graph(g) => g,
    };
    let mut rep = check_exists(&g);
    let det_ok = determinant_criterion(&g);
    let alpha_ok = rep.verdict == Existence::Nonempty;
    if det_ok != alpha_ok {
        rep.alerts.push(format!(
            "determinant conditions say {}, the α-criterion says {}",
            if det_ok { "nonempty" } else { "empty" },
            if alpha_ok { "nonempty" } else { "empty" }
        ));
    }
    Ok(rep)
}

/// The explicit determinant conditions on a linear graph.
pub fn determinant_criterion(g: &DecoratedGraph) -> bool {
    let topo = g.topology();
    for e in &g.edges {
        let q = e.pair;
        let (lo, hi) = g.edge_ends(e.id);
        for v in [lo, hi] {
            if topo.incident[v].len() == 2 {
                if let Some(p) = g.vertices[v].angle.pair() {
                    if sign_alpha_at(q, &AngleSpec::Interior(p)).ok() != Some(Sign::Positive) {
                        return false;
                    }
                }
            }
        }
        let (alo, ahi) = (g.vertices[lo].angle.pair(), g.vertices[hi].angle.pair());
        if let (Some(pl), Some(ph)) = (alo, ahi) {
            if q.pp < 0 && (pl.pp > 0 || ph.pp > 0) && !(pl.pp > 0 && ph.pp > 0) {
                return false;
            }
        }
    }
    true
}
