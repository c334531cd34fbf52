use std::fmt::Write;
use std::path::Path;

use anyhow::{bail, Result};
use log::info;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use strata_core::asymptotic::{check_linear_exists, linear_graph, moduli_dimension, validate_data, LinearGraph};
use strata_core::exactnum::{angle_float, cos_float, defines_angle, half_plane, AngleSpec, IntPair};
use strata_core::graph::{check_exists, render_graph, stratum_data, validate_graph, DecoratedGraph, Existence, ExistenceReport};
use strata_core::orbit::{act, interior_point, orbits_equal, validate_point, GroupElement, OrbitPoint};
use strata_core::report::Report;
use strata_core::strata::{adjacency, census, census_full, collapse_arc, CollapseOutcome};
use strata_core::symmetry::{are_isomorphic, aut_group, stabilizer};

use crate::input::{parse_bounds, read_data, read_element, read_graph, read_input, read_point, Input};

/// What a command produced; the caller picks the rendering.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub dot: Option<String>,
    /// Validation violations were found.
    pub violations: bool,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Output { text, json, dot: None, violations: false }
    }

    fn rejected(r: &Report) -> Self {
        Output { text: r.to_string(), json: json!({ "ok": false, "violations": r.violations }), dot: None, violations: true }
    }

    fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }
}

fn checked_graph(path: Option<&Path>) -> Result<std::result::Result<DecoratedGraph, Output>> {
    let g = read_graph(path)?;
    let r = validate_graph(&g);
    Ok(if r.is_ok() { Ok(g) } else { Err(Output::rejected(&r)) })
}

macro_rules! valid_graph {
    ($path:expr) => {
        match checked_graph($path)? {
            Ok(g) => g,
            Err(out) => return Ok(out),
        }
    };
}

macro_rules! valid_data {
    ($path:expr) => {{
        let a = read_data($path)?;
        let r = validate_data(&a);
        if !r.is_ok() {
            return Ok(Output::rejected(&r));
        }
        a
    }};
}

pub fn validate(path: Option<&Path>) -> Result<Output> {
    let (kind, r) = match read_input(path)? {
        Input::Data(a) => ("data", validate_data(&a)),
        Input::Graph(g) => ("graph", validate_graph(&g)),
    };
    info!("validated a {kind}: {} violations", r.violations.len());
    let json = json!({ "kind": kind, "ok": r.is_ok(), "violations": r.violations });
    Ok(Output { text: r.to_string(), json, dot: None, violations: !r.is_ok() })
}

pub fn angle(p: i64, pp: i64) -> Result<Output> {
    let pair = IntPair::new(p, pp);
    if pair.is_zero() {
        bail!("the pair (0,0) defines no angle");
    }
    if !defines_angle(pair)? {
        let mut r = Report::default();
        r.push("angle-defined", format!("{pair}"), "p < 0 needs 2p′² > 3p²");
        return Ok(Output::rejected(&r));
    }
    let a = AngleSpec::Interior(pair);
    let theta = angle_float(&a);
    let hp = half_plane(pair)?;
    let text = format!("theta ≈ {theta:.4}, half-plane: {hp}");
    Ok(Output::new(text, json!({ "pair": pair, "theta": theta, "cos": cos_float(&a), "half_plane": hp })))
}

pub fn dim(path: Option<&Path>) -> Result<Output> {
    match read_input(path)? {
        Input::Data(a) => {
            let r = validate_data(&a);
            if !r.is_ok() {
                return Ok(Output::rejected(&r));
            }
            let d = moduli_dimension(&a);
            let cyl = a.is_cylinder_shape();
            let text = if cyl { format!("dim(M) = {d} (cylinder)") } else { format!("dim(M) = {d}") };
            Ok(Output::new(text, json!({ "dim": d, "cylinder": cyl })))
        }
        Input::Graph(g) => {
            let r = validate_graph(&g);
            if !r.is_ok() {
                return Ok(Output::rejected(&r));
            }
            let s = stratum_data(&g);
            let total = moduli_dimension(&g.derived_data());
            let text = format!("dim = {} (|B| = {}, c = {}, m = {}), codim {}", s.dim, s.b.len(), s.c, s.m, total - s.dim);
            Ok(Output::new(text, json!({ "stratum": s, "total": total })))
        }
    }
}

fn graph_text(g: &DecoratedGraph) -> String {
    let mut s = String::new();
    for v in &g.vertices {
        let _ = write!(s, "v{} at {} ≈ {:.4}", v.id, v.angle, angle_float(&v.angle));
        for t in v.label.tuples() {
            let _ = write!(s, " {t}");
        }
        if let Some(gm) = v.label.gamma() {
            let _ = write!(s, " Γ: {} vertices, {} arcs", gm.vertices.len(), gm.arcs.len());
        }
        s.push('\n');
    }
    for e in &g.edges {
        let (lo, hi) = g.edge_ends(e.id);
        let _ = writeln!(s, "e{}: v{lo} -> v{hi} {}", e.id, e.pair);
    }
    s.trim_end().to_string()
}

pub fn linear(path: Option<&Path>) -> Result<Output> {
    let a = valid_data!(path);
    match linear_graph(&a) {
        Ok(LinearGraph::Graph(g)) => {
            let json = serde_json::to_value(&g)?;
            Ok(Output::new(graph_text(&g), json).with_dot(render_graph(&g)))
        }
        Ok(LinearGraph::Cylinder { angle }) => {
            Ok(Output::new(format!("cylinder at {angle}"), json!({ "cylinder": { "angle": angle } })))
        }
        Err(e) => {
            let mut r = Report::default();
            r.push("linear-graph", "data", e.to_string());
            Ok(Output::rejected(&r))
        }
    }
}

fn existence_text(rep: &ExistenceReport) -> String {
    let mut s = match &rep.verdict {
        Existence::Nonempty => "NONEMPTY".to_string(),
        Existence::Empty { edge, witness } => {
            format!("EMPTY (edge e{edge}, α ≤ 0 at {witness} ≈ {:.4})", angle_float(witness))
        }
    };
    for e in &rep.edges {
        let _ = write!(
            s,
            "\n  e{} {} on [{:.4}, {:.4}]: {}",
            e.edge,
            e.pair,
            angle_float(&e.lo),
            angle_float(&e.hi),
            serde_json::to_value(&e.positivity).map(|v| v.to_string()).unwrap_or_default()
        );
    }
    for a in &rep.alerts {
        let _ = write!(s, "\n  alert: {a}");
    }
    s
}

pub fn check(path: Option<&Path>, linear: bool) -> Result<Output> {
    let rep = match read_input(path)? {
        Input::Data(a) => {
            let r = validate_data(&a);
            if !r.is_ok() {
                return Ok(Output::rejected(&r));
            }
            match check_linear_exists(&a) {
                Ok(rep) => rep,
                Err(e) => {
                    let mut r = Report::default();
                    r.push("linear-graph", "data", e.to_string());
                    return Ok(Output::rejected(&r));
                }
            }
        }
        Input::Graph(_) if linear => bail!("--linear expects a data set"),
        Input::Graph(g) => {
            let r = validate_graph(&g);
            if !r.is_ok() {
                return Ok(Output::rejected(&r));
            }
            check_exists(&g)
        }
    };
    Ok(Output::new(existence_text(&rep), serde_json::to_value(&rep)?))
}

pub fn aut(path: Option<&Path>) -> Result<Output> {
    let g = valid_graph!(path);
    let a = aut_group(&g);
    let mut text = format!("|Aut(T)| = {}\ndiamond: v{}", a.order, a.diamond);
    for (o, n) in &a.local_orders {
        let _ = write!(text, "\n  v{o}: local order {n}");
    }
    Ok(Output::new(text, serde_json::to_value(&a)?))
}

pub fn iso(first: &Path, second: &Path) -> Result<Output> {
    let g = valid_graph!(Some(first));
    let h = valid_graph!(Some(second));
    Ok(match are_isomorphic(&g, &h) {
        Some(m) => {
            let text = format!("ISOMORPHIC\nvertices: {:?}\nedges: {:?}", m.vertices, m.edges);
            Output::new(text, json!({ "isomorphic": true, "isomorphism": m }))
        }
        None => Output::new("NOT ISOMORPHIC".into(), json!({ "isomorphic": false })),
    })
}

fn point_or_default(g: &DecoratedGraph, point: Option<&Path>) -> Result<std::result::Result<OrbitPoint, Output>> {
    let x = match point {
        Some(p) => read_point(p)?,
        None => match interior_point(g) {
            Some(x) => x,
            None => bail!("the graph has no interior point; pass one explicitly"),
        },
    };
    let r = validate_point(g, &x);
    Ok(if r.is_ok() { Ok(x) } else { Err(Output::rejected(&r)) })
}

macro_rules! valid_point {
    ($g:expr, $p:expr) => {
        match point_or_default($g, $p)? {
            Ok(x) => x,
            Err(out) => return Ok(out),
        }
    };
}

pub fn stab(graph: &Path, point: Option<&Path>) -> Result<Output> {
    let g = valid_graph!(Some(graph));
    let x = valid_point!(&g, point);
    let s = stabilizer(&g, &x.r);
    Ok(Output::new(format!("|Stab(x)| = {}", s.order), serde_json::to_value(&s)?))
}

pub fn orbit_act(graph: &Path, point: Option<&Path>, element: Option<&Path>, seed: u64) -> Result<Output> {
    let g = valid_graph!(Some(graph));
    let x = valid_point!(&g, point);
    let el = match element {
        Some(p) => read_element(p)?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            GroupElement::Lattice { n: IntPair::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3)) }
        }
    };
    info!("acting by {el:?}");
    let y = act(&g, &el, &x)?;
    let json = json!({ "element": el, "point": serde_json::to_value(&y)? });
    Ok(Output::new(y.to_json(), json))
}

pub fn orbit_equal(graph: &Path, first: &Path, second: &Path) -> Result<Output> {
    let g = valid_graph!(Some(graph));
    let x = valid_point!(&g, Some(first));
    let y = valid_point!(&g, Some(second));
    let same = orbits_equal(&g, &x, &y);
    let text = if same { "SAME ORBIT" } else { "DIFFERENT ORBITS" };
    Ok(Output::new(text.into(), json!({ "same_orbit": same })))
}

pub fn run_census(path: Option<&Path>, bounds: Option<&str>, include_boundary: bool) -> Result<Output> {
    let a = valid_data!(path);
    let b = parse_bounds(bounds)?;
    let entries = if include_boundary { census_full(&a, &b)? } else { census(&a, &b)? };
    info!("census: {} entries", entries.len());
    let mut text = format!("{} strata, dim(M) = {}", entries.len(), moduli_dimension(&a));
    for (i, e) in entries.iter().enumerate() {
        let _ = write!(
            text,
            "\n{i:>3}  dim {}  codim {}  |Aut| {}  {}{}  {}",
            e.dim,
            e.codim,
            e.aut_order,
            if e.nonempty { "nonempty" } else { "empty" },
            if e.boundary { "  boundary" } else { "" },
            e.key
        );
    }
    let dot = adjacency(&entries, include_boundary).to_dot();
    Ok(Output::new(text, serde_json::to_value(&entries)?).with_dot(dot))
}

pub fn collapse(graph: &Path, vertex: usize, arc: usize) -> Result<Output> {
    let g = valid_graph!(Some(graph));
    let out = collapse_arc(&g, vertex, arc)?;
    let json = serde_json::to_value(&out)?;
    let head = match &out {
        CollapseOutcome::Internal { .. } => "internal collapse".to_string(),
        CollapseOutcome::BoundarySameMerge { tuple, .. } => format!("boundary: merged into {tuple}"),
        CollapseOutcome::BoundaryCancel { subcase, .. } => format!("boundary: cancelling pair ({subcase:?})"),
        CollapseOutcome::Rejected { reason } => format!("rejected: {reason}"),
    };
    let mut o = match out.graph() {
        Some(h) => Output::new(format!("{head}\n{}", graph_text(h)), json).with_dot(render_graph(h)),
        None => Output::new(head, json),
    };
    o.violations = matches!(out, CollapseOutcome::Rejected { .. });
    Ok(o)
}

pub fn run_adjacency(path: Option<&Path>, bounds: Option<&str>, include_boundary: bool) -> Result<Output> {
    let a = valid_data!(path);
    let b = parse_bounds(bounds)?;
    let entries = if include_boundary { census_full(&a, &b)? } else { census(&a, &b)? };
    let poset = adjacency(&entries, include_boundary);
    let mut text = format!("{} strata, {} adjacencies", poset.entries.len(), poset.edges.len());
    for e in &poset.edges {
        let kind = e.kind.map_or_else(|| "unclassified".to_string(), |k| format!("{k:?}"));
        let pic = e.picture.map_or_else(String::new, |p| format!(" {p:?}"));
        let _ = write!(text, "\n  {} -> {}  {kind}{pic}{}", e.from, e.to, if e.boundary { "  boundary" } else { "" });
    }
    let dot = poset.to_dot();
    Ok(Output::new(text, serde_json::from_str(&poset.to_json())?).with_dot(dot))
}
