//! Graphviz export for `T` and the vertex graphs `Γ_o`.

use std::fmt::Write;

use super::{DecoratedGraph, VertexLabel};
use crate::exactnum::{angle_float, AngleSpec};

fn angle_text(a: &AngleSpec) -> String {
    match a {
        AngleSpec::Zero => "0".into(),
        AngleSpec::Pi => "pi".into(),
        AngleSpec::Interior(p) => format!("{p} ≈ {:.4}", angle_float(a)),
    }
}

fn label_text(l: &VertexLabel) -> String {
    match l {
        VertexLabel::ZeroInt { m } => format!("zero m={m}"),
        VertexLabel::PiInt { m } => format!("pi m={m}"),
        VertexLabel::ZeroEnd { tuple } => format!("zero {tuple}"),
        VertexLabel::PiEnd { tuple } => format!("pi {tuple}"),
        VertexLabel::Interior { tuples, .. } => tuples.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" "),
    }
}

/// The tree `T` with a cluster per vertex graph.
pub fn render_graph(t: &DecoratedGraph) -> String {
    let mut s = String::from("digraph T {\n  rankdir=BT;\n");
    for v in &t.vertices {
        let _ = writeln!(s, "  v{} [label=\"{}\\nθ = {}\\n{}\"];", v.id, v.id, angle_text(&v.angle), label_text(&v.label));
    }
    for e in &t.edges {
        let (lo, hi) = t.edge_ends(e.id);
        let _ = writeln!(s, "  v{lo} -> v{hi} [label=\"e{} {}\"];", e.id, e.pair);
    }
    for v in &t.vertices {
        if v.label.gamma().is_some() {
            s.push_str(&render_gamma_body(t, v.id, &format!("  subgraph cluster_{} {{\n    label=\"Γ_{}\";\n", v.id, v.id), "    "));
            s.push_str("  }\n");
        }
    }
    s.push_str("}\n");
    s
}

fn render_gamma_body(t: &DecoratedGraph, o: usize, head: &str, ind: &str) -> String {
    let mut s = head.to_string();
    let Some(g) = t.vertices[o].label.gamma() else { return s };
    for x in &g.vertices {
        let _ = writeln!(s, "{ind}g{o}_{} [label=\"{}\" shape=circle];", x.id, x.m);
    }
    for a in &g.arcs {
        let _ = writeln!(s, "{ind}g{o}_{} -> g{o}_{} [label=\"{} ({},{})\"];", a.from, a.to, a.id, a.eminus, a.eplus);
    }
    s
}

/// One vertex graph `Γ_o` on its own.
pub fn render_gamma(t: &DecoratedGraph, o: usize) -> String {
    let mut s = render_gamma_body(t, o, &format!("digraph Gamma_{o} {{\n"), "  ");
    s.push_str("}\n");
    s
}
