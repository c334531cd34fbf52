#![allow(dead_code)]

use strata_core::asymptotic::{linear_graph, AsymptoticData, FourTuple, LinearGraph};
use strata_core::exactnum::{AngleSpec, IntPair};
use strata_core::graph::{DecoratedGraph, Edge, Vertex, VertexGraph, VertexLabel};

pub fn a4_data() -> AsymptoticData {
    AsymptoticData::new(0, 0, vec![FourTuple::minus(1, 1), FourTuple::minus(-1, -2), FourTuple::plus(0, -1)])
}

pub fn a5_data() -> AsymptoticData {
    AsymptoticData::new(
        0,
        0,
        vec![FourTuple::minus(1, 0), FourTuple::minus(-1, -2), FourTuple::plus(0, -1), FourTuple::plus(0, -1)],
    )
}

pub fn a6_data() -> AsymptoticData {
    let mut t = vec![FourTuple::minus(2, 0), FourTuple::minus(-2, -4)];
    t.extend(std::iter::repeat(FourTuple::plus(0, -1)).take(4));
    AsymptoticData::new(0, 0, t)
}

pub fn cplus_data() -> AsymptoticData {
    AsymptoticData::new(0, 1, vec![FourTuple::minus(-2, -3), FourTuple::plus(-2, -4)])
}

pub fn cylinder_data() -> AsymptoticData {
    AsymptoticData::new(0, 0, vec![FourTuple::plus(1, 2), FourTuple::minus(1, 2)])
}

pub fn linear(a: &AsymptoticData) -> DecoratedGraph {
    match linear_graph(a).expect("linear graph") {
        LinearGraph::Graph(g) => g,
        LinearGraph::Cylinder { .. } => panic!("cylinder"),
    }
}

pub fn a4() -> DecoratedGraph {
    linear(&a4_data())
}

pub fn a5() -> DecoratedGraph {
    linear(&a5_data())
}

pub fn a6() -> DecoratedGraph {
    linear(&a6_data())
}

pub fn interior(p: i64, pp: i64) -> AngleSpec {
    AngleSpec::Interior(IntPair::new(p, pp))
}

/// Two monovalent ends feed a figure-eight vertex at a free angle, which
/// feeds a bivalent circle vertex and then the top end.
///
/// `(3,-2)` names θ ≈ 1.80 and `(1,-2)` names θ ≈ 1.99.
pub fn a7_at(theta: IntPair) -> DecoratedGraph {
    let end = |id: usize, p: i64, pp: i64| Vertex {
        id,
        angle: interior(p, pp),
        label: VertexLabel::Interior { tuples: vec![FourTuple::minus(p, pp)], gamma: None },
    };
    let vertices = vec![
        end(0, 1, 0),
        end(1, 1, 0),
        Vertex {
            id: 2,
            angle: AngleSpec::Interior(theta),
            label: VertexLabel::Interior { tuples: vec![], gamma: Some(VertexGraph::bouquet(&[(0, 2), (1, 2)])) },
        },
        Vertex {
            id: 3,
            angle: interior(0, -3),
            label: VertexLabel::Interior {
                tuples: vec![FourTuple::plus(0, -3)],
                gamma: Some(VertexGraph::circle(&[3], 2, 3)),
            },
        },
        end(4, -2, -3),
    ];
    let edge = |id, from, to, p, pp| Edge { id, from, to, pair: IntPair::new(p, pp) };
    let edges = vec![edge(0, 0, 2, 1, 0), edge(1, 1, 2, 1, 0), edge(2, 2, 3, 2, 0), edge(3, 3, 4, 2, 3)];
    DecoratedGraph { vertices, edges }
}

pub fn a7() -> DecoratedGraph {
    a7_at(IntPair::new(1, -2))
}

/// The corpus used by the oracle suites.
pub fn corpus() -> Vec<(&'static str, DecoratedGraph)> {
    vec![("A4", a4()), ("A5", a5()), ("A6", a6()), ("A7", a7()), ("A7'", a7_at(IntPair::new(3, -2))), ("cplus", linear(&cplus_data()))]
}

/// Renumbers everything by the given permutations and rotates each loop.
pub fn relabel(
    g: &DecoratedGraph,
    pv: &[usize],
    pe: &[usize],
    pgv: &std::collections::BTreeMap<usize, Vec<usize>>,
    pa: &std::collections::BTreeMap<usize, Vec<usize>>,
    rot: usize,
) -> DecoratedGraph {
    use strata_core::graph::{GammaArc, GammaVertex};
    let mut vertices = g.vertices.clone();
    for v in &g.vertices {
        let mut nv = v.clone();
        nv.id = pv[v.id];
        if let VertexLabel::Interior { tuples, gamma: Some(gm) } = &v.label {
            let q = &pgv[&v.id];
            let a = &pa[&v.id];
            let mut gv = vec![GammaVertex { id: 0, m: 0 }; gm.vertices.len()];
            for x in &gm.vertices {
                gv[q[x.id]] = GammaVertex { id: q[x.id], m: x.m };
            }
            let mut arcs = gm.arcs.clone();
            for (i, x) in gm.arcs.iter().enumerate() {
                arcs[a[i]] = GammaArc { id: a[i] + 1, from: q[x.from], to: q[x.to], eminus: pe[x.eminus], eplus: pe[x.eplus] };
            }
            let loops = gm
                .loops
                .iter()
                .map(|(&e, l)| {
                    let mut m: Vec<i64> = l.iter().map(|&id| a[id as usize - 1] as i64 + 1).collect();
                    let k = rot % m.len().max(1);
                    m.rotate_left(k);
                    (pe[e], m)
                })
                .collect();
            let mut ts = tuples.clone();
            ts.reverse();
            nv.label = VertexLabel::Interior { tuples: ts, gamma: Some(VertexGraph { vertices: gv, arcs, loops }) };
        }
        vertices[pv[v.id]] = nv;
    }
    let mut edges = g.edges.clone();
    for e in &g.edges {
        edges[pe[e.id]] = Edge { id: pe[e.id], from: pv[e.from], to: pv[e.to], pair: e.pair };
    }
    DecoratedGraph { vertices, edges }
}

/// A seeded random relabeling.
pub fn random_relabel(g: &DecoratedGraph, rng: &mut impl rand::Rng) -> DecoratedGraph {
    use rand::seq::SliceRandom;
    let mut pv: Vec<usize> = (0..g.vertices.len()).collect();
    pv.shuffle(rng);
    let mut pe: Vec<usize> = (0..g.edges.len()).collect();
    pe.shuffle(rng);
    let mut pgv = std::collections::BTreeMap::new();
    let mut pa = std::collections::BTreeMap::new();
    for v in &g.vertices {
        if let Some(gm) = v.label.gamma() {
            let mut q: Vec<usize> = (0..gm.vertices.len()).collect();
            q.shuffle(rng);
            let mut a: Vec<usize> = (0..gm.arcs.len()).collect();
            a.shuffle(rng);
            pgv.insert(v.id, q);
            pa.insert(v.id, a);
        }
    }
    relabel(g, &pv, &pe, &pgv, &pa, rng.gen_range(0..8))
}

/// Brute-force count of label-preserving automorphisms.
pub fn brute_force_aut_count(g: &DecoratedGraph) -> u64 {
    let n = g.vertices.len();
    let mut total = 0;
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        total += count_extensions(g, p);
    });
    total
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

fn label_key(l: &VertexLabel) -> String {
    match l {
        VertexLabel::Interior { tuples, .. } => {
            let mut t: Vec<String> = tuples.iter().map(|x| format!("{x}")).collect();
            t.sort();
            format!("I{t:?}")
        }
        other => format!("{other:?}"),
    }
}

fn count_extensions(g: &DecoratedGraph, pv: &[usize]) -> u64 {
    use strata_core::exactnum::cmp_angle;
    for v in &g.vertices {
        let w = &g.vertices[pv[v.id]];
        if cmp_angle(&v.angle, &w.angle) != std::cmp::Ordering::Equal || label_key(&v.label) != label_key(&w.label) {
            return 0;
        }
    }
    let mut pe = vec![usize::MAX; g.edges.len()];
    for e in &g.edges {
        let (a, b) = (pv[e.from], pv[e.to]);
        match g.edges.iter().find(|f| ((f.from == a && f.to == b) || (f.from == b && f.to == a)) && f.pair == e.pair) {
            Some(f) => pe[e.id] = f.id,
            None => return 0,
        }
    }
    let mut prod = 1;
    for v in &g.vertices {
        let Some(g1) = v.label.gamma() else { continue };
        let g2 = g.vertices[pv[v.id]].label.gamma().unwrap();
        let mut count = 0;
        let mut q: Vec<usize> = (0..g1.vertices.len()).collect();
        permutations(&mut q, 0, &mut |q| {
            if g1.vertices.iter().any(|x| g2.vertices[q[x.id]].m != x.m) {
                return;
            }
            let mut a: Vec<usize> = (0..g1.arcs.len()).collect();
            permutations(&mut a, 0, &mut |a| {
                let arcs_ok = g1.arcs.iter().enumerate().all(|(i, x)| {
                    let y = &g2.arcs[a[i]];
                    y.from == q[x.from] && y.to == q[x.to] && y.eminus == pe[x.eminus] && y.eplus == pe[x.eplus]
                });
                if !arcs_ok {
                    return;
                }
                let loops_ok = g1.loops.iter().all(|(e, l)| {
                    let target = &g2.loops[&pe[*e]];
                    let img: Vec<i64> = l.iter().map(|&id| a[id as usize - 1] as i64 + 1).collect();
                    (0..target.len()).any(|s| (0..img.len()).all(|i| img[i] == target[(i + s) % target.len()]))
                });
                if loops_ok {
                    count += 1;
                }
            });
        });
        prod *= count;
    }
    prod
}

fn leaf(id: usize, p: i64, pp: i64) -> Vertex {
    Vertex { id, angle: interior(p, pp), label: VertexLabel::Interior { tuples: vec![FourTuple::minus(p, pp)], gamma: None } }
}

fn edge(id: usize, from: usize, to: usize, p: i64, pp: i64) -> Edge {
    Edge { id, from, to, pair: IntPair::new(p, pp) }
}

/// Four leaves `f₁, f₂` below and `g₁, g₂` above a vertex whose graph has
/// two label-0 vertices and four parallel-in-pairs arcs `a, b: υ₁→υ₂`, `c, d: υ₂→υ₁`;
/// `ℓ_{f₁} = (a,c)`, `ℓ_{f₂} = (b,d)`, `ℓ_{g₁} = (a,d)`, `ℓ_{g₂} = (b,c)`.
pub fn four_arc() -> DecoratedGraph {
    use strata_core::graph::{GammaArc, GammaVertex};
    let arc = |id, from, to, eminus, eplus| GammaArc { id, from, to, eminus, eplus };
    let gm = VertexGraph {
        vertices: vec![GammaVertex { id: 0, m: 0 }, GammaVertex { id: 1, m: 0 }],
        arcs: vec![arc(1, 0, 1, 0, 2), arc(2, 0, 1, 1, 3), arc(3, 1, 0, 0, 3), arc(4, 1, 0, 1, 2)],
        loops: [(0, vec![1, 3]), (1, vec![2, 4]), (2, vec![1, 4]), (3, vec![2, 3])].into_iter().collect(),
    };
    let o = Vertex { id: 4, angle: interior(1, 0), label: VertexLabel::Interior { tuples: vec![], gamma: Some(gm) } };
    DecoratedGraph {
        vertices: vec![leaf(0, -2, 3), leaf(1, -1, 2), leaf(2, 1, -2), leaf(3, 2, -3), o],
        edges: vec![edge(0, 0, 4, -2, 3), edge(1, 1, 4, -1, 2), edge(2, 4, 2, -1, 2), edge(3, 4, 3, -2, 3)],
    }
}

/// The A4 chain with an extra circle vertex at θ(1,0) carrying `(0,+,(1,0))` and `(0,−,(1,0))`.
pub fn cancel_pair() -> DecoratedGraph {
    let w = Vertex {
        id: 3,
        angle: interior(1, 0),
        label: VertexLabel::Interior {
            tuples: vec![FourTuple::plus(1, 0), FourTuple::minus(1, 0)],
            gamma: Some(VertexGraph::circle(&[1, -1], 0, 1)),
        },
    };
    let b = Vertex {
        id: 1,
        angle: interior(0, -1),
        label: VertexLabel::Interior { tuples: vec![FourTuple::plus(0, -1)], gamma: Some(VertexGraph::circle(&[1], 1, 2)) },
    };
    DecoratedGraph {
        vertices: vec![leaf(0, 1, 1), b, leaf(2, -1, -2), w],
        edges: vec![edge(0, 0, 3, 1, 1), edge(1, 3, 1, 1, 1), edge(2, 1, 2, 1, 2)],
    }
}

/// Three leaves below a vertex at θ(1,0) whose graph is a bouquet of three loops, one leaf above.
pub fn six_valent() -> DecoratedGraph {
    let o = Vertex {
        id: 4,
        angle: interior(1, 0),
        label: VertexLabel::Interior { tuples: vec![], gamma: Some(VertexGraph::bouquet(&[(0, 3), (1, 3), (2, 3)])) },
    };
    DecoratedGraph {
        vertices: vec![leaf(0, -2, 3), leaf(1, -1, 2), leaf(2, -1, 2), leaf(3, 4, -7), o],
        edges: vec![edge(0, 0, 4, -2, 3), edge(1, 1, 4, -1, 2), edge(2, 2, 4, -1, 2), edge(3, 4, 3, -4, 7)],
    }
}
