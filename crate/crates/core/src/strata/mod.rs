//! Degenerations, refinements and the stratum census.
//!
//! Moves are pure: each takes a decorated graph and returns new graphs, with
//! every emitted graph validated before it leaves the module.

mod edit;

pub mod arcs;
pub mod census;
pub mod moves;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asymptotic::{moduli_dimension, Eps};
use crate::exactnum::{AngleSpec, ExactError};
use crate::graph::{stratum_data, DecoratedGraph, VertexGraph};

pub use arcs::{
    arc_difference_class, collapse_arc, forced_by_pair, forced_equal, split_at_arcset, CancelSubcase, CollapseOutcome,
    DifferenceClass, ForcedEqual, SplitPiece,
};
pub use census::{adjacency, census, census_full, Bounds, CensusEntry, PictureClass, PosetEdge, StratumPoset};
pub use moves::{absorb, coincide, degenerations, merge_edge, pin, refine, Degeneration, MoveKind, Refinement, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("vertex {0} carries no vertex graph")]
    NoGamma(usize),
    #[error("vertex {vertex} has no arc {arc}")]
    NoArc { vertex: usize, arc: usize },
    #[error("arc {0} compared with itself")]
    SameArc(usize),
    #[error("arcs {a} and {b} do not share both endpoints")]
    EndpointsNotShared { a: usize, b: usize },
    #[error("arc {0} starts and ends at the same vertex")]
    SelfLoop(usize),
    #[error("chain identity fails for arcs {a} and {b}")]
    ChainIdentity { a: usize, b: usize },
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("move does not apply: {0}")]
    Inapplicable(String),
    #[error("result fails validation: {0}")]
    Invalid(String),
    #[error("census bound exceeded: {0}")]
    BoundExceeded(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub(crate) fn gamma_of(t: &DecoratedGraph, o: usize) -> Result<&VertexGraph, StrataError> {
    t.vertices.get(o).and_then(|v| v.label.gamma()).ok_or(StrataError::NoGamma(o))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Codim1 {
    Codim0,
    /// Two trivalent vertices at one angle.
    Type1,
    /// A 4-valent vertex.
    Type2,
    /// An extra bivalent vertex.
    Type3,
    /// A trivalent angle on a `(0,+)` angle.
    Type4,
    Deeper,
}

/// `Λ₊`: the angles of the `(0,+)` tuples of the data set.
pub(crate) fn lambda_plus(t: &DecoratedGraph) -> Vec<AngleSpec> {
    let mut out: Vec<AngleSpec> = Vec::new();
    for tu in t.derived_data().tuples {
        if tu.delta == 0 && tu.eps == Eps::Plus {
            if let Some(a) = tu.angle() {
                if !out.iter().any(|x| x.same_angle(&a)) {
                    out.push(a);
                }
            }
        }
    }
    out
}

fn distinct_angles(t: &DecoratedGraph, vs: &[usize]) -> bool {
    vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| !t.vertices[a].angle.same_angle(&t.vertices[b].angle)))
}

/// Matches a graph against the four codimension-one patterns.
pub fn classify_codim1(t: &DecoratedGraph) -> Codim1 {
    let a = t.derived_data();
    let total = moduli_dimension(&a);
    let dim = stratum_data(t).dim;
    if dim == total {
        return Codim1::Codim0;
    }
    if dim != total - 1 {
        return Codim1::Deeper;
    }
    let k = a.concave_count() - 2;
    let multi: Vec<usize> = (0..t.vertices.len()).filter(|&v| t.vertices[v].label.gamma().is_some()).collect();
    let of_valency = |n: usize| -> Vec<usize> { multi.iter().copied().filter(|&v| t.valency(v) == n).collect() };
    let tri = of_valency(3);
    let four = of_valency(4);
    let slots: usize = of_valency(2).iter().map(|&v| t.vertices[v].label.tuples().len()).sum();
    let lp = lambda_plus(t);
    let in_lp = |v: usize| lp.iter().any(|x| x.same_angle(&t.vertices[v].angle));
    let ntri = tri.len() as i64;
    let no_lp = |vs: &[usize]| vs.iter().all(|&v| !in_lp(v));

    if ntri == k && four.is_empty() && no_lp(&tri) {
        let sharing = tri
            .iter()
            .enumerate()
            .flat_map(|(i, &x)| tri[i + 1..].iter().map(move |&y| (x, y)))
            .filter(|&(x, y)| t.vertices[x].angle.same_angle(&t.vertices[y].angle))
            .count();
        if sharing == 1 {
            return Codim1::Type1;
        }
    }
    if ntri == k - 2 && four.len() == 1 && no_lp(&tri) && no_lp(&four) {
        let g = t.vertices[four[0]].label.gamma().map_or(0, |g| g.vertices.len());
        let all: Vec<usize> = tri.iter().chain(&four).copied().collect();
        if g == 2 && distinct_angles(t, &all) {
            return Codim1::Type2;
        }
    }
    if ntri == k - 1 && four.is_empty() && no_lp(&tri) && slots == a.n_plus() + 1 {
        return Codim1::Type3;
    }
    if ntri == k && four.is_empty() && distinct_angles(t, &tri) {
        let hits: Vec<usize> = tri.iter().copied().filter(|&v| in_lp(v)).collect();
        if let [v] = hits.as_slice() {
            let zeros = t.vertices[*v].label.gamma().map_or(0, |g| g.vertices.iter().filter(|x| x.m == 0).count());
            if zeros == 1 {
                return Codim1::Type4;
            }
        }
    }
    Codim1::Deeper
}
