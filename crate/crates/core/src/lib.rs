//! Exact combinatorics of moduli spaces of pseudoholomorphic cylinders
//! and their graph-indexed strata.

pub mod asymptotic;
pub mod exactnum;
pub mod graph;
pub mod linalg;
pub mod orbit;
pub mod report;
pub mod strata;
pub mod symmetry;
