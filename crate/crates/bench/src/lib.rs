//! Fixed inputs shared by the kernel benchmarks.

use loosetri::{hosts, Hypergraph};

/// Dense random 3-graph: many loose triangles per edge.
pub fn dense_gnp() -> Hypergraph {
    hosts::gnp(40, 3, 0.2, 1).expect("valid parameters")
}

/// Sparse random 3-graph near the triangle-appearance regime.
pub fn sparse_gnp() -> Hypergraph {
    hosts::gnp(120, 3, 0.002, 1).expect("valid parameters")
}

/// Random 4-graph.
pub fn gnp4() -> Hypergraph {
    hosts::gnp(24, 4, 0.1, 1).expect("valid parameters")
}

/// Disjoint K_7^3 copies, the exact solver's typical input.
pub fn cliques(copies: u32) -> Hypergraph {
    hosts::disjoint_cliques(copies, 7, 3).expect("valid parameters")
}
