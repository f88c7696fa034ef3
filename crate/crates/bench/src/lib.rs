//! Inputs shared by the criterion benchmarks.

use elliptic_blocks::{VertexId, WeightedGraph};

/// Unit-weight cycle on `n` vertices named `c0 .. c{n-1}`.
pub fn cycle(n: usize) -> WeightedGraph {
    let mut b = WeightedGraph::builder();
    for i in 0..n {
        b.add_vertex(VertexId::new(format!("c{i}")));
    }
    for i in 0..n {
        b.add_edge(format!("c{i}"), format!("c{}", (i + 1) % n), 1, false);
    }
    b.build().expect("cycle is a valid graph")
}
