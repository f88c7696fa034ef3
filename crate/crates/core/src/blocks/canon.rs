//! Canonical forms of small graphs by colour refinement plus
//! individualization. Exhaustive over the refinement tree (no automorphism
//! pruning), which is fine for the degree-3, few-dozen-vertex graphs the
//! searcher deals with.

use crate::graph::WeightedGraph;

/// Isomorphism invariant code: the sorted edge list `(i, j, mu)` under the
/// lexicographically least vertex order found. Two graphs are isomorphic
/// iff their codes agree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub vertices: usize,
    pub code: Vec<(usize, usize, u64)>,
    /// `order[k]` is the original index placed at canonical position `k`.
    pub order: Vec<usize>,
}

type Partition = Vec<Vec<usize>>;

fn refine(g: &WeightedGraph, mut cells: Partition) -> Partition {
    let n = g.vertex_count();
    loop {
        let mut cell_of = vec![0usize; n];
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = c;
            }
        }
        let mut next: Partition = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<(usize, u64)>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut sig: Vec<(usize, u64)> =
                        g.neighbors(v).map(|(w, mu)| (cell_of[w], mu)).collect();
                    sig.sort_unstable();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for k in 1..=keyed.len() {
                if k == keyed.len() || keyed[k].0 != keyed[start].0 {
                    next.push(keyed[start..k].iter().map(|e| e.1).collect());
                    start = k;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn leaf_code(g: &WeightedGraph, cells: &Partition) -> (Vec<(usize, usize, u64)>, Vec<usize>) {
    let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
    let mut pos = vec![0; order.len()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let mut code: Vec<(usize, usize, u64)> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (pos[e.u], pos[e.v]);
            (a.min(b), a.max(b), e.mu)
        })
        .collect();
    code.sort_unstable();
    (code, order)
}

fn search(
    g: &WeightedGraph,
    cells: Partition,
    best: &mut Option<(Vec<(usize, usize, u64)>, Vec<usize>)>,
) {
    let cells = refine(g, cells);
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let leaf = leaf_code(g, &cells);
        if best.as_ref().map_or(true, |b| leaf.0 < b.0) {
            *best = Some(leaf);
        }
        return;
    };
    for &v in &cells[target] {
        let mut split = cells.clone();
        let rest: Vec<usize> = split[target].iter().copied().filter(|&x| x != v).collect();
        split[target] = vec![v];
        split.insert(target + 1, rest);
        search(g, split, best);
    }
}

pub fn canonical_form(g: &WeightedGraph) -> CanonicalForm {
    let n = g.vertex_count();
    // start from the degree partition, ordered by degree
    let mut by_degree: Vec<(usize, usize)> = (0..n).map(|v| (g.degree(v), v)).collect();
    by_degree.sort_unstable();
    let mut cells: Partition = Vec::new();
    for (d, v) in by_degree {
        match cells.last_mut() {
            Some(c) if g.degree(c[0]) == d => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut best = None;
    search(g, cells, &mut best);
    let (code, order) = best.expect("non-empty graph has a leaf");
    CanonicalForm {
        vertices: n,
        code,
        order,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
        let mut b = WeightedGraph::builder();
        for i in 0..n {
            b.add_vertex(format!("v{i}"));
        }
        for &(u, v) in edges {
            b.add_edge(format!("v{u}"), format!("v{v}"), 1, false);
        }
        b.build().unwrap()
    }

    #[test]
    fn relabeled_cycles_agree() {
        let a = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let b = graph(5, &[(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)]);
        assert_eq!(canonical_form(&a).code, canonical_form(&b).code);
    }

    #[test]
    fn path_and_star_differ() {
        let path = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let star = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_ne!(canonical_form(&path), canonical_form(&star));
    }

    #[test]
    fn regular_graphs_need_individualization() {
        // two 3-regular graphs on 6 vertices: prism and K_{3,3}
        let prism = graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]);
        let k33 = graph(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]);
        assert_ne!(canonical_form(&prism).code, canonical_form(&k33).code);
    }
}
