//! Cutting a block open along its boundary edge, and splicing open blocks
//! into host edges.
//!
//! Splitting convention: for the boundary `[v, w]` with `v`'s other
//! neighbor `x`, the cut keeps `[v, w]` in place, moves `[v, x]` to a fresh
//! copy `v'` and hangs a fresh leaf `w'` off `v'`. The open block is then
//! `v - w - ... - x - v' - w'` along the former cycle, with `v` (value `a`)
//! and `w'` (value `b`) as its two leaf ends.

use std::collections::{BTreeSet, HashMap};

use super::{local_checks, BlockError, BuildingBlock};
use crate::graph::{GraphError, VertexId, WeightedGraph};
use crate::laplacian::ModularLabeling;

/// A block cut open at its boundary edge. `a_end` and `b_end` are leaves
/// carrying `a` and `b`; both end edges are distinguished.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenBlock {
    graph: WeightedGraph,
    labeling: ModularLabeling,
    a_end: VertexId,
    b_end: VertexId,
    a: u64,
    b: u64,
}

impl OpenBlock {
    /// `a_end` and `b_end` must be distinct leaves; `a`, `b` are read off
    /// the labeling.
    pub fn new(
        graph: WeightedGraph,
        labeling: ModularLabeling,
        a_end: VertexId,
        b_end: VertexId,
    ) -> Result<Self, BlockError> {
        if labeling.len() != graph.vertex_count() {
            return Err(crate::laplacian::LaplacianError::LabelingSize {
                expected: graph.vertex_count(),
                got: labeling.len(),
            }
            .into());
        }
        if a_end == b_end {
            return Err(BlockError::NotOpen("both ends are the same vertex".into()));
        }
        let a = labeling.get(graph.index_of(&a_end)?);
        let b = labeling.get(graph.index_of(&b_end)?);
        let h = OpenBlock {
            graph,
            labeling,
            a_end,
            b_end,
            a,
            b,
        };
        h.inner_ends()?;
        Ok(h)
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn labeling(&self) -> &ModularLabeling {
        &self.labeling
    }

    pub fn ends(&self) -> (&VertexId, &VertexId) {
        (&self.a_end, &self.b_end)
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn prime(&self) -> u64 {
        self.labeling.prime()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn betti(&self) -> usize {
        self.graph.first_betti()
    }

    fn sole_neighbor(&self, leaf: &VertexId) -> Result<usize, BlockError> {
        let i = self.graph.index_of(leaf)?;
        let mut it = self.graph.neighbor_indices(i);
        match (it.next(), it.next()) {
            (Some(w), None) => Ok(w),
            _ => Err(BlockError::NotOpen(format!("`{leaf}` is not a leaf"))),
        }
    }

    /// The interior vertices next to the two ends: `(w, v')`.
    pub fn inner_ends(&self) -> Result<(VertexId, VertexId), BlockError> {
        let w = self.sole_neighbor(&self.a_end)?;
        let v2 = self.sole_neighbor(&self.b_end)?;
        Ok((self.graph.id(w).clone(), self.graph.id(v2).clone()))
    }
}

fn fresh_id(g: &WeightedGraph, base: &VertexId) -> VertexId {
    let mut id = format!("{base}'");
    while g.contains(&VertexId::new(id.clone())) {
        id.push('\'');
    }
    VertexId::new(id)
}

fn require_degree_two(g: &WeightedGraph, id: &VertexId) -> Result<usize, BlockError> {
    let i = g.index_of(id)?;
    if g.degree(i) != 2 {
        return Err(BlockError::SiteDegree {
            vertex: id.clone(),
            degree: g.degree(i),
        });
    }
    Ok(i)
}

/// Cut `blk` open along its boundary edge: one more edge, one less loop.
pub fn make_h(blk: &BuildingBlock) -> Result<OpenBlock, BlockError> {
    let g = blk.graph();
    let (v_id, w_id) = blk.boundary();
    let v = require_degree_two(g, v_id)?;
    let w = require_degree_two(g, w_id)?;
    let x = g
        .neighbor_indices(v)
        .find(|&n| n != w)
        .expect("degree-2 vertex has a second neighbor");

    let v2 = fresh_id(g, v_id);
    let mut w2 = fresh_id(g, w_id);
    if w2 == v2 {
        w2 = VertexId::new(format!("{w2}'"));
    }

    let mut b = WeightedGraph::builder();
    for id in g.ids() {
        b.add_vertex(id.clone());
    }
    b.add_vertex(v2.clone());
    b.add_vertex(w2.clone());
    for e in g.edges() {
        if (e.u, e.v) == (v.min(x), v.max(x)) {
            b.add_edge(v2.clone(), g.id(x).clone(), e.mu, e.distinguished);
        } else {
            b.add_edge(g.id(e.u).clone(), g.id(e.v).clone(), e.mu, e.distinguished);
        }
    }
    b.add_edge(v2.clone(), w2.clone(), 1, true);
    let graph = b.build().map_err(|e| match e {
        GraphError::Disconnected(_) => BlockError::NotOnCycle,
        other => other.into(),
    })?;

    let mut values = blk.labeling().values().to_vec();
    values.push(blk.a());
    values.push(blk.b());
    let labeling = ModularLabeling::for_graph(&graph, blk.prime(), values)?;
    Ok(OpenBlock {
        graph,
        labeling,
        a_end: v_id.clone(),
        b_end: w2,
        a: blk.a(),
        b: blk.b(),
    })
}

/// Re-glue an open block: `v'` merges into the `a` end, the `b` end merges
/// into `w`, and the doubled `[v, w]` edge collapses. Inverse of [`make_h`].
pub fn close_h(h: &OpenBlock) -> Result<BuildingBlock, BlockError> {
    let g = &h.graph;
    let (w_id, v2_id) = h.inner_ends()?;
    let merge: HashMap<&VertexId, &VertexId> =
        [(&v2_id, &h.a_end), (&h.b_end, &w_id)].into_iter().collect();
    let target = |id: &VertexId| -> VertexId { (*merge.get(id).unwrap_or(&id)).clone() };

    let mut b = WeightedGraph::builder();
    let mut values = Vec::new();
    for (i, id) in g.ids().iter().enumerate() {
        if !merge.contains_key(id) {
            b.add_vertex(id.clone());
            values.push(h.labeling.get(i));
        }
    }
    let mut seen = BTreeSet::new();
    for e in g.edges() {
        let (x, y) = (target(g.id(e.u)), target(g.id(e.v)));
        let key = if x <= y { (x.clone(), y.clone()) } else { (y.clone(), x.clone()) };
        if seen.insert(key) {
            b.add_edge(x, y, e.mu, e.distinguished);
        }
    }
    let graph = b.build()?;
    let labeling = ModularLabeling::for_graph(&graph, h.prime(), values)?;
    BuildingBlock::new(graph, labeling, (h.a_end.clone(), w_id), h.a, h.b)
}

/// Splice `h` into the host edge `site`: the site edge disappears, the
/// host endpoint valued `a` becomes `h`'s `a` end and the one valued `b`
/// becomes its `b` end. `h`'s other vertices are renamed `{tag}/{id}`.
///
/// Edges grow by `|E(h)| - 1` and the first Betti number by `betti(h)`.
/// The local block conditions are re-checked on the result.
pub fn insert(
    host: &BuildingBlock,
    site: (&VertexId, &VertexId),
    h: &OpenBlock,
    tag: &str,
) -> Result<BuildingBlock, BlockError> {
    if host.prime() != h.prime() {
        return Err(BlockError::PrimeMismatch(host.prime(), h.prime()));
    }
    let hg = host.graph();
    let (mut x, mut y) = (hg.index_of(site.0)?, hg.index_of(site.1)?);
    if !hg.has_edge(x, y) {
        return Err(BlockError::Graph(GraphError::MissingEdge(site.0.clone(), site.1.clone())));
    }
    let lam = host.labeling();
    if (lam.get(x), lam.get(y)) == (h.b, h.a) && h.a != h.b {
        std::mem::swap(&mut x, &mut y);
    }
    if (lam.get(x), lam.get(y)) != (h.a, h.b) {
        return Err(BlockError::SiteValues {
            x: lam.get(x),
            y: lam.get(y),
            a: h.a,
            b: h.b,
        });
    }
    require_degree_two(hg, hg.id(x))?;
    require_degree_two(hg, hg.id(y))?;

    let (x_id, y_id) = (hg.id(x).clone(), hg.id(y).clone());
    let rename = |id: &VertexId| -> VertexId {
        if *id == h.a_end {
            x_id.clone()
        } else if *id == h.b_end {
            y_id.clone()
        } else {
            VertexId::new(format!("{tag}/{id}"))
        }
    };

    let mut b = WeightedGraph::builder();
    let mut values = lam.values().to_vec();
    for id in hg.ids() {
        b.add_vertex(id.clone());
    }
    for (i, id) in h.graph.ids().iter().enumerate() {
        if *id != h.a_end && *id != h.b_end {
            b.add_vertex(rename(id));
            values.push(h.labeling.get(i));
        }
    }
    let site_key = (x.min(y), x.max(y));
    for e in hg.edges() {
        if (e.u, e.v) != site_key {
            b.add_edge(hg.id(e.u).clone(), hg.id(e.v).clone(), e.mu, e.distinguished);
        }
    }
    for e in h.graph.edges() {
        b.add_edge(
            rename(h.graph.id(e.u)),
            rename(h.graph.id(e.v)),
            e.mu,
            e.distinguished,
        );
    }
    let graph = b.build()?;
    let labeling = ModularLabeling::for_graph(&graph, host.prime(), values)?;

    let (hv, hw) = host.boundary();
    let consumed = (hv == &x_id && hw == &y_id) || (hv == &y_id && hw == &x_id);
    let boundary = if consumed {
        let (w_inner, _) = h.inner_ends()?;
        (x_id.clone(), rename(&w_inner))
    } else {
        (hv.clone(), hw.clone())
    };
    let (a, b) = (host.a(), host.b());
    let out = BuildingBlock::new(graph, labeling, boundary, a, b)?;

    if let Some(c) = local_checks(out.graph(), out.labeling())
        .into_iter()
        .find(|c| c.blocking_failure())
    {
        return Err(BlockError::PostVerification {
            check: c.name,
            detail: c.detail,
        });
    }
    Ok(out)
}
