//! Weighted simple graphs and the invariant bookkeeping shared by every other
//! module: weighted degrees, first Betti number and hop distances.
//!
//! A [`WeightedGraph`] is immutable once built. Vertices carry opaque string
//! ids; internally everything is index based, and indices follow the order in
//! which vertices were added to the [`GraphBuilder`].

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Opaque vertex identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(id: impl Into<String>) -> Self {
        VertexId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_owned())
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex `{0}` declared twice")]
    DuplicateVertex(VertexId),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("loop edge at `{0}`")]
    LoopEdge(VertexId),
    #[error("duplicate edge [{0}, {1}]")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge [{0}, {1}] has weight 0")]
    ZeroWeight(VertexId, VertexId),
    #[error("vertex `{0}` is isolated")]
    IsolatedVertex(VertexId),
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("no edge [{0}, {1}]")]
    MissingEdge(VertexId, VertexId),
}

impl GraphError {
    /// Stable machine-readable code for each failure kind.
    pub fn code(&self) -> &'static str {
        match self {
            GraphError::Empty => "empty-graph",
            GraphError::DuplicateVertex(_) => "duplicate-vertex",
            GraphError::UnknownVertex(_) => "unknown-vertex",
            GraphError::LoopEdge(_) => "loop-edge",
            GraphError::DuplicateEdge(..) => "duplicate-edge",
            GraphError::ZeroWeight(..) => "zero-weight",
            GraphError::IsolatedVertex(_) => "isolated-vertex",
            GraphError::Disconnected(_) => "disconnected",
            GraphError::MissingEdge(..) => "missing-edge",
        }
    }
}

/// An undirected edge between vertex indices `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub mu: u64,
    pub distinguished: bool,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Simple connected graph with positive integer edge weights `mu` and a set
/// of distinguished (gluing) edges.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    edges: Vec<Edge>,
    // (neighbor, edge index), sorted by neighbor
    adjacency: Vec<Vec<(usize, usize)>>,
}

#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    ids: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId, u64, bool)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: impl Into<VertexId>) -> Self {
        self.add_vertex(id);
        self
    }

    pub fn add_vertex(&mut self, id: impl Into<VertexId>) {
        self.ids.push(id.into());
    }

    pub fn edge(mut self, u: impl Into<VertexId>, v: impl Into<VertexId>, mu: u64) -> Self {
        self.add_edge(u, v, mu, false);
        self
    }

    pub fn add_edge(
        &mut self,
        u: impl Into<VertexId>,
        v: impl Into<VertexId>,
        mu: u64,
        distinguished: bool,
    ) {
        self.edges.push((u.into(), v.into(), mu, distinguished));
    }

    pub fn build(self) -> Result<WeightedGraph, GraphError> {
        if self.ids.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut index = HashMap::with_capacity(self.ids.len());
        for (i, id) in self.ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(id.clone()));
            }
        }
        let lookup = |id: &VertexId| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| GraphError::UnknownVertex(id.clone()))
        };
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut adjacency = vec![Vec::new(); self.ids.len()];
        for (a, b, mu, distinguished) in &self.edges {
            let (x, y) = (lookup(a)?, lookup(b)?);
            if x == y {
                return Err(GraphError::LoopEdge(a.clone()));
            }
            if *mu == 0 {
                return Err(GraphError::ZeroWeight(a.clone(), b.clone()));
            }
            let (u, v) = (x.min(y), x.max(y));
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge(a.clone(), b.clone()));
            }
            adjacency[u].push((v, edges.len()));
            adjacency[v].push((u, edges.len()));
            edges.push(Edge {
                u,
                v,
                mu: *mu,
                distinguished: *distinguished,
            });
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let g = WeightedGraph {
            ids: self.ids,
            index,
            edges,
            adjacency,
        };
        if let Some(i) = (0..g.vertex_count()).find(|&i| g.adjacency[i].is_empty()) {
            return Err(GraphError::IsolatedVertex(g.ids[i].clone()));
        }
        let components = g.component_count();
        if components != 1 {
            return Err(GraphError::Disconnected(components));
        }
        Ok(g)
    }
}

impl WeightedGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    /// Unit-weight graph from an edge list over ids.
    pub fn from_edges<'a, I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut b = GraphBuilder::new();
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            for x in [u, v] {
                if seen.insert(x) {
                    b.add_vertex(x);
                }
            }
            b.add_edge(u, v, 1, false);
        }
        b.build()
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &VertexId {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &VertexId) -> Result<usize, GraphError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(id.clone()))
    }

    pub fn contains(&self, id: &VertexId) -> bool {
        self.index.contains_key(id)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// `(neighbor, mu)` pairs of vertex `i`, sorted by neighbor index.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.adjacency[i]
            .iter()
            .map(move |&(w, e)| (w, self.edges[e].mu))
    }

    pub fn neighbor_indices(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[i].iter().map(|&(w, _)| w)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    pub fn weighted_degree_at(&self, i: usize) -> u64 {
        self.neighbors(i).map(|(_, mu)| mu).sum()
    }

    /// Sum of the weights of the edges incident to `v`.
    pub fn weighted_degree(&self, v: &VertexId) -> Result<u64, GraphError> {
        Ok(self.weighted_degree_at(self.index_of(v)?))
    }

    pub fn is_unit_weight(&self) -> bool {
        self.edges.iter().all(|e| e.mu == 1)
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<&Edge> {
        let list = &self.adjacency[a];
        list.binary_search_by_key(&b, |&(w, _)| w)
            .ok()
            .map(|k| &self.edges[list[k].1])
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_between(a, b).is_some()
    }

    pub fn distinguished_edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(|e| e.distinguished)
    }

    pub fn component_count(&self) -> usize {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for w in self.neighbor_indices(x) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// `|E| - |V| + #components`.
    pub fn first_betti(&self) -> usize {
        self.edge_count() + self.component_count() - self.vertex_count()
    }

    /// Unweighted hop distances from `source`; `usize::MAX` marks unreachable.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            for w in self.neighbor_indices(x) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[x] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: &VertexId, b: &VertexId) -> Result<usize, GraphError> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        Ok(self.bfs_distances(i)[j])
    }

    /// Rebuilds the graph with the given set of distinguished edges.
    pub fn with_distinguished(
        &self,
        distinguished: &[(VertexId, VertexId)],
    ) -> Result<WeightedGraph, GraphError> {
        let mut marks = BTreeSet::new();
        for (a, b) in distinguished {
            let (i, j) = (self.index_of(a)?, self.index_of(b)?);
            if !self.has_edge(i, j) {
                return Err(GraphError::MissingEdge(a.clone(), b.clone()));
            }
            marks.insert((i.min(j), i.max(j)));
        }
        let mut g = self.clone();
        for e in &mut g.edges {
            e.distinguished = marks.contains(&(e.u, e.v));
        }
        Ok(g)
    }

    /// Builder pre-populated with this graph's vertices and edges.
    pub fn to_builder(&self) -> GraphBuilder {
        let mut b = GraphBuilder::new();
        for id in &self.ids {
            b.add_vertex(id.clone());
        }
        for e in &self.edges {
            b.add_edge(self.ids[e.u].clone(), self.ids[e.v].clone(), e.mu, e.distinguished);
        }
        b
    }

    /// Same graph with every vertex id passed through `rename`.
    pub fn relabel<F>(&self, mut rename: F) -> Result<WeightedGraph, GraphError>
    where
        F: FnMut(&VertexId) -> VertexId,
    {
        let new_ids: Vec<VertexId> = self.ids.iter().map(&mut rename).collect();
        let mut b = GraphBuilder::new();
        for id in &new_ids {
            b.add_vertex(id.clone());
        }
        for e in &self.edges {
            b.add_edge(new_ids[e.u].clone(), new_ids[e.v].clone(), e.mu, e.distinguished);
        }
        b.build()
    }

    fn edge_key_set(&self) -> BTreeSet<(&VertexId, &VertexId, u64, bool)> {
        self.edges
            .iter()
            .map(|e| {
                let (a, b) = (&self.ids[e.u], &self.ids[e.v]);
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                (a, b, e.mu, e.distinguished)
            })
            .collect()
    }
}

/// Structural equality: same vertex ids, same weighted edges, same marks.
impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count() == other.vertex_count()
            && self.ids.iter().all(|id| other.contains(id))
            && self.edge_key_set() == other.edge_key_set()
    }
}

impl Eq for WeightedGraph {}
