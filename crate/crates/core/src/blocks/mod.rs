//! Building blocks: labeled graphs carrying a 5/3 eigenvector over `F_p`,
//! their validation, the cut-open/insert surgery, the (degree, genus)
//! planner and a searcher for new blocks.

mod canon;
mod plan;
mod search;
mod surgery;

pub use canon::{canonical_form, CanonicalForm};
pub use plan::{
    frobenius_number, plan, plan_with, replay, standard_catalog, CatalogEntry, ConstructionPlan,
    PlanError, PlanOutcome, PlanStep,
};
pub use search::{search, SearchConstraints};
pub use surgery::{close_h, insert, make_h, OpenBlock};

use thiserror::Error;

use crate::graph::{GraphError, VertexId, WeightedGraph};
use crate::laplacian::{
    check_degree_cap, eigen_residuals, lemma37_sufficient, rational_triviality, residual_at,
    LaplacianError, ModularLabeling,
};
use crate::report::{Check, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Laplacian(#[from] LaplacianError),
    #[error("boundary [{0}, {1}] is not an edge")]
    BoundaryNotEdge(VertexId, VertexId),
    #[error("boundary [{0}, {1}] is not a distinguished edge")]
    BoundaryNotDistinguished(VertexId, VertexId),
    #[error("boundary edge is not on a cycle")]
    NotOnCycle,
    #[error("`{vertex}` has degree {degree}, expected 2")]
    SiteDegree { vertex: VertexId, degree: usize },
    #[error("site values ({x}, {y}) do not match block boundary values ({a}, {b})")]
    SiteValues { x: u64, y: u64, a: u64, b: u64 },
    #[error("primes differ: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("not an open block: {0}")]
    NotOpen(String),
    #[error("post-insertion check `{check}` failed: {detail}")]
    PostVerification { check: String, detail: String },
}

/// A labeled graph `(G, λ̂)` with a distinguished boundary edge `[v, w]`
/// whose endpoints have degree 2 and carry the values `(a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildingBlock {
    graph: WeightedGraph,
    labeling: ModularLabeling,
    boundary: (VertexId, VertexId),
    a: u64,
    b: u64,
    edge_count: usize,
    betti: usize,
}

impl BuildingBlock {
    /// Structural checks only: the labeling fits the graph and the boundary
    /// is a distinguished edge. Everything else is [`validate_block`]'s job.
    pub fn new(
        graph: WeightedGraph,
        labeling: ModularLabeling,
        boundary: (VertexId, VertexId),
        a: u64,
        b: u64,
    ) -> Result<Self, BlockError> {
        if labeling.len() != graph.vertex_count() {
            return Err(LaplacianError::LabelingSize {
                expected: graph.vertex_count(),
                got: labeling.len(),
            }
            .into());
        }
        let (v, w) = (graph.index_of(&boundary.0)?, graph.index_of(&boundary.1)?);
        let edge = graph
            .edge_between(v, w)
            .ok_or_else(|| BlockError::BoundaryNotEdge(boundary.0.clone(), boundary.1.clone()))?;
        if !edge.distinguished {
            return Err(BlockError::BoundaryNotDistinguished(boundary.0, boundary.1));
        }
        let p = labeling.prime();
        let (a, b) = (a % p, b % p);
        let edge_count = graph.edge_count();
        let betti = graph.first_betti();
        Ok(BuildingBlock {
            graph,
            labeling,
            boundary,
            a,
            b,
            edge_count,
            betti,
        })
    }

    /// Takes `(a, b)` from the labeling at the boundary endpoints.
    pub fn from_labeling(
        graph: WeightedGraph,
        labeling: ModularLabeling,
        boundary: (VertexId, VertexId),
    ) -> Result<Self, BlockError> {
        let a = labeling.get(graph.index_of(&boundary.0)?);
        let b = labeling.get(graph.index_of(&boundary.1)?);
        Self::new(graph, labeling, boundary, a, b)
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn labeling(&self) -> &ModularLabeling {
        &self.labeling
    }

    pub fn boundary(&self) -> (&VertexId, &VertexId) {
        (&self.boundary.0, &self.boundary.1)
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
        self.edge_count
    }

    pub fn betti(&self) -> usize {
        self.betti
    }

    pub fn value(&self, v: &VertexId) -> Result<u64, GraphError> {
        Ok(self.labeling.get(self.graph.index_of(v)?))
    }

    /// Same block with its labeling replaced (and `a`, `b` kept).
    pub fn with_labeling(&self, labeling: ModularLabeling) -> Result<Self, BlockError> {
        Self::new(
            self.graph.clone(),
            labeling,
            self.boundary.clone(),
            self.a,
            self.b,
        )
    }
}

/// Two vertices at distance 1 or 2 sharing a value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualPair {
    pub u: VertexId,
    pub v: VertexId,
    pub value: u64,
    pub distance: usize,
}

/// All violating pairs, each reported once with `u` before `v` in vertex
/// order.
pub fn distance2_conflicts(g: &WeightedGraph, lam: &ModularLabeling) -> Vec<EqualPair> {
    let mut out = Vec::new();
    for i in 0..g.vertex_count() {
        let mut near: Vec<(usize, usize)> = g.neighbor_indices(i).map(|w| (w, 1)).collect();
        for w in g.neighbor_indices(i) {
            for x in g.neighbor_indices(w) {
                if x != i && !g.has_edge(i, x) {
                    near.push((x, 2));
                }
            }
        }
        near.sort_unstable();
        near.dedup_by_key(|e| e.0);
        for (j, distance) in near {
            if j > i && lam.get(i) == lam.get(j) {
                out.push(EqualPair {
                    u: g.id(i).clone(),
                    v: g.id(j).clone(),
                    value: lam.get(i),
                    distance,
                });
            }
        }
    }
    out
}

pub fn check_distance2_distinct(blk: &BuildingBlock) -> Vec<EqualPair> {
    distance2_conflicts(&blk.graph, &blk.labeling)
}

/// A vertex and a proper nonempty neighbor subset whose restricted residual
/// `3 Σ_S λ + 2 |S| λ(v)` vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibilityWitness {
    pub vertex: VertexId,
    pub subset: Vec<VertexId>,
}

pub(crate) fn irreducibility_witness_at(
    g: &WeightedGraph,
    lam: &ModularLabeling,
    i: usize,
) -> Option<Vec<usize>> {
    let f = lam.field();
    let nbrs: Vec<usize> = g.neighbor_indices(i).collect();
    let k = nbrs.len();
    // subsets as bitmasks; skip empty and full
    (1u32..(1 << k) - 1).find_map(|mask| {
        let subset: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| nbrs[b]).collect();
        let sum = subset.iter().fold(0, |acc, &w| f.add(acc, lam.get(w)));
        let r = f.add(f.mul(3, sum), f.mul(2 * subset.len() as u64, lam.get(i)));
        (r == 0).then_some(subset)
    })
}

pub fn strong_irreducibility_witness(
    g: &WeightedGraph,
    lam: &ModularLabeling,
) -> Result<Option<IrreducibilityWitness>, LaplacianError> {
    check_degree_cap(g)?;
    if !g.is_unit_weight() {
        return Err(LaplacianError::NonUnitWeights);
    }
    Ok((0..g.vertex_count()).find_map(|i| {
        irreducibility_witness_at(g, lam, i).map(|s| IrreducibilityWitness {
            vertex: g.id(i).clone(),
            subset: s.into_iter().map(|w| g.id(w).clone()).collect(),
        })
    }))
}

pub fn check_strong_irreducibility(
    blk: &BuildingBlock,
) -> Result<Option<IrreducibilityWitness>, LaplacianError> {
    strong_irreducibility_witness(&blk.graph, &blk.labeling)
}

fn boundary_check(blk: &BuildingBlock) -> Check {
    let g = &blk.graph;
    let mut witnesses = Vec::new();
    for (id, expected) in [(&blk.boundary.0, blk.a), (&blk.boundary.1, blk.b)] {
        let i = g.index_of(id).expect("boundary exists");
        if g.degree(i) != 2 {
            witnesses.push(Witness::Vertex {
                vertex: id.clone(),
                detail: format!("degree {} (expected 2)", g.degree(i)),
            });
        }
        if blk.labeling.get(i) != expected {
            witnesses.push(Witness::Vertex {
                vertex: id.clone(),
                detail: format!("value {} (expected {expected})", blk.labeling.get(i)),
            });
        }
    }
    let detail = format!(
        "[{}, {}] with (a, b) = ({}, {})",
        blk.boundary.0, blk.boundary.1, blk.a, blk.b
    );
    if witnesses.is_empty() {
        Check::pass("boundary", detail)
    } else {
        Check::fail("boundary", format!("boundary mismatch at {detail}"), witnesses)
    }
}

fn error_check(name: &str, e: impl std::fmt::Display) -> Check {
    Check::fail(
        name,
        e.to_string(),
        vec![Witness::Value {
            detail: e.to_string(),
        }],
    )
}

fn eigen_check(g: &WeightedGraph, lam: &ModularLabeling) -> Check {
    match eigen_residuals(g, lam) {
        Ok(res) => {
            let witnesses: Vec<Witness> = res
                .iter()
                .enumerate()
                .filter(|(_, &r)| r != 0)
                .map(|(i, &r)| Witness::Residual {
                    vertex: g.id(i).clone(),
                    residual: r,
                })
                .collect();
            if witnesses.is_empty() {
                Check::pass("eigenvector", format!("all {} residuals vanish mod {}", res.len(), lam.prime()))
            } else {
                Check::fail(
                    "eigenvector",
                    format!("{} nonzero residual(s) mod {}", witnesses.len(), lam.prime()),
                    witnesses,
                )
            }
        }
        Err(e) => error_check("eigenvector", e),
    }
}

fn distance2_check(g: &WeightedGraph, lam: &ModularLabeling) -> Check {
    let pairs = distance2_conflicts(g, lam);
    if pairs.is_empty() {
        Check::pass("distance2_distinct", "values differ at distance 1 and 2")
    } else {
        let detail = format!("{} pair(s) share a value", pairs.len());
        let witnesses = pairs
            .into_iter()
            .map(|p| Witness::Pair {
                u: p.u,
                v: p.v,
                value: p.value,
                distance: p.distance,
            })
            .collect();
        Check::fail("distance2_distinct", detail, witnesses)
    }
}

fn irreducibility_check(g: &WeightedGraph, lam: &ModularLabeling) -> Check {
    match strong_irreducibility_witness(g, lam) {
        Ok(None) => Check::pass("strong_irreducibility", "no proper neighbor subset balances"),
        Ok(Some(w)) => Check::fail(
            "strong_irreducibility",
            format!("subset of N({}) balances", w.vertex),
            vec![Witness::Subset {
                vertex: w.vertex,
                subset: w.subset,
            }],
        ),
        Err(e) => error_check("strong_irreducibility", e),
    }
}

fn degree_check(g: &WeightedGraph) -> Check {
    let witnesses: Vec<Witness> = (0..g.vertex_count())
        .filter(|&i| g.degree(i) > 3)
        .map(|i| Witness::Vertex {
            vertex: g.id(i).clone(),
            detail: format!("degree {}", g.degree(i)),
        })
        .collect();
    if witnesses.is_empty() {
        Check::pass("degree_cap", format!("max degree {}", g.max_degree()))
    } else {
        Check::fail("degree_cap", "degree above 3", witnesses)
    }
}

fn no_adjacent_trivalent_check(g: &WeightedGraph) -> Check {
    let bad: Vec<Witness> = g
        .edges()
        .iter()
        .filter(|e| g.degree(e.u) == 3 && g.degree(e.v) == 3)
        .map(|e| Witness::Edge {
            u: g.id(e.u).clone(),
            v: g.id(e.v).clone(),
            detail: "both endpoints have degree 3".into(),
        })
        .collect();
    if bad.is_empty() {
        Check::pass("no_adjacent_trivalent", "no edge joins two degree-3 vertices")
    } else {
        Check::fail("no_adjacent_trivalent", "adjacent degree-3 vertices", bad)
    }
}

/// The checks that must survive an insertion: eigenvector, distance-2
/// distinctness, strong irreducibility and the no-adjacent-trivalent
/// condition.
pub(crate) fn local_checks(g: &WeightedGraph, lam: &ModularLabeling) -> Vec<Check> {
    vec![
        eigen_check(g, lam),
        distance2_check(g, lam),
        irreducibility_check(g, lam),
        no_adjacent_trivalent_check(g),
    ]
}

/// Every block condition, in a fixed order. The no-adjacent-trivalent
/// condition is advisory: it is sufficient for rational triviality, which
/// is checked directly.
pub fn validate_block(blk: &BuildingBlock) -> Vec<Check> {
    let mut checks = validate_labeled(&blk.graph, &blk.labeling);
    checks.push(boundary_check(blk));
    checks
}

/// [`validate_block`] minus the boundary-edge check, for labeled graphs
/// that have no boundary yet.
pub fn validate_labeled(g: &WeightedGraph, lam: &ModularLabeling) -> Vec<Check> {
    if lam.len() != g.vertex_count() {
        let e = LaplacianError::LabelingSize {
            expected: g.vertex_count(),
            got: lam.len(),
        };
        return vec![error_check("labeling", e)];
    }
    let mut checks = vec![Check::from_bool(
        "unit_weights",
        g.is_unit_weight(),
        if g.is_unit_weight() { "mu = 1 on every edge" } else { "some edge has mu != 1" },
    )];
    checks.push(degree_check(g));
    checks.push(eigen_check(g, lam));
    checks.push(rational_check(g));
    checks.push(match lemma37_sufficient(g) {
        Ok(_) => no_adjacent_trivalent_check(g).advisory(),
        Err(e) => error_check("no_adjacent_trivalent", e).advisory(),
    });
    checks.push(distance2_check(g, lam));
    checks.push(irreducibility_check(g, lam));
    checks
}

/// Rational triviality as a check, plus the advisory adjacency condition.
pub fn rational_checks(g: &WeightedGraph) -> Vec<Check> {
    vec![
        rational_check(g),
        match lemma37_sufficient(g) {
            Ok(_) => no_adjacent_trivalent_check(g).advisory(),
            Err(e) => error_check("no_adjacent_trivalent", e).advisory(),
        },
    ]
}

fn rational_check(g: &WeightedGraph) -> Check {
    match rational_triviality(g) {
        Ok(true) => Check::pass("rational_triviality", "5/3 system has only the zero solution over Q"),
        Ok(false) => {
            let rank = crate::laplacian::eigen_matrix(g).rank_over_rationals();
            Check::fail(
                "rational_triviality",
                "5/3 system has a nonzero rational solution",
                vec![Witness::Value {
                    detail: format!("rational rank {rank} of {}", g.vertex_count()),
                }],
            )
        }
        Err(e) => error_check("rational_triviality", e),
    }
}

pub fn block_is_valid(blk: &BuildingBlock) -> bool {
    validate_block(blk).iter().all(|c| !c.blocking_failure())
}

/// Residual at one vertex, for callers holding a block.
pub fn residual(blk: &BuildingBlock, v: &VertexId) -> Result<u64, BlockError> {
    Ok(residual_at(&blk.graph, &blk.labeling, blk.graph.index_of(v)?))
}
