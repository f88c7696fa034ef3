//! The mixed red/green linear system on torus-valued vertex labelings.
//!
//! A decorated bipartite graph joins red vertices (decorated by `k_f`,
//! `k_inf`) to green vertices (decorated by `k_l`). A labeling
//! `λ : V → R^2/Z^2` must satisfy, at every red `v`,
//!
//! ```text
//! Σ_{w ~ v} mu(vw) λ(w) = (k_f(v) - 2 k_inf(v)) λ(v)
//! ```
//!
//! and at every green `v` either `3 Σ mu(vw) λ(w) = k_l(v) λ(v)` or
//! `λ(v)` is one of 25 special points `p_1 .. p_25`. Rows are stored as
//! `coeff · λ = 0`, i.e. red rows have `k_f - 2 k_inf` on the diagonal and
//! `-mu` off it, green rows `k_l` and `-3 mu`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{embed_fp_diagonally, torus_kernel, AlgebraError, IntMatrix, TorusKernel, TorusPoint};
use crate::graph::{GraphBuilder, GraphError, VertexId, WeightedGraph};
use crate::laplacian::ModularLabeling;

pub const SPECIAL_POINT_COUNT: u8 = 25;
pub const DEFAULT_BRANCH_CAP: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusSystemError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{got} decorations for {expected} vertices")]
    DecorationCount { expected: usize, got: usize },
    #[error("edge [{0}, {1}] does not join a red and a green vertex")]
    NotBipartite(VertexId, VertexId),
    #[error("decoration constraints violated: {}", list(.0))]
    InvalidDecorations(Vec<Violation>),
    #[error("`{0}` is not a green vertex")]
    BranchNotGreen(VertexId),
    #[error("no branch given for green vertex `{0}`")]
    MissingBranch(VertexId),
    #[error("special point index {0} outside 1..=25")]
    SpecialIndex(u8),
    #[error("{greens} green vertices give {branches} branch patterns, above the cap {cap}; select branches explicitly")]
    TooManyBranches {
        greens: usize,
        branches: String,
        cap: usize,
    },
    #[error("reduction preconditions fail: {}", list(.0))]
    Reduction(Vec<ReductionIssue>),
    #[error("no position given for special point p_{0}")]
    MissingSpecial(u8),
    #[error("labeling has {got} values for {expected} vertices")]
    LabelingSize { expected: usize, got: usize },
}

fn list<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decoration {
    Red { k_f: u64, k_inf: u64 },
    Green { k_l: u64 },
}

impl Decoration {
    pub fn color(&self) -> Color {
        match self {
            Decoration::Red { .. } => Color::Red,
            Decoration::Green { .. } => Color::Green,
        }
    }
}

/// Weight-constraint failure at one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub vertex: VertexId,
    pub color: Color,
    pub weighted_degree: u64,
    /// `2 k_f + k_inf` for red, `k_l` for green.
    pub required: u64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} vertex `{}` has weighted degree {} but needs {}",
            self.color, self.vertex, self.weighted_degree, self.required
        )
    }
}

/// Red/green decorated graph: every edge joins a red and a green vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedBipartiteGraph {
    graph: WeightedGraph,
    decorations: Vec<Decoration>,
}

impl DecoratedBipartiteGraph {
    /// `decorations` is indexed like `graph.ids()`.
    pub fn new(graph: WeightedGraph, decorations: Vec<Decoration>) -> Result<Self, TorusSystemError> {
        if decorations.len() != graph.vertex_count() {
            return Err(TorusSystemError::DecorationCount {
                expected: graph.vertex_count(),
                got: decorations.len(),
            });
        }
        for e in graph.edges() {
            if decorations[e.u].color() == decorations[e.v].color() {
                return Err(TorusSystemError::NotBipartite(
                    graph.id(e.u).clone(),
                    graph.id(e.v).clone(),
                ));
            }
        }
        Ok(DecoratedBipartiteGraph { graph, decorations })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn decorations(&self) -> &[Decoration] {
        &self.decorations
    }

    pub fn decoration(&self, i: usize) -> Decoration {
        self.decorations[i]
    }

    pub fn greens(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.decorations.len()).filter(|&i| self.decorations[i].color() == Color::Green)
    }

    pub fn reds(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.decorations.len()).filter(|&i| self.decorations[i].color() == Color::Red)
    }
}

/// Every vertex whose weighted degree disagrees with its decoration.
pub fn validate_decorations(d: &DecoratedBipartiteGraph) -> Vec<Violation> {
    let g = d.graph();
    (0..g.vertex_count())
        .filter_map(|i| {
            let deg = g.weighted_degree_at(i);
            let (color, required) = match d.decoration(i) {
                Decoration::Red { k_f, k_inf } => (Color::Red, 2 * k_f + k_inf),
                Decoration::Green { k_l } => (Color::Green, k_l),
            };
            (deg != required).then(|| Violation {
                vertex: g.id(i).clone(),
                color,
                weighted_degree: deg,
                required,
            })
        })
        .collect()
}

fn require_valid(d: &DecoratedBipartiteGraph) -> Result<(), TorusSystemError> {
    let v = validate_decorations(d);
    if v.is_empty() {
        Ok(())
    } else {
        Err(TorusSystemError::InvalidDecorations(v))
    }
}

/// Linear functional `c_f Σ k_f + c_inf Σ k_inf + c_l Σ k_l` for callers who
/// need a total degree of a decorated type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DegreeFunctional {
    pub per_k_f: i64,
    pub per_k_inf: i64,
    pub per_k_l: i64,
}

impl DegreeFunctional {
    pub fn total(&self, d: &DecoratedBipartiteGraph) -> i64 {
        d.decorations()
            .iter()
            .map(|dec| match *dec {
                Decoration::Red { k_f, k_inf } => {
                    self.per_k_f * k_f as i64 + self.per_k_inf * k_inf as i64
                }
                Decoration::Green { k_l } => self.per_k_l * k_l as i64,
            })
            .sum()
    }
}

/// Branch of a green vertex: the linear equation, or pinned to `p_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Equation,
    Special(u8),
}

impl Branch {
    pub fn kind(&self) -> BranchKind {
        match self {
            Branch::Equation => BranchKind::Equation,
            Branch::Special(_) => BranchKind::Special,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchKind {
    Equation,
    Special,
}

/// A branch for every green vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchAssignment {
    branches: BTreeMap<VertexId, Branch>,
}

impl BranchAssignment {
    pub fn all_equation(d: &DecoratedBipartiteGraph) -> Self {
        let branches = d
            .greens()
            .map(|i| (d.graph().id(i).clone(), Branch::Equation))
            .collect();
        BranchAssignment { branches }
    }

    pub fn new(
        d: &DecoratedBipartiteGraph,
        branches: BTreeMap<VertexId, Branch>,
    ) -> Result<Self, TorusSystemError> {
        for (id, b) in &branches {
            let i = d.graph().index_of(id)?;
            if d.decoration(i).color() != Color::Green {
                return Err(TorusSystemError::BranchNotGreen(id.clone()));
            }
            if let Branch::Special(k) = *b {
                if !(1..=SPECIAL_POINT_COUNT).contains(&k) {
                    return Err(TorusSystemError::SpecialIndex(k));
                }
            }
        }
        for i in d.greens() {
            let id = d.graph().id(i);
            if !branches.contains_key(id) {
                return Err(TorusSystemError::MissingBranch(id.clone()));
            }
        }
        Ok(BranchAssignment { branches })
    }

    pub fn get(&self, id: &VertexId) -> Option<Branch> {
        self.branches.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, &Branch)> {
        self.branches.iter()
    }
}

/// Coefficients of row `i` as `(column vertex, coefficient)`, diagonal
/// first. Red rows are built from `Σ mu λ(w) = (k_f - 2 k_inf) λ(v)` and
/// cross-checked against `Δ_mu λ(v) = (3 deg_mu(v) - 5 k_f) λ(v)`.
fn row_coefficients(d: &DecoratedBipartiteGraph, i: usize) -> Vec<(usize, i64)> {
    let g = d.graph();
    let mut row = Vec::with_capacity(g.degree(i) + 1);
    match d.decoration(i) {
        Decoration::Red { k_f, k_inf } => {
            let diag = k_f as i64 - 2 * k_inf as i64;
            let laplacian_form = 5 * k_f as i64 - 2 * g.weighted_degree_at(i) as i64;
            assert_eq!(
                diag, laplacian_form,
                "red row forms disagree at `{}`",
                g.id(i)
            );
            row.push((i, diag));
            row.extend(g.neighbors(i).map(|(w, mu)| (w, -(mu as i64))));
        }
        Decoration::Green { k_l } => {
            debug_assert_eq!(k_l, g.weighted_degree_at(i));
            row.push((i, k_l as i64));
            row.extend(g.neighbors(i).map(|(w, mu)| (w, -3 * mu as i64)));
        }
    }
    row
}

/// Square system over the non-pinned vertices.
///
/// The equations read `matrix · λ + Σ_i c_i p_i = 0`, the `c_i` per row
/// recorded in `special_terms`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusSystem {
    pub variables: Vec<VertexId>,
    pub matrix: IntMatrix,
    pub special_terms: Vec<Vec<(u8, BigInt)>>,
    pub pinned: Vec<(VertexId, u8)>,
}

pub fn build_system(
    d: &DecoratedBipartiteGraph,
    b: &BranchAssignment,
) -> Result<TorusSystem, TorusSystemError> {
    require_valid(d)?;
    let g = d.graph();
    let n = g.vertex_count();
    let mut pin = vec![None; n];
    for (id, branch) in b.iter() {
        if let Branch::Special(k) = *branch {
            pin[g.index_of(id)?] = Some(k);
        }
    }
    let free: Vec<usize> = (0..n).filter(|&i| pin[i].is_none()).collect();
    let mut column = vec![usize::MAX; n];
    for (c, &i) in free.iter().enumerate() {
        column[i] = c;
    }
    let mut matrix = IntMatrix::zeros(free.len(), free.len());
    let mut special_terms = Vec::with_capacity(free.len());
    for (r, &i) in free.iter().enumerate() {
        let mut terms: BTreeMap<u8, BigInt> = BTreeMap::new();
        for (w, c) in row_coefficients(d, i) {
            match pin[w] {
                None => matrix.add_to(r, column[w], c),
                Some(k) => *terms.entry(k).or_insert_with(BigInt::zero) += c,
            }
        }
        special_terms.push(terms.into_iter().filter(|(_, c)| !c.is_zero()).collect());
    }
    let pinned = (0..n)
        .filter_map(|i| pin[i].map(|k| (g.id(i).clone(), k)))
        .collect();
    Ok(TorusSystem {
        variables: free.iter().map(|&i| g.id(i).clone()).collect(),
        matrix,
        special_terms,
        pinned,
    })
}

/// Finiteness of one branch pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchOutcome {
    pub branch: BTreeMap<VertexId, BranchKind>,
    pub unknowns: usize,
    pub rank: usize,
    pub kernel: TorusKernel,
    /// Counts of patterns with pinned vertices are those of the homogeneous
    /// part, i.e. per fixed choice of special point positions.
    pub per_special_choice: bool,
}

fn analyze(d: &DecoratedBipartiteGraph, b: &BranchAssignment) -> Result<BranchOutcome, TorusSystemError> {
    let system = build_system(d, b)?;
    let kernel = torus_kernel(&system.matrix, 2)?;
    Ok(BranchOutcome {
        branch: b.iter().map(|(id, br)| (id.clone(), br.kind())).collect(),
        unknowns: system.variables.len(),
        rank: system.matrix.rank_over_rationals(),
        kernel,
        per_special_choice: !system.pinned.is_empty(),
    })
}

/// Analysis of one explicit branch assignment.
pub fn finiteness_for(
    d: &DecoratedBipartiteGraph,
    b: &BranchAssignment,
) -> Result<BranchOutcome, TorusSystemError> {
    analyze(d, b)
}

/// Every equation/special pattern over the green vertices, in lexicographic
/// order (greens in graph order, `equation < special`). Which of the 25
/// points a pinned vertex sits at does not change the count, so each
/// pattern stands for all its index choices.
pub fn finiteness(
    d: &DecoratedBipartiteGraph,
    cap: usize,
) -> Result<Vec<BranchOutcome>, TorusSystemError> {
    require_valid(d)?;
    let greens: Vec<usize> = d.greens().collect();
    let k = greens.len();
    let patterns = if k >= 64 { None } else { 1u64.checked_shl(k as u32) };
    let patterns = match patterns {
        Some(p) if p as u128 <= cap as u128 => p,
        _ => {
            return Err(TorusSystemError::TooManyBranches {
                greens: k,
                branches: format!("2^{k}"),
                cap,
            })
        }
    };
    (0..patterns)
        .into_par_iter()
        .map(|mask| {
            let branches = greens
                .iter()
                .enumerate()
                .map(|(j, &i)| {
                    let special = (mask >> (k - 1 - j)) & 1 == 1;
                    let br = if special { Branch::Special(1) } else { Branch::Equation };
                    (d.graph().id(i).clone(), br)
                })
                .collect();
            analyze(d, &BranchAssignment { branches })
        })
        .collect()
}

/// Per-red-vertex reason a graph does not fit the reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionIssue {
    pub vertex: VertexId,
    pub reason: String,
}

impl fmt::Display for ReductionIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`: {}", self.vertex, self.reason)
    }
}

/// Suppress the red vertices: each red vertex (with `k_f = 1`, `k_inf = 0`,
/// two unit-weight edges) becomes an edge between its two green neighbors.
pub fn reduce_to_gprime(d: &DecoratedBipartiteGraph) -> Result<WeightedGraph, TorusSystemError> {
    require_valid(d)?;
    let g = d.graph();
    let mut issues = Vec::new();
    let mut b = GraphBuilder::new();
    for i in d.greens() {
        b.add_vertex(g.id(i).clone());
    }
    let mut chains = BTreeMap::new();
    for r in d.reds() {
        let id = g.id(r).clone();
        if d.decoration(r) != (Decoration::Red { k_f: 1, k_inf: 0 }) {
            issues.push(ReductionIssue {
                vertex: id,
                reason: "needs k_f = 1 and k_inf = 0".into(),
            });
            continue;
        }
        let nbrs: Vec<(usize, u64)> = g.neighbors(r).collect();
        if nbrs.len() != 2 || nbrs.iter().any(|&(_, mu)| mu != 1) {
            issues.push(ReductionIssue {
                vertex: id,
                reason: format!("needs exactly two unit-weight edges, has degree {}", nbrs.len()),
            });
            continue;
        }
        let (a, c) = (nbrs[0].0, nbrs[1].0);
        if let Some(prev) = chains.insert((a.min(c), a.max(c)), id.clone()) {
            issues.push(ReductionIssue {
                vertex: id,
                reason: format!("parallel to `{prev}`: the reduced graph would not be simple"),
            });
            continue;
        }
        b.add_edge(g.id(a).clone(), g.id(c).clone(), 1, false);
    }
    if !issues.is_empty() {
        return Err(TorusSystemError::Reduction(issues));
    }
    Ok(b.build()?)
}

/// Inverse of [`reduce_to_gprime`]: subdivide every edge of a unit-weight
/// graph by a red vertex (`k_f = 1`, `k_inf = 0`); greens get `k_l = deg`.
/// Red ids are `"{u}~{v}"` for the edge `[u, v]`.
pub fn subdivide(gprime: &WeightedGraph) -> Result<DecoratedBipartiteGraph, TorusSystemError> {
    let mut b = GraphBuilder::new();
    let mut decorations = Vec::new();
    for i in 0..gprime.vertex_count() {
        b.add_vertex(gprime.id(i).clone());
        decorations.push(Decoration::Green {
            k_l: gprime.degree(i) as u64,
        });
    }
    for e in gprime.edges() {
        let (u, v) = (gprime.id(e.u), gprime.id(e.v));
        let red = VertexId::new(format!("{u}~{v}"));
        b.add_vertex(red.clone());
        decorations.push(Decoration::Red { k_f: 1, k_inf: 0 });
        b.add_edge(u.clone(), red.clone(), 1, false);
        b.add_edge(red, v.clone(), 1, false);
    }
    DecoratedBipartiteGraph::new(b.build()?, decorations)
}

/// Torus-valued labeling, indexed like the decorated graph's vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusLabeling {
    values: Vec<TorusPoint>,
}

impl TorusLabeling {
    pub fn new(values: Vec<TorusPoint>) -> Self {
        TorusLabeling { values }
    }

    pub fn zero(n: usize) -> Self {
        TorusLabeling {
            values: vec![TorusPoint::zero(); n],
        }
    }

    pub fn values(&self) -> &[TorusPoint] {
        &self.values
    }

    pub fn get(&self, i: usize) -> &TorusPoint {
        &self.values[i]
    }

    pub fn with_value(&self, i: usize, value: TorusPoint) -> Self {
        let mut values = self.values.clone();
        values[i] = value;
        TorusLabeling { values }
    }
}

/// Lift an `F_p` labeling of `gprime` to `d = subdivide(gprime)`: greens
/// by the diagonal embedding, each red as the sum of its two neighbors.
pub fn lift_modular_labeling(
    d: &DecoratedBipartiteGraph,
    gprime: &WeightedGraph,
    lam: &ModularLabeling,
) -> Result<TorusLabeling, TorusSystemError> {
    if lam.len() != gprime.vertex_count() {
        return Err(TorusSystemError::LabelingSize {
            expected: gprime.vertex_count(),
            got: lam.len(),
        });
    }
    let g = d.graph();
    let mut values = vec![TorusPoint::zero(); g.vertex_count()];
    for i in d.greens() {
        let j = gprime.index_of(g.id(i))?;
        values[i] = embed_fp_diagonally(lam.get(j), lam.prime())?;
    }
    for r in d.reds() {
        let sum = g
            .neighbor_indices(r)
            .fold(TorusPoint::zero(), |acc, w| acc.add(&values[w]));
        values[r] = sum;
    }
    Ok(TorusLabeling { values })
}

/// Exact residual of every row at `lam`; pinned vertices report
/// `λ(v) - p_i`. All residuals zero iff `lam` solves the system.
pub fn check_torus_solution(
    d: &DecoratedBipartiteGraph,
    b: &BranchAssignment,
    lam: &TorusLabeling,
    specials: &BTreeMap<u8, TorusPoint>,
) -> Result<Vec<(VertexId, TorusPoint)>, TorusSystemError> {
    require_valid(d)?;
    let g = d.graph();
    if lam.values.len() != g.vertex_count() {
        return Err(TorusSystemError::LabelingSize {
            expected: g.vertex_count(),
            got: lam.values.len(),
        });
    }
    (0..g.vertex_count())
        .map(|i| {
            let id = g.id(i);
            let residual = match b.get(id) {
                Some(Branch::Special(k)) => {
                    let p = specials.get(&k).ok_or(TorusSystemError::MissingSpecial(k))?;
                    lam.get(i).sub(p)
                }
                _ => row_coefficients(d, i)
                    .into_iter()
                    .fold(TorusPoint::zero(), |acc, (w, c)| {
                        acc.add(&lam.get(w).scale(&BigInt::from(c)))
                    }),
            };
            Ok((id.clone(), residual))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn example_35() -> DecoratedBipartiteGraph {
        let g = GraphBuilder::new()
            .vertex("R1")
            .vertex("R2")
            .vertex("G")
            .edge("R1", "G", 5)
            .edge("R2", "G", 5)
            .build()
            .unwrap();
        DecoratedBipartiteGraph::new(
            g,
            vec![
                Decoration::Red { k_f: 2, k_inf: 1 },
                Decoration::Red { k_f: 2, k_inf: 1 },
                Decoration::Green { k_l: 10 },
            ],
        )
        .unwrap()
    }

    fn path(k_f: u64, k_inf: u64) -> DecoratedBipartiteGraph {
        let g = WeightedGraph::from_edges([("w1", "v"), ("v", "w2")]).unwrap();
        DecoratedBipartiteGraph::new(
            g,
            vec![
                Decoration::Green { k_l: 1 },
                Decoration::Red { k_f, k_inf },
                Decoration::Green { k_l: 1 },
            ],
        )
        .unwrap()
    }

    #[test]
    fn example_35_decorations_and_system() {
        let d = example_35();
        assert!(validate_decorations(&d).is_empty());
        let sys = build_system(&d, &BranchAssignment::all_equation(&d)).unwrap();
        assert_eq!(
            sys.matrix,
            IntMatrix::from_rows(&[vec![0, 0, -5], vec![0, 0, -5], vec![-15, -15, 10]])
        );
        let report = finiteness(&d, DEFAULT_BRANCH_CAP).unwrap();
        assert_eq!(report.len(), 2);
        assert_eq!(report[0].rank, 2);
        assert_eq!(report[0].kernel, TorusKernel::Infinite { dimension: 2 });
        assert!(!report[0].per_special_choice);
        // green pinned: the two red rows lose their only coefficient
        assert_eq!(report[1].kernel, TorusKernel::Infinite { dimension: 4 });
        assert!(report[1].per_special_choice);
    }

    #[test]
    fn green_weight_mismatch_is_reported() {
        let d = example_35();
        let bad = DecoratedBipartiteGraph::new(
            d.graph().clone(),
            vec![d.decoration(0), d.decoration(1), Decoration::Green { k_l: 9 }],
        )
        .unwrap();
        let v = validate_decorations(&bad);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].vertex, VertexId::from("G"));
        assert!(matches!(
            build_system(&bad, &BranchAssignment::all_equation(&bad)),
            Err(TorusSystemError::InvalidDecorations(_))
        ));
    }

    #[test]
    fn unit_red_row_is_a_sum() {
        let d = path(1, 0);
        assert!(validate_decorations(&d).is_empty());
        let sys = build_system(&d, &BranchAssignment::all_equation(&d)).unwrap();
        assert_eq!(sys.matrix.row(1), &[BigInt::from(-1), BigInt::from(1), BigInt::from(-1)]);
        let report = finiteness(&d, DEFAULT_BRANCH_CAP).unwrap();
        assert_eq!(report[0].kernel, TorusKernel::Finite { count: BigUint::from(25u32) });
        let d = path(0, 2);
        let report = finiteness(&d, DEFAULT_BRANCH_CAP).unwrap();
        assert_eq!(report[0].kernel, TorusKernel::Finite { count: BigUint::from(100u32) });
    }

    #[test]
    fn monochromatic_edge_rejected() {
        let g = WeightedGraph::from_edges([("a", "b")]).unwrap();
        let err = DecoratedBipartiteGraph::new(
            g,
            vec![Decoration::Red { k_f: 0, k_inf: 1 }, Decoration::Red { k_f: 0, k_inf: 1 }],
        )
        .unwrap_err();
        assert!(matches!(err, TorusSystemError::NotBipartite(..)));
    }

    #[test]
    fn branch_cap_enforced() {
        let d = example_35();
        assert!(matches!(finiteness(&d, 1), Err(TorusSystemError::TooManyBranches { .. })));
    }

    #[test]
    fn special_pins_move_to_rhs() {
        let d = path(1, 0);
        let mut m = BTreeMap::new();
        m.insert(VertexId::from("w1"), Branch::Special(7));
        m.insert(VertexId::from("w2"), Branch::Equation);
        let b = BranchAssignment::new(&d, m).unwrap();
        let sys = build_system(&d, &b).unwrap();
        assert_eq!(sys.variables, vec![VertexId::from("v"), VertexId::from("w2")]);
        assert_eq!(sys.pinned, vec![(VertexId::from("w1"), 7)]);
        assert_eq!(sys.special_terms[0], vec![(7, BigInt::from(-1))]);
        assert!(sys.special_terms[1].is_empty());
    }

    #[test]
    fn branch_assignment_validation() {
        let d = path(1, 0);
        let mut m = BTreeMap::new();
        m.insert(VertexId::from("v"), Branch::Equation);
        assert!(matches!(BranchAssignment::new(&d, m), Err(TorusSystemError::BranchNotGreen(_))));
        let mut m = BTreeMap::new();
        m.insert(VertexId::from("w1"), Branch::Special(26));
        m.insert(VertexId::from("w2"), Branch::Equation);
        assert!(matches!(BranchAssignment::new(&d, m), Err(TorusSystemError::SpecialIndex(26))));
        let mut m = BTreeMap::new();
        m.insert(VertexId::from("w1"), Branch::Equation);
        assert!(matches!(BranchAssignment::new(&d, m), Err(TorusSystemError::MissingBranch(_))));
    }

    #[test]
    fn reduction_of_a_chain() {
        let d = path(1, 0);
        let gp = reduce_to_gprime(&d).unwrap();
        assert_eq!(gp, WeightedGraph::from_edges([("w1", "w2")]).unwrap());
        let err = reduce_to_gprime(&example_35()).unwrap_err();
        assert!(matches!(err, TorusSystemError::Reduction(ref v) if v.len() == 2));
    }

    #[test]
    fn red_vertex_of_degree_three_blocks_reduction() {
        let g = WeightedGraph::from_edges([("r", "a"), ("r", "b"), ("r", "c")]).unwrap();
        let d = DecoratedBipartiteGraph::new(
            g,
            vec![
                Decoration::Red { k_f: 1, k_inf: 1 },
                Decoration::Green { k_l: 1 },
                Decoration::Green { k_l: 1 },
                Decoration::Green { k_l: 1 },
            ],
        )
        .unwrap();
        assert!(validate_decorations(&d).is_empty());
        assert!(matches!(reduce_to_gprime(&d), Err(TorusSystemError::Reduction(_))));
    }

    #[test]
    fn zero_labeling_solves_everything() {
        let d = example_35();
        let b = BranchAssignment::all_equation(&d);
        let res = check_torus_solution(&d, &b, &TorusLabeling::zero(3), &BTreeMap::new()).unwrap();
        assert!(res.iter().all(|(_, r)| r.is_zero()));
    }

    #[test]
    fn missing_special_position_is_an_error() {
        let d = path(1, 0);
        let mut m = BTreeMap::new();
        m.insert(VertexId::from("w1"), Branch::Special(3));
        m.insert(VertexId::from("w2"), Branch::Equation);
        let b = BranchAssignment::new(&d, m).unwrap();
        let err = check_torus_solution(&d, &b, &TorusLabeling::zero(3), &BTreeMap::new());
        assert_eq!(err, Err(TorusSystemError::MissingSpecial(3)));
    }

    #[test]
    fn degree_functional_is_linear() {
        let d = example_35();
        let f = DegreeFunctional { per_k_f: 1, per_k_inf: 1, per_k_l: 0 };
        assert_eq!(f.total(&d), 6);
    }
}
