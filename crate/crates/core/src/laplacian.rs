//! Weighted graph Laplacians and the 5/3 eigen-equation over `F_p` and `Q`.
//!
//! The eigen-equation `Δλ = (5/3) λ` (normalized Laplacian) is handled in
//! its denominators-cleared integer form. For a general eigenvalue `n/d` and
//! weights `mu` the row of vertex `v` reads
//!
//! ```text
//! (n - d) deg_mu(v) λ(v) + d Σ_{w ~ v} mu(vw) λ(w) = 0
//! ```
//!
//! which for `5/3` and `mu ≡ 1` is `2 deg(v) λ(v) + 3 Σ λ(w) = 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::{is_prime, AlgebraError, IntMatrix, ModP, PrimeField, TorusPoint};
use crate::graph::{GraphError, VertexId, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaplacianError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("labeling has {got} values for a graph with {expected} vertices")]
    LabelingSize { expected: usize, got: usize },
    #[error("weighted degree {degree} of `{vertex}` is not invertible")]
    DegreeNotInvertible { vertex: VertexId, degree: u64 },
    #[error("edge weights must all be 1 here")]
    NonUnitWeights,
    #[error("vertex `{vertex}` has degree {degree} > 3")]
    DegreeTooLarge { vertex: VertexId, degree: usize },
    #[error("prime {0} is below 7")]
    PrimeTooSmall(u64),
}

/// Values a vertex labeling can take: any abelian group with an integer
/// action.
pub trait GroupValue: Clone + PartialEq {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn scale(&self, k: i64) -> Self;
}

/// Groups where division by a (nonzero, invertible) integer makes sense.
pub trait FieldValue: GroupValue {
    fn div_int(&self, k: u64) -> Option<Self>;
}

impl GroupValue for ModP {
    fn add(&self, other: &Self) -> Self {
        ModP::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        ModP::sub(self, other)
    }
    fn scale(&self, k: i64) -> Self {
        ModP::scale(self, k)
    }
}

impl FieldValue for ModP {
    fn div_int(&self, k: u64) -> Option<Self> {
        ModP::div_int(self, k)
    }
}

impl GroupValue for BigRational {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn scale(&self, k: i64) -> Self {
        self * BigRational::from_integer(k.into())
    }
}

impl FieldValue for BigRational {
    fn div_int(&self, k: u64) -> Option<Self> {
        (k != 0).then(|| self / BigRational::from_integer(k.into()))
    }
}

impl GroupValue for TorusPoint {
    fn add(&self, other: &Self) -> Self {
        TorusPoint::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        TorusPoint::sub(self, other)
    }
    fn scale(&self, k: i64) -> Self {
        TorusPoint::scale(self, &BigInt::from(k))
    }
}

fn check_len<T>(g: &WeightedGraph, f: &[T]) -> Result<(), LaplacianError> {
    if f.len() != g.vertex_count() {
        return Err(LaplacianError::LabelingSize {
            expected: g.vertex_count(),
            got: f.len(),
        });
    }
    Ok(())
}

pub(crate) fn unnormalized_at<T: GroupValue>(g: &WeightedGraph, f: &[T], i: usize) -> T {
    let zero = f[i].scale(0);
    g.neighbors(i).fold(zero, |acc, (w, mu)| {
        acc.add(&f[i].sub(&f[w]).scale(mu as i64))
    })
}

/// `Σ_{w ~ v} mu(vw) (f(v) - f(w))`. `f` is indexed like `g.ids()`.
pub fn laplacian_unnormalized<T: GroupValue>(
    g: &WeightedGraph,
    f: &[T],
    v: &VertexId,
) -> Result<T, LaplacianError> {
    check_len(g, f)?;
    let i = g.index_of(v)?;
    Ok(unnormalized_at(g, f, i))
}

/// The unnormalized Laplacian divided by `deg_mu(v)`; errors when the
/// weighted degree is not invertible in the value field.
pub fn laplacian_normalized<T: FieldValue>(
    g: &WeightedGraph,
    f: &[T],
    v: &VertexId,
) -> Result<T, LaplacianError> {
    let raw = laplacian_unnormalized(g, f, v)?;
    let degree = g.weighted_degree(v)?;
    raw.div_int(degree)
        .ok_or_else(|| LaplacianError::DegreeNotInvertible {
            vertex: v.clone(),
            degree,
        })
}

/// A rational eigenvalue `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Eigenvalue {
    pub num: i64,
    pub den: i64,
}

pub const FIVE_THIRDS: Eigenvalue = Eigenvalue { num: 5, den: 3 };

/// Integer matrix of the cleared eigen-equation: row `v` has
/// `(num - den) deg_mu(v)` on the diagonal and `den * mu(vw)` at each
/// neighbor `w`. Rows and columns follow `g.ids()`.
pub fn eigen_matrix_for(g: &WeightedGraph, eigenvalue: Eigenvalue) -> IntMatrix {
    let n = g.vertex_count();
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        let deg = g.weighted_degree_at(i) as i64;
        m.set(i, i, (eigenvalue.num - eigenvalue.den) * deg);
        for (w, mu) in g.neighbors(i) {
            m.set(i, w, eigenvalue.den * mu as i64);
        }
    }
    m
}

/// The 5/3 system: `2 deg(v)` on the diagonal, `3` per edge.
pub fn eigen_matrix(g: &WeightedGraph) -> IntMatrix {
    eigen_matrix_for(g, FIVE_THIRDS)
}

/// Candidate eigenvector `λ̂ : V → F_p`, indexed like the graph's vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModularLabeling {
    p: u64,
    values: Vec<u64>,
}

impl ModularLabeling {
    /// Requires `p ≥ 7` prime and every value in `[0, p)`.
    pub fn new(p: u64, values: Vec<u64>) -> Result<Self, LaplacianError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p).into());
        }
        if p < 7 {
            return Err(LaplacianError::PrimeTooSmall(p));
        }
        if let Some(&value) = values.iter().find(|&&x| x >= p) {
            return Err(AlgebraError::OutOfRange { value, p }.into());
        }
        Ok(ModularLabeling { p, values })
    }

    pub fn for_graph(g: &WeightedGraph, p: u64, values: Vec<u64>) -> Result<Self, LaplacianError> {
        check_len(g, &values)?;
        Self::new(p, values)
    }

    pub fn zero(g: &WeightedGraph, p: u64) -> Result<Self, LaplacianError> {
        Self::new(p, vec![0; g.vertex_count()])
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> u64 {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new_unchecked(self.p)
    }

    pub fn as_modp(&self) -> Vec<ModP> {
        self.values.iter().map(|&x| ModP::new(x, self.p)).collect()
    }

    /// Multiply every value by `c` (mod p).
    pub fn scaled(&self, c: u64) -> Self {
        let f = self.field();
        ModularLabeling {
            p: self.p,
            values: self.values.iter().map(|&x| f.mul(x, c)).collect(),
        }
    }

    pub fn with_value(&self, i: usize, value: u64) -> Self {
        let mut values = self.values.clone();
        values[i] = value % self.p;
        ModularLabeling { p: self.p, values }
    }
}

fn require_unit(g: &WeightedGraph) -> Result<(), LaplacianError> {
    if g.is_unit_weight() {
        Ok(())
    } else {
        Err(LaplacianError::NonUnitWeights)
    }
}

pub(crate) fn residual_at(g: &WeightedGraph, lam: &ModularLabeling, i: usize) -> u64 {
    let f = lam.field();
    let sum = g
        .neighbor_indices(i)
        .fold(0, |acc, w| f.add(acc, lam.get(w)));
    let deg = g.degree(i) as u64;
    f.add(f.mul(3, sum), f.mul(f.mul(2, deg), lam.get(i)))
}

/// `3 Σ_{w ~ v} λ(w) + 2 deg(v) λ(v) mod p`; zero at every vertex iff `λ`
/// is a 5/3 eigenvector.
pub fn eigen_residual(
    g: &WeightedGraph,
    lam: &ModularLabeling,
    v: &VertexId,
) -> Result<u64, LaplacianError> {
    require_unit(g)?;
    check_len(g, lam.values())?;
    Ok(residual_at(g, lam, g.index_of(v)?))
}

pub fn eigen_residuals(g: &WeightedGraph, lam: &ModularLabeling) -> Result<Vec<u64>, LaplacianError> {
    require_unit(g)?;
    check_len(g, lam.values())?;
    Ok((0..g.vertex_count()).map(|i| residual_at(g, lam, i)).collect())
}

pub fn is_eigenvector(g: &WeightedGraph, lam: &ModularLabeling) -> Result<bool, LaplacianError> {
    Ok(eigen_residuals(g, lam)?.iter().all(|&r| r == 0))
}

// 2^61 - 1 and 2^31 - 1; rank mod q never exceeds the rational rank
const CERTIFICATE_PRIMES: [u64; 2] = [(1 << 61) - 1, (1 << 31) - 1];

/// True iff the 5/3 system has only the zero solution over `Q` (hence `R`).
///
/// Full rank modulo any prime certifies full rational rank; only when both
/// certificate primes see a drop does this fall back to exact elimination.
pub fn rational_triviality(g: &WeightedGraph) -> Result<bool, LaplacianError> {
    require_unit(g)?;
    let m = eigen_matrix(g);
    let n = g.vertex_count();
    for q in CERTIFICATE_PRIMES {
        if crate::algebra::rank_mod_p(&m, q)? == n {
            return Ok(true);
        }
    }
    Ok(m.rank_over_rationals() == n)
}

/// No edge joins two degree-3 vertices. Sufficient (not necessary) for
/// [`rational_triviality`].
pub fn lemma37_sufficient(g: &WeightedGraph) -> Result<bool, LaplacianError> {
    require_unit(g)?;
    check_degree_cap(g)?;
    Ok(g
        .edges()
        .iter()
        .all(|e| !(g.degree(e.u) == 3 && g.degree(e.v) == 3)))
}

pub(crate) fn check_degree_cap(g: &WeightedGraph) -> Result<(), LaplacianError> {
    match (0..g.vertex_count()).find(|&i| g.degree(i) > 3) {
        Some(i) => Err(LaplacianError::DegreeTooLarge {
            vertex: g.id(i).clone(),
            degree: g.degree(i),
        }),
        None => Ok(()),
    }
}

/// Sum of the unnormalized Laplacian over all vertices; zero for any
/// labeling since each edge contributes antisymmetrically.
pub fn laplacian_total<T: GroupValue>(g: &WeightedGraph, f: &[T]) -> Result<T, LaplacianError> {
    check_len(g, f)?;
    let zero = f.first().map(|x| x.scale(0));
    Ok((0..g.vertex_count())
        .map(|i| unnormalized_at(g, f, i))
        .fold(zero.expect("non-empty graph"), |acc, x| acc.add(&x)))
}
