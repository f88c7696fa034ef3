//! JSON file format for graphs, labeled blocks and decorated graphs.
//!
//! ```json
//! {
//!   "prime": 23,
//!   "vertices": [{"id": "n0", "lambda": 1}, {"id": "n1", "lambda": 2}],
//!   "edges": [{"u": "n0", "v": "n1", "distinguished": true}],
//!   "boundary_edge": ["n0", "n1"], "a": 1, "b": 2
//! }
//! ```
//!
//! `lambda` is an integer in `[0, prime)` or a pair of rationals
//! `["a/b", "c/d"]` for torus labelings. Decorated graphs add `color`
//! (`"red"`/`"green"`) with `k_f`, `k_inf` or `k_l` per vertex. Edges take
//! `mu` (default 1) and `distinguished` (default false). Unknown fields are
//! rejected.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::TorusPoint;
use crate::blocks::{BlockError, BuildingBlock, OpenBlock};
use crate::graph::{GraphError, VertexId, WeightedGraph};
use crate::laplacian::{LaplacianError, ModularLabeling};
use crate::torus_system::{
    Branch, BranchAssignment, Color, DecoratedBipartiteGraph, Decoration, TorusLabeling,
    TorusSystemError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("file has labels but no `prime`")]
    MissingPrime,
    #[error("vertex `{0}` has no `lambda`")]
    MissingLambda(VertexId),
    #[error("file mixes integer and torus labels")]
    MixedLambda,
    #[error("bad rational `{0}`")]
    BadRational(String),
    #[error(transparent)]
    Labeling(#[from] LaplacianError),
    #[error("vertex `{0}` has no usable decoration")]
    MissingDecoration(VertexId),
    #[error(transparent)]
    Decoration(#[from] TorusSystemError),
    #[error("file has no `boundary_edge`")]
    MissingBoundary,
    #[error("file has no `open_ends`")]
    MissingOpenEnds,
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error("bad branch file: {0}")]
    Branch(String),
}

impl FormatError {
    pub fn code(&self) -> &'static str {
        match self {
            FormatError::Json(_) => "malformed-json",
            FormatError::Graph(e) => e.code(),
            FormatError::MissingPrime => "missing-prime",
            FormatError::MissingLambda(_) => "missing-lambda",
            FormatError::MixedLambda => "mixed-lambda",
            FormatError::BadRational(_) => "bad-rational",
            FormatError::Labeling(_) => "invalid-labeling",
            FormatError::MissingDecoration(_) => "missing-decoration",
            FormatError::Decoration(_) => "invalid-decoration",
            FormatError::MissingBoundary => "missing-boundary",
            FormatError::MissingOpenEnds => "missing-open-ends",
            FormatError::Block(_) => "invalid-block",
            FormatError::Branch(_) => "invalid-branch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaRecord {
    Modular(u64),
    Torus([String; 2]),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<LambdaRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<Color>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_f: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_inf: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_l: Option<u64>,
}

impl VertexRecord {
    fn plain(id: VertexId) -> Self {
        VertexRecord {
            id,
            lambda: None,
            color: None,
            k_f: None,
            k_inf: None,
            k_l: None,
        }
    }
}

fn one() -> u64 {
    1
}

fn is_one(x: &u64) -> bool {
    *x == 1
}

fn is_false(x: &bool) -> bool {
    !*x
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub u: VertexId,
    pub v: VertexId,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub mu: u64,
    #[serde(default, skip_serializing_if = "is_false")]
    pub distinguished: bool,
}

/// Raw file contents before any semantic checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_edge: Option<[VertexId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<u64>,
    /// Leaf ends `[a_end, b_end]` of a cut-open block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open_ends: Option<[VertexId; 2]>,
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))
    }

    pub fn from_graph(g: &WeightedGraph) -> Self {
        GraphFile {
            prime: None,
            vertices: g.ids().iter().cloned().map(VertexRecord::plain).collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    u: g.id(e.u).clone(),
                    v: g.id(e.v).clone(),
                    mu: e.mu,
                    distinguished: e.distinguished,
                })
                .collect(),
            boundary_edge: None,
            a: None,
            b: None,
            open_ends: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph files serialize");
        s.push('\n');
        s
    }

    pub fn graph(&self) -> Result<WeightedGraph, FormatError> {
        let mut b = WeightedGraph::builder();
        for v in &self.vertices {
            b.add_vertex(v.id.clone());
        }
        for e in &self.edges {
            b.add_edge(e.u.clone(), e.v.clone(), e.mu, e.distinguished);
        }
        Ok(b.build()?)
    }

    fn lambdas(&self) -> Result<Vec<&LambdaRecord>, FormatError> {
        self.vertices
            .iter()
            .map(|v| v.lambda.as_ref().ok_or_else(|| FormatError::MissingLambda(v.id.clone())))
            .collect()
    }

    pub fn has_labels(&self) -> bool {
        self.vertices.iter().any(|v| v.lambda.is_some())
    }

    pub fn modular_labeling(&self) -> Result<ModularLabeling, FormatError> {
        let p = self.prime.ok_or(FormatError::MissingPrime)?;
        let values = self
            .lambdas()?
            .into_iter()
            .map(|l| match l {
                LambdaRecord::Modular(x) => Ok(*x),
                LambdaRecord::Torus(_) => Err(FormatError::MixedLambda),
            })
            .collect::<Result<Vec<u64>, _>>()?;
        Ok(ModularLabeling::new(p, values)?)
    }

    pub fn torus_labeling(&self) -> Result<TorusLabeling, FormatError> {
        let values = self
            .lambdas()?
            .into_iter()
            .map(|l| match l {
                LambdaRecord::Torus([x, y]) => Ok(TorusPoint::new(parse_rational(x)?, parse_rational(y)?)),
                LambdaRecord::Modular(_) => Err(FormatError::MixedLambda),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TorusLabeling::new(values))
    }

    pub fn decorations(&self) -> Result<Vec<Decoration>, FormatError> {
        self.vertices
            .iter()
            .map(|v| {
                let missing = || FormatError::MissingDecoration(v.id.clone());
                match v.color {
                    Some(Color::Red) if v.k_l.is_none() => Ok(Decoration::Red {
                        k_f: v.k_f.ok_or_else(missing)?,
                        k_inf: v.k_inf.ok_or_else(missing)?,
                    }),
                    Some(Color::Green) if v.k_f.is_none() && v.k_inf.is_none() => {
                        Ok(Decoration::Green {
                            k_l: v.k_l.ok_or_else(missing)?,
                        })
                    }
                    _ => Err(missing()),
                }
            })
            .collect()
    }
}

fn parse_rational(s: &str) -> Result<BigRational, FormatError> {
    BigRational::from_str(s.trim()).map_err(|_| FormatError::BadRational(s.to_owned()))
}

fn rational_text(q: &BigRational) -> String {
    q.to_string()
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph, FormatError> {
    GraphFile::parse(text)?.graph()
}

pub fn serialize_graph(g: &WeightedGraph) -> String {
    GraphFile::from_graph(g).to_json()
}

/// Graph plus its `F_p` labeling.
pub fn parse_labeled(text: &str) -> Result<(WeightedGraph, ModularLabeling), FormatError> {
    let file = GraphFile::parse(text)?;
    let g = file.graph()?;
    let lam = file.modular_labeling()?;
    Ok((g, lam))
}

pub fn serialize_labeled(g: &WeightedGraph, lam: &ModularLabeling) -> String {
    let mut file = GraphFile::from_graph(g);
    file.prime = Some(lam.prime());
    for (rec, &x) in file.vertices.iter_mut().zip(lam.values()) {
        rec.lambda = Some(LambdaRecord::Modular(x));
    }
    file.to_json()
}

/// `a` and `b` default to the labels at the boundary endpoints.
pub fn parse_block(text: &str) -> Result<BuildingBlock, FormatError> {
    let file = GraphFile::parse(text)?;
    block_from_file(&file)
}

pub fn block_from_file(file: &GraphFile) -> Result<BuildingBlock, FormatError> {
    let g = file.graph()?;
    let lam = file.modular_labeling()?;
    let [v, w] = file.boundary_edge.clone().ok_or(FormatError::MissingBoundary)?;
    let a = match file.a {
        Some(a) => a,
        None => lam.get(g.index_of(&v)?),
    };
    let b = match file.b {
        Some(b) => b,
        None => lam.get(g.index_of(&w)?),
    };
    Ok(BuildingBlock::new(g, lam, (v, w), a, b)?)
}

pub fn serialize_block(blk: &BuildingBlock) -> String {
    let mut file = GraphFile::parse(&serialize_labeled(blk.graph(), blk.labeling()))
        .expect("own output parses");
    let (v, w) = blk.boundary();
    file.boundary_edge = Some([v.clone(), w.clone()]);
    file.a = Some(blk.a());
    file.b = Some(blk.b());
    file.to_json()
}

pub fn parse_open_block(text: &str) -> Result<OpenBlock, FormatError> {
    let file = GraphFile::parse(text)?;
    let g = file.graph()?;
    let lam = file.modular_labeling()?;
    let [a_end, b_end] = file.open_ends.clone().ok_or(FormatError::MissingOpenEnds)?;
    Ok(OpenBlock::new(g, lam, a_end, b_end)?)
}

pub fn serialize_open_block(h: &OpenBlock) -> String {
    let mut file = GraphFile::parse(&serialize_labeled(h.graph(), h.labeling()))
        .expect("own output parses");
    let (a_end, b_end) = h.ends();
    file.open_ends = Some([a_end.clone(), b_end.clone()]);
    file.to_json()
}

pub fn parse_decorated(text: &str) -> Result<DecoratedBipartiteGraph, FormatError> {
    let file = GraphFile::parse(text)?;
    let g = file.graph()?;
    let decorations = file.decorations()?;
    Ok(DecoratedBipartiteGraph::new(g, decorations)?)
}

/// Decorated graph with an optional torus labeling.
pub fn parse_decorated_labeled(
    text: &str,
) -> Result<(DecoratedBipartiteGraph, Option<TorusLabeling>), FormatError> {
    let file = GraphFile::parse(text)?;
    let d = DecoratedBipartiteGraph::new(file.graph()?, file.decorations()?)?;
    let lam = if file.has_labels() {
        Some(file.torus_labeling()?)
    } else {
        None
    };
    Ok((d, lam))
}

pub fn serialize_decorated(d: &DecoratedBipartiteGraph, lam: Option<&TorusLabeling>) -> String {
    let mut file = GraphFile::from_graph(d.graph());
    for (i, rec) in file.vertices.iter_mut().enumerate() {
        match d.decoration(i) {
            Decoration::Red { k_f, k_inf } => {
                rec.color = Some(Color::Red);
                rec.k_f = Some(k_f);
                rec.k_inf = Some(k_inf);
            }
            Decoration::Green { k_l } => {
                rec.color = Some(Color::Green);
                rec.k_l = Some(k_l);
            }
        }
        if let Some(lam) = lam {
            let p = lam.get(i);
            rec.lambda = Some(LambdaRecord::Torus([rational_text(p.x()), rational_text(p.y())]));
        }
    }
    file.to_json()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum BranchRecord {
    Special(u8),
    Named(String),
}

/// `{"vertex": "equation" | 1..25, ...}` for every green vertex.
pub fn parse_branches(
    text: &str,
    d: &DecoratedBipartiteGraph,
) -> Result<BranchAssignment, FormatError> {
    let raw: BTreeMap<VertexId, BranchRecord> =
        serde_json::from_str(text).map_err(|e| FormatError::Branch(e.to_string()))?;
    let mut branches = BTreeMap::new();
    for (id, rec) in raw {
        let b = match rec {
            BranchRecord::Special(k) => Branch::Special(k),
            BranchRecord::Named(s) if s == "equation" => Branch::Equation,
            BranchRecord::Named(s) => {
                return Err(FormatError::Branch(format!("`{id}`: unknown branch `{s}`")))
            }
        };
        branches.insert(id, b);
    }
    Ok(BranchAssignment::new(d, branches)?)
}

pub fn serialize_branches(assignment: &BranchAssignment) -> String {
    let map: BTreeMap<&VertexId, BranchRecord> = assignment
        .iter()
        .map(|(id, b)| {
            let rec = match b {
                Branch::Equation => BranchRecord::Named("equation".into()),
                Branch::Special(k) => BranchRecord::Special(*k),
            };
            (id, rec)
        })
        .collect();
    serde_json::to_string_pretty(&map).expect("branches serialize")
}
