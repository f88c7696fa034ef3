//! Exact-arithmetic toolkit for weighted graph Laplacian eigen-systems over
//! finite fields, rationals and the torus `R^2/Z^2`, together with the
//! building-block surgery used to assemble large graphs carrying `F_p`
//! eigenvectors for the eigenvalue 5/3.

pub mod algebra;
pub mod blocks;
pub mod corpus;
pub mod format;
pub mod graph;
pub mod laplacian;
pub mod report;
pub mod torus_system;

pub use algebra::{IntMatrix, TorusKernel, TorusPoint};
pub use graph::{GraphBuilder, GraphError, VertexId, WeightedGraph};
pub use laplacian::ModularLabeling;
pub use blocks::{BuildingBlock, ConstructionPlan, OpenBlock};
pub use report::{Check, Report, Witness};
pub use torus_system::{DecoratedBipartiteGraph, TorusLabeling};
