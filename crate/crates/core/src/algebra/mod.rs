//! Exact linear algebra: integer matrices, prime fields, Smith normal form
//! and kernels of integer matrices acting on real tori.
//!
//! Nothing in here touches floating point.

mod matrix;
mod modular;
mod smith;
mod torus;

pub use matrix::IntMatrix;
pub use modular::{is_prime, nullspace_mod_p, rank_mod_p, ModP, PrimeField};
pub use smith::{smith_normal_form, SmithForm};
pub use torus::{
    apply_mod_one, embed_fp_diagonally, finite_kernel_points, frac, torus_kernel, TorusKernel,
    TorusPoint,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("value {value} is outside [0, {p})")]
    OutOfRange { value: u64, p: u64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("kernel has {0} points, above the enumeration cap")]
    TooManyPoints(String),
}
