use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{is_prime, smith_normal_form, AlgebraError, IntMatrix};

/// Fractional part, in `[0, 1)`.
pub fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

/// A point of `R^2 / Z^2` with exact rational coordinates, always stored
/// in its canonical representative `0 <= x, y < 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    x: BigRational,
    y: BigRational,
}

impl TorusPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        TorusPoint {
            x: frac(&x),
            y: frac(&y),
        }
    }

    pub fn zero() -> Self {
        TorusPoint {
            x: BigRational::zero(),
            y: BigRational::zero(),
        }
    }

    pub fn from_fractions(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        TorusPoint::new(
            BigRational::new(xn.into(), xd.into()),
            BigRational::new(yn.into(), yd.into()),
        )
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn y(&self) -> &BigRational {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn sub(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn scale(&self, k: &BigInt) -> TorusPoint {
        let k = BigRational::from_integer(k.clone());
        TorusPoint::new(&self.x * &k, &self.y * &k)
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `F_p = Z/p` sent diagonally into `(Z/p)^2 ⊂ R^2/Z^2`.
pub fn embed_fp_diagonally(value: u64, p: u64) -> Result<TorusPoint, AlgebraError> {
    if !is_prime(p) {
        return Err(AlgebraError::NotPrime(p));
    }
    if value >= p {
        return Err(AlgebraError::OutOfRange { value, p });
    }
    let q = BigRational::new(BigInt::from(value), BigInt::from(p));
    Ok(TorusPoint::new(q.clone(), q))
}

/// Solution set of `m x = 0` for `x` in `((R/Z)^dim)^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TorusKernel {
    /// Finitely many solutions: `|det m|^dim`.
    Finite {
        #[serde(with = "biguint_string")]
        count: BigUint,
    },
    /// Positive-dimensional solution set of real dimension `dim * (n - rank)`.
    Infinite { dimension: usize },
}

impl TorusKernel {
    pub fn is_finite(&self) -> bool {
        matches!(self, TorusKernel::Finite { .. })
    }
}

impl fmt::Display for TorusKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusKernel::Finite { count } => write!(f, "FINITE({count})"),
            TorusKernel::Infinite { dimension } => write!(f, "INFINITE(dimension {dimension})"),
        }
    }
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Kernel of the square integer matrix `m` acting coordinate-wise on
/// `((R/Z)^torus_dim)^n`.
pub fn torus_kernel(m: &IntMatrix, torus_dim: u32) -> Result<TorusKernel, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let snf = smith_normal_form(m);
    let n = m.rows();
    if snf.rank == n {
        let det: BigInt = snf.invariant_factors.iter().product();
        let count = det.abs().to_biguint().expect("non-negative").pow(torus_dim);
        Ok(TorusKernel::Finite { count })
    } else {
        Ok(TorusKernel::Infinite {
            dimension: torus_dim as usize * (n - snf.rank),
        })
    }
}

/// Every point of `{x in (Q/Z)^n : m x ≡ 0}` for one torus coordinate,
/// obtained from the Smith transforms. `None` when the kernel is infinite.
/// Points are canonical (entries in `[0, 1)`) and sorted.
pub fn finite_kernel_points(
    m: &IntMatrix,
    cap: usize,
) -> Result<Option<Vec<Vec<BigRational>>>, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let snf = smith_normal_form(m);
    if snf.rank < n {
        return Ok(None);
    }
    // m = L^-1 D R^-1, so m x ∈ Z^n  <=>  D (R^-1 x) ∈ Z^n; x = R z, z_i ∈ (1/d_i) Z
    let moduli: Vec<u64> = snf
        .invariant_factors
        .iter()
        .map(|d| d.to_u64().unwrap_or(u64::MAX))
        .collect();
    let total = moduli
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d as usize));
    match total {
        Some(t) if t <= cap => {}
        _ => {
            let det: BigInt = snf.invariant_factors.iter().product();
            return Err(AlgebraError::TooManyPoints(det.to_string()));
        }
    }
    let mut points = Vec::new();
    let mut digits = vec![0u64; n];
    loop {
        let z: Vec<BigRational> = digits
            .iter()
            .zip(&moduli)
            .map(|(&k, &d)| BigRational::new(k.into(), d.into()))
            .collect();
        let x: Vec<BigRational> = (0..n)
            .map(|i| {
                let s = (0..n).fold(BigRational::zero(), |acc, j| {
                    acc + BigRational::from_integer(snf.right.get(i, j).clone()) * &z[j]
                });
                frac(&s)
            })
            .collect();
        points.push(x);
        let mut k = 0;
        loop {
            if k == n {
                points.sort();
                return Ok(Some(points));
            }
            digits[k] += 1;
            if digits[k] < moduli[k] {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// `m x` reduced mod 1; used to check kernel membership.
pub fn apply_mod_one(m: &IntMatrix, x: &[BigRational]) -> Vec<BigRational> {
    (0..m.rows())
        .map(|i| {
            let s = (0..m.cols()).fold(BigRational::zero(), |acc, j| {
                acc + BigRational::from_integer(m.get(i, j).clone()) * &x[j]
            });
            frac(&s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finite(n: u64) -> TorusKernel {
        TorusKernel::Finite {
            count: BigUint::from(n),
        }
    }

    #[test]
    fn one_by_one_kernels() {
        let k = |x: i64| torus_kernel(&IntMatrix::from_rows(&[vec![x]]), 2).unwrap();
        assert_eq!(k(1), finite(1));
        assert_eq!(k(2), finite(4));
        assert_eq!(k(0), TorusKernel::Infinite { dimension: 2 });
        let one_dim = torus_kernel(&IntMatrix::from_rows(&[vec![3]]), 1).unwrap();
        assert_eq!(one_dim, finite(3));
    }

    #[test]
    fn non_square_rejected() {
        assert!(torus_kernel(&IntMatrix::zeros(1, 2), 2).is_err());
    }

    #[test]
    fn diagonal_embedding() {
        assert_eq!(embed_fp_diagonally(0, 23).unwrap(), TorusPoint::zero());
        assert_eq!(
            embed_fp_diagonally(1, 23).unwrap(),
            TorusPoint::from_fractions(1, 23, 1, 23)
        );
        assert_eq!(
            embed_fp_diagonally(22, 23).unwrap(),
            TorusPoint::from_fractions(22, 23, 22, 23)
        );
        assert!(embed_fp_diagonally(23, 23).is_err());
        assert!(embed_fp_diagonally(1, 21).is_err());
    }

    #[test]
    fn torus_point_is_canonical() {
        let p = TorusPoint::from_fractions(5, 3, -1, 4);
        assert_eq!(p, TorusPoint::from_fractions(2, 3, 3, 4));
        assert!(p.add(&TorusPoint::from_fractions(1, 3, 1, 4)).is_zero());
    }

    #[test]
    fn kernel_points_solve_the_system() {
        let m = IntMatrix::from_rows(&[vec![1, -1, -1], vec![-3, 1, 0], vec![-3, 0, 1]]);
        let pts = finite_kernel_points(&m, 1000).unwrap().unwrap();
        assert_eq!(pts.len(), 5);
        for x in &pts {
            assert!(apply_mod_one(&m, x).iter().all(Zero::is_zero));
        }
        let singular = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(finite_kernel_points(&singular, 10).unwrap(), None);
    }
}
