use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{AlgebraError, IntMatrix};

/// Deterministic primality test for `u64` (Miller-Rabin with a base set
/// that is exact below 2^64).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let f = PrimeField { p: n };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = f.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Arithmetic in `F_p`. Elements are plain `u64` in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, AlgebraError> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(AlgebraError::NotPrime(p))
        }
    }

    pub(crate) const fn new_unchecked(p: u64) -> Self {
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.p - b % self.p)
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        (a != 0).then(|| self.pow(a, self.p - 2))
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("reduced residue fits in u64")
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            return None;
        }
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }

    pub fn reduce_matrix(&self, m: &IntMatrix) -> Vec<Vec<u64>> {
        (0..m.rows())
            .map(|i| m.row(i).iter().map(|x| self.from_bigint(x)).collect())
            .collect()
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&self, rows: &mut [Vec<u64>]) -> Vec<usize> {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == rows.len() {
                break;
            }
            let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
                continue;
            };
            rows.swap(r, k);
            let inv = self.inv(rows[r][c]).expect("nonzero pivot");
            for x in rows[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for k in 0..rows.len() {
                if k != r && rows[k][c] != 0 {
                    let f = rows[k][c];
                    for j in c..ncols {
                        let t = self.mul(f, rows[r][j]);
                        rows[k][j] = self.sub(rows[k][j], t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

/// An element of `F_p` that carries its modulus, for code that is generic
/// over value groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModP {
    value: u64,
    p: u64,
}

impl ModP {
    /// `p` is assumed prime; `value` is reduced.
    pub fn new(value: u64, p: u64) -> Self {
        ModP { value: value % p, p }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn add(&self, other: &ModP) -> ModP {
        debug_assert_eq!(self.p, other.p);
        ModP::new(self.field().add(self.value, other.value), self.p)
    }

    pub fn sub(&self, other: &ModP) -> ModP {
        debug_assert_eq!(self.p, other.p);
        ModP::new(self.field().sub(self.value, other.value), self.p)
    }

    pub fn scale(&self, k: i64) -> ModP {
        let f = self.field();
        ModP::new(f.mul(self.value, f.from_i64(k)), self.p)
    }

    pub fn div_int(&self, k: u64) -> Option<ModP> {
        let f = self.field();
        f.inv(k).map(|inv| ModP::new(f.mul(self.value, inv), self.p))
    }
}

impl fmt::Display for ModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

pub fn rank_mod_p(m: &IntMatrix, p: u64) -> Result<usize, AlgebraError> {
    let f = PrimeField::new(p)?;
    let mut rows = f.reduce_matrix(m);
    Ok(f.rref(&mut rows).len())
}

/// Basis of `{x in F_p^n : m x = 0}`. Each basis vector has a 1 in its own
/// free column. An empty basis means only the trivial solution.
pub fn nullspace_mod_p(m: &IntMatrix, p: u64) -> Result<Vec<Vec<u64>>, AlgebraError> {
    let f = PrimeField::new(p)?;
    let n = m.cols();
    let mut rows = f.reduce_matrix(m);
    let pivots = f.rref(&mut rows);
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let basis = (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u64; n];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rows[r][free]);
            }
            v
        })
        .collect();
    Ok(basis)
}
