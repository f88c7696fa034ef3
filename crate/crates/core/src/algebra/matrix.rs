use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::AlgebraError;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: impl Into<BigInt>) {
        self.data[i * self.cols + j] = value.into();
    }

    pub fn add_to(&mut self, i: usize, j: usize, value: impl Into<BigInt>) {
        self.data[i * self.cols + j] += value.into();
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let s = self.data[source * self.cols + j].clone();
            self.data[target * self.cols + j] += factor * s;
        }
    }

    /// col[target] += factor * col[source]
    pub fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let s = self.data[i * self.cols + source].clone();
            self.data[i * self.cols + target] += factor * s;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -std::mem::take(x);
        }
    }

    /// Fraction-free (Bareiss) elimination. Returns the rank and, for square
    /// input, the determinant.
    fn bareiss(&self) -> (usize, Option<BigInt>) {
        let mut a = self.clone();
        let mut prev = BigInt::one();
        let mut rank = 0;
        let mut sign_flips = 0usize;
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let Some(pivot) = (rank..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            if pivot != rank {
                a.swap_rows(pivot, rank);
                sign_flips += 1;
            }
            let p = a.get(rank, col).clone();
            for r in rank + 1..a.rows {
                let f = a.get(r, col).clone();
                for c in col..a.cols {
                    let v = (&p * a.get(r, c) - &f * a.get(rank, c)) / &prev;
                    a.set(r, c, v);
                }
            }
            prev = p;
            rank += 1;
        }
        let det = if a.is_square() {
            if rank < a.rows {
                Some(BigInt::zero())
            } else if a.rows == 0 {
                Some(BigInt::one())
            } else {
                let d = a.get(a.rows - 1, a.cols - 1).clone();
                Some(if sign_flips % 2 == 1 { -d } else { d })
            }
        } else {
            None
        };
        (rank, det)
    }

    /// Exact rank over the rationals.
    pub fn rank_over_rationals(&self) -> usize {
        self.bareiss().0
    }

    pub fn determinant(&self) -> Result<BigInt, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.bareiss().1.expect("square"))
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(IntMatrix::identity(3).rank_over_rationals(), 3);
        assert_eq!(IntMatrix::zeros(2, 2).rank_over_rationals(), 0);
        // decorated three-vertex system with two parallel red rows
        let m = IntMatrix::from_rows(&[vec![0, 0, -5], vec![0, 0, -5], vec![-15, -15, 10]]);
        assert_eq!(m.rank_over_rationals(), 2);
        assert_eq!(m.determinant().unwrap(), BigInt::zero());
    }

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_rows(&[vec![2, 3], vec![3, 2]]);
        assert_eq!(m.determinant().unwrap(), BigInt::from(-5));
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.determinant().unwrap(), BigInt::from(-1));
        let m = IntMatrix::from_rows(&[vec![1, -1, -1], vec![-3, 1, 0], vec![-3, 0, 1]]);
        assert_eq!(m.determinant().unwrap(), BigInt::from(-5));
        assert!(IntMatrix::zeros(2, 3).determinant().is_err());
    }

    #[test]
    fn rectangular_rank_with_skipped_columns() {
        let m = IntMatrix::from_rows(&[vec![0, 2, 4, 1], vec![0, 1, 2, 0], vec![0, 3, 6, 1]]);
        assert_eq!(m.rank_over_rationals(), 2);
    }
}
