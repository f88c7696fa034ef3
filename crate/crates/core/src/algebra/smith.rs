use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `left * m * right = diagonal`, with `left` and `right` unimodular.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// The `min(rows, cols)` diagonal entries `d1 | d2 | ...`, non-negative,
    /// zeros last.
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left.rows(), self.right.cols());
        for (i, f) in self.invariant_factors.iter().enumerate() {
            d.set(i, i, f.clone());
        }
        d
    }
}

fn min_abs_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().map_or(true, |(_, b)| ax < *b) {
                best = Some(((i, j), ax));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Smith normal form by repeated Euclidean row/column reduction.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_nonzero(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);
        loop {
            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = a.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    a.add_row_multiple(i, t, &-&q);
                    left.add_row_multiple(i, t, &-&q);
                }
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = a.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    a.add_col_multiple(j, t, &-&q);
                    right.add_col_multiple(j, t, &-&q);
                }
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                // a remainder smaller than the pivot survived; move it in
                let mut best: Option<((usize, usize), BigInt)> = None;
                let cells = (t + 1..rows)
                    .map(|i| (i, t))
                    .chain((t + 1..cols).map(|j| (t, j)));
                for (i, j) in cells {
                    let x = a.get(i, j);
                    if !x.is_zero() && best.as_ref().map_or(true, |(_, b)| x.abs() < *b) {
                        best = Some(((i, j), x.abs()));
                    }
                }
                let ((i, j), _) = best.expect("unclean row/column has a nonzero entry");
                if j == t {
                    a.swap_rows(t, i);
                    left.swap_rows(t, i);
                } else {
                    a.swap_cols(t, j);
                    right.swap_cols(t, j);
                }
                continue;
            }
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }
    let invariant_factors = (0..rows.min(cols)).map(|i| a.get(i, i).clone()).collect();
    SmithForm {
        invariant_factors,
        rank: t,
        left,
        right,
    }
}
