use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntegerMatrix;

/// `u * a * v == d` with `u`, `v` unimodular and `d` in Smith form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Invariant factors of the cokernel `Z^rows / image`, with units dropped
    /// and every free summand reported as `0`.
    pub fn cokernel_factors(&self) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = self
            .diagonal()
            .into_iter()
            .filter(|x| !x.is_one())
            .collect();
        // rows beyond the diagonal contribute free summands as well
        out.extend(std::iter::repeat_n(
            BigInt::zero(),
            self.d.rows().saturating_sub(self.d.cols()),
        ));
        out
    }
}

/// Smith normal form with transformation matrices.
///
/// The pivot at each stage is the nonzero entry of least absolute value in
/// the working submatrix, ties going to the lowest `(row, col)`. Diagonal
/// entries come out nonnegative; negations are applied to `u`.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    for k in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_pivot(&d, k) else {
                return SmithDecomposition { u, d, v };
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let pivot = d[(k, k)].clone();
            for i in k + 1..rows {
                let q = -(&d[(i, k)] / &pivot);
                d.add_row_multiple(i, k, &q);
                u.add_row_multiple(i, k, &q);
            }
            for j in k + 1..cols {
                let q = -(&d[(k, j)] / &pivot);
                d.add_col_multiple(j, k, &q);
                v.add_col_multiple(j, k, &q);
            }
            let leftovers = (k + 1..rows).any(|i| !d[(i, k)].is_zero())
                || (k + 1..cols).any(|j| !d[(k, j)].is_zero());
            if leftovers {
                // remainders are strictly smaller than the pivot
                continue;
            }
            let bad_row =
                (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            if let Some(i) = bad_row {
                let one = BigInt::one();
                d.add_row_multiple(k, i, &one);
                u.add_row_multiple(k, i, &one);
                continue;
            }
            if pivot.is_negative() {
                d.negate_row(k);
                u.negate_row(k);
            }
            break;
        }
    }
    SmithDecomposition { u, d, v }
}

fn min_pivot(d: &IntegerMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in k..d.rows() {
        for j in k..d.cols() {
            let x = d[(i, j)].abs();
            if x.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| x < *b) {
                best = Some((i, j, x));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}
