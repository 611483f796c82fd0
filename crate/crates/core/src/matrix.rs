//! Polynomial matrices and determinants.
//!
//! Determinants use fraction-free (Bareiss) elimination: every intermediate entry
//! is an exact quotient by the previous pivot, so polynomial degrees stay bounded
//! by the corresponding minors instead of growing with each step.

use serde::Serialize;

use crate::error::AlgebraError;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

#[derive(Clone, Debug, Serialize)]
pub struct PolyMatrix<S: Scalar> {
    #[serde(skip)]
    ctx: S::Context,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Polynomial<S>>>,
}

impl<S: Scalar> PolyMatrix<S> {
    pub fn from_rows(ctx: &S::Context, entries: Vec<Vec<Polynomial<S>>>) -> Result<Self, AlgebraError> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        if entries.iter().any(|r| r.len() != cols) {
            return Err(AlgebraError::Ragged);
        }
        Ok(PolyMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn identity(ctx: &S::Context, n: usize) -> Self {
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Polynomial::one(ctx)
                        } else {
                            Polynomial::zero(ctx)
                        }
                    })
                    .collect()
            })
            .collect();
        PolyMatrix {
            ctx: ctx.clone(),
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<S> {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Polynomial<S>>] {
        &self.entries
    }

    /// Copy of the matrix with column `col` replaced by `column`.
    pub fn with_column(&self, col: usize, column: &[Polynomial<S>]) -> Result<Self, AlgebraError> {
        if col >= self.cols {
            return Err(AlgebraError::ColumnOutOfRange {
                col,
                cols: self.cols,
            });
        }
        if column.len() != self.rows {
            return Err(AlgebraError::ColumnLength {
                got: column.len(),
                expected: self.rows,
            });
        }
        let mut out = self.clone();
        for (row, entry) in out.entries.iter_mut().zip(column) {
            row[col] = entry.clone();
        }
        Ok(out)
    }

    /// Sum over rows of the largest entry degree; an upper bound for `deg det`.
    pub fn degree_bound(&self) -> usize {
        self.entries
            .iter()
            .map(|row| row.iter().filter_map(Polynomial::degree).max().unwrap_or(0))
            .sum()
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> Result<Polynomial<S>, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Polynomial::one(&self.ctx));
        }
        let mut a = self.entries.clone();
        let mut negate = false;
        let mut prev = Polynomial::one(&self.ctx);
        for k in 0..n - 1 {
            // Lowest-degree nonzero pivot keeps the intermediate products small.
            let Some(pivot_row) = (k..n)
                .filter(|&i| !a[i][k].is_zero())
                .min_by_key(|&i| a[i][k].degree())
            else {
                return Ok(Polynomial::zero(&self.ctx));
            };
            if pivot_row != k {
                a.swap(pivot_row, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    let (quot, rem) = num.div_rem(&prev)?;
                    debug_assert!(!S::EXACT || rem.is_zero(), "Bareiss step must divide exactly");
                    a[i][j] = quot;
                }
                a[i][k] = Polynomial::zero(&self.ctx);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if negate { -&d } else { d })
    }
}

/// Determinant of a scalar matrix by Gaussian elimination.
///
/// The exact backend pivots on the first nonzero entry; the float backend on the
/// entry of largest magnitude.
pub fn scalar_det<S: Scalar>(ctx: &S::Context, matrix: &[Vec<S>]) -> Result<S, AlgebraError> {
    let n = matrix.len();
    if matrix.iter().any(|r| r.len() != n) {
        return Err(AlgebraError::NotSquare {
            rows: n,
            cols: matrix.first().map_or(0, Vec::len),
        });
    }
    let mut a = matrix.to_vec();
    let mut det = S::one(ctx);
    for k in 0..n {
        let candidates = (k..n).filter(|&i| !a[i][k].is_zero());
        let pivot = if S::EXACT {
            candidates.min()
        } else {
            candidates.max_by(|&i, &j| a[i][k].to_f64().abs().total_cmp(&a[j][k].to_f64().abs()))
        };
        let Some(p) = pivot else {
            return Ok(S::zero(ctx));
        };
        if p != k {
            a.swap(p, k);
            det = det.neg();
        }
        det = det.mul(&a[k][k]);
        for i in k + 1..n {
            let factor = a[i][k].div(&a[k][k]);
            if factor.is_zero() {
                continue;
            }
            for j in k..n {
                a[i][j] = a[i][j].sub(&factor.mul(&a[k][j]));
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type P = Polynomial<Rational>;

    fn p(c: &[i64]) -> P {
        P::from_i64s(&(), c)
    }

    #[test]
    fn determinant_examples() {
        let m = PolyMatrix::from_rows(&(), vec![vec![p(&[0, 1]), p(&[1])], vec![p(&[1]), p(&[0, 1])]]).unwrap();
        assert_eq!(m.det().unwrap(), p(&[-1, 0, 1]));
        assert_eq!(PolyMatrix::<Rational>::identity(&(), 4).det().unwrap(), p(&[1]));
        let d = PolyMatrix::from_rows(&(), vec![vec![p(&[0, 1]), p(&[])], vec![p(&[]), p(&[0, 0, 1])]]).unwrap();
        assert_eq!(d.det().unwrap(), p(&[0, 0, 0, 1]));
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let m = PolyMatrix::from_rows(
            &(),
            vec![
                vec![p(&[]), p(&[1]), p(&[2])],
                vec![p(&[1]), p(&[0, 1]), p(&[])],
                vec![p(&[3]), p(&[]), p(&[0, 0, 1])],
            ],
        )
        .unwrap();
        // First-row expansion: -(x^2) + 2 * (-3x)
        assert_eq!(m.det().unwrap(), p(&[0, -6, -1]));
    }

    #[test]
    fn singular_and_non_square() {
        let m = PolyMatrix::from_rows(&(), vec![vec![p(&[0, 1]), p(&[0, 2])], vec![p(&[1]), p(&[2])]]).unwrap();
        assert!(m.det().unwrap().is_zero());
        let r = PolyMatrix::from_rows(&(), vec![vec![p(&[1]), p(&[2])]]).unwrap();
        assert_eq!(r.det(), Err(AlgebraError::NotSquare { rows: 1, cols: 2 }));
        assert_eq!(
            PolyMatrix::from_rows(&(), vec![vec![p(&[1])], vec![]]).unwrap_err(),
            AlgebraError::Ragged
        );
    }

    #[test]
    fn column_replacement() {
        let m = PolyMatrix::<Rational>::identity(&(), 2);
        let r = m.with_column(1, &[p(&[5]), p(&[0, 1])]).unwrap();
        assert_eq!(r.det().unwrap(), p(&[0, 1]));
        assert!(m.with_column(2, &[p(&[1]), p(&[1])]).is_err());
        assert!(m.with_column(0, &[p(&[1])]).is_err());
    }

    #[test]
    fn scalar_determinant() {
        let q = |n, d| Rational::new(n, d);
        let m = vec![
            vec![q(1, 1), q(0, 1), q(1, 2)],
            vec![q(0, 1), q(1, 2), q(0, 1)],
            vec![q(1, 2), q(0, 1), q(3, 4)],
        ];
        // Hankel matrix of the normalized Hermite moments.
        assert_eq!(scalar_det(&(), &m).unwrap(), q(1, 4));
    }
}
