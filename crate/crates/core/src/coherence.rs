//! Structure relations `pi P_n^[m] = sum_j c_{n,j} Q_j^[k]` and the coherence
//! verdict built on them.

use serde::Serialize;

use crate::error::CoherenceError;
use crate::functional::MomentFunctional;
use crate::ops::{expand_in_basis, MonicOps};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Full expansion coefficients: `rows[n][j] = c_{n,j}` for `j = 0..=n+N`.
#[derive(Clone, Debug)]
pub struct Band<S: Scalar> {
    ctx: S::Context,
    n_deg: usize,
    rows: Vec<Vec<S>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BandRow<S: Scalar> {
    pub n: usize,
    pub j_min: usize,
    pub coefficients: Vec<S>,
}

impl<S: Scalar> Band<S> {
    /// Number of computed rows minus one.
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// Degree of `pi`.
    pub fn n_deg(&self) -> usize {
        self.n_deg
    }

    pub fn row(&self, n: usize) -> Result<&[S], CoherenceError> {
        self.rows.get(n).map(Vec::as_slice).ok_or(CoherenceError::MissingRow {
            row: n,
            available: self.n_max(),
        })
    }

    /// `c_{n,j}`, zero outside `0..=n+N`.
    pub fn get(&self, n: usize, j: usize) -> Result<S, CoherenceError> {
        Ok(self.row(n)?.get(j).cloned().unwrap_or_else(|| S::zero(&self.ctx)))
    }

    /// Overwrite one coefficient (used to probe identity sensitivity).
    pub fn set(&mut self, n: usize, j: usize, value: S) -> Result<(), CoherenceError> {
        let available = self.n_max();
        let row = self.rows.get_mut(n).ok_or(CoherenceError::MissingRow { row: n, available })?;
        if j >= row.len() {
            row.resize(j + 1, S::zero(&self.ctx));
        }
        row[j] = value;
        Ok(())
    }

    fn row_is_zero(&self, n: usize, j: usize) -> bool {
        let row = &self.rows[n];
        let Some(c) = row.get(j) else {
            return true;
        };
        if S::EXACT {
            return c.is_zero();
        }
        let scale = row
            .iter()
            .max_by(|a, b| a.to_f64().abs().total_cmp(&b.to_f64().abs()))
            .expect("rows are nonempty");
        c.is_negligible(scale)
    }

    /// Rows restricted to `j >= max(0, n - M)`.
    pub fn rows_for_index(&self, big_m: usize) -> Vec<BandRow<S>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(n, row)| {
                let j_min = n.saturating_sub(big_m);
                BandRow {
                    n,
                    j_min,
                    coefficients: row[j_min.min(row.len())..].to_vec(),
                }
            })
            .collect()
    }
}

/// Expand `pi P_n^[m]` in `{Q_j^[k]}` for `n = 0..=n_max`, without assuming any
/// band structure.
pub fn compute_band<S: Scalar>(
    p: &MonicOps<S>,
    q: &MonicOps<S>,
    pi: &Polynomial<S>,
    m: usize,
    k: usize,
    n_max: usize,
) -> Result<Band<S>, CoherenceError> {
    if pi.is_zero() || !pi.is_monic() {
        return Err(CoherenceError::PiNotMonic);
    }
    let n_deg = pi.degree().expect("nonzero");
    let basis = q.normalized_derivatives(k, n_max + n_deg + 1)?;
    let rows = (0..=n_max)
        .map(|n| {
            let lhs = pi * &p.normalized_derivative(m, n)?;
            Ok(expand_in_basis(&lhs, &basis[..=n + n_deg])?)
        })
        .collect::<Result<Vec<_>, CoherenceError>>()?;
    Ok(Band {
        ctx: p.context().clone(),
        n_deg,
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    /// `c_{n,j} != 0` with `j < n - M`.
    Support,
    /// `c_{n,n+N} != 1`.
    Leading,
    /// `c_{n,n-M} = 0` for `n >= M`.
    Cond1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated { n: usize, j: usize, kind: Violation },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Check the coherence conditions of index `M` on rows `0..=n_max`.
///
/// Support violations are searched on all rows first, then the leading
/// coefficient, then the nonvanishing of `c_{n,n-M}`; the first failure found
/// is returned.
pub fn verify_coherence<S: Scalar>(band: &Band<S>, big_m: usize, n_max: usize) -> Result<Verdict, CoherenceError> {
    band.row(n_max)?;
    let n_deg = band.n_deg;
    for n in 0..=n_max {
        for j in 0..n.saturating_sub(big_m) {
            if !band.row_is_zero(n, j) {
                return Ok(Verdict::Violated {
                    n,
                    j,
                    kind: Violation::Support,
                });
            }
        }
    }
    for n in 0..=n_max {
        if !band.get(n, n + n_deg)?.is_one() {
            return Ok(Verdict::Violated {
                n,
                j: n + n_deg,
                kind: Violation::Leading,
            });
        }
    }
    for n in big_m..=n_max {
        if band.row_is_zero(n, n - big_m) {
            return Ok(Verdict::Violated {
                n,
                j: n - big_m,
                kind: Violation::Cond1,
            });
        }
    }
    Ok(Verdict::Holds)
}

/// Smallest index `M <= n_max` for which the band is coherent on `0..=n_max`.
pub fn minimal_index<S: Scalar>(band: &Band<S>, n_max: usize) -> Result<Option<usize>, CoherenceError> {
    for big_m in 0..=n_max {
        if verify_coherence(band, big_m, n_max)?.holds() {
            return Ok(Some(big_m));
        }
    }
    Ok(None)
}

/// Pair of functionals with their OPS, the multiplier `pi` of degree `N`, the
/// index `M`, the order `(m, k)` and the computed band.
#[derive(Clone, Debug)]
pub struct CoherencePair<S: Scalar> {
    pub u: MomentFunctional<S>,
    pub v: MomentFunctional<S>,
    pub p: MonicOps<S>,
    pub q: MonicOps<S>,
    pub pi: Polynomial<S>,
    /// Index `M`.
    pub big_m: usize,
    /// `N = deg pi`.
    pub big_n: usize,
    pub m: usize,
    pub k: usize,
    pub band: Band<S>,
}

impl<S: Scalar> CoherencePair<S> {
    /// OPS of `u` and `v` as deep as their moments allow, band on as many rows
    /// as the caches support.
    pub fn from_functionals(
        u: MomentFunctional<S>,
        v: MomentFunctional<S>,
        pi: Polynomial<S>,
        big_m: usize,
        m: usize,
        k: usize,
    ) -> Result<Self, CoherenceError> {
        let p = ops_for(&u)?;
        let q = ops_for(&v)?;
        Self::from_parts(u, v, p, q, pi, big_m, m, k)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        u: MomentFunctional<S>,
        v: MomentFunctional<S>,
        p: MonicOps<S>,
        q: MonicOps<S>,
        pi: Polynomial<S>,
        big_m: usize,
        m: usize,
        k: usize,
    ) -> Result<Self, CoherenceError> {
        if pi.is_zero() || !pi.is_monic() {
            return Err(CoherenceError::PiNotMonic);
        }
        let big_n = pi.degree().expect("nonzero");
        let rows_p = p.max_poly_index().checked_sub(m);
        let rows_q = q.max_poly_index().checked_sub(k + big_n);
        let (Some(rp), Some(rq)) = (rows_p, rows_q) else {
            return Err(CoherenceError::MissingRow { row: 0, available: 0 });
        };
        let band = compute_band(&p, &q, &pi, m, k, rp.min(rq))?;
        Ok(CoherencePair {
            u,
            v,
            p,
            q,
            pi,
            big_m,
            big_n,
            m,
            k,
            band,
        })
    }

    /// Rows available in the band.
    pub fn rows(&self) -> usize {
        self.band.n_max()
    }

    pub fn verdict(&self) -> Result<Verdict, CoherenceError> {
        verify_coherence(&self.band, self.big_m, self.band.n_max())
    }
}

fn ops_for<S: Scalar>(w: &MomentFunctional<S>) -> Result<MonicOps<S>, CoherenceError> {
    let d = w.max_degree();
    if d == 0 {
        return Err(crate::error::FunctionalError::DegreeBudget { needed: 1, available: 0 }.into());
    }
    Ok(MonicOps::from_functional(w, (d - 1) / 2)?)
}
