//! Monic orthogonal polynomial sequences.

use serde::Serialize;

use crate::combinat::rising_from;
use crate::error::OpsError;
use crate::functional::MomentFunctional;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// A monic OPS `P_0, P_1, ...` with recurrence
/// `x P_n = P_{n+1} + beta_n P_n + gamma_n P_{n-1}`, `P_{-1} = 0`, `gamma_0 = 0`.
///
/// With `beta_0..beta_L` known the cache holds `P_0..P_{L+1}` and the norms
/// `h_0..h_L`.
#[derive(Clone, Debug)]
pub struct MonicOps<S: Scalar> {
    ctx: S::Context,
    beta: Vec<S>,
    /// `gamma[n] = gamma_n`, with `gamma[0] = 0`.
    gamma: Vec<S>,
    polys: Vec<Polynomial<S>>,
    norms: Vec<S>,
    functional: Option<MomentFunctional<S>>,
}

/// Recurrence table row.
#[derive(Clone, Debug, Serialize)]
pub struct RecurrenceRow<S: Scalar> {
    pub n: usize,
    pub beta: S,
    pub gamma: S,
    pub norm: S,
}

impl<S: Scalar> MonicOps<S> {
    /// Stieltjes procedure: `beta_n = <u, x P_n^2>/h_n`, `gamma_n = h_n/h_{n-1}`,
    /// for `n <= n_max`. Needs moments up to degree `2 n_max + 1`.
    pub fn from_functional(u: &MomentFunctional<S>, n_max: usize) -> Result<Self, OpsError> {
        let ctx = u.context().clone();
        u.moment(2 * n_max + 1)?;
        let x = Polynomial::x(&ctx);
        let mut polys = vec![Polynomial::one(&ctx)];
        let mut beta = Vec::with_capacity(n_max + 1);
        let mut gamma = vec![S::zero(&ctx)];
        let mut norms = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let pn = &polys[n];
            let sq = pn * pn;
            let h = u.bracket(&sq)?;
            if h.is_negligible(&abs_bracket(u, &sq)) {
                return Err(OpsError::Regularity { index: n });
            }
            let b = u.bracket(&(&x * &sq))?.div(&h);
            if n > 0 {
                gamma.push(h.div(&norms[n - 1]));
            }
            let mut next = (&x * pn).sub_poly(&pn.scale(&b));
            if n > 0 {
                next = next.sub_poly(&polys[n - 1].scale(&gamma[n]));
            }
            beta.push(b);
            norms.push(h);
            polys.push(next);
        }
        Ok(MonicOps {
            ctx,
            beta,
            gamma,
            polys,
            norms,
            functional: Some(u.clone()),
        })
    }

    /// Sequence generated by `beta_0..beta_L` and `gamma_1..gamma_L`, with
    /// `h_0 = 1`.
    pub fn from_recurrence(ctx: &S::Context, beta: Vec<S>, gamma_from_one: Vec<S>) -> Result<Self, OpsError> {
        Self::from_recurrence_with_mass(ctx, beta, gamma_from_one, S::one(ctx))
    }

    pub fn from_recurrence_with_mass(
        ctx: &S::Context,
        beta: Vec<S>,
        gamma_from_one: Vec<S>,
        h0: S,
    ) -> Result<Self, OpsError> {
        if beta.is_empty() || gamma_from_one.len() + 1 != beta.len() {
            return Err(OpsError::RecurrenceShape {
                betas: beta.len(),
                gammas: gamma_from_one.len(),
            });
        }
        if let Some(i) = gamma_from_one.iter().position(S::is_zero) {
            return Err(OpsError::ZeroGamma { index: i + 1 });
        }
        let mut gamma = vec![S::zero(ctx)];
        gamma.extend(gamma_from_one);
        let x = Polynomial::x(ctx);
        let mut polys = vec![Polynomial::one(ctx)];
        let mut norms = vec![h0];
        for n in 0..beta.len() {
            let mut next = (&x * &polys[n]).sub_poly(&polys[n].scale(&beta[n]));
            if n > 0 {
                next = next.sub_poly(&polys[n - 1].scale(&gamma[n]));
                norms.push(norms[n - 1].mul(&gamma[n]));
            }
            polys.push(next);
        }
        Ok(MonicOps {
            ctx: ctx.clone(),
            beta,
            gamma,
            polys,
            norms,
            functional: None,
        })
    }

    /// Monic Hermite: `beta_n = 0`, `gamma_n = n/2`, `n <= n_max`.
    pub fn hermite(ctx: &S::Context, n_max: usize) -> Self {
        let beta = vec![S::zero(ctx); n_max + 1];
        let gamma = (1..=n_max).map(|n| S::from_ratio(ctx, n as i64, 2)).collect();
        Self::from_recurrence(ctx, beta, gamma).expect("Hermite gammas are nonzero")
    }

    /// Monic Laguerre `L^(alpha)`: `beta_n = 2n + alpha + 1`, `gamma_n = n(n + alpha)`.
    pub fn laguerre(alpha: &S, n_max: usize) -> Result<Self, OpsError> {
        let ctx = alpha.context();
        let beta = (0..=n_max)
            .map(|n| alpha.add(&S::from_i64(&ctx, 2 * n as i64 + 1)))
            .collect();
        let gamma = (1..=n_max)
            .map(|n| alpha.add(&S::from_i64(&ctx, n as i64)).mul_i64(n as i64))
            .collect();
        Self::from_recurrence(&ctx, beta, gamma)
    }

    /// Monic Jacobi for the weight `(1 - x)^alpha (1 + x)^beta` on `[-1, 1]`.
    pub fn jacobi(alpha: &S, beta: &S, n_max: usize) -> Result<Self, OpsError> {
        let ctx = alpha.context();
        let int = |v: usize| S::from_i64(&ctx, v as i64);
        let ab = alpha.add(beta);
        let b2a2 = beta.mul(beta).sub(&alpha.mul(alpha));
        let mut betas = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let s = ab.add(&int(2 * n));
            let value = if n == 0 {
                beta.sub(alpha).checked_div(&ab.add(&int(2)))
            } else {
                b2a2.checked_div(&s.mul(&s.add(&int(2))))
            };
            betas.push(value.ok_or(OpsError::Regularity { index: n })?);
        }
        let mut gammas = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let s = ab.add(&int(2 * n));
            let value = if n == 1 {
                let num = alpha.add(&int(1)).mul(&beta.add(&int(1))).mul_i64(4);
                let den = s.mul(&s).mul(&s.add(&int(1)));
                num.checked_div(&den)
            } else {
                let num = int(n)
                    .mul(&alpha.add(&int(n)))
                    .mul(&beta.add(&int(n)))
                    .mul(&ab.add(&int(n)))
                    .mul_i64(4);
                let den = s.mul(&s).mul(&s.add(&int(1))).mul(&s.sub(&int(1)));
                num.checked_div(&den)
            };
            gammas.push(value.ok_or(OpsError::Regularity { index: n })?);
        }
        Self::from_recurrence(&ctx, betas, gammas)
    }

    pub fn context(&self) -> &S::Context {
        &self.ctx
    }

    /// Largest `n` for which `beta_n`, `gamma_n` and `h_n` are known.
    pub fn n_max(&self) -> usize {
        self.beta.len() - 1
    }

    /// Largest cached polynomial index.
    pub fn max_poly_index(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, n: usize) -> Result<&Polynomial<S>, OpsError> {
        self.polys.get(n).ok_or(OpsError::OutOfRange {
            index: n,
            available: self.max_poly_index(),
        })
    }

    pub fn polys(&self) -> &[Polynomial<S>] {
        &self.polys
    }

    pub fn beta(&self, n: usize) -> Result<&S, OpsError> {
        self.beta.get(n).ok_or(OpsError::OutOfRange {
            index: n,
            available: self.n_max(),
        })
    }

    /// `gamma_n`; `gamma_0 = 0`.
    pub fn gamma(&self, n: usize) -> Result<&S, OpsError> {
        self.gamma.get(n).ok_or(OpsError::OutOfRange {
            index: n,
            available: self.n_max(),
        })
    }

    pub fn betas(&self) -> &[S] {
        &self.beta
    }

    /// `gamma_1..gamma_{n_max}`.
    pub fn gammas(&self) -> &[S] {
        &self.gamma[1..]
    }

    /// `h_n = <u, P_n^2>`.
    pub fn norm(&self, n: usize) -> Result<&S, OpsError> {
        self.norms.get(n).ok_or(OpsError::OutOfRange {
            index: n,
            available: self.n_max(),
        })
    }

    pub fn norms(&self) -> &[S] {
        &self.norms
    }

    pub fn functional(&self) -> Option<&MomentFunctional<S>> {
        self.functional.as_ref()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.norms[0].signum() > 0 && self.gammas().iter().all(|g| g.signum() > 0)
    }

    pub fn table(&self) -> Vec<RecurrenceRow<S>> {
        (0..=self.n_max())
            .map(|n| RecurrenceRow {
                n,
                beta: self.beta[n].clone(),
                gamma: self.gamma[n].clone(),
                norm: self.norms[n].clone(),
            })
            .collect()
    }

    /// `P_n^[m] = P_{n+m}^{(m)} / (n+1)_m`, monic of degree `n`.
    pub fn normalized_derivative(&self, m: usize, n: usize) -> Result<Polynomial<S>, OpsError> {
        let p = self.poly(n + m)?;
        let norm: S = rising_from(&self.ctx, n, m);
        Ok(p.derivative(m).scale(&S::one(&self.ctx).div(&norm)))
    }

    /// `P_0^[m] .. P_count-1^[m]`.
    pub fn normalized_derivatives(&self, m: usize, count: usize) -> Result<Vec<Polynomial<S>>, OpsError> {
        (0..count).map(|n| self.normalized_derivative(m, n)).collect()
    }

    /// Moments `<u, x^n>`, `n <= d`, recovered from the recurrence: `h_0` times the
    /// `P_0` coefficient of `x^n`.
    pub fn moments(&self, d: usize) -> Result<MomentFunctional<S>, OpsError> {
        let basis = self.polys.get(..=d).ok_or(OpsError::OutOfRange {
            index: d,
            available: self.max_poly_index(),
        })?;
        let moments = (0..=d)
            .map(|n| {
                let coeffs = expand_in_basis(&Polynomial::monomial(S::one(&self.ctx), n), basis)?;
                Ok(coeffs[0].mul(&self.norms[0]))
            })
            .collect::<Result<Vec<_>, OpsError>>()?;
        Ok(MomentFunctional::from_moments(&self.ctx, moments)?)
    }
}

/// `sum_j |p_j| |w_j|`: the cancellation-free scale of `<w, p>`, used as the
/// reference for float zero tests.
fn abs_bracket<S: Scalar>(w: &MomentFunctional<S>, p: &Polynomial<S>) -> S {
    p.coeffs()
        .iter()
        .zip(w.moments())
        .fold(S::zero(w.context()), |acc, (c, m)| acc.add(&c.abs().mul(&m.abs())))
}

/// Coefficients of `p` in a graded monic basis, one per basis element.
pub fn expand_in_basis<S: Scalar>(p: &Polynomial<S>, basis: &[Polynomial<S>]) -> Result<Vec<S>, OpsError> {
    let ctx = p.context();
    let mut out = vec![S::zero(ctx); basis.len()];
    let Some(d) = p.degree() else {
        return Ok(out);
    };
    if d >= basis.len() {
        return Err(OpsError::OutOfRange {
            index: d,
            available: basis.len().saturating_sub(1),
        });
    }
    for (j, b) in basis.iter().enumerate().take(d + 1) {
        if b.degree() != Some(j) || !b.is_monic() {
            return Err(OpsError::NotGradedMonic { index: j });
        }
    }
    let mut rem = p.clone();
    for j in (0..=d).rev() {
        let c = rem.coeff(j);
        if !c.is_zero() {
            rem = rem.sub_poly(&basis[j].scale(&c));
        }
        out[j] = c;
    }
    Ok(out)
}
