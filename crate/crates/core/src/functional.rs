//! Moment functionals as truncated moment sequences.
//!
//! A functional with moments `w_0..w_d` can act on polynomials of degree at most
//! `d`. Every operation tracks the degree up to which its result is known, so an
//! identity checked on the result certifies exactly that many moment equations.

use serde::Serialize;

use crate::combinat::pochhammer;
use crate::error::FunctionalError;
use crate::matrix::scalar_det;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

#[derive(Clone, Debug, Serialize)]
pub struct MomentFunctional<S: Scalar> {
    #[serde(skip)]
    ctx: S::Context,
    moments: Vec<S>,
}

/// Outcome of a momentwise comparison of two functionals.
#[derive(Clone, Debug, Serialize)]
pub struct MomentResidual<S: Scalar> {
    /// Moments `0..=checked_degree` were compared.
    pub checked_degree: usize,
    /// Largest `|a_n - b_n|` over the compared range.
    pub max_abs: S,
    /// First index where the moments differ beyond the backend tolerance.
    pub first_mismatch: Option<usize>,
}

impl<S: Scalar> MomentResidual<S> {
    pub fn holds(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

impl<S: Scalar> MomentFunctional<S> {
    pub fn from_moments(ctx: &S::Context, moments: Vec<S>) -> Result<Self, FunctionalError> {
        if moments.is_empty() {
            return Err(FunctionalError::Empty);
        }
        Ok(MomentFunctional {
            ctx: ctx.clone(),
            moments,
        })
    }

    /// The zero functional known up to degree `d`.
    pub fn zero(ctx: &S::Context, d: usize) -> Self {
        MomentFunctional {
            ctx: ctx.clone(),
            moments: vec![S::zero(ctx); d + 1],
        }
    }

    pub fn context(&self) -> &S::Context {
        &self.ctx
    }

    pub fn max_degree(&self) -> usize {
        self.moments.len() - 1
    }

    pub fn moments(&self) -> &[S] {
        &self.moments
    }

    pub fn moment(&self, n: usize) -> Result<&S, FunctionalError> {
        self.moments.get(n).ok_or(FunctionalError::DegreeBudget {
            needed: n,
            available: self.max_degree(),
        })
    }

    fn budget(&self, needed: usize) -> Result<(), FunctionalError> {
        if needed > self.max_degree() {
            Err(FunctionalError::DegreeBudget {
                needed,
                available: self.max_degree(),
            })
        } else {
            Ok(())
        }
    }

    /// Rescaled so that `w_0 = 1`.
    pub fn normalized(&self) -> Result<Self, FunctionalError> {
        let w0 = &self.moments[0];
        if w0.is_zero() {
            return Err(FunctionalError::ZeroMass);
        }
        Ok(self.map(|w| w.div(w0)))
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|w| w.mul(c))
    }

    fn map(&self, f: impl Fn(&S) -> S) -> Self {
        MomentFunctional {
            ctx: self.ctx.clone(),
            moments: self.moments.iter().map(f).collect(),
        }
    }

    pub fn truncated(&self, d: usize) -> Result<Self, FunctionalError> {
        self.budget(d)?;
        Ok(MomentFunctional {
            ctx: self.ctx.clone(),
            moments: self.moments[..=d].to_vec(),
        })
    }

    /// `<w, p> = sum_j p_j w_j`.
    pub fn bracket(&self, p: &Polynomial<S>) -> Result<S, FunctionalError> {
        if let Some(d) = p.degree() {
            self.budget(d)?;
        }
        Ok(p
            .coeffs()
            .iter()
            .zip(&self.moments)
            .fold(S::zero(&self.ctx), |acc, (c, w)| acc.add(&c.mul(w))))
    }

    /// Left product: `<phi w, x^n> = <w, phi x^n>`, known up to `d - deg phi`.
    pub fn left_multiply(&self, phi: &Polynomial<S>) -> Result<Self, FunctionalError> {
        let Some(dphi) = phi.degree() else {
            return Ok(MomentFunctional::zero(&self.ctx, self.max_degree()));
        };
        self.budget(dphi)?;
        let moments = (0..=self.max_degree() - dphi)
            .map(|n| {
                phi.coeffs()
                    .iter()
                    .enumerate()
                    .fold(S::zero(&self.ctx), |acc, (i, c)| acc.add(&c.mul(&self.moments[n + i])))
            })
            .collect();
        Ok(MomentFunctional {
            ctx: self.ctx.clone(),
            moments,
        })
    }

    /// Distributional derivative of the given order: `(Dw)_n = -n w_{n-1}`.
    /// Each application adds one moment to the known range.
    pub fn derivative(&self, order: usize) -> Self {
        let mut w = self.clone();
        for _ in 0..order {
            let mut next = Vec::with_capacity(w.moments.len() + 1);
            next.push(S::zero(&self.ctx));
            for (n, m) in w.moments.iter().enumerate() {
                next.push(m.mul_i64(-(n as i64 + 1)));
            }
            w.moments = next;
        }
        w
    }

    /// `<w(s .), x^n> = s^n w_n`.
    pub fn dilate(&self, s: &S) -> Result<Self, FunctionalError> {
        if s.is_zero() {
            return Err(FunctionalError::ZeroDilation);
        }
        let mut power = S::one(&self.ctx);
        let moments = self
            .moments
            .iter()
            .map(|w| {
                let out = w.mul(&power);
                power = power.mul(s);
                out
            })
            .collect();
        Ok(MomentFunctional {
            ctx: self.ctx.clone(),
            moments,
        })
    }

    /// Sum, known on the common degree range.
    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, S::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, S::sub)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        MomentFunctional {
            ctx: self.ctx.clone(),
            moments: self.moments.iter().zip(&other.moments).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Momentwise comparison on `0..=d`.
    pub fn compare(&self, other: &Self, d: usize) -> Result<MomentResidual<S>, FunctionalError> {
        self.budget(d)?;
        other.budget(d)?;
        let mut max_abs = S::zero(&self.ctx);
        let mut first_mismatch = None;
        for n in 0..=d {
            let (a, b) = (&self.moments[n], &other.moments[n]);
            let diff = a.sub(b).abs();
            if diff.sub(&max_abs).signum() > 0 {
                max_abs = diff;
            }
            if first_mismatch.is_none() && !a.approx_eq(b) {
                first_mismatch = Some(n);
            }
        }
        Ok(MomentResidual {
            checked_degree: d,
            max_abs,
            first_mismatch,
        })
    }

    /// Moments agree on `0..=d`, up to a common nonzero factor if `scale_free`.
    pub fn equals_up_to(&self, other: &Self, d: usize, scale_free: bool) -> Result<bool, FunctionalError> {
        if !scale_free {
            return Ok(self.compare(other, d)?.holds());
        }
        self.budget(d)?;
        other.budget(d)?;
        let a = &self.moments[..=d];
        let b = &other.moments[..=d];
        // Pivot on the largest moment of `self` so the ratio is well conditioned.
        let pivot = (0..=d)
            .filter(|&i| !a[i].is_zero())
            .max_by(|&i, &j| a[i].to_f64().abs().total_cmp(&a[j].to_f64().abs()));
        let Some(p) = pivot else {
            return Ok(b.iter().all(S::is_zero));
        };
        if b[p].is_zero() {
            return Ok(false);
        }
        let lambda = b[p].div(&a[p]);
        Ok(a.iter().zip(b).all(|(x, y)| x.mul(&lambda).approx_eq(y)))
    }

    /// `Delta_k = det[w_{i+j}]_{i,j=0..k}`.
    pub fn hankel_determinant(&self, k: usize) -> Result<S, FunctionalError> {
        self.budget(2 * k)?;
        let h: Vec<Vec<S>> = (0..=k)
            .map(|i| (0..=k).map(|j| self.moments[i + j].clone()).collect())
            .collect();
        Ok(scalar_det(&self.ctx, &h).expect("Hankel matrix is square"))
    }

    /// `Delta_k != 0` for every `k <= n`.
    pub fn hankel_regular(&self, n: usize) -> Result<bool, FunctionalError> {
        self.budget(2 * n)?;
        for k in 0..=n {
            if self.hankel_determinant(k)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Normalized moments of `e^{-x^2}` on the real line.
    pub fn hermite(ctx: &S::Context, d: usize) -> Self {
        let half = S::from_ratio(ctx, 1, 2);
        let moments = (0..=d)
            .map(|n| {
                if n % 2 == 1 {
                    S::zero(ctx)
                } else {
                    pochhammer(&half, n / 2)
                }
            })
            .collect();
        MomentFunctional {
            ctx: ctx.clone(),
            moments,
        }
    }

    /// Normalized moments `(alpha + 1)_n` of `x^alpha e^{-x}` on the half line.
    pub fn laguerre(alpha: &S, d: usize) -> Result<Self, FunctionalError> {
        let ctx = alpha.context();
        let a1 = alpha.add(&S::one(&ctx));
        if a1.is_zero() {
            return Err(FunctionalError::InvalidParameter(format!(
                "laguerre alpha = {alpha} gives a vanishing total mass"
            )));
        }
        let mut moments = Vec::with_capacity(d + 1);
        let mut w = S::one(&ctx);
        for n in 0..=d {
            moments.push(w.clone());
            w = w.mul(&a1.add(&S::from_i64(&ctx, n as i64)));
        }
        Ok(MomentFunctional { ctx, moments })
    }

    /// Normalized moments of `(1 - x)^alpha (1 + x)^beta` on `[-1, 1]`, from
    /// `(n + alpha + beta + 2) w_{n+1} = (beta - alpha) w_n + n w_{n-1}`.
    pub fn jacobi(alpha: &S, beta: &S, d: usize) -> Result<Self, FunctionalError> {
        let ctx = alpha.context();
        let ab2 = alpha.add(beta).add(&S::from_i64(&ctx, 2));
        let diff = beta.sub(alpha);
        let mut moments = vec![S::one(&ctx)];
        for n in 0..d {
            let denom = ab2.add(&S::from_i64(&ctx, n as i64));
            if denom.is_zero() {
                return Err(FunctionalError::InvalidParameter(format!(
                    "jacobi parameters alpha = {alpha}, beta = {beta} make the moment recurrence singular"
                )));
            }
            let mut num = diff.mul(&moments[n]);
            if n > 0 {
                num = num.add(&moments[n - 1].mul_i64(n as i64));
            }
            moments.push(num.div(&denom));
        }
        Ok(MomentFunctional { ctx, moments })
    }
}
