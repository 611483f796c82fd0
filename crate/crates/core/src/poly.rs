//! Dense univariate polynomials over a [`Scalar`].
//!
//! Coefficients are stored in ascending order. The representation is canonical:
//! the zero polynomial has no coefficients and otherwise the leading coefficient
//! is nonzero (as decided by the backend's zero test).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::AlgebraError;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Polynomial<S: Scalar> {
    coeffs: Vec<S>,
    ctx: S::Context,
}

/// How [`Polynomial::dilate`] rescales its argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dilation {
    /// `x -> p(s x)`.
    Plain,
    /// `x -> s^(-deg p) p(s x)`, which keeps monic polynomials monic.
    MonicPreserving,
}

impl<S: Scalar> Polynomial<S> {
    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn from_coeffs(ctx: &S::Context, coeffs: Vec<S>) -> Self {
        let mut p = Polynomial {
            coeffs,
            ctx: ctx.clone(),
        };
        p.trim();
        p
    }

    pub fn zero(ctx: &S::Context) -> Self {
        Polynomial {
            coeffs: Vec::new(),
            ctx: ctx.clone(),
        }
    }

    pub fn one(ctx: &S::Context) -> Self {
        Self::constant(S::one(ctx))
    }

    /// The indeterminate `x`.
    pub fn x(ctx: &S::Context) -> Self {
        Self::from_coeffs(ctx, vec![S::zero(ctx), S::one(ctx)])
    }

    pub fn constant(c: S) -> Self {
        let ctx = c.context();
        Self::from_coeffs(&ctx, vec![c])
    }

    /// `c x^degree`.
    pub fn monomial(c: S, degree: usize) -> Self {
        let ctx = c.context();
        let mut coeffs = vec![S::zero(&ctx); degree];
        coeffs.push(c);
        Self::from_coeffs(&ctx, coeffs)
    }

    pub fn from_i64s(ctx: &S::Context, coeffs: &[i64]) -> Self {
        Self::from_coeffs(ctx, coeffs.iter().map(|&c| S::from_i64(ctx, c)).collect())
    }

    pub fn context(&self) -> &S::Context {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> S {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| S::zero(&self.ctx))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_coeffs(&self.ctx, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![S::zero(&self.ctx); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial {
            coeffs,
            ctx: self.ctx.clone(),
        }
    }

    /// Iterated formal derivative.
    pub fn derivative(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        if order >= self.coeffs.len() {
            return Self::zero(&self.ctx);
        }
        let coeffs = (order..self.coeffs.len())
            .map(|i| {
                // i (i-1) ... (i-order+1)
                ((i - order + 1)..=i).fold(self.coeffs[i].clone(), |acc, v| acc.mul_i64(v as i64))
            })
            .collect();
        Self::from_coeffs(&self.ctx, coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(&self.ctx), |acc, c| acc.mul(x).add(c))
    }

    pub fn dilate(&self, s: &S, mode: Dilation) -> Result<Self, AlgebraError> {
        if s.is_zero() {
            return Err(AlgebraError::ZeroDilation);
        }
        let mut power = S::one(&self.ctx);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.mul(&power));
            power = power.mul(s);
        }
        let p = Self::from_coeffs(&self.ctx, coeffs);
        match (mode, p.degree()) {
            (Dilation::MonicPreserving, Some(d)) => {
                let norm = s.powi(d as u32);
                Ok(Self::from_coeffs(
                    &self.ctx,
                    p.coeffs.iter().map(|c| c.div(&norm)).collect(),
                ))
            }
            _ => Ok(p),
        }
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), AlgebraError> {
        let d = divisor.degree().ok_or(AlgebraError::DivisionByZero)?;
        let lead = divisor.coeffs[d].clone();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree().filter(|&n| n >= d) else {
            return Ok((Self::zero(&self.ctx), self.clone()));
        };
        let mut quot = vec![S::zero(&self.ctx); n - d + 1];
        for i in (0..=(n - d)).rev() {
            let q = rem[i + d].div(&lead);
            if !q.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] = rem[i + j].sub(&q.mul(dc));
                }
            }
            quot[i] = q;
        }
        rem.truncate(d);
        Ok((
            Self::from_coeffs(&self.ctx, quot),
            Self::from_coeffs(&self.ctx, rem),
        ))
    }

    pub fn add_poly(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_coeffs(&self.ctx, coeffs)
    }

    pub fn sub_poly(&self, rhs: &Self) -> Self {
        self.add_poly(&rhs.neg_poly())
    }

    pub fn neg_poly(&self) -> Self {
        Polynomial {
            coeffs: self.coeffs.iter().map(Scalar::neg).collect(),
            ctx: self.ctx.clone(),
        }
    }

    pub fn mul_poly(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut coeffs = vec![S::zero(&self.ctx); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(&self.ctx, coeffs)
    }

    /// `true` when `self = lambda * other` for some nonzero scalar `lambda`.
    pub fn is_proportional_to(&self, other: &Self) -> bool {
        match (self.degree(), other.degree()) {
            (None, None) => true,
            (Some(a), Some(b)) if a == b => {
                let lambda = self.coeffs[a].div(&other.coeffs[b]);
                self.approx_eq(&other.scale(&lambda))
            }
            _ => false,
        }
    }

    /// Coefficientwise comparison with the backend's equality test.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len).all(|i| self.coeff(i).approx_eq(&other.coeff(i)))
    }
}

impl<S: Scalar + PartialEq> PartialEq for Polynomial<S> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<'a, S: Scalar> Add<&'a Polynomial<S>> for &'a Polynomial<S> {
    type Output = Polynomial<S>;
    fn add(self, rhs: &'a Polynomial<S>) -> Polynomial<S> {
        self.add_poly(rhs)
    }
}

impl<'a, S: Scalar> Sub<&'a Polynomial<S>> for &'a Polynomial<S> {
    type Output = Polynomial<S>;
    fn sub(self, rhs: &'a Polynomial<S>) -> Polynomial<S> {
        self.sub_poly(rhs)
    }
}

impl<'a, S: Scalar> Mul<&'a Polynomial<S>> for &'a Polynomial<S> {
    type Output = Polynomial<S>;
    fn mul(self, rhs: &'a Polynomial<S>) -> Polynomial<S> {
        self.mul_poly(rhs)
    }
}

impl<S: Scalar> Neg for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn neg(self) -> Polynomial<S> {
        self.neg_poly()
    }
}

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.signum() < 0;
            let mag = c.abs();
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let unit = mag.is_one();
            if i == 0 || !unit {
                write!(f, "{}", DisplayCoeff(&mag))?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Prints `p/1` as `p` so rendered polynomials stay readable.
struct DisplayCoeff<'a, S>(&'a S);

impl<S: Scalar> fmt::Display for DisplayCoeff<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.0.to_string();
        f.write_str(s.strip_suffix("/1").unwrap_or(&s))
    }
}

impl<S: Scalar + Serialize> Serialize for Polynomial<S> {
    /// Ascending coefficient array.
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type P = Polynomial<Rational>;

    fn p(c: &[i64]) -> P {
        P::from_i64s(&(), c)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p(&[1, 1]) * &p(&[-1, 1]), p(&[-1, 0, 1]));
        assert!((&p(&[3, 2, 1]) * &P::zero(&())).is_zero());
        let a = P::from_coeffs(&(), vec![q(-1, 2), q(0, 1), q(1, 1)]);
        assert_eq!(&a + &P::constant(q(1, 2)), p(&[0, 0, 1]));
        assert_eq!((&a - &a).degree(), None);
        assert_eq!(p(&[0, 0, 0]).degree(), None);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[0, 0, 0, 1]).derivative(2), p(&[0, 6]));
        assert_eq!(p(&[4, 5, 6]).derivative(0), p(&[4, 5, 6]));
        assert!(p(&[0, 0, 1]).derivative(3).is_zero());
    }

    #[test]
    fn dilate_examples() {
        let two = Rational::from_integer(2);
        assert_eq!(
            p(&[0, 0, 1]).dilate(&two, Dilation::MonicPreserving).unwrap(),
            p(&[0, 0, 1])
        );
        assert_eq!(p(&[1, 1]).dilate(&two, Dilation::Plain).unwrap(), p(&[1, 2]));
        let r = p(&[3, -1, 4]);
        assert_eq!(r.dilate(&Rational::from_integer(1), Dilation::Plain).unwrap(), r);
        assert_eq!(
            r.dilate(&Rational::from_integer(0), Dilation::Plain),
            Err(AlgebraError::ZeroDilation)
        );
    }

    #[test]
    fn division_with_remainder() {
        let a = p(&[5, 0, 3, 1]);
        let b = p(&[1, 1]);
        let (quot, rem) = a.div_rem(&b).unwrap();
        assert_eq!(&(&quot * &b) + &rem, a);
        assert!(rem.degree().unwrap_or(0) < 1);
        assert_eq!(a.div_rem(&P::zero(&())), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn display_is_readable() {
        let a = P::from_coeffs(&(), vec![q(1, 2), q(0, 1), q(-2, 1)]);
        assert_eq!(a.to_string(), "-2x^2 + 1/2");
        assert_eq!(p(&[0, 1]).to_string(), "x");
        assert_eq!(p(&[-1]).to_string(), "-1");
    }

    #[test]
    fn proportionality() {
        assert!(p(&[4, 0, 8]).is_proportional_to(&p(&[1, 0, 2])));
        assert!(!p(&[4, 0, 8]).is_proportional_to(&p(&[1, 1, 2])));
    }

    #[test]
    fn serializes_as_ascending_strings() {
        let a = P::from_coeffs(&(), vec![q(-1, 2), q(0, 1), q(1, 1)]);
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"["-1/2","0/1","1/1"]"#);
    }
}
