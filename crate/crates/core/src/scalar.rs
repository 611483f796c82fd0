//! Scalar backends.
//!
//! Two field implementations share the [`Scalar`] trait: [`Rational`], an exact
//! arbitrary-size rational kept in lowest terms, and [`HpFloat`], a multiprecision
//! binary float carrying the tolerance used for every zero and equality test.
//! Everything above this module is generic over the trait, so mixing backends is
//! a type error rather than a runtime one.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A field element with a backend-specific notion of "zero".
pub trait Scalar: Clone + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Data needed to create constants (precision and tolerance for floats).
    type Context: Clone + fmt::Debug + PartialEq + Send + Sync;

    /// `true` for backends on which `is_zero` is an exact test.
    const EXACT: bool;

    fn context(&self) -> Self::Context;
    fn from_i64(ctx: &Self::Context, v: i64) -> Self;
    fn from_rational(ctx: &Self::Context, q: &Rational) -> Self;

    fn zero(ctx: &Self::Context) -> Self {
        Self::from_i64(ctx, 0)
    }

    fn one(ctx: &Self::Context) -> Self {
        Self::from_i64(ctx, 1)
    }

    fn from_ratio(ctx: &Self::Context, num: i64, den: i64) -> Self {
        Self::from_rational(ctx, &Rational::new(num, den))
    }

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Division. Panics when `rhs` is an exact zero; use [`Scalar::checked_div`]
    /// where a zero divisor is a legitimate outcome.
    fn div(&self, rhs: &Self) -> Self;

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self.div(rhs))
        }
    }

    /// Exact zero on the rational backend, `|x| <= tol` on the float backend.
    fn is_zero(&self) -> bool;

    /// `|self| <= tol * |reference|`; exact zero test on the rational backend.
    fn is_negligible(&self, reference: &Self) -> bool;

    /// Equality (exact) or `|a - b| <= tol * max(1, |a|, |b|)`.
    fn approx_eq(&self, other: &Self) -> bool;

    fn is_one(&self) -> bool {
        self.approx_eq(&Self::one(&self.context()))
    }

    /// Sign with zero decided by [`Scalar::is_zero`].
    fn signum(&self) -> i32;

    fn abs(&self) -> Self {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Square root; `None` when negative, or when not a perfect square on the
    /// exact backend.
    fn sqrt(&self) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn mul_i64(&self, k: i64) -> Self {
        self.mul(&Self::from_i64(&self.context(), k))
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.context());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse `{input}` as a rational number")]
pub struct ParseScalarError {
    pub input: String,
}

/// Exact rational number in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(rug::Rational);

impl Rational {
    /// `num/den`. Panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(rug::Rational::from((num, den)))
    }

    pub fn from_integer(v: i64) -> Self {
        Rational(rug::Rational::from(v))
    }

    pub fn from_big(num: Integer, den: Integer) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(rug::Rational::from((num, den)))
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn as_rug(&self) -> &rug::Rational {
        &self.0
    }

    pub fn into_rug(self) -> rug::Rational {
        self.0
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denom() == 1
    }

    pub fn recip(&self) -> Self {
        assert!(self.0.cmp0() != Ordering::Equal, "reciprocal of zero");
        Rational(self.0.clone().recip())
    }
}

impl From<rug::Rational> for Rational {
    fn from(q: rug::Rational) -> Self {
        Rational(q)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Rational {
    type Err = ParseScalarError;

    /// Accepts `p/q`, integers, and plain decimals such as `-0.125` (converted
    /// exactly).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError { input: s.to_string() };
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: Integer = n.trim().parse().map_err(|_| err())?;
            let d: Integer = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            return Ok(Rational(rug::Rational::from((n, d))));
        }
        if let Some((int_part, frac_part)) = t.split_once('.') {
            let negative = int_part.starts_with('-');
            let int_digits = int_part.trim_start_matches(['-', '+']);
            if !frac_part.chars().all(|c| c.is_ascii_digit())
                || !int_digits.chars().all(|c| c.is_ascii_digit())
            {
                return Err(err());
            }
            let digits = format!("{int_digits}{frac_part}");
            let digits = if digits.is_empty() { "0".to_string() } else { digits };
            let mut num: Integer = digits.parse().map_err(|_| err())?;
            if negative {
                num = -num;
            }
            let den = Integer::from(Integer::u_pow_u(10, frac_part.len() as u32));
            return Ok(Rational(rug::Rational::from((num, den))));
        }
        let n: Integer = t.parse().map_err(|_| err())?;
        Ok(Rational(rug::Rational::from(n)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Scalar for Rational {
    type Context = ();
    const EXACT: bool = true;

    fn context(&self) -> Self::Context {}

    fn from_i64(_: &(), v: i64) -> Self {
        Rational::from_integer(v)
    }

    fn from_rational(_: &(), q: &Rational) -> Self {
        q.clone()
    }

    fn add(&self, rhs: &Self) -> Self {
        Rational(rug::Rational::from(&self.0 + &rhs.0))
    }

    fn sub(&self, rhs: &Self) -> Self {
        Rational(rug::Rational::from(&self.0 - &rhs.0))
    }

    fn mul(&self, rhs: &Self) -> Self {
        Rational(rug::Rational::from(&self.0 * &rhs.0))
    }

    fn neg(&self) -> Self {
        Rational(rug::Rational::from(-&self.0))
    }

    fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by exact zero");
        Rational(rug::Rational::from(&self.0 / &rhs.0))
    }

    fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }

    fn is_negligible(&self, _reference: &Self) -> bool {
        self.is_zero()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn signum(&self) -> i32 {
        match self.0.cmp0() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    fn sqrt(&self) -> Option<Self> {
        if self.signum() < 0 {
            return None;
        }
        let (n, d) = (self.0.numer(), self.0.denom());
        if n.is_perfect_square() && d.is_perfect_square() {
            Some(Rational::from_big(n.clone().sqrt(), d.clone().sqrt()))
        } else {
            None
        }
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

/// Precision (bits) and tolerance shared by a family of [`HpFloat`] values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatContext {
    pub precision_bits: u32,
    pub tolerance: f64,
}

impl FloatContext {
    pub fn new(precision_bits: u32, tolerance: f64) -> Self {
        assert!(precision_bits >= 2, "precision must be at least 2 bits");
        assert!(tolerance >= 0.0, "tolerance must be non-negative");
        FloatContext {
            precision_bits,
            tolerance,
        }
    }

    /// Number of decimal digits faithfully carried at this precision.
    pub fn decimal_digits(&self) -> usize {
        (f64::from(self.precision_bits) * std::f64::consts::LOG10_2).floor() as usize
    }
}

impl Default for FloatContext {
    fn default() -> Self {
        FloatContext::new(128, 1e-20)
    }
}

/// Multiprecision float with a carried comparison tolerance.
#[derive(Clone, Debug)]
pub struct HpFloat {
    value: Float,
    tolerance: f64,
}

impl HpFloat {
    pub fn from_float(value: Float, tolerance: f64) -> Self {
        HpFloat { value, tolerance }
    }

    pub fn from_f64(ctx: &FloatContext, v: f64) -> Self {
        HpFloat {
            value: Float::with_val(ctx.precision_bits, v),
            tolerance: ctx.tolerance,
        }
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn into_float(self) -> Float {
        self.value
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Decimal rendering with every digit the precision supports.
    pub fn to_decimal_string(&self) -> String {
        let digits = self.context().decimal_digits().max(1);
        self.value.to_string_radix(10, Some(digits))
    }

    fn binary(&self, rhs: &Self, f: impl FnOnce(u32, &Float, &Float) -> Float) -> Self {
        let prec = self.value.prec().max(rhs.value.prec());
        HpFloat {
            value: f(prec, &self.value, &rhs.value),
            tolerance: self.tolerance.max(rhs.tolerance),
        }
    }
}

impl fmt::Display for HpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl Serialize for HpFloat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal_string())
    }
}

impl Scalar for HpFloat {
    type Context = FloatContext;
    const EXACT: bool = false;

    fn context(&self) -> FloatContext {
        FloatContext::new(self.value.prec(), self.tolerance)
    }

    fn from_i64(ctx: &FloatContext, v: i64) -> Self {
        HpFloat {
            value: Float::with_val(ctx.precision_bits, v),
            tolerance: ctx.tolerance,
        }
    }

    fn from_rational(ctx: &FloatContext, q: &Rational) -> Self {
        HpFloat {
            value: Float::with_val(ctx.precision_bits, q.as_rug()),
            tolerance: ctx.tolerance,
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        self.binary(rhs, |p, a, b| Float::with_val(p, a + b))
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.binary(rhs, |p, a, b| Float::with_val(p, a - b))
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.binary(rhs, |p, a, b| Float::with_val(p, a * b))
    }

    fn neg(&self) -> Self {
        HpFloat {
            value: Float::with_val(self.value.prec(), -&self.value),
            tolerance: self.tolerance,
        }
    }

    fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.value.is_zero(), "division by exact zero");
        self.binary(rhs, |p, a, b| Float::with_val(p, a / b))
    }

    fn is_zero(&self) -> bool {
        *self.value.as_abs() <= self.tolerance
    }

    fn is_negligible(&self, reference: &Self) -> bool {
        if reference.value.is_zero() {
            return self.is_zero();
        }
        let bound = Float::with_val(self.value.prec(), &*reference.value.as_abs()) * self.tolerance;
        *self.value.as_abs() <= bound
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let prec = self.value.prec().max(other.value.prec());
        let diff = Float::with_val(prec, &self.value - &other.value).abs();
        let mut scale = Float::with_val(prec, 1);
        for v in [&self.value, &other.value] {
            if *v.as_abs() > scale {
                scale = Float::with_val(prec, &*v.as_abs());
            }
        }
        diff <= scale * self.tolerance.max(other.tolerance)
    }

    fn abs(&self) -> Self {
        HpFloat {
            value: Float::with_val(self.value.prec(), self.value.abs_ref()),
            tolerance: self.tolerance,
        }
    }

    fn signum(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.value.is_sign_negative() {
            -1
        } else {
            1
        }
    }

    fn sqrt(&self) -> Option<Self> {
        if self.value.is_sign_negative() && !self.value.is_zero() {
            if self.is_zero() {
                return Some(Self::zero(&self.context()));
            }
            return None;
        }
        Some(HpFloat {
            value: Float::with_val(self.value.prec(), self.value.sqrt_ref()),
            tolerance: self.tolerance,
        })
    }

    fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}
