//! Rising factorials and binomial coefficients.

use rug::Integer;

use crate::scalar::{Rational, Scalar};

/// Pochhammer symbol `(alpha)_n = alpha (alpha + 1) ... (alpha + n - 1)`, with
/// `(alpha)_0 = 1`.
pub fn pochhammer<S: Scalar>(alpha: &S, n: usize) -> S {
    let ctx = alpha.context();
    (0..n).fold(S::one(&ctx), |acc, i| {
        acc.mul(&alpha.add(&S::from_i64(&ctx, i as i64)))
    })
}

/// `(j + 1)_m` for non-negative integer `j`, the normalizer of `P_{j+m}^{(m)}`.
pub fn rising_from<S: Scalar>(ctx: &S::Context, j: usize, m: usize) -> S {
    pochhammer(&S::from_i64(ctx, j as i64 + 1), m)
}

pub fn binomial(n: usize, k: usize) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(n).binomial(k as u32)
}

pub fn binomial_scalar<S: Scalar>(ctx: &S::Context, n: usize, k: usize) -> S {
    S::from_rational(ctx, &Rational::from_big(binomial(n, k), Integer::from(1)))
}

pub fn factorial_scalar<S: Scalar>(ctx: &S::Context, n: usize) -> S {
    rising_from(ctx, 0, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_examples() {
        let three = Rational::from_integer(3);
        assert_eq!(pochhammer(&three, 2), Rational::from_integer(12));
        assert_eq!(pochhammer(&Rational::new(7, 3), 0), Rational::from_integer(1));
        assert_eq!(pochhammer(&Rational::from_integer(1), 5), Rational::from_integer(120));
        assert_eq!(pochhammer(&Rational::new(1, 2), 2), Rational::new(3, 4));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(factorial_scalar::<Rational>(&(), 6), Rational::from_integer(720));
    }
}
