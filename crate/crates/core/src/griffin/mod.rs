//! Orthogonal sequences with `x P'_{n+1}/(n+1) = P_{n+1} + r_n P_n + s_n P_{n-1}`.
//!
//! Four numbers `(r_0, r_1, s_1, s_2)` fix the sequence. They determine the
//! first recurrence coefficients, then the parameters `(a, b, c)` of
//! `D(x u) = (-2a x^2 + b x + c + 1) u`. After the dilation `x -> sqrt(a) x`
//! that functional is integration against the piecewise weight
//! `M |x|^c exp(-x^2 + t x)` (`x < 0`), `|x|^c exp(-x^2 + t x)` (`x >= 0`).
//! [`end_to_end_verify`] runs the whole chain and checks it against its input.

mod quadrature;

use rug::Float;
use serde::Serialize;

use crate::coherence::{compute_band, verify_coherence, Verdict};
use crate::error::GriffinError;
use crate::functional::MomentFunctional;
use crate::ops::{MonicOps, RecurrenceRow};
use crate::poly::{Dilation, Polynomial};
use crate::scalar::{FloatContext, HpFloat, Rational, Scalar};

/// Structure-relation data at `n = 0, 1, 2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GriffinInput {
    pub r0: Rational,
    pub r1: Rational,
    pub s1: Rational,
    pub s2: Rational,
}

impl GriffinInput {
    pub fn new(r0: Rational, r1: Rational, s1: Rational, s2: Rational) -> Self {
        GriffinInput { r0, r1, s1, s2 }
    }

    /// `s_1 > 0` is the integrability condition `a > 0` in disguise, so it is
    /// reported as a parameter-gate failure.
    pub fn validate(&self) -> Result<(), GriffinError> {
        if self.s1.signum() <= 0 {
            return Err(GriffinError::ParameterGate(format!(
                "s_1 = {} must be positive (equivalently a > 0)",
                self.s1
            )));
        }
        if self.s2.is_zero() {
            return Err(GriffinError::InvalidInput("s_2 != 0".into()));
        }
        let d = self.s1.mul_i64(2).add(&self.r0.mul(&self.r1));
        if d.is_zero() {
            return Err(GriffinError::InvalidInput("2 s_1 + r_0 r_1 != 0".into()));
        }
        Ok(())
    }
}

/// First recurrence coefficients of the sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InitialRecurrence<S: Scalar> {
    pub beta0: S,
    pub beta1: S,
    pub gamma1: S,
    pub gamma2: S,
}

/// Coefficients `r_0, r_1, r_2, s_1, s_2` implied by five recurrence values.
#[derive(Clone, Debug, Serialize)]
pub struct StructureValues<S: Scalar> {
    pub r0: S,
    pub r1: S,
    pub r2: S,
    pub s1: S,
    pub s2: S,
    /// `beta_0 (s_2 - gamma_2) - (beta_0 beta_1 - gamma_1)(r_2 - beta_2)`.
    pub compatibility_residual: S,
}

pub fn recurrence_from_structure<S: Scalar>(
    r0: &S,
    r1: &S,
    s1: &S,
    s2: &S,
) -> Result<InitialRecurrence<S>, GriffinError> {
    let d = s1.mul_i64(2).add(&r0.mul(r1));
    if d.is_zero() {
        return Err(GriffinError::InvalidInput("2 s_1 + r_0 r_1 != 0".into()));
    }
    let beta0 = r0.clone();
    let beta1 = r1.mul_i64(2).sub(r0);
    let gamma1 = s1.sub(&r0.mul(&r0.sub(r1)));
    let inner = s1.mul(&r0.mul_i64(2).sub(r1)).sub(&r0.mul(r1).mul(&r0.sub(r1)));
    let gamma2 = s1
        .mul(&s2.mul_i64(3).sub(&s1.mul_i64(2)))
        .add(&r1.mul_i64(2).mul(&inner))
        .div(&d);
    for (name, g) in [("gamma_1", &gamma1), ("gamma_2", &gamma2)] {
        if g.signum() <= 0 {
            return Err(GriffinError::NotPositiveDefinite {
                name,
                value: g.to_string(),
            });
        }
    }
    Ok(InitialRecurrence {
        beta0,
        beta1,
        gamma1,
        gamma2,
    })
}

/// Inverse map. Fails when the five values violate the compatibility constraint.
pub fn structure_from_recurrence<S: Scalar>(
    beta0: &S,
    beta1: &S,
    beta2: &S,
    gamma1: &S,
    gamma2: &S,
) -> Result<StructureValues<S>, GriffinError> {
    let ctx = beta0.context();
    let third = S::from_ratio(&ctx, 1, 3);
    let r0 = beta0.clone();
    let r1 = beta0.add(beta1).mul(&S::from_ratio(&ctx, 1, 2));
    let r2 = beta0.add(beta1).add(beta2).mul(&third);
    let s1 = gamma1.add(&beta0.mul(&beta0.sub(beta1)).mul(&S::from_ratio(&ctx, 1, 2)));
    let s2 = beta0
        .mul(beta0)
        .add(&beta1.mul(beta1))
        .sub(&beta0.add(beta1).mul(beta2))
        .add(&gamma1.add(gamma2).mul_i64(2))
        .mul(&third);
    let k = beta0.mul(beta1).sub(gamma1);
    let lhs = beta0.mul(&s2.sub(gamma2));
    let rhs = k.mul(&r2.sub(beta2));
    let residual = lhs.sub(&rhs);
    let scale = beta0
        .abs()
        .mul(&s2.abs().add(&gamma2.abs()))
        .add(&k.abs().mul(&r2.abs().add(&beta2.abs())));
    if !residual.is_negligible(&scale) {
        return Err(GriffinError::Compatibility {
            residual: residual.to_string(),
        });
    }
    Ok(StructureValues {
        r0,
        r1,
        r2,
        s1,
        s2,
        compatibility_residual: residual,
    })
}

/// `beta_2` of the sequence generated by `input`, read off the compatibility
/// constraint (or the `s_2` relation when the constraint does not involve it).
pub fn beta2_from_structure<S: Scalar>(input: &[S; 4], rec: &InitialRecurrence<S>) -> Option<S> {
    let [_, _, _, s2] = input;
    let InitialRecurrence {
        beta0,
        beta1,
        gamma1,
        gamma2,
    } = rec;
    let ctx = beta0.context();
    let k = beta0.mul(beta1).sub(gamma1);
    let sum = beta0.add(beta1);
    if !k.is_zero() {
        let shift = beta0.mul(&s2.sub(gamma2)).mul_i64(3).div(&k);
        return Some(sum.sub(&shift).mul(&S::from_ratio(&ctx, 1, 2)));
    }
    if sum.is_zero() {
        return None;
    }
    let num = beta0
        .mul(beta0)
        .add(&beta1.mul(beta1))
        .add(&gamma1.add(gamma2).mul_i64(2))
        .sub(&s2.mul_i64(3));
    Some(num.div(&sum))
}

/// Parameters of the functional equation `D(x u) = (-2a x^2 + b x + c + 1) u`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunctionalEquation<S: Scalar> {
    pub a: S,
    pub b: S,
    pub c: S,
}

impl<S: Scalar> FunctionalEquation<S> {
    /// The multiplier `-2a x^2 + b x + c + 1`.
    pub fn psi(&self) -> Polynomial<S> {
        let ctx = self.a.context();
        Polynomial::from_coeffs(
            &ctx,
            vec![self.c.add(&S::one(&ctx)), self.b.clone(), self.a.mul_i64(-2)],
        )
    }

    /// Residual of `-2a w_{n+2} + b w_{n+1} + (n + c + 1) w_n = 0`, relative to
    /// the sum of the absolute values of its terms.
    pub fn moment_residuals(&self, w: &MomentFunctional<S>) -> Vec<f64> {
        let ctx = self.a.context();
        let m = w.moments();
        (0..m.len().saturating_sub(2))
            .map(|n| {
                let t2 = self.a.mul_i64(-2).mul(&m[n + 2]);
                let t1 = self.b.mul(&m[n + 1]);
                let t0 = self.c.add(&S::from_i64(&ctx, n as i64 + 1)).mul(&m[n]);
                let total = t2.add(&t1).add(&t0).abs().to_f64();
                let scale = t2.abs().to_f64() + t1.abs().to_f64() + t0.abs().to_f64();
                if scale == 0.0 {
                    0.0
                } else {
                    total / scale
                }
            })
            .collect()
    }
}

/// `a, b, c` from the first recurrence coefficients, with the gate `a > 0`,
/// `c > -1`.
pub fn params_from_recurrence<S: Scalar>(rec: &InitialRecurrence<S>) -> Result<FunctionalEquation<S>, GriffinError> {
    let (b0, b1, g1, g2) = (&rec.beta0, &rec.beta1, &rec.gamma1, &rec.gamma2);
    let g12 = g1.mul(g2);
    if g12.is_zero() {
        return Err(GriffinError::NotPositiveDefinite {
            name: "gamma_1 gamma_2",
            value: g12.to_string(),
        });
    }
    let big_a = g1.mul_i64(2).add(&b0.sub(b1).mul(b0));
    let a = big_a.div(&g12.mul_i64(2));
    let b = big_a.mul(&b0.add(b1)).sub(&b0.mul(g2)).div(&g12);
    let c = b0
        .mul(b0)
        .mul(g2)
        .sub(&big_a.mul(&b0.mul(b1).sub(g1)))
        .div(&g12)
        .sub(&S::one(&b0.context()));
    if a.signum() <= 0 {
        return Err(GriffinError::ParameterGate(format!("a = {a} must be positive")));
    }
    if c.add(&S::one(&c.context())).signum() <= 0 {
        return Err(GriffinError::ParameterGate(format!("c = {c} must exceed -1")));
    }
    Ok(FunctionalEquation { a, b, c })
}

/// Driven by the functional equation: `v_{n+2} = (b v_{n+1} + (n + c + 1) v_n)/(2a)`.
pub fn moments_by_recurrence<S: Scalar>(
    eq: &FunctionalEquation<S>,
    v0: &S,
    v1: &S,
    n_max: usize,
) -> Result<MomentFunctional<S>, GriffinError> {
    let ctx = v0.context();
    let two_a = eq.a.mul_i64(2);
    let mut v = vec![v0.clone(), v1.clone()];
    for n in 0..n_max.saturating_sub(1) {
        let coeff = eq.c.add(&S::from_i64(&ctx, n as i64 + 1));
        let next = eq.b.mul(&v[n + 1]).add(&coeff.mul(&v[n])).div(&two_a);
        v.push(next);
    }
    v.truncate(n_max + 1);
    Ok(MomentFunctional::from_moments(&ctx, v)?)
}

/// The recurrence in the shape `v_{n+2} = ((n + b) v_{n+1} + (c + 1) v_n)/(2a)`.
/// It is not satisfied by the moments; kept only to display the disagreement.
pub fn moments_by_displayed_recurrence<S: Scalar>(
    eq: &FunctionalEquation<S>,
    v0: &S,
    v1: &S,
    n_max: usize,
) -> Result<MomentFunctional<S>, GriffinError> {
    let ctx = v0.context();
    let two_a = eq.a.mul_i64(2);
    let c1 = eq.c.add(&S::one(&ctx));
    let mut v = vec![v0.clone(), v1.clone()];
    for n in 0..n_max.saturating_sub(1) {
        let coeff = eq.b.add(&S::from_i64(&ctx, n as i64));
        let next = coeff.mul(&v[n + 1]).add(&c1.mul(&v[n])).div(&two_a);
        v.push(next);
    }
    v.truncate(n_max + 1);
    Ok(MomentFunctional::from_moments(&ctx, v)?)
}

/// The weight `M |x|^c exp(-x^2 + t x)` on `x < 0` and `|x|^c exp(-x^2 + t x)`
/// on `x >= 0`.
#[derive(Clone, Debug, Serialize)]
pub struct WeightSpec {
    #[serde(rename = "M")]
    pub big_m: HpFloat,
    pub t: HpFloat,
    pub c: HpFloat,
}

impl WeightSpec {
    pub fn new(big_m: HpFloat, t: HpFloat, c: HpFloat) -> Result<Self, GriffinError> {
        if c.value().to_f64() <= -1.0 {
            return Err(GriffinError::ParameterGate(format!("c = {c} must exceed -1")));
        }
        if big_m.value().is_sign_negative() && !big_m.value().is_zero() {
            return Err(GriffinError::NegativeWeightRatio(big_m.to_string()));
        }
        Ok(WeightSpec { big_m, t, c })
    }
}

fn working_bits(ctx: &FloatContext) -> u32 {
    2 * ctx.precision_bits
}

fn widen(x: &HpFloat, bits: u32) -> Float {
    Float::with_val(bits, x.value())
}

fn round(x: &Float, ctx: &FloatContext) -> HpFloat {
    HpFloat::from_float(Float::with_val(ctx.precision_bits, x), ctx.tolerance)
}

/// Weight ratio making `<u, x> = r_0 <u, 1>` after the dilation, where
/// `rho = sqrt(a) r_0`:
/// `M = int_0^inf (x - rho) x^c e^{-x^2+tx} dx / int_0^inf (x + rho) x^c e^{-x^2-tx} dx`.
pub fn compute_m(rho: &HpFloat, t: &HpFloat, c: &HpFloat, ctx: &FloatContext) -> Result<HpFloat, GriffinError> {
    Ok(round(&compute_m_wide(rho, t, c, ctx)?, ctx))
}

fn compute_m_wide(rho: &HpFloat, t: &HpFloat, c: &HpFloat, ctx: &FloatContext) -> Result<Float, GriffinError> {
    let wp = working_bits(ctx);
    let (c, t, rho) = (widen(c, wp), widen(t, wp), widen(rho, wp));
    let neg_t = Float::with_val(wp, -&t);
    let plus = quadrature::half_line_moments(&c, &t, 1, wp, ctx.precision_bits + 16)?;
    let minus = quadrature::half_line_moments(&c, &neg_t, 1, wp, ctx.precision_bits + 16)?;
    let num = Float::with_val(wp, &plus[1] - Float::with_val(wp, &rho * &plus[0]));
    let den = Float::with_val(wp, &minus[1] + Float::with_val(wp, &rho * &minus[0]));
    if den.is_zero() || den.is_sign_negative() {
        return Err(GriffinError::NegativeWeightRatio(format!(
            "denominator {} is not positive",
            den.to_f64()
        )));
    }
    let m = Float::with_val(wp, &num / &den);
    if m.is_sign_negative() && !m.is_zero() {
        return Err(GriffinError::NegativeWeightRatio(round(&m, ctx).to_string()));
    }
    Ok(m)
}

/// Normalized moments `w_0 = 1, .., w_{n_max}` of the weight.
pub fn moments_by_quadrature(
    spec: &WeightSpec,
    n_max: usize,
    ctx: &FloatContext,
) -> Result<MomentFunctional<HpFloat>, GriffinError> {
    let raw = raw_moments(spec, n_max, ctx)?;
    normalize_and_round(&raw, None, ctx)
}

fn raw_moments(spec: &WeightSpec, n_max: usize, ctx: &FloatContext) -> Result<Vec<Float>, GriffinError> {
    let wp = working_bits(ctx);
    let (c, t, m) = (widen(&spec.c, wp), widen(&spec.t, wp), widen(&spec.big_m, wp));
    let neg_t = Float::with_val(wp, -&t);
    let target = ctx.precision_bits + 16;
    let right = quadrature::half_line_moments(&c, &t, n_max, wp, target)?;
    let left = if m.is_zero() {
        vec![Float::with_val(wp, 0); n_max + 1]
    } else {
        quadrature::half_line_moments(&c, &neg_t, n_max, wp, target)?
    };
    Ok(right
        .iter()
        .zip(&left)
        .enumerate()
        .map(|(n, (r, l))| {
            let side = Float::with_val(wp, &m * l);
            if n % 2 == 0 {
                Float::with_val(wp, r + &side)
            } else {
                Float::with_val(wp, r - &side)
            }
        })
        .collect())
}

/// Divide by moment 0 and optionally by `s^n`, then round to `ctx`.
fn normalize_and_round(
    raw: &[Float],
    inv_scale: Option<&Float>,
    ctx: &FloatContext,
) -> Result<MomentFunctional<HpFloat>, GriffinError> {
    let wp = raw[0].prec();
    if raw[0].is_zero() {
        return Err(GriffinError::Quadrature("vanishing total mass".into()));
    }
    let mut power = Float::with_val(wp, 1);
    let mut out = Vec::with_capacity(raw.len());
    for r in raw {
        let w = Float::with_val(wp, r / &raw[0]) * &power;
        out.push(round(&w, ctx));
        if let Some(s) = inv_scale {
            power *= s;
        }
    }
    Ok(MomentFunctional::from_moments(ctx, out)?)
}

/// Derived parameters of the sequence fixed by a [`GriffinInput`].
#[derive(Clone, Debug, Serialize)]
pub struct GriffinParams {
    pub recurrence: InitialRecurrence<Rational>,
    pub equation: FunctionalEquation<Rational>,
    pub sqrt_a: HpFloat,
    /// `sqrt(a)` when `a` is the square of a rational.
    pub sqrt_a_exact: Option<Rational>,
    pub t: HpFloat,
    pub t_exact: Option<Rational>,
    #[serde(rename = "M")]
    pub big_m: HpFloat,
    #[serde(skip)]
    t_wide: Float,
    #[serde(skip)]
    m_wide: Float,
}

impl GriffinParams {
    /// The dilated weight, kept at the working precision of the quadrature.
    pub fn weight(&self) -> Result<WeightSpec, GriffinError> {
        let tol = self.t.tolerance();
        let wp = self.t_wide.prec();
        WeightSpec::new(
            HpFloat::from_float(self.m_wide.clone(), tol),
            HpFloat::from_float(self.t_wide.clone(), tol),
            HpFloat::from_float(Float::with_val(wp, self.equation.c.as_rug()), tol),
        )
    }
}

/// Exact stages of the pipeline plus `M` by quadrature.
pub fn derive_params(input: &GriffinInput, ctx: &FloatContext) -> Result<GriffinParams, GriffinError> {
    input.validate()?;
    let recurrence = recurrence_from_structure(&input.r0, &input.r1, &input.s1, &input.s2)?;
    let equation = params_from_recurrence(&recurrence)?;
    let wp = working_bits(ctx);
    let sqrt_a_exact = equation.a.sqrt();
    let t_exact = sqrt_a_exact.as_ref().map(|s| equation.b.div(s));
    let sqrt_a_wide = Float::with_val(wp, equation.a.as_rug()).sqrt();
    let t_wide = Float::with_val(wp, equation.b.as_rug()) / &sqrt_a_wide;
    let rho_wide = Float::with_val(wp, &sqrt_a_wide * input.r0.as_rug());
    let tol = ctx.tolerance;
    let m_wide = compute_m_wide(
        &HpFloat::from_float(rho_wide, tol),
        &HpFloat::from_float(t_wide.clone(), tol),
        &HpFloat::from_float(Float::with_val(wp, equation.c.as_rug()), tol),
        ctx,
    )?;
    Ok(GriffinParams {
        sqrt_a: round(&sqrt_a_wide, ctx),
        t: round(&t_wide, ctx),
        recurrence,
        equation,
        sqrt_a_exact,
        t_exact,
        big_m: round(&m_wide, ctx),
        t_wide,
        m_wide,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureRow {
    pub n: usize,
    pub r: HpFloat,
    /// `None` for `n = 0`, where `P_{-1} = 0`.
    pub s: Option<HpFloat>,
    /// Largest coefficient outside `j = n-1, n, n+1`, relative to the row.
    pub off_band: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Recovery {
    pub name: &'static str,
    pub input: Rational,
    pub recovered: HpFloat,
    pub error: f64,
}

/// Both moment recurrences run from quadrature seeds on the dilated functional.
#[derive(Clone, Debug, Serialize)]
pub struct RecurrenceComparison {
    /// Largest `|v_n - w_n| / max(1, |w_n|)` for the recurrence implied by the
    /// functional equation.
    pub derived_max_error: f64,
    /// First index where the displayed form departs from the quadrature moments.
    pub displayed_first_divergence: Option<usize>,
    pub displayed_v3: HpFloat,
    pub quadrature_v3: HpFloat,
}

#[derive(Clone, Debug, Serialize)]
pub struct GriffinReport {
    pub input: GriffinInput,
    pub params: GriffinParams,
    pub precision_bits: u32,
    pub tolerance: f64,
    /// Moments of the dilated weight, normalized to `w_0 = 1`.
    pub weight_moments: Vec<HpFloat>,
    pub recurrence: Vec<RecurrenceRow<HpFloat>>,
    pub verdict: Verdict,
    pub structure: Vec<StructureRow>,
    pub recovery: Vec<Recovery>,
    pub compatibility_residual: f64,
    /// Per-n residuals of `D(x u) = (-2a x^2 + b x + c + 1) u`.
    pub equation_residuals: Vec<f64>,
    /// Same for the dilated functional with parameters `(1, t, c)`.
    pub dilated_equation_residuals: Vec<f64>,
    /// Largest coefficient gap between `P_n` and `a^{-n/2} P~_n(sqrt(a) x)`.
    pub dilation_residual: f64,
    pub recurrence_comparison: RecurrenceComparison,
    pub failures: Vec<String>,
}

impl GriffinReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Full pipeline with checks on `n <= n_max`. Gate failures are errors;
/// residuals above `ctx.tolerance` are listed in [`GriffinReport::failures`].
pub fn end_to_end_verify(input: &GriffinInput, n_max: usize, ctx: &FloatContext) -> Result<GriffinReport, GriffinError> {
    let params = derive_params(input, ctx)?;
    let weight = params.weight()?;
    let wp = working_bits(ctx);
    let d = 2 * n_max + 3;
    let raw = raw_moments(&weight, d, ctx)?;
    let tilde = normalize_and_round(&raw, None, ctx)?;
    let inv_sqrt_a = Float::with_val(wp, params.equation.a.as_rug()).sqrt().recip();
    let u = normalize_and_round(&raw, Some(&inv_sqrt_a), ctx)?;
    let tol = ctx.tolerance;
    let mut failures = Vec::new();

    let p = MonicOps::from_functional(&u, n_max)?;
    let band = compute_band(&p, &p, &Polynomial::x(ctx), 1, 0, n_max)?;
    let verdict = verify_coherence(&band, 1, n_max)?;
    if !verdict.holds() {
        failures.push(format!("structure relation: {verdict:?}"));
    }
    let mut structure = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let row = band.row(n)?;
        let scale = row.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
        let off = row[..n.saturating_sub(1)]
            .iter()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max);
        let s = (n > 0).then(|| row[n - 1].clone());
        if let Some(s) = &s {
            if s.is_zero() {
                failures.push(format!("s_{n} vanishes"));
            }
        }
        structure.push(StructureRow {
            n,
            r: row[n].clone(),
            s,
            off_band: if scale == 0.0 { 0.0 } else { off / scale },
        });
    }

    let recovered = [
        ("r_0", &input.r0, Some(structure[0].r.clone())),
        ("r_1", &input.r1, structure.get(1).map(|r| r.r.clone())),
        ("s_1", &input.s1, structure.get(1).and_then(|r| r.s.clone())),
        ("s_2", &input.s2, structure.get(2).and_then(|r| r.s.clone())),
    ];
    let mut recovery = Vec::new();
    for (name, want, got) in recovered.into_iter().filter_map(|(n, w, g)| g.map(|g| (n, w, g))) {
        let error = got.sub(&HpFloat::from_rational(ctx, want)).abs().to_f64();
        if error > tol {
            failures.push(format!("{name} recovered with error {error:e}"));
        }
        recovery.push(Recovery {
            name,
            input: want.clone(),
            recovered: got,
            error,
        });
    }

    let compatibility_residual = if n_max >= 2 {
        match structure_from_recurrence(p.beta(0)?, p.beta(1)?, p.beta(2)?, p.gamma(1)?, p.gamma(2)?) {
            Ok(s) => s.compatibility_residual.abs().to_f64(),
            Err(e) => {
                failures.push(e.to_string());
                f64::NAN
            }
        }
    } else {
        0.0
    };

    let eq = FunctionalEquation {
        a: HpFloat::from_rational(ctx, &params.equation.a),
        b: HpFloat::from_rational(ctx, &params.equation.b),
        c: HpFloat::from_rational(ctx, &params.equation.c),
    };
    let equation_residuals = eq.moment_residuals(&u);
    let dilated_eq = FunctionalEquation {
        a: HpFloat::one(ctx),
        b: params.t.clone(),
        c: eq.c.clone(),
    };
    let dilated_equation_residuals = dilated_eq.moment_residuals(&tilde);
    for (label, res) in [("functional equation", &equation_residuals), ("dilated functional equation", &dilated_equation_residuals)] {
        if let Some((n, r)) = res.iter().enumerate().find(|(_, r)| **r > tol) {
            failures.push(format!("{label} residual {r:e} at n = {n}"));
        }
    }

    let p_tilde = MonicOps::from_functional(&tilde, n_max)?;
    let mut dilation_residual: f64 = 0.0;
    for n in 0..=n_max + 1 {
        let mapped = p_tilde.poly(n)?.dilate(&params.sqrt_a, Dilation::MonicPreserving)?;
        let target = p.poly(n)?;
        for i in 0..=n {
            let (x, y) = (mapped.coeff(i), target.coeff(i));
            let scale = x.to_f64().abs().max(y.to_f64().abs()).max(1.0);
            dilation_residual = dilation_residual.max(x.sub(&y).abs().to_f64() / scale);
        }
    }
    if dilation_residual > tol {
        failures.push(format!("dilation relation residual {dilation_residual:e}"));
    }

    let recurrence_comparison = compare_recurrences(&dilated_eq, &tilde)?;
    if recurrence_comparison.derived_max_error > tol {
        failures.push(format!(
            "moment recurrence departs from quadrature by {:e}",
            recurrence_comparison.derived_max_error
        ));
    }

    Ok(GriffinReport {
        input: input.clone(),
        weight_moments: tilde.moments()[..=n_max].to_vec(),
        recurrence: p.table(),
        params,
        precision_bits: ctx.precision_bits,
        tolerance: tol,
        verdict,
        structure,
        recovery,
        compatibility_residual,
        equation_residuals,
        dilated_equation_residuals,
        dilation_residual,
        recurrence_comparison,
        failures,
    })
}

/// Run both moment recurrences from `w_0, w_1` and compare with `w`.
pub fn compare_recurrences(
    eq: &FunctionalEquation<HpFloat>,
    w: &MomentFunctional<HpFloat>,
) -> Result<RecurrenceComparison, GriffinError> {
    let d = w.max_degree();
    let m = w.moments();
    let derived = moments_by_recurrence(eq, &m[0], &m[1], d)?;
    let displayed = moments_by_displayed_recurrence(eq, &m[0], &m[1], d)?;
    let rel = |a: &HpFloat, b: &HpFloat| a.sub(b).abs().to_f64() / b.to_f64().abs().max(1.0);
    let derived_max_error = derived
        .moments()
        .iter()
        .zip(m)
        .map(|(a, b)| rel(a, b))
        .fold(0.0, f64::max);
    let tol = m[0].tolerance();
    let displayed_first_divergence = displayed.moments().iter().zip(m).position(|(a, b)| rel(a, b) > tol);
    let ctx = m[0].context();
    let pick = |f: &MomentFunctional<HpFloat>| f.moments().get(3).cloned().unwrap_or_else(|| HpFloat::zero(&ctx));
    Ok(RecurrenceComparison {
        derived_max_error,
        displayed_first_divergence,
        displayed_v3: pick(&displayed),
        quadrature_v3: pick(w),
    })
}

#[cfg(test)]
mod tests;
