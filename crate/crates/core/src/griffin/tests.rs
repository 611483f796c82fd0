use proptest::prelude::*;

use super::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn input(r0: (i64, i64), r1: (i64, i64), s1: (i64, i64), s2: (i64, i64)) -> GriffinInput {
    GriffinInput::new(q(r0.0, r0.1), q(r1.0, r1.1), q(s1.0, s1.1), q(s2.0, s2.1))
}

fn hermite_input() -> GriffinInput {
    input((0, 1), (0, 1), (1, 2), (1, 1))
}

fn ctx() -> FloatContext {
    FloatContext::default()
}

fn close(x: &HpFloat, want: f64, tol: f64) -> bool {
    (x.to_f64() - want).abs() <= tol
}

#[test]
fn hermite_structure_maps() {
    let i = hermite_input();
    let rec = recurrence_from_structure(&i.r0, &i.r1, &i.s1, &i.s2).unwrap();
    assert_eq!(
        rec,
        InitialRecurrence {
            beta0: q(0, 1),
            beta1: q(0, 1),
            gamma1: q(1, 2),
            gamma2: q(1, 1),
        }
    );
    let eq = params_from_recurrence(&rec).unwrap();
    assert_eq!((eq.a, eq.b, eq.c), (q(1, 1), q(0, 1), q(0, 1)));

    let back = structure_from_recurrence(&q(0, 1), &q(0, 1), &q(0, 1), &q(1, 2), &q(1, 1)).unwrap();
    assert_eq!((back.r0, back.r1, back.r2), (q(0, 1), q(0, 1), q(0, 1)));
    assert_eq!((back.s1, back.s2), (q(1, 2), q(1, 1)));
}

#[test]
fn equal_r_collapses_gamma1() {
    let rec = recurrence_from_structure(&q(2, 3), &q(2, 3), &q(5, 4), &q(2, 1)).unwrap();
    assert_eq!(rec.gamma1, q(5, 4));
}

#[test]
fn asymmetric_parameters() {
    let i = input((1, 4), (0, 1), (1, 2), (1, 1));
    let rec = recurrence_from_structure(&i.r0, &i.r1, &i.s1, &i.s2).unwrap();
    assert_eq!((rec.beta0.clone(), rec.beta1.clone()), (q(1, 4), q(-1, 4)));
    assert_eq!((rec.gamma1.clone(), rec.gamma2.clone()), (q(7, 16), q(1, 1)));
    let eq = params_from_recurrence(&rec).unwrap();
    assert_eq!((eq.a, eq.b, eq.c), (q(8, 7), q(-4, 7), q(2, 7)));
}

#[test]
fn compatibility_violation_is_flagged() {
    let err = structure_from_recurrence(&q(1, 2), &q(1, 3), &q(1, 1), &q(1, 1), &q(1, 1)).unwrap_err();
    assert!(matches!(err, GriffinError::Compatibility { .. }));
    // beta_0 = 0 reduces the constraint to gamma_1 (r_2 - beta_2) = 0.
    assert!(structure_from_recurrence(&q(0, 1), &q(1, 1), &q(1, 2), &q(1, 1), &q(1, 1)).is_ok());
    assert!(structure_from_recurrence(&q(0, 1), &q(1, 1), &q(1, 1), &q(1, 1), &q(1, 1)).is_err());
}

#[test]
fn gates() {
    let bad_s1 = input((0, 1), (0, 1), (-1, 1), (1, 1));
    assert!(matches!(derive_params(&bad_s1, &ctx()), Err(GriffinError::ParameterGate(_))));
    let bad_c = input((1, 1), (1, 1), (1, 2), (1, 4));
    let rec = recurrence_from_structure(&bad_c.r0, &bad_c.r1, &bad_c.s1, &bad_c.s2).unwrap();
    assert!(matches!(params_from_recurrence(&rec), Err(GriffinError::ParameterGate(_))));
    assert!(matches!(end_to_end_verify(&bad_c, 4, &ctx()), Err(GriffinError::ParameterGate(_))));
    let not_pd = input((0, 1), (0, 1), (1, 2), (1, 4));
    assert!(matches!(
        recurrence_from_structure(&not_pd.r0, &not_pd.r1, &not_pd.s1, &not_pd.s2),
        Err(GriffinError::NotPositiveDefinite { name: "gamma_2", .. })
    ));
}

#[test]
fn symmetric_inputs_have_no_b() {
    for (g1, g2) in [(q(1, 2), q(3, 4)), (q(2, 1), q(1, 3)), (q(5, 7), q(5, 7))] {
        let rec = InitialRecurrence {
            beta0: q(0, 1),
            beta1: q(0, 1),
            gamma1: g1,
            gamma2: g2,
        };
        if let Ok(eq) = params_from_recurrence(&rec) {
            assert_eq!(eq.b, q(0, 1));
        }
    }
}

#[test]
fn derived_moment_recurrence_is_gaussian() {
    let eq = FunctionalEquation {
        a: q(1, 1),
        b: q(0, 1),
        c: q(0, 1),
    };
    let v = moments_by_recurrence(&eq, &q(1, 1), &q(0, 1), 6).unwrap();
    assert_eq!(
        v.moments(),
        &[q(1, 1), q(0, 1), q(1, 2), q(0, 1), q(3, 4), q(0, 1), q(15, 8)]
    );
    let shown = moments_by_displayed_recurrence(&eq, &q(1, 1), &q(0, 1), 4).unwrap();
    assert_eq!(shown.moments()[3], q(1, 4));
}

#[test]
fn odd_moments_vanish_for_even_recurrence() {
    let eq = FunctionalEquation {
        a: q(3, 2),
        b: q(0, 1),
        c: q(2, 5),
    };
    let v = moments_by_recurrence(&eq, &q(1, 1), &q(0, 1), 15).unwrap();
    assert!(v.moments().iter().skip(1).step_by(2).all(Scalar::is_zero));
}

#[test]
fn m_for_symmetric_weight_is_one() {
    let c = ctx();
    let zero = HpFloat::zero(&c);
    let m = compute_m(&zero, &zero, &zero, &c).unwrap();
    assert!(m.sub(&HpFloat::one(&c)).abs().to_f64() < 1e-30);
    let half = HpFloat::from_ratio(&c, 1, 2);
    let m = compute_m(&zero, &zero, &half, &c).unwrap();
    assert!(m.sub(&HpFloat::one(&c)).abs().to_f64() < 1e-30);
}

#[test]
fn pinned_weight_ratio() {
    let c = ctx();
    let zero = HpFloat::zero(&c);
    let m = compute_m(&zero, &HpFloat::one(&c), &zero, &c).unwrap();
    let pinned = Float::with_val(256, Float::parse("6.008985409193179878216555568129859837682").unwrap());
    let err = Float::with_val(256, m.value() - &pinned).abs().to_f64();
    assert!(err < 1e-36, "M = {m}, error {err:e}");
}

#[test]
fn gaussian_quadrature_moments() {
    let c = ctx();
    let spec = WeightSpec::new(HpFloat::one(&c), HpFloat::zero(&c), HpFloat::zero(&c)).unwrap();
    let w = moments_by_quadrature(&spec, 8, &c).unwrap();
    let expected = [1.0, 0.0, 0.5, 0.0, 0.75, 0.0, 1.875, 0.0, 6.5625];
    for (got, want) in w.moments().iter().zip(expected) {
        assert!(close(got, want, 1e-30), "{got} vs {want}");
    }
    assert!(w.moments().iter().skip(1).step_by(2).all(|x| x.value().is_zero()));
}

#[test]
fn singular_weight_matches_gamma_ratios() {
    // c = -1/2: even moments Gamma((n + 1/2)/2)/Gamma(1/4), from the derived
    // recurrence with exact seeds.
    let c = ctx();
    let half = HpFloat::from_ratio(&c, -1, 2);
    let spec = WeightSpec::new(HpFloat::one(&c), HpFloat::zero(&c), half.clone()).unwrap();
    let w = moments_by_quadrature(&spec, 12, &c).unwrap();
    let eq = FunctionalEquation {
        a: HpFloat::one(&c),
        b: HpFloat::zero(&c),
        c: half,
    };
    let v = moments_by_recurrence(&eq, &HpFloat::one(&c), &HpFloat::zero(&c), 12).unwrap();
    for (x, y) in w.moments().iter().zip(v.moments()) {
        assert!(x.approx_eq(y), "{x} vs {y}");
    }
    assert!(close(&w.moments()[2], 0.25, 1e-30));
}

#[test]
fn recurrence_agrees_with_quadrature_off_symmetry() {
    let c = ctx();
    let zero = HpFloat::zero(&c);
    let half = HpFloat::from_ratio(&c, 1, 2);
    let t = HpFloat::one(&c);
    let m = compute_m(&zero, &t, &half, &c).unwrap();
    let spec = WeightSpec::new(m, t.clone(), half.clone()).unwrap();
    let w = moments_by_quadrature(&spec, 20, &c).unwrap();
    let eq = FunctionalEquation {
        a: HpFloat::one(&c),
        b: t,
        c: half,
    };
    let cmp = compare_recurrences(&eq, &w).unwrap();
    assert!(cmp.derived_max_error < 1e-25, "{}", cmp.derived_max_error);
    assert!(cmp.displayed_first_divergence.is_some());
}

#[test]
fn hermite_pipeline() {
    let report = end_to_end_verify(&hermite_input(), 10, &ctx()).unwrap();
    assert!(report.passed(), "{:?}", report.failures);
    assert_eq!(report.params.t_exact, Some(q(0, 1)));
    assert_eq!(report.params.sqrt_a_exact, Some(q(1, 1)));
    assert!(report.params.big_m.sub(&HpFloat::one(&ctx())).abs().to_f64() < 1e-20);
    for row in &report.recurrence {
        assert!(row.beta.to_f64().abs() < 1e-18);
        assert!((row.gamma.to_f64() - row.n as f64 / 2.0).abs() < 1e-18);
    }
    assert_eq!(report.recurrence_comparison.displayed_first_divergence, Some(3));
    assert!(close(&report.recurrence_comparison.displayed_v3, 0.25, 1e-30));
}

#[test]
fn shifted_pipeline() {
    let report = end_to_end_verify(&input((1, 4), (0, 1), (1, 2), (1, 1)), 10, &ctx()).unwrap();
    assert!(report.passed(), "{:?}", report.failures);
    assert!(close(&report.params.t, -0.534_522_483_824_848_8, 1e-15));
    assert!(close(&report.params.big_m, 0.142_278_207_840_761_28, 1e-15));
    assert!(report.params.t_exact.is_none());
    let r = &report.structure;
    assert!(close(&r[0].r, 0.25, 1e-20));
    assert!(close(r[1].s.as_ref().unwrap(), 0.5, 1e-20));
    // s_10 from an independent 60-digit computation.
    assert!(close(r[10].s.as_ref().unwrap(), 4.511_148_000_176_55, 1e-12));
}

#[test]
fn symmetric_pipeline_has_even_weight() {
    let report = end_to_end_verify(&input((0, 1), (0, 1), (1, 2), (3, 4)), 6, &ctx()).unwrap();
    assert!(report.passed(), "{:?}", report.failures);
    assert_eq!(report.params.equation.a, q(8, 5));
    assert_eq!(report.params.equation.c, q(3, 5));
    assert!(report.params.big_m.sub(&HpFloat::one(&ctx())).abs().to_f64() < 1e-30);
    assert!(report.weight_moments.iter().skip(1).step_by(2).all(|x| x.to_f64().abs() < 1e-30));
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #[test]
    fn structure_round_trip(r0 in small_rational(), r1 in small_rational(), s1 in positive_rational(), s2 in positive_rational()) {
        let Ok(rec) = recurrence_from_structure(&r0, &r1, &s1, &s2) else { return Ok(()); };
        let Some(beta2) = beta2_from_structure(&[r0.clone(), r1.clone(), s1.clone(), s2.clone()], &rec) else {
            return Ok(());
        };
        let back = structure_from_recurrence(&rec.beta0, &rec.beta1, &beta2, &rec.gamma1, &rec.gamma2).unwrap();
        prop_assert_eq!(back.r0, r0);
        prop_assert_eq!(back.r1, r1);
        prop_assert_eq!(back.s1, s1.clone());
        prop_assert_eq!(back.s2, s2);
        // a has two closed forms.
        if let Ok(eq) = params_from_recurrence(&rec) {
            prop_assert_eq!(eq.a, s1.div(&rec.gamma1.mul(&rec.gamma2)));
        }
    }
}
