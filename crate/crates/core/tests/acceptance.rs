//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiclass::griffin::{
    compare_recurrences, derive_params, moments_by_quadrature, params_from_recurrence,
    recurrence_from_structure, FunctionalEquation,
};
use semiclass::semiclassical::{derive_case_m_ge, derive_case_m_lt, derive_kzero, verify_lemma_identities, DeterminantOutcome};
use semiclass::{
    end_to_end_verify, minimal_index, CoherencePair, FloatContext, GriffinInput, HpFloat, MomentFunctional, MonicOps,
    Polynomial, Rational, Scalar, WeightSpec,
};

type P = Polynomial<Rational>;
type F = MomentFunctional<Rational>;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn hp(ctx: &FloatContext, v: f64) -> HpFloat {
    HpFloat::from_f64(ctx, v)
}

fn hermite_pair(pi: P, big_m: usize, m: usize, k: usize, d: usize) -> CoherencePair<Rational> {
    let u = F::hermite(&(), d);
    CoherencePair::from_functionals(u.clone(), u, pi, big_m, m, k).expect("hermite pair")
}

fn gaussian_spec(ctx: &FloatContext) -> WeightSpec {
    WeightSpec::new(hp(ctx, 1.0), hp(ctx, 0.0), hp(ctx, 0.0)).expect("admissible")
}

fn hermite_griffin() -> Outcome {
    let ctx = FloatContext::default();
    let input = GriffinInput::new(q(0, 1), q(0, 1), q(1, 2), q(1, 1));
    let rec = match recurrence_from_structure(&input.r0, &input.r1, &input.s1, &input.s2) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let eq = params_from_recurrence(&rec).expect("gate");
    let exact = eq.a == q(1, 1) && eq.b == q(0, 1) && eq.c == q(0, 1);
    let params = derive_params(&input, &ctx).expect("params");
    let t_exact = params.t_exact == Some(q(0, 1));
    let m_err = params.big_m.sub(&hp(&ctx, 1.0)).abs().to_f64();
    let verified = end_to_end_verify(&input, 10, &ctx).map(|r| r.passed()).unwrap_or(false);
    outcome(
        exact && t_exact && m_err <= 1e-20 && verified,
        format!("a={} b={} c={} t={:?} |M-1|={m_err:.1e} pipeline={verified}", eq.a, eq.b, eq.c, params.t_exact),
    )
}

fn recurrence_typo() -> Outcome {
    let ctx = FloatContext::default();
    let w = moments_by_quadrature(&gaussian_spec(&ctx), 20, &ctx).expect("quadrature");
    let eq = FunctionalEquation {
        a: hp(&ctx, 1.0),
        b: hp(&ctx, 0.0),
        c: hp(&ctx, 0.0),
    };
    let cmp = compare_recurrences(&eq, &w).expect("compare");
    let ok = cmp.derived_max_error <= 1e-25 && cmp.displayed_first_divergence == Some(3);
    outcome(
        ok,
        format!(
            "derived max err {:.1e}; displayed diverges at n={:?} (v3 displayed={} vs quadrature={:.3e})",
            cmp.derived_max_error,
            cmp.displayed_first_divergence,
            cmp.displayed_v3.to_f64(),
            cmp.quadrature_v3.to_f64()
        ),
    )
}

fn lemma_identities() -> Outcome {
    let pair = hermite_pair(P::x(&()), 1, 1, 0, 30);
    let report = verify_lemma_identities(&pair, 8).expect("lemma");
    let zero = report.checks.iter().all(|c| c.residual.max_abs.is_zero());
    outcome(
        report.holds() && zero && report.checks.len() == 9,
        format!(
            "{} checks, case {}, min certified degree {:?}",
            report.checks.len(),
            report.case,
            report.verified_degree()
        ),
    )
}

fn kzero_chain() -> Outcome {
    let pair = hermite_pair(P::x(&()), 1, 1, 0, 30);
    let r = derive_kzero(&pair).expect("kzero");
    let phi1 = r.chain[1] == P::x(&());
    let phi0 = r.chain[0] == P::from_i64s(&(), &[1, 0, -2]);
    let zero = r.identities.iter().all(|c| c.residual.max_abs.is_zero())
        && r.certificates.iter().all(|c| c.check.residual.max_abs.is_zero());
    let bounds = (r.bound_u, r.bound_v) == (1, 2)
        && r.certificates[0].reported_class_bound() <= 1
        && r.certificates[1].reported_class_bound() <= 2;
    outcome(
        phi1 && phi0 && zero && bounds && r.holds(),
        format!("Phi(1)={} Phi(0)={} bounds u<={} v<={}", r.chain[1], r.chain[0], r.bound_u, r.bound_v),
    )
}

fn appell_case() -> Outcome {
    let pair = hermite_pair(P::one(&()), 0, 1, 0, 30);
    let out = derive_case_m_ge(&pair).expect("m >= k + N");
    let DeterminantOutcome::Solved {
        identities,
        certificates,
        ..
    } = &out
    else {
        return outcome(false, "determinant vanished");
    };
    let zero = identities.iter().all(|c| c.residual.max_abs.is_zero());
    let cert = &certificates[0];
    let pearson = cert.phi.is_proportional_to(&P::one(&())) && cert.psi.is_proportional_to(&P::from_i64s(&(), &[0, -2]));
    let ok = out.holds() && zero && pearson && identities.len() >= 2 && certificates.len() == 2;
    let names: Vec<_> = identities.iter().map(|c| c.name.as_str()).collect();
    outcome(ok, format!("{names:?}, Pearson ({}, {})", cert.phi, cert.psi))
}

fn m_lt_case() -> Outcome {
    let a = q(1, 2);
    let v = F::laguerre(&a, 24).expect("laguerre");
    let u = F::laguerre(&a.add(&q(1, 1)), 24).expect("laguerre");
    let pair = CoherencePair::from_functionals(u, v, P::x(&()), 0, 1, 1).expect("pair");
    if !pair.verdict().expect("verdict").holds() {
        return outcome(false, "constructed pair not coherent");
    }
    let out = derive_case_m_lt(&pair).expect("m < k + N");
    let DeterminantOutcome::Solved {
        system,
        identities,
        certificates,
        ..
    } = &out
    else {
        return outcome(false, "B vanished");
    };
    let zero = identities.iter().all(|c| c.residual.max_abs.is_zero())
        && certificates.iter().all(|c| c.check.residual.max_abs.is_zero());
    let checked = identities.len() + certificates.len();
    outcome(
        out.holds() && zero && checked == 5,
        format!("B={} ; {} identities + {} certificates, zero residual", system.det, identities.len(), certificates.len()),
    )
}

/// Monic polynomial of degree `n` with small random integer coefficients.
fn random_pi(rng: &mut ChaCha8Rng, n: usize) -> P {
    let mut c: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
    c.push(1);
    P::from_i64s(&(), &c)
}

fn random_pair(rng: &mut ChaCha8Rng, d: usize) -> Option<CoherencePair<Rational>> {
    let big_n = rng.gen_range(0..=2);
    let m = rng.gen_range(0..=2);
    let k = rng.gen_range(0..=2);
    let pi = random_pi(rng, big_n);
    let (u, v) = if rng.gen_bool(0.5) {
        let h = F::hermite(&(), d);
        (h.clone(), h)
    } else {
        // P^[m] = L^(s), Q^[k] = L^(s+gap) makes the band finite.
        let alpha = q(rng.gen_range(1..=9), rng.gen_range(2..=5) * 2 + 1);
        let gap = rng.gen_range(0..=1) as i64;
        let beta = alpha.add(&q(k as i64 - m as i64 - gap, 1));
        (F::laguerre(&beta, d).ok()?, F::laguerre(&alpha, d).ok()?)
    };
    let mut pair = CoherencePair::from_functionals(u, v, pi, 0, m, k).ok()?;
    pair.big_m = minimal_index(&pair.band, pair.rows()).ok()??;
    Some(pair)
}

fn degree_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let n_check = 4;
    let (mut pairs, mut law_failures, mut corruptions, mut unbroken) = (0, 0, 0, Vec::new());
    let mut max_m = 0;
    while pairs < 60 {
        let Some(pair) = random_pair(&mut rng, 30) else {
            continue;
        };
        pairs += 1;
        max_m = max_m.max(pair.big_m);
        let report = verify_lemma_identities(&pair, n_check).expect("lemma");
        if !report.holds() {
            law_failures += 1;
            continue;
        }
        // Corrupt one coefficient inside the band at a row feeding n <= n_check.
        let n = rng.gen_range(0..=n_check.saturating_sub(pair.big_n));
        let j = rng.gen_range(n.saturating_sub(pair.big_m)..=n + pair.big_n);
        let mut bad = pair.clone();
        let c = bad.band.get(n, j).expect("row");
        bad.band.set(n, j, c.add(&q(1, 1))).expect("row");
        corruptions += 1;
        if verify_lemma_identities(&bad, n_check).expect("lemma").holds() {
            unbroken.push((n, j));
        }
    }
    // Exhaustive corruption of the first rows of one fixed pair.
    let pair = hermite_pair(P::from_i64s(&(), &[1, 0, 1]), 2, 1, 0, 30);
    for n in 0..=2usize {
        for j in n.saturating_sub(2)..=n + 2 {
            let mut bad = pair.clone();
            let c = bad.band.get(n, j).expect("row");
            bad.band.set(n, j, c.add(&q(1, 1))).expect("row");
            corruptions += 1;
            if verify_lemma_identities(&bad, 4).expect("lemma").holds() {
                unbroken.push((n, j));
            }
        }
    }
    outcome(
        law_failures == 0 && unbroken.is_empty(),
        format!(
            "{pairs} pairs (max M {max_m}), {law_failures} degree/identity failures; {corruptions} corruptions, unbroken {unbroken:?}"
        ),
    )
}

fn griffin_generality() -> Outcome {
    let ctx = FloatContext::default();
    // Reference M values from an independent 60-digit evaluation.
    let inputs = [
        ((1, 4), (0, 1), (1, 2), (1, 1), "0.1422782078407612792354825"),
        ((1, 8), (0, 1), (1, 2), (1, 1), "0.4039670724480973395564477"),
        ((1, 4), (1, 8), (1, 2), (1, 1), "0.4020316734138749883769208"),
        ((0, 1), (1, 4), (1, 2), (1, 1), "6.621361204439417800549779"),
        ((-1, 4), (0, 1), (1, 2), (1, 1), "7.028483245439854576455492"),
        ((1, 5), (1, 10), (3, 4), (3, 2), "0.5565975527519237973448689"),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (r0, r1, s1, s2, m_ref) in inputs {
        let m_ref = HpFloat::from_float(
            rug::Float::with_val(ctx.precision_bits, rug::Float::parse(m_ref).expect("decimal")),
            ctx.tolerance,
        );
        let input = GriffinInput::new(q(r0.0, r0.1), q(r1.0, r1.1), q(s1.0, s1.1), q(s2.0, s2.1));
        let start = Instant::now();
        let report = match end_to_end_verify(&input, 10, &ctx) {
            Ok(r) => r,
            Err(e) => {
                ok = false;
                lines.push(format!("{r0:?}: {e}"));
                continue;
            }
        };
        let elapsed = start.elapsed();
        let s_nonzero = report.structure.iter().skip(1).all(|row| row.s.as_ref().is_some_and(|s| !s.is_zero()));
        let recovery = report.recovery.iter().map(|r| r.error).fold(0.0, f64::max);
        let residual = report.equation_residuals.iter().copied().fold(0.0, f64::max);
        let m_err = report.params.big_m.sub(&m_ref).abs().to_f64() / m_ref.to_f64();
        let this = report.passed()
            && m_err < 1e-20
            && s_nonzero
            && report.structure.len() == 11
            && recovery < 1e-15
            && residual < 1e-15
            && elapsed < Duration::from_secs(60);
        ok &= this;
        lines.push(format!(
            "({},{},{},{}) M={:.6} (ref err {m_err:.0e}) rec {recovery:.0e} res {residual:.0e} {:.2}s",
            input.r0,
            input.r1,
            input.s1,
            input.s2,
            report.params.big_m.to_f64(),
            elapsed.as_secs_f64()
        ));
    }
    outcome(ok, lines.join("; "))
}

fn quadrature_ops() -> Outcome {
    let ctx = FloatContext::default();
    let w = moments_by_quadrature(&gaussian_spec(&ctx), 21, &ctx).expect("quadrature");
    let ops = MonicOps::from_functional(&w, 10).expect("ops");
    let mut err: f64 = 0.0;
    for n in 0..=10 {
        err = err.max(ops.beta(n).expect("beta").to_f64().abs());
        if n > 0 {
            let g = ops.gamma(n).expect("gamma").sub(&hp(&ctx, n as f64 / 2.0));
            err = err.max(g.abs().to_f64());
        }
    }
    outcome(err <= 1e-18, format!("max |beta_n|, |gamma_n - n/2| = {err:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 9] = [
        ("1 hermite griffin case", hermite_griffin, 5),
        ("2 moment recurrence form", recurrence_typo, 60),
        ("3 structure lemma identities", lemma_identities, 10),
        ("4 k=0 chain", kzero_chain, 60),
        ("5 m>=k+N determinant case", appell_case, 60),
        ("6 m<k+N determinant case", m_lt_case, 60),
        ("7 degree laws and corruption", degree_laws, 600),
        ("8 griffin generality", griffin_generality, 360),
        ("9 quadrature recurrence", quadrature_ops, 60),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let ok = out.ok && elapsed <= Duration::from_secs(budget);
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name} [{:.2}s]: {}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            out.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
