//! Half-line integrals `J_n(tau) = int_0^inf y^(c+n) exp(-y^2 + tau y) dy` by the
//! exp-sinh substitution `y = exp(pi/2 sinh u)` and nested trapezoidal sums.
//!
//! The substitution sends the `y^c` endpoint singularity at zero to a double
//! exponentially decaying tail, so `c` anywhere in `(-1, inf)` is handled by the
//! same rule. All moments share one set of nodes.

use rug::float::Constant;
use rug::Float;

use crate::error::GriffinError;

const FIRST_LEVEL: u32 = 2;
const MIN_LEVELS: u32 = 3;
const MAX_LEVEL: u32 = 14;
const SCAN_STEP: f64 = 1.0 / 32.0;

/// `J_0(tau), .., J_{n_max}(tau)` at `working_bits`, each with relative accuracy
/// about `2^-target_bits`.
pub(crate) fn half_line_moments(
    c: &Float,
    tau: &Float,
    n_max: usize,
    working_bits: u32,
    target_bits: u32,
) -> Result<Vec<Float>, GriffinError> {
    let c64 = c.to_f64();
    if !(c64 > -1.0) {
        return Err(GriffinError::ParameterGate(format!("c = {c64} must exceed -1")));
    }
    let (u_lo, u_hi) = node_range(c64, tau.to_f64(), n_max, working_bits)?;
    let half_pi = Float::with_val(working_bits, Constant::Pi) / 2u32;

    let mut totals = vec![Float::with_val(working_bits, 0); n_max + 1];
    let mut previous: Option<Vec<Float>> = None;
    for level in FIRST_LEVEL..=MAX_LEVEL {
        let scale = f64::from(1u32 << level);
        let k_lo = (u_lo * scale).ceil() as i64;
        let k_hi = (u_hi * scale).floor() as i64;
        let fresh = level > FIRST_LEVEL;
        for k in k_lo..=k_hi {
            if fresh && k % 2 == 0 {
                continue;
            }
            let u = Float::with_val(working_bits, k) / (1u32 << level);
            accumulate(&mut totals, &u, c, tau, &half_pi, working_bits);
        }
        let estimates: Vec<Float> = totals
            .iter()
            .map(|s| Float::with_val(working_bits, s) / (1u32 << level))
            .collect();
        if let Some(prev) = &previous {
            if level >= FIRST_LEVEL + MIN_LEVELS && converged(&estimates, prev, target_bits) {
                return Ok(estimates);
            }
        }
        previous = Some(estimates);
    }
    Err(GriffinError::Quadrature(format!(
        "no agreement to 2^-{target_bits} after {MAX_LEVEL} halvings (c = {c64}, tau = {})",
        tau.to_f64()
    )))
}

fn converged(now: &[Float], before: &[Float], target_bits: u32) -> bool {
    now.iter().zip(before).all(|(a, b)| {
        let diff = Float::with_val(a.prec(), a - b).abs();
        let bound = Float::with_val(a.prec(), &*a.as_abs()) >> target_bits;
        diff <= bound
    })
}

/// Add `f_n(u) = y^(c+n+1) exp(-y^2 + tau y) (pi/2) cosh u` for every `n`.
fn accumulate(totals: &mut [Float], u: &Float, c: &Float, tau: &Float, half_pi: &Float, prec: u32) {
    let log_y = Float::with_val(prec, u.sinh_ref()) * half_pi;
    let y = Float::with_val(prec, log_y.exp_ref());
    let jacobian = Float::with_val(prec, u.cosh_ref()) * half_pi;
    let mut exponent = Float::with_val(prec, c + 1u32) * &log_y;
    exponent -= Float::with_val(prec, y.square_ref());
    exponent += Float::with_val(prec, tau * &y);
    let mut term = exponent.exp() * jacobian;
    for total in totals.iter_mut() {
        *total += &term;
        term *= &y;
    }
}

/// Interval of `u` outside which every integrand is below `2^-bits` of its peak.
fn node_range(c: f64, tau: f64, n_max: usize, bits: u32) -> Result<(f64, f64), GriffinError> {
    let budget = f64::from(bits) * std::f64::consts::LN_2 + 8.0;
    let exponents = [c, c + n_max as f64];
    let mut lo: f64 = 0.0;
    let mut hi: f64 = 0.0;
    for &p in &exponents {
        let log_f = |u: f64| {
            let log_y = std::f64::consts::FRAC_PI_2 * u.sinh();
            let y = log_y.exp();
            (p + 1.0) * log_y - y * y + tau * y + (std::f64::consts::FRAC_PI_2 * u.cosh()).ln()
        };
        let peak = scan_peak(&log_f);
        let mut u = peak;
        while log_f(u) > log_f(peak) - budget {
            u -= SCAN_STEP;
            if u < -40.0 {
                return Err(GriffinError::Quadrature("left tail does not decay".into()));
            }
        }
        lo = lo.min(u);
        let mut u = peak;
        while log_f(u) > log_f(peak) - budget {
            u += SCAN_STEP;
            if u > 40.0 {
                return Err(GriffinError::Quadrature("right tail does not decay".into()));
            }
        }
        hi = hi.max(u);
    }
    Ok((lo, hi))
}

fn scan_peak(log_f: &impl Fn(f64) -> f64) -> f64 {
    let mut best = 0.0;
    let mut best_val = log_f(0.0);
    let mut u = -12.0;
    while u <= 6.0 {
        let v = log_f(u);
        if v > best_val {
            best = u;
            best_val = v;
        }
        u += SCAN_STEP;
    }
    best
}
