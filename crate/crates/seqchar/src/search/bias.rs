//! Statistical bias for interpolation test points.
//!
//! Treat the true root position in the normalized bracket [0, 1] as Gaussian
//! around the interpolation estimate `x0'` with uncertainty `sigma`,
//! truncated to the bracket (mass outside is dropped, not renormalized —
//! the closed form below is derived from that exact form). Testing at
//! `x0' + eps` leaves interval `x0' + eps` with probability
//! P1 = Phi(eps/sigma) - Phi(-x0'/sigma), and `1 - x0' - eps` with
//! P2 = Phi((1-x0')/sigma) - Phi(eps/sigma). The solver picks the bias
//! minimizing the expected new interval length; for small sigma a closed
//! form exists, and as sigma grows the optimal test point slides to the
//! midpoint, recovering bisection.

use crate::stats::{norm_cdf, norm_pdf};
use std::f64::consts::PI;

/// Expected normalized interval length after testing at `x0' + eps`.
pub fn expected_interval_length(x0_prime: f64, eps: f64, sigma: f64) -> f64 {
    let p1 = norm_cdf(eps / sigma) - norm_cdf(-x0_prime / sigma);
    let p2 = norm_cdf((1.0 - x0_prime) / sigma) - norm_cdf(eps / sigma);
    p1 * (x0_prime + eps) + p2 * (1.0 - x0_prime - eps)
}

/// d/d(eps) of [`expected_interval_length`], in closed form.
pub fn expected_interval_length_slope(x0_prime: f64, eps: f64, sigma: f64) -> f64 {
    2.0 * norm_cdf(eps / sigma)
        - norm_cdf((1.0 - x0_prime) / sigma)
        - norm_cdf(-x0_prime / sigma)
        + norm_pdf(eps / sigma) / sigma * (2.0 * (x0_prime + eps) - 1.0)
}

/// The closed form is used only below this sigma...
pub const CLOSED_FORM_SIGMA_MAX: f64 = 0.01;
/// ...and only when the logarithm argument |2x0'-1| / (sigma*sqrt(2pi))
/// exceeds this, which keeps the small-sigma approximation within a few
/// percent of the exact minimizer. (Merely requiring the argument > e keeps
/// the logarithm real but admits ~13% error right at the boundary.)
pub const CLOSED_FORM_MIN_LOG_ARG: f64 = 10.0;

/// Bias that keeps the test point off the exact bracket endpoints.
const POINT_MARGIN: f64 = 1e-6;

/// Optimal bias `eps*` minimizing the expected interval length over
/// `eps in [-x0', 1 - x0']`, with the biased point `x0' + eps` clamped into
/// `[margin, 1 - margin]` so an oracle call always shrinks the bracket.
///
/// Requires `0 < x0' < 1` and `sigma > 0`.
pub fn solve_bias(x0_prime: f64, sigma: f64) -> f64 {
    assert!(
        x0_prime > 0.0 && x0_prime < 1.0 && sigma > 0.0,
        "solve_bias needs 0 < x0' < 1 and sigma > 0, got ({x0_prime}, {sigma})"
    );
    if x0_prime == 0.5 {
        return 0.0;
    }
    // Mirror the upper half onto the lower so the bias is exactly
    // antisymmetric about the midpoint.
    if x0_prime > 0.5 {
        return -solve_bias(1.0 - x0_prime, sigma);
    }

    let log_arg = (1.0 - 2.0 * x0_prime) / (sigma * (2.0 * PI).sqrt());
    let eps = if sigma <= CLOSED_FORM_SIGMA_MAX && log_arg > CLOSED_FORM_MIN_LOG_ARG {
        sigma * (2.0 * log_arg.ln()).sqrt()
    } else {
        minimize_expected_length(x0_prime, sigma)
    };
    clamp_bias(x0_prime, eps, POINT_MARGIN)
}

fn clamp_bias(x0_prime: f64, eps: f64, margin: f64) -> f64 {
    (x0_prime + eps).clamp(margin, 1.0 - margin) - x0_prime
}

/// Coarse grid over the feasible range, golden-section refinement of the
/// best cell, then a Newton polish on the stationarity condition so the
/// result is insensitive to last-bit input perturbations.
fn minimize_expected_length(x0_prime: f64, sigma: f64) -> f64 {
    const GRID: usize = 1024;
    let lo = -x0_prime + POINT_MARGIN;
    let hi = 1.0 - x0_prime - POINT_MARGIN;
    let step = (hi - lo) / GRID as f64;
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..=GRID {
        let eps = lo + step * i as f64;
        let val = expected_interval_length(x0_prime, eps, sigma);
        if val < best {
            best = val;
            best_i = i;
        }
    }
    let a = lo + step * best_i.saturating_sub(1) as f64;
    let b = (lo + step * (best_i + 1) as f64).min(hi);
    let rough = golden_section(|e| expected_interval_length(x0_prime, e, sigma), a, b, 1e-9);
    polish_stationary(x0_prime, sigma, rough, lo, hi)
}

/// Newton iteration on the slope, anchored at the golden-section result.
fn polish_stationary(x0_prime: f64, sigma: f64, start: f64, lo: f64, hi: f64) -> f64 {
    let mut eps = start;
    for _ in 0..12 {
        let slope = expected_interval_length_slope(x0_prime, eps, sigma);
        let t = eps / sigma;
        let phi = norm_pdf(t);
        // second derivative of the expected length
        let curv = 4.0 * phi / sigma - t * phi * (2.0 * (x0_prime + eps) - 1.0) / (sigma * sigma);
        if !(curv > 0.0) || !slope.is_finite() {
            return start;
        }
        let next = (eps - slope / curv).clamp(lo, hi);
        if (next - eps).abs() > (start - eps).abs().max(1e-6) + 1e-6 {
            return start; // diverging away from the located minimum
        }
        if (next - eps).abs() < 1e-15 {
            return next;
        }
        eps = next;
    }
    eps
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
