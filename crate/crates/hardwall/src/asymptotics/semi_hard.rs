//! Semi-hard-edge expansion: both points `O(1/sqrt(n))` inside the inner
//! wall at a common angle.
//!
//! With `z = r1 (1 - s1/(b r1^b sqrt(2n))) e^{i beta}` (and likewise `w`
//! with `s2`), the kernel expands as `K_n = C1 n + C2 sqrt(n) + O(1)`.
//! Both constants are integrals against the erfc-profile
//!
//! ```text
//! pref(y) = e^{-((y+s1)^2 + (y+s2)^2)/2} / (sqrt(pi) erfc(y)),
//! ```
//!
//! which decays like a Gaussian to the left and like
//! `y e^{-(s1+s2) y}` to the right. Evaluation uses the scaled
//! complement `erfcx` on `y >= 0` so that no intermediate under- or
//! overflows occur.
//!
//! The associated density profile [`density_profile_rho`] is the diagonal
//! special case: `rho(x) = int e^{-(y+x)^2} / (sqrt(pi) erfc(y)) dy`,
//! normalized so that `rho(x) -> 1/2` deep in the bulk (`x -> +inf`) and
//! diverging like `1/(2 sqrt(pi) x)` as `x -> 0+` (the hard-wall pile-up).

use super::integrals::quad_over;
use super::{domain_err, AsympError, Prediction, Theorem};
use crate::model::{EquilibriumData, ModelParams};
use crate::specfun::{erfc, erfcx, AccuracyConfig};
use num_complex::Complex64;
use std::f64::consts::PI;

/// `e^{-((y+u1)^2+(y+u2)^2)/2} / (sqrt(pi) erfc(y))`, stable for all `y`.
#[inline]
fn profile_pref(y: f64, u1: f64, u2: f64) -> f64 {
    if y >= 0.0 {
        // Cancel e^{-y^2} against erfc via erfcx: the remaining exponent
        // is linear in y, so the Gaussian tails never underflow prematurely.
        (-(u1 + u2) * y - 0.5 * (u1 * u1 + u2 * u2)).exp() / (PI.sqrt() * erfcx(y))
    } else {
        let e = -0.5 * ((y + u1).powi(2) + (y + u2).powi(2));
        e.exp() / (PI.sqrt() * erfc(y))
    }
}

/// Build an increasing breakpoint list `[lo, ...interior..., hi]`.
fn breakpoints(lo: f64, hi: f64, interior: &[f64]) -> Vec<f64> {
    let mut pts = vec![lo];
    for &p in interior {
        if p > lo && p < hi {
            pts.push(p);
        }
    }
    pts.push(hi);
    pts
}

/// The semi-hard expansion constants `(C1, C2)` at depths `s1, s2 > 0`:
///
/// ```text
/// C1 = 2 DQ int pref(y) dy,
/// C2 = (b sqrt(2 DQ) / r1) int pref(y) bracket(y) dy,
/// ```
///
/// where `DQ = b^2 r1^{2b-2}` and
///
/// ```text
/// bracket(y) = (10 y^2 - 2) g(y) / 3 + 5 y - 10 y^3 / 3 + (s1+s2)/b
///              - y (s1^2+s2^2)/(2b) - 2 y^2 (s1+s2)
///              + (2b-3)/b (s1^3+s2^3)/6,
/// ```
///
/// with `g(y) = e^{-y^2}/(sqrt(pi) erfc(y))`.
pub fn semi_hard_constants(
    params: &ModelParams,
    eq: &EquilibriumData,
    s1: f64,
    s2: f64,
) -> Result<(f64, f64), AsympError> {
    if !(s1.is_finite() && s1 > 0.0 && s2.is_finite() && s2 > 0.0) {
        return Err(domain_err(
            "semi_hard_constants",
            format!("requires s1, s2 > 0, got ({s1}, {s2})"),
        ));
    }
    let cfg = AccuracyConfig::default();
    let b = params.b;
    let dq = eq.delta_tilde_q_r1;
    let sum = s1 + s2;
    let lo = (-40.0_f64).min(-0.5 * sum - 35.0);
    let hi = (720.0 / sum).max(30.0);
    let pts = breakpoints(lo, hi, &[-0.5 * sum, 0.0, 5.0, 20.0, 60.0, 200.0, 500.0]);

    let c1 = 2.0 * dq * quad_over(move |y| profile_pref(y, s1, s2), &pts, &cfg)?;

    let sq = s1 * s1 + s2 * s2;
    let cu = s1.powi(3) + s2.powi(3);
    let integrand = move |y: f64| {
        let g = 1.0 / (PI.sqrt() * erfcx(y));
        let bracket = (10.0 * y * y - 2.0) * g / 3.0 + 5.0 * y - 10.0 * y.powi(3) / 3.0
            + sum / b
            - y * sq / (2.0 * b)
            - 2.0 * y * y * sum
            + (2.0 * b - 3.0) / b * cu / 6.0;
        profile_pref(y, s1, s2) * bracket
    };
    let c2 = (b * (2.0 * dq).sqrt() / params.r1) * quad_over(integrand, &pts, &cfg)?;
    Ok((c1, c2))
}

/// Semi-hard microscopic prediction `C1 n + C2 sqrt(n)` with remainder
/// `O(1)`. Breakdown terms: `C1*n`, `C2*sqrt_n`.
pub fn predict_semi_hard_micro(
    params: &ModelParams,
    eq: &EquilibriumData,
    s1: f64,
    s2: f64,
) -> Result<Prediction, AsympError> {
    let (c1, c2) = semi_hard_constants(params, eq, s1, s2)?;
    let n = params.n_f();
    let re = |v: f64| Complex64::new(v, 0.0);
    Ok(Prediction::from_terms(
        Theorem::SemiHardMicro,
        &[("C1*n", re(c1 * n)), ("C2*sqrt_n", re(c2 * n.sqrt()))],
        "O(1)",
    ))
}

/// The semi-hard density profile
/// `rho(x) = int e^{-(y+x)^2} / (sqrt(pi) erfc(y)) dy` for `x > 0`.
///
/// Satisfies `rho(x) -> 1/2` as `x -> +inf` (half the doubled-bulk
/// normalization of the rescaled kernel) and
/// `rho(x) ~ 1/(2 sqrt(pi) x)` as `x -> 0+`. The scaled wall kernel
/// satisfies `K_n(z,z) / (2 n DQ) -> rho(x)` at depth `x`.
pub fn density_profile_rho(x: f64) -> Result<f64, AsympError> {
    if !(x.is_finite() && x > 0.0) {
        return Err(domain_err(
            "density_profile_rho",
            format!("requires x > 0, got {x}"),
        ));
    }
    let cfg = AccuracyConfig::default();
    let lo = -x - 35.0;
    let hi = (720.0 / (2.0 * x)).max(30.0);
    let pts = breakpoints(
        lo,
        hi,
        &[-x, 0.0, 5.0, 15.0, 40.0, 80.0, 200.0, 500.0, 1500.0, 4000.0],
    );
    // Same cancellation as profile_pref, with (u1,u2) = (x,x) up to the
    // substitution (y+x)^2 = y^2 + 2xy + x^2.
    let f = move |y: f64| {
        if y >= 0.0 {
            (-2.0 * x * y - x * x).exp() / (PI.sqrt() * erfcx(y))
        } else {
            (-(y + x).powi(2)).exp() / (PI.sqrt() * erfc(y))
        }
    };
    Ok(quad_over(f, &pts, &cfg)?)
}
