//! Hard-edge microscopic expansion: both points `O(1/n)` inside the inner
//! wall at a common angle.
//!
//! With `z = r1 (1 - t1/(sigma1 n)) e^{i beta}` and
//! `w = r1 (1 - t2/(sigma1 n)) e^{i beta}`, the kernel expands as
//!
//! ```text
//! K_n = C1 n^2 + C2 n log n + (C3 + (sigma1/r1^2) e^{-t1-t2} F_n) n
//!       + C4 sqrt(n) + O(n^{2/5})
//! ```
//!
//! where `C1..C4` depend on `(t1, t2)` and the geometry, and `F_n` is a
//! bounded `n`-dependent oscillation expressed through the logarithmic
//! derivative of a Jacobi theta function ([`theta_factor_fn`]).
//!
//! `C3` contains `E1(t1+t2) + log(t1+t2)`, which stays finite as
//! `t1+t2 -> 0`; below a small switch value the closed-form limits are
//! used instead ([`hard_micro_constants`] is continuous across the
//! switch).

use super::integrals::universal_i_cached;
use super::{Prediction, Theorem};
use crate::model::{EquilibriumData, ModelParams};
use crate::specfun::{exp_integral_e1, jacobi_log_theta_deriv, EULER_GAMMA};
use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

/// Below this value of `t1 + t2` the limiting closed forms are used; the
/// general formulas contain `E1(s) + log s`, whose cancellation is exact
/// analytically but loses accuracy in floating point as `s -> 0`.
pub const T_SUM_SWITCH: f64 = 1e-8;

/// The four expansion constants `(C1, C2, C3, C4)` for hard-edge depths
/// `t1, t2 >= 0` (panics on negative depths, where the kernel vanishes
/// trivially).
///
/// For `s = t1 + t2 >=` [`T_SUM_SWITCH`]:
///
/// ```text
/// C1 = sigma1^2 (1 - e^{-s}(1+s)) / (r1^2 s^2)
/// C2 = b^2 r1^{2b-2} / 2
/// C3 = -b^2 r1^{2b-2} (E1(s) + gamma_E + log(b r1^b s / (sigma1 sqrt(2 pi))))
///      + sigma1/(r1^2 s^3) { s^2 (t1^2+t2^2)/(2 e^s)
///        + (2 t1 t2 - (b^2 r1^{2b}/sigma1) s (t1^2+t2^2)) (1 - (1+s)/e^s) }
/// C4 = sqrt(2) b^2 r1^{b-2} (1 - 2 b r1^{2b} s / sigma1) I
/// ```
///
/// with `I` the universal integral [`super::integral_i`]. For smaller `s`
/// the `s -> 0` limits apply:
///
/// ```text
/// C1 = sigma1^2 / (2 r1^2)
/// C3 = (b^2 r1^{2b-2} / 2) log(2 pi sigma1^2 / (b^2 r1^{2b}))
/// C4 = sqrt(2) b^2 r1^{b-2} I
/// ```
///
/// Note the `r1^b` (not `r1^{2b}`) inside the logarithm of the general
/// `C3`: only that power makes the two branches agree in the limit, as
/// the closed forms require.
#[must_use]
pub fn hard_micro_constants(
    params: &ModelParams,
    eq: &EquilibriumData,
    t1: f64,
    t2: f64,
) -> (f64, f64, f64, f64) {
    assert!(
        t1 >= 0.0 && t2 >= 0.0,
        "hard-edge depths must be nonnegative, got ({t1}, {t2})"
    );
    let b = params.b;
    let r1 = params.r1;
    let s1 = eq.sigma1;
    let dq = eq.delta_tilde_q_r1; // b^2 r1^{2b-2}
    let r1_2b = r1.powf(2.0 * b);
    let i_univ = universal_i_cached();
    let s = t1 + t2;

    let c2 = dq / 2.0;
    if s < T_SUM_SWITCH {
        let c1 = s1 * s1 / (2.0 * r1 * r1);
        let c3 = 0.5 * dq * (2.0 * PI * s1 * s1 / (b * b * r1_2b)).ln();
        let c4 = SQRT_2 * b * b * r1.powf(b - 2.0) * i_univ;
        (c1, c2, c3, c4)
    } else {
        let es = (-s).exp();
        // 1 - e^{-s}(1+s), written through expm1 so the ~s^2/2 result
        // survives small s: w(1+s) - s with w = 1 - e^{-s}.
        let w = -(-s).exp_m1();
        let one_minus = w * (1.0 + s) - s;
        let c1 = s1 * s1 * one_minus / (r1 * r1 * s * s);
        let e1 = exp_integral_e1(s).expect("E1 converges for s > 0");
        let log_arg = b * r1.powf(b) * s / (s1 * (2.0 * PI).sqrt());
        let t_sq = t1 * t1 + t2 * t2;
        let c3 = -dq * (e1 + EULER_GAMMA + log_arg.ln())
            + s1 / (r1 * r1 * s.powi(3))
                * (0.5 * s * s * t_sq * es
                    + (2.0 * t1 * t2 - (b * b * r1_2b / s1) * s * t_sq) * one_minus);
        let c4 = SQRT_2 * b * b * r1.powf(b - 2.0) * (1.0 - 2.0 * b * r1_2b * s / s1) * i_univ;
        (c1, c2, c3, c4)
    }
}

/// The bounded oscillatory factor `F_n` multiplying the `n`-term:
///
/// ```text
/// F_n = [ (log theta)'(n sigma_star + 1/2 - alpha
///          + log(sigma2/sigma1)/(2L); pi/L) + log(sigma2/sigma1) ] / (2L)
/// ```
///
/// with `L = log(r2/r1)` and `theta(z; tau)` the third Jacobi theta
/// function with purely imaginary nome parameter (`tau` real here, so the
/// theta series is real and positive). `F_n` depends on `n` only through
/// the fractional part of `n sigma_star`; it is bounded uniformly in `n`.
#[must_use]
pub fn theta_factor_fn(params: &ModelParams, eq: &EquilibriumData) -> f64 {
    let l = (params.r2 / params.r1).ln();
    let log_ratio = (eq.sigma2 / eq.sigma1).ln();
    let u = params.n_f() * eq.sigma_star + 0.5 - params.alpha + log_ratio / (2.0 * l);
    let d = jacobi_log_theta_deriv(u, PI / l)
        .expect("theta parameter pi/L is positive for r2 > r1");
    (d + log_ratio) / (2.0 * l)
}

/// Full hard-edge microscopic prediction at depths `(t1, t2)`.
///
/// Breakdown terms: `C1*n^2`, `C2*nlogn`, `C3*n`,
/// `theta_term = (sigma1/r1^2) e^{-t1-t2} F_n n`, and `C4*sqrt_n`; the
/// neglected remainder is `O(n^{2/5})`.
#[must_use]
pub fn predict_hard_micro(
    params: &ModelParams,
    eq: &EquilibriumData,
    t1: f64,
    t2: f64,
) -> Prediction {
    let (c1, c2, c3, c4) = hard_micro_constants(params, eq, t1, t2);
    let f_n = theta_factor_fn(params, eq);
    let n = params.n_f();
    let theta_term = eq.sigma1 / (params.r1 * params.r1) * (-(t1 + t2)).exp() * f_n * n;
    let re = |v: f64| Complex64::new(v, 0.0);
    Prediction::from_terms(
        Theorem::HardMicro,
        &[
            ("C1*n^2", re(c1 * n * n)),
            ("C2*nlogn", re(c2 * n * n.ln())),
            ("C3*n", re(c3 * n)),
            ("theta_term", re(theta_term)),
            ("C4*sqrt_n", re(c4 * n.sqrt())),
        ],
        "O(n^{2/5})",
    )
}
