//! Exact sampling of the hard-wall configuration by per-mode radial CDF
//! inversion.
//!
//! The ensemble is rotation-invariant and determinantal with polynomial
//! modes, so the multiset of moduli `{|z_1|, ..., |z_n|}` is distributed as
//! `n` *independent* radii, the `j`-th with density proportional to
//! `r^{2(j+alpha)-1} e^{-n r^{2b}}` restricted to `[0, r1] ∪ [r2, ∞)`
//! (Kostlan's decomposition for radially symmetric polynomial ensembles).
//! Angles are i.i.d. uniform. Sampling a configuration therefore reduces to
//! `n` one-dimensional inversions of regularized incomplete gamma CDFs in
//! the variable `t = n r^{2b}`, for which the [`Kernel`] already stores the
//! per-mode masses `P(a_j, n r1^{2b})` and `Q(a_j, n r2^{2b})`.
//!
//! # Randomness and reproducibility
//!
//! The generator is ChaCha8 seeded with the configuration seed; mode `j`
//! reads from stream `j` (via `set_stream`), drawing the radius variate
//! first and the angle variate second. Draws are therefore independent of
//! evaluation order, and [`sample_configuration`] (parallel over modes when
//! the `parallel` feature is on) is bit-identical to
//! [`sample_configuration_seq`] for the same seed.

use crate::kernel::Kernel;
use crate::model::PlanePoint;
use crate::specfun::{
    log_gamma, reg_lower_gamma, reg_upper_gamma, AccuracyConfig, GammaArgs, SpecFunError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use std::f64::consts::PI;

/// Iteration budget for one radial inversion; bisection alone exhausts
/// double precision long before this, so hitting the cap indicates a
/// non-monotone CDF evaluation (i.e., a bug), not bad luck.
pub const MAX_INVERSION_ITERATIONS: usize = 200;

/// Reproducibility and accuracy knobs for [`sample_configuration`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleConfig {
    /// Seed of the ChaCha8 generator; mode `j` uses stream `j`.
    pub seed: u64,
    /// Number of points; must equal the model's `n`.
    pub n_points: usize,
    /// Mixed absolute/relative tolerance on the gamma variable
    /// `t = n r^{2b}` at which the bracketing interval is declared
    /// converged (bits beyond `~1e-12` carry no statistical content).
    pub inversion_tol: f64,
}

impl SampleConfig {
    /// Config with the default inversion tolerance `1e-12`.
    #[must_use]
    pub fn new(seed: u64, n_points: usize) -> Self {
        Self {
            seed,
            n_points,
            inversion_tol: 1e-12,
        }
    }
}

/// Errors from configuration sampling.
#[derive(Debug, thiserror::Error)]
pub enum SampleError {
    /// A radial inversion ran out of iterations (indicates a bug, not a
    /// tolerance problem: the CDF is strictly monotone off the gap).
    #[error("{context} did not converge within {limit} iterations")]
    NonConvergence {
        /// The inversion that stalled.
        context: &'static str,
        /// The exhausted iteration budget.
        limit: usize,
    },
    /// An underlying incomplete-gamma evaluation failed.
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// CDF of the `j`-th modulus: with `a_j = (j + alpha)/b` and
/// `t(r) = n r^{2b}`,
///
/// ```text
/// F_j(r) = [ P(a_j, t(min(r, r1)))
///            + 1_{r >= r2} ( Q(a_j, t(r2)) - Q(a_j, t(r)) ) ] / bracket_j,
/// bracket_j = P(a_j, t(r1)) + Q(a_j, t(r2)),
/// ```
///
/// flat across the gap and normalized so `F_j(∞) = 1`. The right-branch
/// increment is computed as a difference of upper functions so deep right
/// tails do not cancel against 1.
///
/// # Panics
///
/// If `j` is outside `[1, n]` or `r` is negative/non-finite (caller
/// contract), or in the unreachable event that an incomplete-gamma series
/// fails to converge within its generous internal budget.
#[must_use]
pub fn radial_cdf(kernel: &Kernel, j: usize, r: f64) -> f64 {
    let params = kernel.params();
    assert!(
        (1..=params.n).contains(&j),
        "mode index {j} outside 1..={}",
        params.n
    );
    assert!(r.is_finite() && r >= 0.0, "modulus must be finite and >= 0, got {r}");
    let (a, log_p1, log_q2, log_bracket) = kernel.mode_cdf_parts(j);
    let bracket = log_bracket.exp();
    let cfg = AccuracyConfig::default();
    let nf = params.n_f();
    let t = |radius: f64| nf * radius.powf(2.0 * params.b);
    let mass = if r <= params.r1 {
        reg_lower_gamma(GammaArgs { a, x: t(r) }, &cfg)
            .expect("P(a, t) converges for a > 0, t >= 0")
    } else if r < params.r2 {
        log_p1.exp()
    } else {
        let q_r = reg_upper_gamma(GammaArgs { a, x: t(r) }, &cfg)
            .expect("Q(a, t) converges for a > 0, t >= 0");
        log_p1.exp() + (log_q2.exp() - q_r)
    };
    (mass / bracket).clamp(0.0, 1.0)
}

/// Draw one configuration of the `n`-point process: mode `j`'s modulus is
/// the inverse of [`radial_cdf`]`(j, ·)` at a uniform variate (solved by
/// safeguarded bisection + Newton in `t = n r^{2b}`), its angle uniform on
/// `(-pi, pi]`. Output is ordered by mode index. Deterministic given the
/// seed; no modulus ever falls in the open gap, because each inversion
/// brackets within one CDF branch.
///
/// With the `parallel` feature the modes are drawn by a rayon parallel map
/// (bit-identical results; see module docs).
///
/// # Errors
///
/// [`SampleError::NonConvergence`] if an inversion exceeds
/// [`MAX_INVERSION_ITERATIONS`] (cannot happen for a monotone CDF).
///
/// # Panics
///
/// If `cfg.n_points` differs from the model's `n`, `cfg.n_points == 0`, or
/// `cfg.inversion_tol` is not a positive finite number (caller contract).
pub fn sample_configuration(
    kernel: &Kernel,
    cfg: &SampleConfig,
) -> Result<Vec<PlanePoint>, SampleError> {
    validate(kernel, cfg);
    #[cfg(feature = "parallel")]
    {
        (1..=kernel.params().n)
            .into_par_iter()
            .map(|j| draw_point(kernel, cfg, j))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (1..=kernel.params().n)
            .map(|j| draw_point(kernel, cfg, j))
            .collect()
    }
}

/// Sequential reference implementation of [`sample_configuration`];
/// bit-identical output.
///
/// # Errors
///
/// Same contract as [`sample_configuration`].
pub fn sample_configuration_seq(
    kernel: &Kernel,
    cfg: &SampleConfig,
) -> Result<Vec<PlanePoint>, SampleError> {
    validate(kernel, cfg);
    (1..=kernel.params().n)
        .map(|j| draw_point(kernel, cfg, j))
        .collect()
}

fn validate(kernel: &Kernel, cfg: &SampleConfig) {
    assert!(cfg.n_points >= 1, "n_points must be >= 1");
    assert_eq!(
        cfg.n_points,
        kernel.params().n,
        "n_points must equal the model's n"
    );
    assert!(
        cfg.inversion_tol.is_finite() && cfg.inversion_tol > 0.0,
        "inversion_tol must be positive and finite, got {}",
        cfg.inversion_tol
    );
}

fn draw_point(kernel: &Kernel, cfg: &SampleConfig, j: usize) -> Result<PlanePoint, SampleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(j as u64);
    let u: f64 = rng.gen();
    let v: f64 = rng.gen();
    let r = invert_radius(kernel, j, u, cfg.inversion_tol)?;
    // v in [0, 1) maps to theta in (-pi, pi].
    let theta = PI * (1.0 - 2.0 * v);
    Ok(PlanePoint { r, theta })
}

/// Solve `radial_cdf(j, r) = u` for the modulus.
fn invert_radius(kernel: &Kernel, j: usize, u: f64, tol: f64) -> Result<f64, SampleError> {
    let params = *kernel.params();
    let nf = params.n_f();
    let (a, log_p1, log_q2, log_bracket) = kernel.mode_cdf_parts(j);
    let p1 = log_p1.exp();
    let q2 = log_q2.exp();
    let bracket = log_bracket.exp();
    let t_wall1 = nf * params.r1.powf(b2(&params));
    let t_wall2 = nf * params.r2.powf(b2(&params));
    let lgam = log_gamma(a).expect("a > 0");
    let acc = AccuracyConfig::default();
    // dP/dt = t^{a-1} e^{-t} / Gamma(a); underflow to 0 just disables the
    // Newton step in favor of bisection.
    let density = move |t: f64| ((a - 1.0) * t.ln() - t - lgam).exp();

    let m = u * bracket;
    let t = if m <= p1 {
        // Below-the-wall branch: P(a, t) = m on (0, t(r1)].
        let g = |t: f64| -> Result<f64, SpecFunError> {
            Ok(reg_lower_gamma(GammaArgs { a, x: t }, &acc)? - m)
        };
        solve_increasing(&g, &density, 0.0, t_wall1, tol)?
    } else {
        // Beyond-the-gap branch: Q(a, t) = q2 - (m - p1) on [t(r2), ∞).
        // The target cancels as u -> 1; the floor keeps it positive (the
        // affected radii sit beyond the 1 - 1e-18 quantile).
        let q_target = (q2 - (m - p1)).max(q2 * 1e-18).max(f64::MIN_POSITIVE);
        let mut hi = (a + 10.0 * a.sqrt() + 20.0).max(t_wall2);
        let mut growths = 0;
        while reg_upper_gamma(GammaArgs { a, x: hi }, &acc)? > q_target {
            hi *= 2.0;
            growths += 1;
            if growths > MAX_INVERSION_ITERATIONS {
                return Err(SampleError::NonConvergence {
                    context: "radial inversion (tail bracketing)",
                    limit: MAX_INVERSION_ITERATIONS,
                });
            }
        }
        let g = |t: f64| -> Result<f64, SpecFunError> {
            Ok(q_target - reg_upper_gamma(GammaArgs { a, x: t }, &acc)?)
        };
        solve_increasing(&g, &density, t_wall2, hi, tol)?
    };
    Ok((t / nf).powf(1.0 / b2(&params)))
}

fn b2(params: &crate::model::ModelParams) -> f64 {
    2.0 * params.b
}

/// Root of an increasing function `g` with `g(lo) <= 0 <= g(hi)`:
/// bisection safeguarding a Newton iteration that uses the analytic CDF
/// derivative. Converges when the bracket width drops below
/// `tol * (1 + hi)`.
fn solve_increasing<G, D>(
    g: &G,
    density: &D,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64, SampleError>
where
    G: Fn(f64) -> Result<f64, SpecFunError>,
    D: Fn(f64) -> f64,
{
    let mut t = 0.5 * (lo + hi);
    // Width proxy from two iterations back: a Newton step is accepted only
    // if it is at most half of it, so the bracket provably shrinks
    // geometrically even when Newton crawls one-sidedly (deep left tails
    // approach the root by a factor of only 1 - 1/a per step).
    let mut step_before = hi - lo;
    let mut last_step = hi - lo;
    for _ in 0..MAX_INVERSION_ITERATIONS {
        if hi - lo <= tol * (1.0 + hi) {
            return Ok(0.5 * (lo + hi));
        }
        let value = g(t)?;
        if value == 0.0 {
            return Ok(t);
        }
        if value < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let d = density(t);
        let newton = t - value / d;
        let newton_fits = newton.is_finite()
            && newton > lo
            && newton < hi
            && 2.0 * value.abs() <= step_before * d;
        step_before = last_step;
        if newton_fits {
            last_step = (value / d).abs();
            t = newton;
        } else {
            last_step = 0.5 * (hi - lo);
            t = 0.5 * (lo + hi);
        }
    }
    Err(SampleError::NonConvergence {
        context: "radial inversion",
        limit: MAX_INVERSION_ITERATIONS,
    })
}
