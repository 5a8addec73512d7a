//! Ensemble definition: parameters, validation, the equilibrium measure,
//! and the scaled observation points used by the asymptotic regimes.
//!
//! The ensemble lives in the plane with radial potential
//!
//! ```text
//! Q(z) = |z|^{2b} - (2 alpha / n) log |z|   for |z| outside (r1, r2),
//! Q(z) = +infinity                          for |z| in (r1, r2),
//! ```
//!
//! with `b > 0`, `alpha > -1`, and a forbidden open annulus ("gap", a hard
//! wall on both rims) strictly inside the droplet `|z| <= b^{-1/(2b)}`.
//! Pushing the gap's charge onto the two rims concentrates singular mass
//! `sigma1` at `r1` and `sigma2` at `r2`; everything downstream (kernel
//! asymptotics, sampling, diagnostics) is phrased in terms of those
//! equilibrium quantities, computed here once in closed form.

use thiserror::Error;

/// Errors from parameter validation and scaled-point construction.
#[derive(Debug, Error)]
pub enum ModelError {
    /// The parameter set violates a structural requirement.
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    /// An operation argument is outside its domain.
    #[error("{context}: {message}")]
    Domain {
        /// Operation that rejected the argument.
        context: &'static str,
        /// Explanation of the violated requirement.
        message: String,
    },
}

/// Defining parameters of the ensemble.
///
/// Invariants (enforced by the constructors): `b > 0`, `alpha > -1`,
/// `0 < r1 < r2 < b^(-1/(2b))`, `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Power of the radial confinement `|z|^{2b}`.
    pub b: f64,
    /// Strength of the point charge at the origin.
    pub alpha: f64,
    /// Inner rim of the forbidden annulus.
    pub r1: f64,
    /// Outer rim of the forbidden annulus.
    pub r2: f64,
    /// Number of particles / polynomial modes.
    pub n: usize,
}

/// Closed-form equilibrium quantities derived from [`ModelParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumData {
    /// Mass of the closed disk `|z| <= r1`:
    /// `sigma_star = (r2^{2b} - r1^{2b}) / (2 log(r2/r1))`.
    pub sigma_star: f64,
    /// Singular mass on the inner rim: `sigma1 = sigma_star - b r1^{2b}`.
    pub sigma1: f64,
    /// Singular mass on the outer rim: `sigma2 = b r2^{2b} - sigma_star`.
    pub sigma2: f64,
    /// Critical mode index `j_star = n sigma_star - alpha`.
    pub j_star: f64,
    /// Fractional part `x = j_star - floor(j_star)`, in `[0, 1)`.
    pub x: f64,
    /// One-sided Laplacian of `Q` at the inner rim: `b^2 r1^{2b-2}`.
    pub delta_tilde_q_r1: f64,
}

/// A point of the plane in polar form `z = r e^{i theta}`.
///
/// Polar form is used throughout: the ensemble is rotation-invariant and
/// every observation point is specified by modulus scaling and an angle,
/// so converting to Cartesian early would only inject rounding at `r ~ r1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    /// Modulus, `>= 0`.
    pub r: f64,
    /// Argument in radians.
    pub theta: f64,
}

/// Which rim of the gap a hard-edge point scales from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Approach `r1` from inside the disk: `r = r1 (1 - t/(sigma1 n))`.
    Inner,
    /// Approach `r2` from outside: `r = r2 (1 + t/(sigma2 n))`.
    Outer,
}

impl ModelParams {
    /// Validated constructor with absolute rim radii.
    ///
    /// # Errors
    ///
    /// `InvalidParams` unless `b > 0`, `alpha > -1`,
    /// `0 < r1 < r2 < b^(-1/(2b))` (all strict), and `n >= 1`.
    pub fn new(b: f64, alpha: f64, r1: f64, r2: f64, n: usize) -> Result<Self, ModelError> {
        let p = Self { b, alpha, r1, r2, n };
        p.validate()?;
        Ok(p)
    }

    /// Validated constructor with rim radii given as fractions of the
    /// droplet radius `b^(-1/(2b))` (the natural parameterization for
    /// figures: `r1 = r1_frac * b^(-1/(2b))`, likewise `r2`).
    ///
    /// # Errors
    ///
    /// `InvalidParams` under the same conditions as [`ModelParams::new`];
    /// in particular the fractions must satisfy `0 < r1_frac < r2_frac < 1`.
    pub fn from_fractions(
        b: f64,
        alpha: f64,
        r1_frac: f64,
        r2_frac: f64,
        n: usize,
    ) -> Result<Self, ModelError> {
        if !(b.is_finite() && b > 0.0) {
            return Err(ModelError::InvalidParams(format!(
                "b must be finite and positive, got {b}"
            )));
        }
        let cap = b.powf(-1.0 / (2.0 * b));
        Self::new(b, alpha, r1_frac * cap, r2_frac * cap, n)
    }

    /// Construct without validation. Test-only escape hatch for degenerate
    /// configurations (e.g. `r1 == r2`, a gap of zero width, for which the
    /// mode-norm bracket collapses to 1).
    pub(crate) fn new_unchecked(b: f64, alpha: f64, r1: f64, r2: f64, n: usize) -> Self {
        Self { b, alpha, r1, r2, n }
    }

    /// Droplet outer radius `b^(-1/(2b))`.
    #[must_use]
    pub fn droplet_radius(&self) -> f64 {
        self.b.powf(-1.0 / (2.0 * self.b))
    }

    /// The particle number as a float (most formulas consume it that way).
    #[must_use]
    pub fn n_f(&self) -> f64 {
        self.n as f64
    }

    fn validate(&self) -> Result<(), ModelError> {
        let Self { b, alpha, r1, r2, n } = *self;
        if !(b.is_finite() && b > 0.0) {
            return Err(ModelError::InvalidParams(format!(
                "b must be finite and positive, got {b}"
            )));
        }
        if !(alpha.is_finite() && alpha > -1.0) {
            return Err(ModelError::InvalidParams(format!(
                "alpha must be finite and > -1, got {alpha}"
            )));
        }
        if !(r1.is_finite() && r2.is_finite() && 0.0 < r1 && r1 < r2) {
            return Err(ModelError::InvalidParams(format!(
                "rim radii must satisfy 0 < r1 < r2, got r1 = {r1}, r2 = {r2}"
            )));
        }
        let cap = self.droplet_radius();
        if r2 >= cap {
            return Err(ModelError::InvalidParams(format!(
                "outer rim must lie strictly inside the droplet: r2 = {r2} >= b^(-1/(2b)) = {cap}"
            )));
        }
        if n == 0 {
            return Err(ModelError::InvalidParams("n must be >= 1".into()));
        }
        Ok(())
    }
}

/// Compute the equilibrium quantities for a validated parameter set.
pub fn equilibrium(params: &ModelParams) -> EquilibriumData {
    let ModelParams { b, alpha, r1, r2, n } = *params;
    let t1 = r1.powf(2.0 * b);
    let t2 = r2.powf(2.0 * b);
    let sigma_star = (t2 - t1) / (2.0 * (r2 / r1).ln());
    let sigma1 = sigma_star - b * t1;
    let sigma2 = b * t2 - sigma_star;
    let j_star = n as f64 * sigma_star - alpha;
    let x = j_star - j_star.floor();
    EquilibriumData {
        sigma_star,
        sigma1,
        sigma2,
        j_star,
        x,
        delta_tilde_q_r1: b * b * r1.powf(2.0 * b - 2.0),
    }
}

/// The potential `Q` at a point: `r^{2b} - (2 alpha / n) log r` outside the
/// gap, `+inf` strictly inside it.
///
/// At the origin the logarithmic term dominates: `+inf` for `alpha > 0`,
/// `0` for `alpha = 0`, `-inf` for `alpha < 0`.
pub fn potential_q(params: &ModelParams, p: &PlanePoint) -> f64 {
    let ModelParams { b, alpha, n, .. } = *params;
    let r = p.r;
    if r > params.r1 && r < params.r2 {
        return f64::INFINITY;
    }
    if r == 0.0 {
        // 0^{2b} - (2 alpha / n) * (-inf)
        return if alpha > 0.0 {
            f64::INFINITY
        } else if alpha < 0.0 {
            f64::NEG_INFINITY
        } else {
            0.0
        };
    }
    r.powf(2.0 * b) - (2.0 * alpha / n as f64) * r.ln()
}

/// Equilibrium mass of the closed disk `|z| <= r` (right-continuous in `r`,
/// with jumps `sigma1` at `r1` and `sigma2` at `r2`).
pub fn mu_mass_in_disk(params: &ModelParams, r: f64) -> f64 {
    let ModelParams { b, r1, r2, .. } = *params;
    let eq = equilibrium(params);
    if r < 0.0 {
        return 0.0;
    }
    if r < r1 {
        b * r.powf(2.0 * b)
    } else if r < r2 {
        // Absolutely continuous part up to r1, plus the rim atom sigma1.
        eq.sigma_star
    } else if r < params.droplet_radius() {
        // Rim atom sigma2 rejoins the bulk profile b r^{2b} exactly at r2.
        b * r.powf(2.0 * b)
    } else {
        1.0
    }
}

/// Hard-edge observation point at angle `beta`, scaled distance `t >= 0`
/// from the chosen rim: `r1 (1 - t/(sigma1 n))` inside, `r2 (1 + t/(sigma2 n))`
/// outside.
///
/// # Panics
///
/// If `t < 0` or is non-finite (caller contract; the theorems take
/// `t1, t2 >= 0`).
pub fn hard_edge_point(
    params: &ModelParams,
    eq: &EquilibriumData,
    t: f64,
    beta: f64,
    side: Side,
) -> PlanePoint {
    assert!(
        t.is_finite() && t >= 0.0,
        "hard_edge_point requires finite t >= 0, got {t}"
    );
    let n = params.n_f();
    let r = match side {
        Side::Inner => params.r1 * (1.0 - t / (eq.sigma1 * n)),
        Side::Outer => params.r2 * (1.0 + t / (eq.sigma2 * n)),
    };
    PlanePoint { r, theta: beta }
}

/// Semi-hard observation point at angle `beta`: distance `s_frak` in units
/// of the `sqrt(n)`-scale boundary layer inside the inner rim,
/// `r = r1 (1 - s_frak / (b r1^b sqrt(2n)))`.
///
/// # Errors
///
/// `Domain` for `s_frak <= 0`: at `s_frak = 0` the point sits exactly on
/// the rim where the `1/n`-scale regime takes over, and negative values
/// would land in the gap.
pub fn semi_hard_point(
    params: &ModelParams,
    s_frak: f64,
    beta: f64,
) -> Result<PlanePoint, ModelError> {
    if !(s_frak.is_finite() && s_frak > 0.0) {
        return Err(ModelError::Domain {
            context: "semi_hard_point",
            message: format!("requires s_frak > 0, got {s_frak}"),
        });
    }
    let ModelParams { b, r1, .. } = *params;
    let r = r1 * (1.0 - s_frak / (b * r1.powf(b) * (2.0 * params.n_f()).sqrt()));
    Ok(PlanePoint { r, theta: beta })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The figure configuration used throughout the repository's examples.
    fn fig_params(n: usize) -> ModelParams {
        ModelParams::from_fractions(1.3, 1.26, 0.42, 0.67, n).unwrap()
    }

    fn rel_err(got: f64, want: f64) -> f64 {
        (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn closed_form_half_b() {
        // b = 1/2, r1 = 1, r2 = sqrt(e): sigma_star = sqrt(e) - 1,
        // sigma1 = sqrt(e) - 3/2, sigma2 = 1 - sqrt(e)/2 (exact).
        let e_sqrt = std::f64::consts::E.sqrt();
        // droplet radius = (1/2)^(-1) = 2 > sqrt(e), so params are valid
        let p = ModelParams::new(0.5, 0.0, 1.0, e_sqrt, 8).unwrap();
        let eq = equilibrium(&p);
        assert!(rel_err(eq.sigma_star, e_sqrt - 1.0) < 1e-14);
        assert!(rel_err(eq.sigma1, e_sqrt - 1.5) < 1e-12);
        assert!(rel_err(eq.sigma2, 1.0 - e_sqrt / 2.0) < 1e-13);
    }

    #[test]
    fn figure_equilibrium_oracle_values() {
        // 50-digit multiprecision oracle for the figure parameter set.
        let p = fig_params(1024);
        assert!(rel_err(p.droplet_radius(), 0.90401499396097284578) < 1e-15);
        assert!(rel_err(p.r1, 0.37968629746360860189) < 1e-15);
        assert!(rel_err(p.r2, 0.6056900459538518966) < 1e-15);
        let eq = equilibrium(&p);
        assert!(rel_err(eq.sigma_star, 0.2044003377084396412932347) < 1e-14);
        assert!(rel_err(eq.sigma1, 0.099579372356255168517427) < 1e-13);
        assert!(rel_err(eq.sigma2, 0.1486157414181500094616311) < 1e-13);
        assert!(rel_err(eq.delta_tilde_q_r1, 0.9452390588236338871154546) < 1e-14);
        assert!(eq.sigma1 > 0.0 && eq.sigma2 > 0.0);
        // x at the three grid sizes exercised most often.
        assert!((equilibrium(&fig_params(256)).x - 0.06648645336054816218630821).abs() < 1e-11);
        assert!((equilibrium(&fig_params(1024)).x - 0.04594581344219267539058542).abs() < 1e-11);
        assert!((equilibrium(&fig_params(4096)).x - 0.9637832537687707282076943).abs() < 1e-10);
    }

    #[test]
    fn mass_conservation_identity() {
        // sigma1 + sigma2 = b (r2^{2b} - r1^{2b}) for any valid params.
        for &(b, r1, r2) in &[(1.3, 0.38, 0.6), (0.5, 1.0, 1.6), (2.0, 0.3, 0.5), (1.0, 0.2, 0.9)]
        {
            let p = ModelParams::new(b, 0.7, r1, r2, 16).unwrap();
            let eq = equilibrium(&p);
            let want = b * (r2.powf(2.0 * b) - r1.powf(2.0 * b));
            assert!(rel_err(eq.sigma1 + eq.sigma2, want) < 1e-12, "b={b}");
            // The disk mass at r1 sits strictly between the bulk values.
            assert!(b * r1.powf(2.0 * b) < eq.sigma_star);
            assert!(eq.sigma_star < b * r2.powf(2.0 * b));
        }
    }

    #[test]
    fn validation_rejects_bad_params() {
        assert!(ModelParams::new(0.0, 0.0, 0.3, 0.5, 4).is_err()); // b = 0
        assert!(ModelParams::new(-1.0, 0.0, 0.3, 0.5, 4).is_err()); // b < 0
        assert!(ModelParams::new(1.0, -1.0, 0.3, 0.5, 4).is_err()); // alpha = -1
        assert!(ModelParams::new(1.0, 0.0, 0.0, 0.5, 4).is_err()); // r1 = 0
        assert!(ModelParams::new(1.0, 0.0, 0.5, 0.5, 4).is_err()); // r1 = r2
        assert!(ModelParams::new(1.0, 0.0, 0.6, 0.5, 4).is_err()); // r1 > r2
        assert!(ModelParams::new(1.0, 0.0, 0.3, 1.0, 4).is_err()); // r2 = cap (b=1)
        assert!(ModelParams::new(1.0, 0.0, 0.3, 0.5, 0).is_err()); // n = 0
        assert!(ModelParams::new(1.0, 0.0, 0.3, 0.5, 4).is_ok());
        // Fraction form: cap is exercised implicitly (fractions < 1).
        assert!(ModelParams::from_fractions(1.3, 1.26, 0.42, 1.0, 4).is_err());
        assert!(ModelParams::from_fractions(1.3, 1.26, 0.67, 0.42, 4).is_err());
    }

    #[test]
    fn potential_values() {
        let p = ModelParams::new(1.0, 0.0, 0.3, 0.5, 4).unwrap();
        // alpha = 0, r = 1: Q = 1^{2b} = 1... but r=1 is outside the gap
        // (gap is (0.3, 0.5)) so the formula applies. (r2 < cap = 1 so the
        // droplet boundary is at 1; Q is still defined there.)
        assert!((potential_q(&p, &PlanePoint { r: 1.0, theta: 0.3 }) - 1.0).abs() < 1e-15);
        // Gap interior is forbidden.
        assert_eq!(
            potential_q(&p, &PlanePoint { r: 0.4, theta: 0.0 }),
            f64::INFINITY
        );
        // Rim points are allowed (closed droplet).
        let q_r1 = potential_q(&p, &PlanePoint { r: 0.3, theta: 0.0 });
        assert!(q_r1.is_finite());
        // Origin depends on the sign of alpha.
        let plus = ModelParams::new(1.0, 0.5, 0.3, 0.5, 4).unwrap();
        let minus = ModelParams::new(1.0, -0.5, 0.3, 0.5, 4).unwrap();
        let origin = PlanePoint { r: 0.0, theta: 0.0 };
        assert_eq!(potential_q(&plus, &origin), f64::INFINITY);
        assert_eq!(potential_q(&minus, &origin), f64::NEG_INFINITY);
        assert_eq!(potential_q(&p, &origin), 0.0);
    }

    #[test]
    fn disk_mass_profile() {
        let p = fig_params(64);
        let eq = equilibrium(&p);
        // Known plateau values.
        assert!(rel_err(mu_mass_in_disk(&p, p.r1), eq.sigma_star) < 1e-14);
        assert!(rel_err(mu_mass_in_disk(&p, 0.5 * (p.r1 + p.r2)), eq.sigma_star) < 1e-14);
        assert!(
            rel_err(mu_mass_in_disk(&p, p.r2), p.b * p.r2.powf(2.0 * p.b)) < 1e-14
        );
        assert!((mu_mass_in_disk(&p, p.droplet_radius()) - 1.0).abs() < 1e-14);
        assert!((mu_mass_in_disk(&p, 10.0) - 1.0).abs() < 1e-15);
        assert_eq!(mu_mass_in_disk(&p, 0.0), 0.0);

        // Nondecreasing on a fine grid; jump sizes at the rims.
        let mut prev = 0.0;
        for i in 0..=1000 {
            let r = f64::from(i) / 1000.0;
            let m = mu_mass_in_disk(&p, r);
            assert!(m >= prev - 1e-15, "mass decreased at r = {r}");
            prev = m;
        }
        let eps = 1e-9;
        let jump1 = mu_mass_in_disk(&p, p.r1) - mu_mass_in_disk(&p, p.r1 - eps);
        assert!((jump1 - eq.sigma1).abs() < 1e-6);
        let jump2 = mu_mass_in_disk(&p, p.r2) - mu_mass_in_disk(&p, p.r2 - eps);
        assert!((jump2 - eq.sigma2).abs() < 1e-6);
        // Right-continuity: the value just right of each rim is close to
        // the rim value itself.
        assert!((mu_mass_in_disk(&p, p.r1 + eps) - mu_mass_in_disk(&p, p.r1)).abs() < 1e-6);
        assert!((mu_mass_in_disk(&p, p.r2 + eps) - mu_mass_in_disk(&p, p.r2)).abs() < 1e-6);
    }

    #[test]
    fn hard_edge_points() {
        let p = fig_params(1024);
        let eq = equilibrium(&p);
        let at = |t: f64, side: Side| hard_edge_point(&p, &eq, t, 0.25, side);
        assert!(rel_err(at(0.0, Side::Inner).r, p.r1) < 1e-15);
        assert!(rel_err(at(0.0, Side::Outer).r, p.r2) < 1e-15);
        // Degenerate scaling: t = sigma1 n collapses the inner point to 0.
        assert!(at(eq.sigma1 * p.n_f(), Side::Inner).r.abs() < 1e-15);
        // Formula spot check at the figure scale.
        let want = p.r1 * (1.0 - 0.21 / (eq.sigma1 * 1024.0));
        assert!(rel_err(at(0.21, Side::Inner).r, want) < 1e-15);
        let want = p.r2 * (1.0 + 0.45 / (eq.sigma2 * 1024.0));
        assert!(rel_err(at(0.45, Side::Outer).r, want) < 1e-15);
        assert_eq!(at(0.21, Side::Inner).theta, 0.25);
    }

    #[test]
    #[should_panic(expected = "requires finite t >= 0")]
    fn hard_edge_rejects_negative_t() {
        let p = fig_params(64);
        let eq = equilibrium(&p);
        let _ = hard_edge_point(&p, &eq, -0.1, 0.0, Side::Inner);
    }

    #[test]
    fn semi_hard_points() {
        let p = fig_params(4096);
        let eq = equilibrium(&p);
        // The two displayed forms of the scaled radius coincide:
        // r1 (1 - s/(b r1^b sqrt(2n))) == r1 - s/sqrt(2n * DeltaQ(r1)).
        let s = 1.45;
        let got = semi_hard_point(&p, s, 0.0).unwrap().r;
        let alt = p.r1 - s / (2.0 * p.n_f() * eq.delta_tilde_q_r1).sqrt();
        assert!(rel_err(got, alt) < 1e-14);
        // s -> 0+ approaches the rim from inside.
        let near = semi_hard_point(&p, 1e-12, 0.0).unwrap().r;
        assert!(near < p.r1 && p.r1 - near < 1e-12);
        // Domain errors.
        assert!(semi_hard_point(&p, 0.0, 0.0).is_err());
        assert!(semi_hard_point(&p, -1.0, 0.0).is_err());
        assert!(semi_hard_point(&p, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn fractional_part_equidistributes() {
        // Weak smoke test: x(n) should wander over [0,1) rather than stick;
        // its mean over n = 1..100 lands near 1/2 for generic sigma_star.
        let mut sum = 0.0;
        for n in 1..=100 {
            sum += equilibrium(&fig_params(n)).x;
        }
        let mean = sum / 100.0;
        assert!((mean - 0.5).abs() < 0.15, "mean of x(n) was {mean}");
    }
}
