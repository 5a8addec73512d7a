//! Jacobi theta function on the imaginary-modulus line, and its
//! logarithmic derivative.
//!
//! For `tau > 0` we evaluate
//!
//! ```text
//! theta(z; i tau)  = sum_{l in Z} e^{-pi tau l^2} e^{2 pi i l z}
//!                  = 1 + 2 sum_{l >= 1} e^{-pi tau l^2} cos(2 pi l z)
//! ```
//!
//! which is real, 1-periodic, and strictly positive for real `z`. The
//! Gaussian decay `e^{-pi tau l^2}` makes the series effectively finite:
//! terms drop below 1e-18 once `pi tau l^2 > 41.45`, so we truncate at
//! `l_max = ceil(sqrt(41.45 / (pi tau)))`.

use super::{domain_err, SpecFunError};

/// Largest exponent magnitude worth keeping: `e^{-41.45} ~ 1e-18`.
const LOG_CUTOFF: f64 = 41.45;

fn term_count(tau: f64) -> u32 {
    let l = (LOG_CUTOFF / (std::f64::consts::PI * tau)).sqrt().ceil();
    (l as u32).max(1)
}

fn check_tau(context: &'static str, tau: f64) -> Result<(), SpecFunError> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(domain_err(
            context,
            format!("modulus parameter tau must be finite and positive, got {tau}"),
        ));
    }
    Ok(())
}

/// `theta(z; i tau)` for real `z` and `tau > 0`.
///
/// # Errors
///
/// `Domain` if `tau <= 0` or either argument is non-finite.
///
/// ```
/// use hardwall::specfun::jacobi_theta;
/// // 1-periodicity
/// let a = jacobi_theta(0.3, 1.1).unwrap();
/// let b = jacobi_theta(1.3, 1.1).unwrap();
/// assert!((a - b).abs() < 1e-15);
/// ```
pub fn jacobi_theta(z: f64, tau: f64) -> Result<f64, SpecFunError> {
    check_tau("jacobi_theta", tau)?;
    if !z.is_finite() {
        return Err(domain_err("jacobi_theta", format!("non-finite z: {z}")));
    }
    let zr = z - z.floor(); // reduce to [0, 1): the series is 1-periodic
    let mut sum = 1.0_f64;
    for l in 1..=term_count(tau) {
        let lf = f64::from(l);
        let w = (-std::f64::consts::PI * tau * lf * lf).exp();
        sum += 2.0 * w * (2.0 * std::f64::consts::PI * lf * zr).cos();
    }
    Ok(sum)
}

/// Derivative `d theta / dz (z; i tau)` for real `z` and `tau > 0`.
///
/// # Errors
///
/// `Domain` if `tau <= 0` or either argument is non-finite.
pub fn jacobi_theta_dz(z: f64, tau: f64) -> Result<f64, SpecFunError> {
    check_tau("jacobi_theta_dz", tau)?;
    if !z.is_finite() {
        return Err(domain_err("jacobi_theta_dz", format!("non-finite z: {z}")));
    }
    let zr = z - z.floor();
    let mut sum = 0.0_f64;
    for l in 1..=term_count(tau) {
        let lf = f64::from(l);
        let w = (-std::f64::consts::PI * tau * lf * lf).exp();
        sum -= 4.0 * std::f64::consts::PI * lf * w * (2.0 * std::f64::consts::PI * lf * zr).sin();
    }
    Ok(sum)
}

/// Logarithmic derivative `(log theta)'(z; i tau) = theta'(z)/theta(z)`.
///
/// Well-defined for all real `z` since `theta > 0` on the imaginary-modulus
/// line.
///
/// # Errors
///
/// `Domain` if `tau <= 0` or either argument is non-finite.
///
/// ```
/// use hardwall::specfun::jacobi_log_theta_deriv;
/// // Odd around z = 0: (log theta)'(-z) = -(log theta)'(z).
/// let a = jacobi_log_theta_deriv(0.2, 1.5).unwrap();
/// let b = jacobi_log_theta_deriv(-0.2, 1.5).unwrap();
/// assert!((a + b).abs() < 1e-15);
/// ```
pub fn jacobi_log_theta_deriv(z: f64, tau: f64) -> Result<f64, SpecFunError> {
    Ok(jacobi_theta_dz(z, tau)? / jacobi_theta(z, tau)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(got: f64, want: f64) -> f64 {
        (got - want).abs() / want.abs()
    }

    #[test]
    fn oracle_values() {
        // 50-digit multiprecision oracle.
        assert!(rel_err(jacobi_theta(0.37, 2.0).unwrap(), 0.9974432949635162023477195) < 1e-15);
        assert!(rel_err(jacobi_theta(0.0, 0.8).unwrap(), 1.162091289079323115425045) < 1e-15);
        assert!(rel_err(
            jacobi_log_theta_deriv(0.37, 2.0).unwrap(),
            -0.01715053891856455101139773,
        ) < 1e-13);
        assert!(rel_err(
            jacobi_log_theta_deriv(0.25, 0.8).unwrap(),
            -1.017996242140362456434055,
        ) < 1e-14);
    }

    #[test]
    fn periodicity_and_symmetry() {
        for &(z, tau) in &[(0.13, 0.5), (0.41, 1.0), (0.77, 2.3), (0.02, 0.25)] {
            let v = jacobi_theta(z, tau).unwrap();
            assert!(rel_err(jacobi_theta(z + 3.0, tau).unwrap(), v) < 1e-14);
            assert!(rel_err(jacobi_theta(z - 2.0, tau).unwrap(), v) < 1e-14);
            // Even in z.
            assert!(rel_err(jacobi_theta(-z, tau).unwrap(), v) < 1e-14);
        }
    }

    #[test]
    fn positive_on_real_line() {
        for i in 0..50 {
            let z = f64::from(i) * 0.02;
            for &tau in &[0.1, 0.5, 1.0, 4.0] {
                assert!(jacobi_theta(z, tau).unwrap() > 0.0, "z={z} tau={tau}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for &(z, tau) in &[(0.17, 0.9), (0.52, 1.7), (0.88, 0.4)] {
            let h = 1e-6;
            let num =
                (jacobi_theta(z + h, tau).unwrap() - jacobi_theta(z - h, tau).unwrap()) / (2.0 * h);
            let exact = jacobi_theta_dz(z, tau).unwrap();
            assert!((num - exact).abs() < 1e-7, "z={z} tau={tau}");
        }
    }

    #[test]
    fn log_deriv_vanishes_at_half_integers() {
        // theta is even about z = 0 and z = 1/2, so the log-derivative
        // vanishes there.
        for &tau in &[0.3, 0.8, 2.0] {
            assert!(jacobi_log_theta_deriv(0.0, tau).unwrap().abs() < 1e-15);
            assert!(jacobi_log_theta_deriv(0.5, tau).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_modulus() {
        assert!(jacobi_theta(0.1, 0.0).is_err());
        assert!(jacobi_theta(0.1, -1.0).is_err());
        assert!(jacobi_theta(0.1, f64::NAN).is_err());
        assert!(jacobi_theta(f64::NAN, 1.0).is_err());
        assert!(jacobi_log_theta_deriv(0.1, -0.5).is_err());
    }
}
