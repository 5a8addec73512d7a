//! Exponential integral `E1(x) = Int_x^inf e^{-t}/t dt` for `x > 0`.
//!
//! Two classical regimes: the alternating power series around the
//! logarithmic singularity for `x <= 1`, and the continued fraction
//! `e^{-x}/(x + 1/(1 + 1/(x + 2/(1 + ...))))` evaluated by the modified
//! Lentz algorithm for `x > 1`. Both converge fast and the crossover at 1
//! keeps each in its comfortable range.

use super::{domain_err, SpecFunError, EULER_GAMMA};

/// Exponential integral `E1(x)` for `x > 0`.
///
/// # Errors
///
/// `Domain` for `x <= 0` or non-finite `x`; `NonConvergence` if an
/// expansion fails to settle within its iteration budget (does not happen
/// for finite positive arguments in practice).
///
/// ```
/// use hardwall::specfun::exp_integral_e1;
/// let v = exp_integral_e1(1.0).unwrap();
/// assert!((v - 0.21938393439552027).abs() < 1e-15);
/// assert!(exp_integral_e1(0.0).is_err());
/// ```
pub fn exp_integral_e1(x: f64) -> Result<f64, SpecFunError> {
    if !x.is_finite() || x <= 0.0 {
        return Err(domain_err(
            "exp_integral_e1",
            format!("argument must be finite and positive, got {x}"),
        ));
    }
    if x <= 1.0 {
        series(x)
    } else {
        continued_fraction(x)
    }
}

/// `E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k * k!)`.
fn series(x: f64) -> Result<f64, SpecFunError> {
    let mut sum = 0.0_f64;
    let mut term = 1.0_f64; // x^k / k! carried incrementally
    for k in 1..=200u32 {
        term *= x / f64::from(k);
        let contrib = term / f64::from(k);
        sum += if k % 2 == 1 { contrib } else { -contrib };
        if contrib < 1e-18 * sum.abs().max(1.0) {
            return Ok(-EULER_GAMMA - x.ln() + sum);
        }
    }
    Err(SpecFunError::NonConvergence {
        context: "exp_integral_e1 series",
        limit: 200,
    })
}

/// Modified Lentz evaluation of the Stieltjes continued fraction,
/// `E1(x) = e^{-x} / (x + 1/(1 + 1/(x + 2/(1 + 2/(x + ...)))))`.
fn continued_fraction(x: f64) -> Result<f64, SpecFunError> {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for k in 1..=400u32 {
        let a = -f64::from(k) * f64::from(k); // pairs the k/1 and k/x levels
        b += 2.0;
        d = a * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            return Ok(h * (-x).exp());
        }
    }
    Err(SpecFunError::NonConvergence {
        context: "exp_integral_e1 continued fraction",
        limit: 400,
    })
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
        assert!(rel_err(exp_integral_e1(1.0).unwrap(), 0.2193839343955202736771638) < 4e-15);
        assert!(rel_err(exp_integral_e1(0.3).unwrap(), 0.9056766516758467124303275) < 1e-15);
        assert!(rel_err(exp_integral_e1(5.0).unwrap(), 0.001148295591275325797330562) < 1e-14);
        assert!(rel_err(exp_integral_e1(0.66).unwrap(), 0.4035862747911657928981418) < 1e-15);
    }

    #[test]
    fn crossover_is_seamless() {
        // Series at x=1 vs continued fraction just above.
        let lo = exp_integral_e1(1.0).unwrap();
        let hi = exp_integral_e1(1.0 + 1e-12).unwrap();
        assert!((lo - hi).abs() < 1e-12);
    }

    #[test]
    fn recurrence_with_derivative() {
        // d/dx E1 = -e^{-x}/x; central-difference check at a few points.
        for &x in &[0.4, 0.9, 1.5, 3.0] {
            let h = 1e-6;
            let num = (exp_integral_e1(x + h).unwrap() - exp_integral_e1(x - h).unwrap()) / (2.0 * h);
            let exact = -(-x).exp() / x;
            assert!((num - exact).abs() < 1e-8, "derivative at {x}");
        }
    }

    #[test]
    fn deep_tail_is_negligible() {
        // E1(x) < e^{-x}/x, so E1(50) < e^{-50}/50 ~ 3.9e-24.
        assert!(exp_integral_e1(50.0).unwrap() < 1e-23);
    }

    #[test]
    fn series_identity() {
        // E1(x) + gamma_E + ln x equals the alternating series; check the
        // partial sum at x = 0.3 where 12 terms already reach 1e-18.
        let x: f64 = 0.3;
        let mut sum = 0.0_f64;
        let mut term = 1.0_f64;
        for k in 1..=20u32 {
            term *= x / f64::from(k);
            let c = term / f64::from(k);
            sum += if k % 2 == 1 { c } else { -c };
        }
        let lhs = exp_integral_e1(x).unwrap() + EULER_GAMMA + x.ln();
        assert!((lhs - sum).abs() < 1e-15);
    }

    #[test]
    fn monotone_decreasing_positive() {
        let xs = [0.05, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 20.0];
        let mut prev = f64::INFINITY;
        for &x in &xs {
            let v = exp_integral_e1(x).unwrap();
            assert!(v > 0.0);
            assert!(v < prev, "not decreasing at {x}");
            prev = v;
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(exp_integral_e1(0.0).is_err());
        assert!(exp_integral_e1(-1.0).is_err());
        assert!(exp_integral_e1(f64::NAN).is_err());
        assert!(exp_integral_e1(f64::INFINITY).is_err());
    }
}
