//! Special functions needed by the kernel and its asymptotic expansions.
//!
//! Everything works in `f64`. Functions that can fail (domain violations,
//! non-convergent series or quadrature) return [`Result`] with
//! [`SpecFunError`]; the rest are total on their documented domains.

mod erf;
mod expint;
mod gamma;
mod quad;
mod theta;

pub use erf::{erf, erfc, erfcx};
pub use expint::exp_integral_e1;
pub use gamma::{
    log_gamma, log_reg_lower_gamma, log_reg_upper_gamma, reg_lower_gamma,
    reg_lower_gamma_3term, reg_upper_gamma, temme_eta, temme_uniform_p, GammaArgs,
};
pub use quad::quad_adaptive;
pub use theta::{jacobi_log_theta_deriv, jacobi_theta, jacobi_theta_dz};

/// The Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.5772156649015328606065121;

/// Tolerances and budget limits shared by the iterative algorithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyConfig {
    /// Absolute tolerance for series, continued fractions, and quadrature.
    pub abs_tol: f64,
    /// Relative tolerance, applied against the running result magnitude.
    pub rel_tol: f64,
    /// Maximum number of series or continued-fraction iterations.
    pub max_terms: usize,
    /// Maximum number of panels in adaptive quadrature.
    pub quad_panel_limit: usize,
}

impl Default for AccuracyConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_terms: 1_000_000,
            quad_panel_limit: 200,
        }
    }
}

/// Errors reported by the special-function routines.
#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum SpecFunError {
    /// An argument lies outside the function's domain.
    #[error("domain error in {context}: {message}")]
    Domain {
        /// Routine that rejected the argument.
        context: &'static str,
        /// What was wrong with it.
        message: String,
    },
    /// An iteration failed to reach the requested tolerance in budget.
    #[error("{context} did not converge within {limit} iterations")]
    NonConvergence {
        /// Routine that ran out of budget.
        context: &'static str,
        /// The iteration budget that was exhausted.
        limit: usize,
    },
}

pub(crate) fn domain_err(context: &'static str, message: impl Into<String>) -> SpecFunError {
    SpecFunError::Domain {
        context,
        message: message.into(),
    }
}
