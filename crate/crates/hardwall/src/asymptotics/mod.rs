//! Large-`n` predictions for the kernel near the hard wall.
//!
//! Five regimes are covered, each with its own prediction routine returning
//! a [`Prediction`] whose named terms sum exactly to the predicted value:
//!
//! * **hard edge, microscopic** ([`predict_hard_micro`]): both points at
//!   distance `O(1/n)` inside the inner wall radius, equal angles. The
//!   kernel grows like `C1 n^2` with lower-order terms down to `sqrt(n)`,
//!   including an `n`-oscillatory theta-function term.
//! * **semi-hard edge, microscopic** ([`predict_semi_hard_micro`]): both
//!   points at distance `O(1/sqrt(n))` inside the wall; `C1 n + C2 sqrt(n)`
//!   with constants given by erfc-profile integrals.
//! * **cross-gap macroscopic** ([`predict_r1r2_macro`]): one point at each
//!   wall, distinct angles; `2 pi n` times an oscillatory Szego kernel of
//!   the gap annulus.
//! * **same-wall macroscopic** ([`predict_r1r1_macro`]): both points at the
//!   inner wall, distinct angles; the Abel-regularized Szego kernel.
//! * **semi-hard macroscopic** ([`predict_semi_hard_macro_bound`]): distinct
//!   angles at semi-hard depth — the kernel is bounded, predicted value 0.
//!
//! Supporting machinery: the universal erfc-ratio integrals
//! ([`integral_i`], [`integrals_i1_to_i4`]), the theta-oscillation factor
//! ([`theta_factor_fn`]) and its companion series ([`q_n_series`],
//! [`q_n_theta`]), and per-mode asymptotics of the norming constants
//! `h_j` across all eleven index regimes ([`classify`],
//! [`log_hj_asymptotic`]).

pub mod hard_micro;
pub mod integrals;
pub mod regimes;
pub mod semi_hard;
pub mod szego;

pub use hard_micro::{hard_micro_constants, predict_hard_micro, theta_factor_fn};
pub use integrals::{integral_i, integrals_i1_to_i4};
pub use regimes::{
    classify, epsilon_max, log_hj_asymptotic, regime_window, Regime, RegimeConfig, RegimeParams,
};
pub use semi_hard::{density_profile_rho, predict_semi_hard_micro, semi_hard_constants};
pub use szego::{
    predict_r1r1_macro, predict_r1r2_macro, predict_semi_hard_macro_bound, q_n_series, q_n_theta,
    szego_hard, szego_hard_regularized,
};

use crate::specfun::SpecFunError;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Which asymptotic regime a [`Prediction`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// Hard edge, both points `O(1/n)` inside the inner wall, equal angles.
    HardMicro,
    /// Semi-hard edge, both points `O(1/sqrt(n))` inside the wall.
    SemiHardMicro,
    /// Macroscopic: one point at each wall of the gap.
    R1R2Macro,
    /// Macroscopic: both points at the inner wall, distinct angles.
    R1R1Macro,
    /// Semi-hard depth with distinct angles: only a boundedness claim.
    SemiHardMacroBound,
}

/// An asymptotic prediction, decomposed into named terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    /// The regime this prediction is for.
    pub theorem: Theorem,
    /// Predicted kernel value — always the exact sum of `breakdown`.
    pub value: Complex64,
    /// Named contributions (e.g. `"C1*n^2"`), summing to `value`.
    pub breakdown: BTreeMap<String, Complex64>,
    /// Order of the neglected remainder, e.g. `"O(n^{2/5})"`.
    pub error_order: String,
}

impl Prediction {
    /// Assemble a prediction from named terms; `value` is their exact sum
    /// (in the given order), so the breakdown invariant holds by
    /// construction.
    #[must_use]
    pub fn from_terms(
        theorem: Theorem,
        terms: &[(&str, Complex64)],
        error_order: &str,
    ) -> Self {
        let value = terms.iter().map(|t| t.1).sum();
        Self {
            theorem,
            value,
            breakdown: terms
                .iter()
                .map(|(k, v)| ((*k).to_string(), *v))
                .collect(),
            error_order: error_order.to_string(),
        }
    }
}

/// Errors from asymptotic evaluations.
#[derive(Debug, thiserror::Error)]
pub enum AsympError {
    /// An argument is outside the formula's domain.
    #[error("domain error in {context}: {message}")]
    Domain {
        /// Operation that rejected the input.
        context: &'static str,
        /// Human-readable description.
        message: String,
    },
    /// A series is divergent for the given points.
    #[error("divergent series in {context}: {message}")]
    Divergent {
        /// Operation whose series diverges.
        context: &'static str,
        /// Human-readable description.
        message: String,
    },
    /// The regularized Szego kernel needs distinct angles.
    #[error("degenerate angles: theta1 == theta2 (mod 2 pi)")]
    DegenerateAngles,
    /// An underlying special-function evaluation failed.
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

pub(crate) fn domain_err(context: &'static str, message: impl Into<String>) -> AsympError {
    AsympError::Domain {
        context,
        message: message.into(),
    }
}
