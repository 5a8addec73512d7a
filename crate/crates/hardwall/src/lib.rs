//! Correlation kernels for a two-dimensional determinantal Coulomb gas whose
//! background potential is of Mittag-Leffler type with a radial hard wall.
//!
//! The gas lives in the complex plane with potential
//! `Q(z) = |z|^(2b) - (2 alpha / n) log|z|`, conditioned to avoid the open
//! annulus `r1 < |z| < r2` (the hard wall, or gap). The point process with
//! `n` particles is determinantal; every statistic is encoded by the kernel
//!
//! ```text
//! K_n(z, w) = e^(-n Q(z)/2) e^(-n Q(w)/2) sum_{j=1}^{n} (z conj(w))^(j-1) / h_j
//! ```
//!
//! where `h_j` are the squared norms of the radial monomials under the
//! constrained weight. This crate provides:
//!
//! * [`specfun`]: the special functions the kernel and its asymptotic
//!   expansions need (regularized incomplete gamma in several regimes, erfc
//!   and its scaled variant, the exponential integral E1, a Jacobi theta
//!   function, adaptive Gauss-Kronrod quadrature).
//! * [`model`]: parameter validation and the macroscopic equilibrium data
//!   (edge masses, gap geometry, rescaled coordinates at the wall).
//! * [`kernel`]: numerically exact finite-`n` kernel evaluation in log space
//!   with compensated summation.
//! * [`asymptotics`]: large-`n` predictions for the kernel at microscopic and
//!   macroscopic separations near the wall, including the discrete Gaussian
//!   (theta function) oscillations and the gap Szego kernel, plus per-mode
//!   asymptotics of the norming constants across all index regimes.
//! * [`sampler`]: exact sampling of the determinantal configuration by
//!   per-mode radial CDF inversion.
//! * [`harness`]: diagnostic tables comparing exact kernels against the
//!   asymptotic predictions on a grid of `n`, and a self-test suite.
//!
//! # Parallelism
//!
//! With the default `parallel` feature the per-mode norming table, the
//! diagnostic grids, and the sampler fan out over rayon. Sequential
//! reference implementations (`*_seq`) are always available and return
//! bit-identical results; disabling the feature removes the rayon
//! dependency entirely.

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod asymptotics;
pub mod harness;
pub mod kernel;
pub mod model;
pub mod sampler;
pub mod specfun;

pub use asymptotics::{AsympError, Prediction, Theorem};
pub use harness::{
    default_n_grid, figure_diag, figure_diag_seq, selftest, DiagnosticRow, FigureKind, Scenario,
    SelfTestLevel, SelfTestReport,
};
pub use kernel::{Kernel, KernelValue, LogComplex};
pub use model::{EquilibriumData, ModelParams, PlanePoint};
pub use sampler::{radial_cdf, sample_configuration, sample_configuration_seq, SampleConfig};
