//! Adaptive Gauss–Kronrod quadrature on finite intervals.
//!
//! A single 15-point Kronrod rule (embedding the 7-point Gauss rule) is
//! applied per panel; the panel with the largest `|K15 - G7|` error bound
//! is bisected until the summed bound meets the requested tolerance. The
//! node/weight constants are the classical QUADPACK `qk15` values.

use super::{AccuracyConfig, SpecFunError};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Kronrod abscissae on [0, 1] endpoint-symmetric half (x=0 last).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the embedded 7-point rule (odd Kronrod nodes).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One evaluated panel: its integral estimate and error bound.
#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on the error bound; ties broken arbitrarily but totally.
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// Apply the 15-point Kronrod rule to `f` on `[a, b]`.
fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * fsum;
        if i % 2 == 1 {
            // XGK[1], XGK[3], XGK[5] are the 7-point Gauss nodes.
            gauss += WG[i / 2] * fsum;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrate `f` over the finite interval `[a, b]`.
///
/// Accuracy targets and the panel budget come from `cfg`: subdivision
/// stops once the summed per-panel error bound is below
/// `max(abs_tol, rel_tol * |integral|)`, so the returned value carries
/// that accuracy guarantee.
///
/// # Errors
///
/// `Domain` for non-finite or reversed bounds; `NonConvergence` if the
/// tolerance is not met within `cfg.quad_panel_limit` panels.
///
/// ```
/// use hardwall::specfun::{quad_adaptive, AccuracyConfig};
/// let v = quad_adaptive(|x| x * x, 0.0, 3.0, &AccuracyConfig::default()).unwrap();
/// assert!((v - 9.0).abs() < 1e-12);
/// ```
pub fn quad_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &AccuracyConfig,
) -> Result<f64, SpecFunError> {
    integrate_with_error(f, a, b, cfg).map(|(value, _)| value)
}

/// As [`quad_adaptive`], but also return the final summed error bound.
pub(crate) fn integrate_with_error<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &AccuracyConfig,
) -> Result<(f64, f64), SpecFunError> {
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(super::domain_err(
            "integrate",
            format!("bounds must be finite with a < b, got [{a}, {b}]"),
        ));
    }

    let mut heap = BinaryHeap::new();
    heap.push(kronrod_panel(&f, a, b));

    loop {
        let total_value: f64 = heap.iter().map(|p| p.value).sum();
        let total_error: f64 = heap.iter().map(|p| p.error).sum();
        let target = cfg.abs_tol.max(cfg.rel_tol * total_value.abs());
        if total_error <= target {
            return Ok((total_value, total_error));
        }
        if heap.len() >= cfg.quad_panel_limit {
            return Err(SpecFunError::NonConvergence {
                context: "integrate: panel budget exhausted",
                limit: cfg.quad_panel_limit,
            });
        }
        let worst = heap.pop().expect("heap is non-empty by construction");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(kronrod_panel(&f, worst.a, mid));
        heap.push(kronrod_panel(&f, mid, worst.b));
    }
}
