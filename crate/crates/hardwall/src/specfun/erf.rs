//! Error function family: `erf`, `erfc`, and the scaled complement `erfcx`.
//!
//! Implementation follows W. J. Cody's classic rational-minimax scheme
//! (SPECFUN's CALERF): one rational approximation per region, with the
//! `exp(-x^2)` factor split as `exp(-t^2) * exp(-(x-t)(x+t))` at a 1/16-grid
//! point `t` to keep its rounding error below one ulp. `erfcx` is the
//! workhorse here: every `e^{-y^2}/erfc(y)` ratio in the asymptotic
//! integrands is evaluated as `1/(sqrt(pi) erfcx(y))`, which stays finite
//! and fully accurate far beyond where `erfc` underflows.

/// Switch point between the central `erf` approximation and the mid-range
/// `erfc` approximation.
const THRESHOLD: f64 = 0.46875;
/// Below this, `x^2` underflows the central rational's needs; treat as 0.
const X_TINY: f64 = 1.11e-16;
/// `erfc(x)` underflows to 0 for `x` above this.
const X_BIG: f64 = 26.543;
/// `erfcx(x)` for negative `x` overflows below this.
const X_NEG: f64 = -26.628_735_713_751_4;
/// Beyond this, `1/(x sqrt(pi))` is `erfcx(x)` to full precision.
const X_HUGE: f64 = 6.71e7;
/// `erfcx` argument so large that even `1/(x sqrt(pi))` underflows.
const X_MAX: f64 = 2.53e307;
/// `1/sqrt(pi)`.
const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_286_95;

// Rational coefficients for erf(x), |x| <= THRESHOLD.
const ERF_NUM: [f64; 5] = [
    3.161_123_743_870_565_6,
    113.864_154_151_050_156,
    377.485_237_685_302_021,
    3_209.377_589_138_469_47,
    0.185_777_706_184_603_153,
];
const ERF_DEN: [f64; 4] = [
    23.601_290_952_344_120_9,
    244.024_637_934_444_173,
    1_282.616_526_077_372_28,
    2_844.236_833_439_170_62,
];

// Rational coefficients for erfcx(x), THRESHOLD < x <= 4.
const MID_NUM: [f64; 9] = [
    0.564_188_496_988_670_089,
    8.883_149_794_388_375_94,
    66.119_190_637_141_629_5,
    298.635_138_197_400_131,
    881.952_221_241_769_09,
    1_712.047_612_634_070_58,
    2_051.078_377_826_071_47,
    1_230.339_354_797_997_25,
    2.153_115_354_744_038_46e-8,
];
const MID_DEN: [f64; 8] = [
    15.744_926_110_709_834_7,
    117.693_950_891_312_499,
    537.181_101_862_009_858,
    1_621.389_574_566_690_19,
    3_290.799_235_733_459_63,
    4_362.619_090_143_247_16,
    3_439.367_674_143_721_64,
    1_230.339_354_803_749_42,
];

// Rational coefficients for the deep tail, x > 4, in powers of 1/x^2.
const TAIL_NUM: [f64; 6] = [
    0.305_326_634_961_232_344,
    0.360_344_899_949_804_439,
    0.125_781_726_111_229_246,
    0.016_083_785_148_742_276_6,
    6.587_491_615_298_378_03e-4,
    0.016_315_387_137_302_097_8,
];
const TAIL_DEN: [f64; 5] = [
    2.568_520_192_289_822_42,
    1.872_952_849_923_460_47,
    0.527_905_102_951_428_412,
    0.060_518_341_312_441_319_1,
    0.002_335_204_976_268_691_85,
];

/// `exp(-y^2)` with the argument split at a 1/16-grid point so the square
/// is exact and the total rounding stays below one ulp (Cody's trick).
fn exp_neg_square(y: f64) -> f64 {
    let t = (y * 16.0).trunc() / 16.0;
    let del = (y - t) * (y + t);
    (-t * t).exp() * (-del).exp()
}

/// `erfcx(y)` for `y > THRESHOLD` (positive branch only; no exp factor).
fn erfcx_positive(y: f64) -> f64 {
    if y <= 4.0 {
        let mut num = MID_NUM[8] * y;
        let mut den = y;
        for i in 0..7 {
            num = (num + MID_NUM[i]) * y;
            den = (den + MID_DEN[i]) * y;
        }
        (num + MID_NUM[7]) / (den + MID_DEN[7])
    } else if y >= X_MAX {
        0.0
    } else if y >= X_HUGE {
        FRAC_1_SQRT_PI / y
    } else {
        let ysq = 1.0 / (y * y);
        let mut num = TAIL_NUM[5] * ysq;
        let mut den = ysq;
        for i in 0..4 {
            num = (num + TAIL_NUM[i]) * ysq;
            den = (den + TAIL_DEN[i]) * ysq;
        }
        let ratio = ysq * (num + TAIL_NUM[4]) / (den + TAIL_DEN[4]);
        (FRAC_1_SQRT_PI - ratio) / y
    }
}

/// The error function `erf(x) = (2/sqrt(pi)) Int_0^x e^{-t^2} dt`.
///
/// ```
/// use hardwall::specfun::erf;
/// assert!(erf(0.0) == 0.0);
/// assert!((erf(1.0) + erf(-1.0)).abs() < 1e-16);
/// ```
pub fn erf(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        let ysq = if y > X_TINY { y * y } else { 0.0 };
        let mut num = ERF_NUM[4] * ysq;
        let mut den = ysq;
        for i in 0..3 {
            num = (num + ERF_NUM[i]) * ysq;
            den = (den + ERF_DEN[i]) * ysq;
        }
        return x * (num + ERF_NUM[3]) / (den + ERF_DEN[3]);
    }
    // Away from 0, build erf from the complementary function; the rounded
    // half-sum keeps erf accurate near +-1 as erfc becomes tiny.
    let result = (0.5 - erfc(y)) + 0.5;
    if x < 0.0 {
        -result
    } else {
        result
    }
}

/// The complementary error function `erfc(x) = 1 - erf(x)`.
///
/// Underflows to `+0` above `x ~ 26.5`; approaches 2 for large negative `x`.
///
/// ```
/// use hardwall::specfun::erfc;
/// assert!((erfc(0.0) - 1.0).abs() < 1e-16);
/// assert_eq!(erfc(30.0), 0.0);
/// ```
pub fn erfc(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        return 1.0 - erf(x);
    }
    let result = if y >= X_BIG {
        0.0
    } else {
        erfcx_positive(y) * exp_neg_square(y)
    };
    if x < 0.0 {
        2.0 - result
    } else {
        result
    }
}

/// The scaled complementary error function `erfcx(x) = e^{x^2} erfc(x)`.
///
/// Finite and accurate for all `x` above roughly `-26.6`; below that the
/// true value exceeds `f64::MAX` and the function saturates to it.
///
/// ```
/// use hardwall::specfun::erfcx;
/// assert!((erfcx(0.0) - 1.0).abs() < 1e-16);
/// // Tail behavior ~ 1/(x sqrt(pi)).
/// assert!((erfcx(1e9) * 1e9 * std::f64::consts::PI.sqrt() - 1.0).abs() < 1e-9);
/// ```
pub fn erfcx(x: f64) -> f64 {
    if x.abs() <= THRESHOLD {
        let ysq = x * x;
        // exp(x^2) is exact-range here; no splitting needed.
        return ysq.exp() * (1.0 - erf(x));
    }
    if x >= 0.0 {
        return erfcx_positive(x);
    }
    if x < X_NEG {
        return f64::MAX;
    }
    // erfcx(-y) = 2 e^{y^2} - erfcx(y), with the exponential split as above.
    let y = -x;
    let t = (y * 16.0).trunc() / 16.0;
    let del = (y - t) * (y + t);
    let e = (t * t).exp() * del.exp();
    (e + e) - erfcx_positive(y)
}
