#[allow(unused_imports)]
use num_traits::Float;
use core::f64::consts::PI;

use crate::{Error, Result};

const LANCZOS_G: f64 = 6.024_680_040_776_729_583_740_234_375;
const LANCZOS_NUM: [f64; 13] = [
    23_531_376_880.410_759_688_572_007_674_451_636_754_73,
    42_919_803_642.649_098_768_957_899_047_001_988_850_93,
    35_711_959_237.355_668_049_440_185_451_547_166_705_96,
    17_921_034_426.037_209_699_919_755_754_458_931_112_67,
    6_039_542_586.352_028_005_064_291_644_307_297_921_07,
    1_439_720_407.311_721_673_663_223_072_794_912_393_972,
    248_874_557.862_054_156_511_460_386_413_229_423_216_3,
    31_426_415.585_400_194_380_614_231_628_318_205_362_87,
    2_876_370.628_935_372_441_225_409_051_620_849_613_599,
    186_056.265_395_223_495_040_294_989_716_045_699_282_2,
    8_071.672_002_365_816_210_638_002_902_272_250_613_822,
    210.824_277_751_579_345_872_509_733_920_713_362_711_7,
    2.506_628_274_631_000_270_164_908_177_133_837_338_626,
];
// z (z + 1) ... (z + 11)
const LANCZOS_DEN: [f64; 13] = [
    0.0,
    39_916_800.0,
    120_543_840.0,
    150_917_976.0,
    105_258_076.0,
    45_995_730.0,
    13_339_535.0,
    2_637_558.0,
    357_423.0,
    32_670.0,
    1_925.0,
    66.0,
    1.0,
];
/// Largest argument with a finite Gamma value.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // reduce to r in [-1, 1]
    let r = x - 2.0 * (x * 0.5).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    let (sign, r) = if r < 0.0 { (-1.0, -r) } else { (1.0, r) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * r).sin()
}

fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Rational Lanczos sum; `Gamma(z) = sum(z) (z + g - 1/2)^(z - 1/2) e^-(z + g - 1/2)`.
fn lanczos_sum(z: f64) -> f64 {
    if z <= 1.0 {
        let mut num = 0.0;
        let mut den = 0.0;
        for i in (0..13).rev() {
            num = num * z + LANCZOS_NUM[i];
            den = den * z + LANCZOS_DEN[i];
        }
        num / den
    } else {
        // evaluate in 1/z to keep the polynomials bounded
        let w = 1.0 / z;
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..13 {
            num = num * w + LANCZOS_NUM[i];
            den = den * w + LANCZOS_DEN[i];
        }
        num / den
    }
}

fn factorial_exact(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Gamma function for real arguments.
///
/// Lanczos approximation on `x >= 0.5`, reflection below.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Ok(f64::NAN);
    }
    if is_non_positive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        let s = sin_pi(x);
        let g = gamma(1.0 - x)?;
        return Ok(PI / (s * g));
    }
    if x > GAMMA_MAX_ARG {
        return Ok(f64::INFINITY);
    }
    if x == x.floor() && x <= 171.0 {
        return Ok(factorial_exact(x as u32 - 1));
    }
    let zgh = x + LANCZOS_G - 0.5;
    // split the power so it does not overflow before e^-zgh is applied
    let half = zgh.powf(0.5 * (x - 0.5));
    Ok(lanczos_sum(x) * half * (-zgh).exp() * half)
}

/// Natural logarithm of `Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x <= 0.0 || x.is_nan() {
        return f64::NAN;
    }
    if x < 0.5 {
        // Gamma(x) = pi / (sin(pi x) Gamma(1 - x)), sin(pi x) > 0 on (0, 0.5)
        return (PI / sin_pi(x)).ln() - ln_gamma(1.0 - x);
    }
    if x < 15.0 {
        if let Ok(g) = gamma(x) {
            return g.ln();
        }
    }
    let zgh = x + LANCZOS_G - 0.5;
    lanczos_sum(x).ln() + (x - 0.5) * zgh.ln() - zgh
}

/// `1 / Gamma(x)`, total on the finite reals with exact zeros at the poles of Gamma.
pub fn reciprocal_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_non_positive_integer(x) {
        return 0.0;
    }
    if x >= 0.5 {
        if x > GAMMA_MAX_ARG {
            return (-ln_gamma(x)).exp();
        }
        return match gamma(x) {
            Ok(g) => 1.0 / g,
            Err(_) => 0.0,
        };
    }
    // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
    let s = sin_pi(x);
    let y = 1.0 - x;
    if y > GAMMA_MAX_ARG {
        let mag = (ln_gamma(y) + s.abs().ln() - PI.ln()).exp();
        return mag.copysign(s);
    }
    match gamma(y) {
        Ok(g) => s * g / PI,
        Err(_) => 0.0,
    }
}
