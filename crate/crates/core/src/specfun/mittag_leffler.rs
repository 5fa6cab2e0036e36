#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;

use super::gamma::{ln_gamma, reciprocal_gamma};
use super::sum::NeumaierSum;
use super::wright::SeriesControl;
use crate::error::check_param;
use crate::{Error, Result};

/// Documented safe range `|z| <= 50` of the series evaluation.
pub const MITTAG_LEFFLER_MAX_ABS_Z: f64 = 50.0;
const GROWTH_LIMIT: f64 = 700.0;
const CANCELLATION_LIMIT: f64 = 1e-10;

/// Mittag-Leffler function `E_beta(z) = sum z^k / Gamma(beta k + 1)` for real `z`.
///
/// Plain compensated series. Overflow is reported when `|z| > 50` or when
/// `z^(1/beta)` is large enough for the result to leave the double range;
/// heavy cancellation for negative `z` is reported as precision loss.
pub fn mittag_leffler(beta: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_param("beta", beta, beta > 0.0 && beta <= 1.0, "must lie in (0, 1]")?;
    check_param("z", z, true, "must be finite")?;
    ctrl.validate()?;
    if z.abs() > MITTAG_LEFFLER_MAX_ABS_Z {
        return Err(Error::Overflow(format!(
            "|z| = {} exceeds the series range {MITTAG_LEFFLER_MAX_ABS_Z}",
            z.abs()
        )));
    }
    if z > 0.0 && z.powf(1.0 / beta) > GROWTH_LIMIT {
        return Err(Error::Overflow(format!(
            "E_{beta}({z}) grows like exp(z^(1/beta)) and exceeds the double range"
        )));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let ln_abs_z = z.abs().ln();
    let mut acc = NeumaierSum::new();
    let mut max_term: f64 = 0.0;
    let mut prev = f64::INFINITY;
    for k in 0..ctrl.max_terms {
        let arg = beta * k as f64 + 1.0;
        let kf = k as f64;
        let mag = if arg < 170.0 && kf * ln_abs_z < 700.0 {
            z.abs().powi(k as i32) * reciprocal_gamma(arg)
        } else {
            (kf * ln_abs_z - ln_gamma(arg)).exp()
        };
        let term = if z < 0.0 && k % 2 == 1 { -mag } else { mag };
        acc.add(term);
        max_term = max_term.max(mag);
        let sum = acc.value();
        if mag <= prev && mag <= ctrl.stop_threshold(sum) {
            let estimate = f64::EPSILON * 16.0 * max_term / sum.abs();
            if !(estimate <= CANCELLATION_LIMIT) {
                return Err(Error::PrecisionLoss {
                    estimate,
                    limit: CANCELLATION_LIMIT,
                });
            }
            return Ok(sum);
        }
        prev = mag;
    }
    Err(Error::NoConvergence(ctrl.max_terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_one_is_exponential() {
        let ctrl = SeriesControl::default();
        for i in -50..=50 {
            let z = i as f64 * 0.1;
            let v = mittag_leffler(1.0, z, &ctrl).unwrap();
            assert!((v - z.exp()).abs() <= 1e-12 * z.exp().max(1.0), "z={z}");
        }
    }

    #[test]
    fn reference_values() {
        let ctrl = SeriesControl::default();
        assert_eq!(mittag_leffler(0.5, 0.0, &ctrl).unwrap(), 1.0);
        let v = mittag_leffler(0.5, 1.0, &ctrl).unwrap();
        assert!((v - 5.008_980_080_762_283).abs() < 1e-13);
    }

    #[test]
    fn range_errors() {
        let ctrl = SeriesControl::default();
        assert!(matches!(mittag_leffler(1.0, 51.0, &ctrl), Err(Error::Overflow(_))));
        assert!(matches!(mittag_leffler(0.25, 6.0, &ctrl), Err(Error::Overflow(_))));
        assert!(matches!(mittag_leffler(1.0, -45.0, &ctrl), Err(Error::PrecisionLoss { .. })));
        assert!(mittag_leffler(1.5, 1.0, &ctrl).is_err());
    }
}
