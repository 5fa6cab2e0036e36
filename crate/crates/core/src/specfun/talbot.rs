#[allow(unused_imports)]
use num_traits::Float;
use core::f64::consts::PI;

use alloc::format;
use num_complex::Complex64;

use crate::{Error, Result};

/// Default node count of the fixed-Talbot contour.
pub const DEFAULT_TALBOT_NODES: usize = 32;

/// Numerical inverse Laplace transform by the fixed-Talbot contour.
///
/// `transform` must be the analytic continuation of a transform that is real
/// on the positive real axis; it is evaluated at complex points of the
/// deformed contour `s(theta) = r theta (cot theta + i)`, `r = 2 nodes / (5 t)`.
/// The node count is the single accuracy knob.
pub fn talbot_invert<F>(transform: F, t: f64, nodes: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InversionFailure(format!("time must be positive, got {t}")));
    }
    if nodes < 2 {
        return Err(Error::InversionFailure(format!("need at least 2 nodes, got {nodes}")));
    }
    let m = nodes as f64;
    let r = 2.0 * m / (5.0 * t);
    let f0 = transform(Complex64::new(r, 0.0));
    let mut acc = 0.5 * (r * t).exp() * f0.re;
    for k in 1..nodes {
        let theta = k as f64 * PI / m;
        let cot = theta.cos() / theta.sin();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        let term = (s * t).exp() * transform(s) * Complex64::new(1.0, sigma);
        acc += term.re;
    }
    let value = r / m * acc;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InversionFailure(format!(
            "non-finite contour sum at t = {t} with {nodes} nodes"
        )))
    }
}
