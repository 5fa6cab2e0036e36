#[allow(unused_imports)]
use num_traits::Float;
use core::f64::consts::PI;

use super::gamma::{gamma, ln_gamma, reciprocal_gamma, sin_pi};
use super::sum::NeumaierSum;
use crate::error::check_param;
use crate::quad::{integrate, QuadConfig};
use crate::{Error, Result};

/// Truncation control for the power series evaluated in this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_terms: 400,
            abs_tol: 1e-15,
            rel_tol: 1e-12,
        }
    }
}

impl SeriesControl {
    pub fn new(max_terms: usize, abs_tol: f64, rel_tol: f64) -> Result<Self> {
        let ctrl = Self {
            max_terms,
            abs_tol,
            rel_tol,
        };
        ctrl.validate()?;
        Ok(ctrl)
    }

    pub fn validate(&self) -> Result<()> {
        check_param("max_terms", self.max_terms as f64, self.max_terms >= 1, "must be at least 1")?;
        check_param("abs_tol", self.abs_tol, self.abs_tol > 0.0, "must be positive")?;
        check_param("rel_tol", self.rel_tol, self.rel_tol > 0.0, "must be positive")
    }

    /// Magnitude below which a decreasing term ends the summation. Kept a
    /// factor 1e3 under the requested tolerance so the truncated tail does not
    /// consume it.
    pub(crate) fn stop_threshold(&self, sum: f64) -> f64 {
        1e-3 * self.abs_tol.max(self.rel_tol * sum.abs())
    }
}

/// Estimated relative error above which the series result is replaced by
/// the integral representation.
const CANCELLATION_LIMIT: f64 = 1e-10;

/// ln of the leading large-r asymptotic of `M_beta(r)`; used only as an
/// underflow cutoff.
fn ln_asymptotic(beta: f64, r: f64) -> f64 {
    let y = (1.0 - beta) * (beta.powf(beta) * r).powf(1.0 / (1.0 - beta));
    -0.5 * (2.0 * PI * (1.0 - beta)).ln() + (beta - 0.5) * y.ln() - y
}

struct SeriesOutcome {
    value: f64,
    rel_error: f64,
}

/// `M_beta(r) = (1/pi) sum_{k>=0} (-r)^k / k! Gamma(beta (k+1)) sin(pi beta (k+1))`,
/// the reflected form of `sum (-r)^k / (k! Gamma(1 - beta - beta k))`.
fn series(beta: f64, r: f64, ctrl: &SeriesControl) -> Option<SeriesOutcome> {
    let mut acc = NeumaierSum::new();
    let mut bound = 0.0;
    // r^k / k!, accumulated multiplicatively and in logs
    let mut power = 1.0;
    let mut ln_power = 0.0;
    let ln_r = r.ln();
    let mut prev_mag = f64::INFINITY;
    for k in 0..ctrl.max_terms {
        if k > 0 {
            power *= r / k as f64;
            ln_power += ln_r - (k as f64).ln();
        }
        let arg = beta * (k + 1) as f64;
        let gamma_part = if arg < 170.0 && power > 1e-280 {
            power * gamma(arg).ok()?
        } else {
            (ln_power + ln_gamma(arg)).exp()
        };
        let mag = gamma_part / PI;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * mag * sin_pi(arg);
        acc.add(term);
        // each term carries O(k) roundings from the running product
        bound += term.abs() * (k as f64 + 4.0);
        let sum = acc.value();
        if mag <= prev_mag && mag <= ctrl.stop_threshold(sum) {
            let rel_error = if sum != 0.0 {
                f64::EPSILON * bound / sum.abs()
            } else {
                f64::INFINITY
            };
            return Some(SeriesOutcome {
                value: sum,
                rel_error,
            });
        }
        prev_mag = mag;
    }
    None
}

/// Positive integral representation obtained from the Kanter/Zolotarev form
/// of the one-sided stable law:
/// `M_beta(r) = r^(beta/(1-beta)) / (pi (1-beta)) * int_0^pi a(phi) exp(-r^(1/(1-beta)) a(phi)) dphi`
/// with `a(phi) = [sin(beta phi)^beta sin((1-beta) phi)^(1-beta) / sin(phi)]^(1/(1-beta))`.
/// The integrand has no cancellation, which makes it the accurate route for large `r`.
fn integral_wright(beta: f64, r: f64) -> Result<f64> {
    let p = 1.0 / (1.0 - beta);
    let c = r.powf(p);
    let ln_a = |phi: f64| {
        p * (beta * (beta * phi).sin().ln() + (1.0 - beta) * ((1.0 - beta) * phi).sin().ln() - phi.sin().ln())
    };
    let integrand = |phi: f64| {
        let la = ln_a(phi);
        let v = (la - c * la.exp()).exp();
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let cfg = QuadConfig {
        abs_tol: 1e-300,
        rel_tol: 1e-13,
        max_subdivisions: 4000,
    };
    let res = integrate(integrand, 0.0, PI, &cfg)?;
    Ok(r.powf(beta * p) / (PI * (1.0 - beta)) * res.value)
}

/// Wright M-function `M_beta(r)` for `0 < beta < 1`, `r >= 0`.
///
/// Sums the power series in compensated arithmetic. When the estimated
/// relative error from cancellation exceeds the internal limit, or the series
/// does not terminate within `ctrl.max_terms`, the value is recomputed from a
/// positive integral representation over `[0, pi]`.
pub fn wright_m(beta: f64, r: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_param("beta", beta, beta > 0.0 && beta < 1.0, "must lie in (0, 1)")?;
    check_param("r", r, r >= 0.0, "must be non-negative")?;
    ctrl.validate()?;
    if r == 0.0 {
        return Ok(reciprocal_gamma(1.0 - beta));
    }
    if ln_asymptotic(beta, r) < -750.0 {
        return Ok(0.0);
    }
    let series_result = series(beta, r, ctrl);
    if let Some(out) = &series_result {
        if out.rel_error <= CANCELLATION_LIMIT && out.value > 0.0 {
            return Ok(out.value);
        }
    }
    match integral_wright(beta, r) {
        Ok(v) => Ok(v.max(0.0)),
        Err(_) => Err(match series_result {
            Some(out) => Error::PrecisionLoss {
                estimate: out.rel_error,
                limit: CANCELLATION_LIMIT,
            },
            None => Error::NoConvergence(ctrl.max_terms),
        }),
    }
}

/// Scaled Wright function `t^(-beta) M_beta(tau t^(-beta))`, the density of
/// the random time with a power-law memory kernel.
pub fn wright_m_scaled(beta: f64, tau: f64, t: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_param("tau", tau, tau >= 0.0, "must be non-negative")?;
    check_param("t", t, t > 0.0, "must be positive")?;
    let scale = t.powf(-beta);
    Ok(scale * wright_m(beta, tau * scale, ctrl)?)
}
