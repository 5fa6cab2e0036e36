//! Closed-form moments and variance curves of the subordinated processes.

use alloc::format;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::check_param;
use crate::kernels::MemoryKernel;
use crate::solutions::{NonMarkovModel, ParentModel};
use crate::specfun::{ln_gamma, mittag_leffler, SeriesControl};
use crate::timedens::{time_moment, TimeLaw};
use crate::{Error, Result};

/// Largest moment order with safe Gamma ratios.
pub const MAX_MOMENT_ORDER: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSpec {
    pub model: NonMarkovModel,
    pub order: u32,
    pub t: f64,
}

/// `E[D(t)^order]` for the process `D(t) = Q(l(g(t)))`.
pub fn subordinated_moment(spec: &MomentSpec) -> Result<f64> {
    moment(&spec.model, spec.order, spec.t)
}

pub fn moment(model: &NonMarkovModel, order: u32, t: f64) -> Result<f64> {
    model.validate()?;
    check_param("t", t, t >= 0.0, "must be non-negative")?;
    if order > MAX_MOMENT_ORDER {
        return Err(Error::InvalidParameter {
            name: "order",
            value: order as f64,
            reason: "must not exceed 12",
        });
    }
    let law = model.time_law()?;
    let w = model.scaling.eval(t);
    if order == 0 {
        return Ok(1.0);
    }
    let law_moment = |k: u32| -> Result<f64> {
        if k == 0 {
            Ok(1.0)
        } else if w == 0.0 {
            Ok(0.0)
        } else {
            time_moment(&law, k, w)
        }
    };
    match model.parent {
        ParentModel::StandardBM => {
            if order % 2 == 1 {
                return Ok(0.0);
            }
            let m = order / 2;
            Ok(gaussian_even_moment(m) * law_moment(m)?)
        }
        ParentModel::DriftBM { mu, sigma } => {
            // condition on l: E[(mu l + sigma B(l))^n] = sum_k C(n,2k) mu^(n-2k) sigma^(2k) (2k)!/k! l^(n-k)
            let n = order;
            let mut sum = 0.0;
            for k in 0..=n / 2 {
                let c = binomial(n, 2 * k) * gaussian_even_moment(k);
                sum += c * mu.powi((n - 2 * k) as i32) * sigma.powi(2 * k as i32) * law_moment(n - k)?;
            }
            Ok(sum)
        }
        ParentModel::GeometricBM { mu, sigma, x0 } => {
            // E[S^n | l] = x0^n exp(c l) with c = n mu + sigma^2 (n^2 - n/2)
            let n = order as f64;
            let c = n * mu + sigma * sigma * (n * n - 0.5 * n);
            Ok(x0.powi(order as i32) * exponential_moment(&law, c, w)?)
        }
    }
}

/// `(2m)! / m!`, the factor in `E[B(tau)^(2m)] = (2m)!/m! tau^m` for `B(tau) ~ N(0, 2 tau)`.
fn gaussian_even_moment(m: u32) -> f64 {
    (ln_gamma(2.0 * m as f64 + 1.0) - ln_gamma(m as f64 + 1.0)).exp().round()
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c.round()
}

/// `E[exp(c l(w))]`.
fn exponential_moment(law: &TimeLaw, c: f64, w: f64) -> Result<f64> {
    if w == 0.0 {
        return Ok(1.0);
    }
    match *law {
        TimeLaw::WrightLaw { beta } => mittag_leffler(beta, c * w.powf(beta), &SeriesControl::default()),
        TimeLaw::ExpMixture { a } => {
            // atom exp((c - a) w) plus a int_0^w exp((c - a) tau) dtau
            let d = (c - a) * w;
            let ratio = if d.abs() < 1e-8 { 1.0 + 0.5 * d } else { d.exp_m1() / d };
            let v = d.exp() + a * w * ratio;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Overflow(format!("exponential moment with rate {c} at w = {w}")))
            }
        }
        TimeLaw::DeltaLaw => {
            let v = (c * w).exp();
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Overflow(format!("exponential moment with rate {c} at w = {w}")))
            }
        }
    }
}

/// Variance of `D(t)`.
pub fn variance_curve(model: &NonMarkovModel, t: f64) -> Result<f64> {
    model.validate()?;
    check_param("t", t, t >= 0.0, "must be non-negative")?;
    if t == 0.0 {
        return Ok(0.0);
    }
    if let MemoryKernel::PowerExp { .. } = model.kernel {
        return Err(Error::Unsupported("no moments for the power-exponential kernel".into()));
    }
    let m1 = moment(model, 1, t)?;
    let m2 = moment(model, 2, t)?;
    Ok((m2 - m1 * m1).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::ScalingFunction;
    use crate::quad::{integrate, integrate_real_line, QuadConfig};
    use crate::solutions::{solve, SolveMethod};
    use core::f64::consts::PI;

    fn model(parent: ParentModel, kernel: MemoryKernel, scaling: ScalingFunction) -> NonMarkovModel {
        NonMarkovModel::new(parent, kernel, scaling).unwrap()
    }

    #[test]
    fn documented_values() {
        let p = model(ParentModel::StandardBM, MemoryKernel::PowerLaw { beta: 0.5 }, ScalingFunction::Identity);
        let spec = MomentSpec { model: p, order: 2, t: 1.0 };
        assert!((subordinated_moment(&spec).unwrap() - 4.0 / PI.sqrt()).abs() < 1e-14);
        assert_eq!(moment(&p, 3, 2.7).unwrap(), 0.0);
        let g = model(
            ParentModel::GeometricBM { mu: 0.0, sigma: 1.0, x0: 1.0 },
            MemoryKernel::PowerLaw { beta: 1.0 },
            ScalingFunction::Identity,
        );
        assert!((moment(&g, 1, 1.0).unwrap() - 0.5f64.exp()).abs() < 1e-14);
        let e = model(ParentModel::StandardBM, MemoryKernel::ExponentialDecay { a: 1.0 }, ScalingFunction::Identity);
        assert!((variance_curve(&e, 1.0).unwrap() - 2.0 * (1.0 - (-1.0f64).exp())).abs() < 1e-14);
        let l = model(ParentModel::StandardBM, MemoryKernel::ExponentialDecay { a: 1.0 }, ScalingFunction::Log1p);
        assert!((variance_curve(&l, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(variance_curve(&p, 0.0).unwrap(), 0.0);
        assert!(moment(&p, 13, 1.0).is_err());
    }

    #[test]
    fn moments_match_quadrature() {
        let models = [
            model(ParentModel::StandardBM, MemoryKernel::PowerLaw { beta: 0.5 }, ScalingFunction::Identity),
            model(ParentModel::StandardBM, MemoryKernel::ExponentialDecay { a: 1.0 }, ScalingFunction::Identity),
            model(
                ParentModel::DriftBM { mu: 1.0, sigma: 1.0 },
                MemoryKernel::PowerLaw { beta: 0.5 },
                ScalingFunction::Identity,
            ),
        ];
        let cfg = QuadConfig::with_tol(1e-11, 1e-10);
        for m in models {
            for t in [0.5, 1.0, 2.0] {
                for k in 0..=4u32 {
                    let q = integrate_real_line(
                        |x| x.powi(k as i32) * solve(&m, x, t, SolveMethod::Auto).unwrap(),
                        0.0,
                        &cfg,
                    )
                    .unwrap()
                    .value;
                    let exact = moment(&m, k, t).unwrap();
                    let scale = exact.abs().max(1e-3);
                    assert!((q - exact).abs() <= 1e-5 * scale, "{m:?} t={t} k={k}: {q} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn geometric_moments_match_quadrature() {
        let m = model(
            ParentModel::GeometricBM { mu: 0.2, sigma: 0.3, x0: 1.0 },
            MemoryKernel::ExponentialDecay { a: 1.0 },
            ScalingFunction::Identity,
        );
        for k in 1..=2u32 {
            let q = integrate(
                |y: f64| {
                    let x = y.exp();
                    x * x.powi(k as i32) * solve(&m, x, 1.0, SolveMethod::Auto).unwrap()
                },
                -30.0,
                30.0,
                &QuadConfig::with_tol(1e-11, 1e-10),
            )
            .unwrap()
            .value;
            let exact = moment(&m, k, 1.0).unwrap();
            assert!(((q - exact) / exact).abs() < 1e-7, "k={k}");
        }
    }

    #[test]
    fn exponential_variance_limit() {
        for a in [0.5, 1.0, 2.0] {
            let m = model(ParentModel::StandardBM, MemoryKernel::ExponentialDecay { a }, ScalingFunction::Identity);
            assert!((variance_curve(&m, 40.0 / a).unwrap() - 2.0 / a).abs() < 1e-8);
        }
    }

    #[test]
    fn markovian_geometric_mean() {
        let (mu, sigma, x0) = (0.3, 0.7, 2.0);
        let m = model(
            ParentModel::GeometricBM { mu, sigma, x0 },
            MemoryKernel::PowerLaw { beta: 1.0 },
            ScalingFunction::Identity,
        );
        for t in [0.5, 1.0, 3.0] {
            let exact = x0 * ((mu + 0.5 * sigma * sigma) * t).exp();
            assert!((moment(&m, 1, t).unwrap() - exact).abs() < 1e-10 * exact);
        }
    }

    #[test]
    fn anomalous_exponent() {
        for (alpha, beta) in [(0.5, 0.5), (1.5, 0.5), (0.75, 0.25), (1.2, 0.8)] {
            let m = model(
                ParentModel::StandardBM,
                MemoryKernel::PowerLaw { beta },
                ScalingFunction::Power { p: alpha / beta },
            );
            let v1 = variance_curve(&m, 1.0).unwrap();
            let v100 = variance_curve(&m, 100.0).unwrap();
            let slope = (v100 / v1).ln() / 100f64.ln();
            assert!((slope - alpha).abs() < 1e-3);
        }
    }
}
