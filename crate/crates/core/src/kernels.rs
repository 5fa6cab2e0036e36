//! Memory kernels, their Laplace transforms, a numerical suitability check and
//! deterministic time-scaling functions.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::check_param;
use crate::specfun::reciprocal_gamma;
use crate::{Error, Result};

/// Memory kernel `K(t)`.
///
/// The variants are plain data so a kernel violating the parameter
/// constraints can be built on purpose; [`MemoryKernel::validate`] and the
/// named constructors enforce them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MemoryKernel {
    /// `t^(beta-1) / Gamma(beta)`, transform `s^-beta`.
    PowerLaw { beta: f64 },
    /// `exp(-a t)`, transform `1 / (s + a)`.
    ExponentialDecay { a: f64 },
    /// `t^(beta-1) exp(-a t) / Gamma(beta)`, transform `(s + a)^-beta`.
    PowerExp { beta: f64, a: f64 },
}

impl MemoryKernel {
    pub fn power_law(beta: f64) -> Result<Self> {
        let k = Self::PowerLaw { beta };
        k.validate()?;
        Ok(k)
    }

    pub fn exponential_decay(a: f64) -> Result<Self> {
        let k = Self::ExponentialDecay { a };
        k.validate()?;
        Ok(k)
    }

    pub fn power_exp(beta: f64, a: f64) -> Result<Self> {
        let k = Self::PowerExp { beta, a };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::PowerLaw { beta } => check_beta(beta),
            Self::ExponentialDecay { a } => check_rate(a),
            Self::PowerExp { beta, a } => {
                check_beta(beta)?;
                check_rate(a)
            }
        }
    }

    /// Kernel value at `t`. The power families diverge at `t = 0` unless `beta = 1`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        check_param("t", t, t >= 0.0, "must be non-negative")?;
        let power = |beta: f64| -> Result<f64> {
            if t == 0.0 {
                if beta == 1.0 {
                    return Ok(1.0);
                }
                if beta > 1.0 {
                    return Ok(0.0);
                }
                return Err(Error::Domain(format!(
                    "power kernel with beta = {beta} diverges at t = 0"
                )));
            }
            Ok(t.powf(beta - 1.0) * reciprocal_gamma(beta))
        };
        match *self {
            Self::PowerLaw { beta } => power(beta),
            Self::ExponentialDecay { a } => Ok((-a * t).exp()),
            Self::PowerExp { beta, a } => Ok(power(beta)? * (-a * t).exp()),
        }
    }

    /// Closed-form Laplace transform `K~(s)` for `s > 0`.
    pub fn laplace(&self, s: f64) -> Result<f64> {
        check_param("s", s, s > 0.0, "must be positive")?;
        Ok(match *self {
            Self::PowerLaw { beta } => s.powf(-beta),
            Self::ExponentialDecay { a } => 1.0 / (s + a),
            Self::PowerExp { beta, a } => (s + a).powf(-beta),
        })
    }

    /// Analytic continuation of the transform to the cut plane, principal branch.
    pub fn laplace_complex(&self, s: Complex64) -> Complex64 {
        match *self {
            Self::PowerLaw { beta } => s.powf(-beta),
            Self::ExponentialDecay { a } => (s + a).inv(),
            Self::PowerExp { beta, a } => (s + a).powf(-beta),
        }
    }

    /// Self-similarity exponent when the kernel is a pure power.
    pub fn power_exponent(&self) -> Option<f64> {
        match *self {
            Self::PowerLaw { beta } => Some(beta),
            _ => None,
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    check_param("beta", beta, beta > 0.0 && beta <= 1.0, "must lie in (0, 1]")
}

fn check_rate(a: f64) -> Result<()> {
    check_param("a", a, a >= 0.0, "must be non-negative")
}

pub fn kernel_eval(k: &MemoryKernel, t: f64) -> Result<f64> {
    k.eval(t)
}

pub fn kernel_laplace(k: &MemoryKernel, s: f64) -> Result<f64> {
    k.laplace(s)
}

/// Which transform a suitability violation was found in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuitabilityCondition {
    /// `s K~(s)`
    ScaledTransform,
    /// `1 / K~(s)`
    ReciprocalTransform,
}

impl SuitabilityCondition {
    pub fn id(&self) -> &'static str {
        match self {
            Self::ScaledTransform => "s_k",
            Self::ReciprocalTransform => "inv_k",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub condition: SuitabilityCondition,
    /// Left end of the stencil on which the sign test failed.
    pub s: f64,
    /// Derivative order; 0 refers to positivity of the function itself.
    pub derivative_order: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuitabilityReport {
    pub kernel: MemoryKernel,
    pub order_checked: usize,
    pub grid: Vec<f64>,
    pub pass: bool,
    pub first_violation: Option<Violation>,
}

pub const MAX_SUITABILITY_ORDER: usize = 8;

/// Noise floor below which a wrong-signed divided difference is ignored,
/// relative to the function value.
const NOISE_FLOOR: f64 = 1e-9;

/// Smallest admissible `(min relative step)^order`; finer grids make the
/// divided differences pure rounding noise.
const MIN_RESOLUTION: f64 = 1e-8;

/// `n` geometrically spaced points on `[s_min, s_max]`.
pub fn geometric_grid(s_min: f64, s_max: f64, n: usize) -> Result<Vec<f64>> {
    check_param("s_min", s_min, s_min > 0.0, "must be positive")?;
    check_param("s_max", s_max, s_max > s_min, "must exceed s_min")?;
    if n < 2 {
        return Err(Error::Grid(format!("need at least 2 points, got {n}")));
    }
    let ratio = (s_max / s_min).ln() / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| s_min * (ratio * i as f64).exp()).collect();
    grid[n - 1] = s_max;
    Ok(grid)
}

/// 64 points on `[1e-2, 1e2]`.
pub fn default_suitability_grid() -> Vec<f64> {
    geometric_grid(1e-2, 1e2, 64).expect("static grid parameters are valid")
}

/// Checks numerically that `s K~(s)` and `1 / K~(s)` are positive with a
/// completely monotone first derivative: on every stencil of `k + 1`
/// consecutive grid points the divided difference of order `k` must carry
/// the sign `(-1)^(k+1)`, for `k = 1..=order`.
///
/// A wrong sign only counts when `|dd| * width^k` exceeds the noise floor
/// times the largest function value on the stencil.
pub fn check_suitability(k: &MemoryKernel, s_grid: &[f64], order: usize) -> Result<SuitabilityReport> {
    if order == 0 || order > MAX_SUITABILITY_ORDER {
        return Err(Error::Grid(format!(
            "order must lie in 1..={MAX_SUITABILITY_ORDER}, got {order}"
        )));
    }
    if s_grid.len() < order + 1 {
        return Err(Error::Grid(format!(
            "order {order} needs at least {} points, got {}",
            order + 1,
            s_grid.len()
        )));
    }
    if s_grid.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::Grid("grid points must be positive and finite".into()));
    }
    let mut min_rel_step = f64::INFINITY;
    for w in s_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Grid("grid must be strictly increasing".into()));
        }
        min_rel_step = min_rel_step.min((w[1] - w[0]) / w[1]);
    }
    if min_rel_step.powi(order as i32) < MIN_RESOLUTION {
        return Err(Error::Grid(format!(
            "grid too fine for order {order}: minimum relative step {min_rel_step:e} leaves divided differences dominated by rounding"
        )));
    }

    let mut scaled = Vec::with_capacity(s_grid.len());
    let mut reciprocal = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let kt = k.laplace(s)?;
        scaled.push(s * kt);
        reciprocal.push(1.0 / kt);
    }

    let first_violation = first_sign_violation(s_grid, &scaled, order, SuitabilityCondition::ScaledTransform)
        .or_else(|| first_sign_violation(s_grid, &reciprocal, order, SuitabilityCondition::ReciprocalTransform));

    Ok(SuitabilityReport {
        kernel: *k,
        order_checked: order,
        grid: s_grid.to_vec(),
        pass: first_violation.is_none(),
        first_violation,
    })
}

fn first_sign_violation(
    s: &[f64],
    f: &[f64],
    order: usize,
    condition: SuitabilityCondition,
) -> Option<Violation> {
    for (i, &v) in f.iter().enumerate() {
        if !(v > 0.0) {
            return Some(Violation {
                condition,
                s: s[i],
                derivative_order: 0,
            });
        }
    }
    // dd[i] holds the divided difference of the current order starting at i
    let mut dd = f.to_vec();
    for k in 1..=order {
        let n = dd.len() - 1;
        for i in 0..n {
            dd[i] = (dd[i + 1] - dd[i]) / (s[i + k] - s[i]);
        }
        dd.truncate(n);
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        for (i, &d) in dd.iter().enumerate() {
            if sign * d < 0.0 {
                let width = s[i + k] - s[i];
                let scale = f[i..=i + k].iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if d.abs() * width.powi(k as i32) > NOISE_FLOOR * scale {
                    return Some(Violation {
                        condition,
                        s: s[i],
                        derivative_order: k,
                    });
                }
            }
        }
    }
    None
}

/// Deterministic time change `g(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingFunction {
    Identity,
    /// `t^p`
    Power { p: f64 },
    /// `log(1 + t)`
    Log1p,
}

impl ScalingFunction {
    pub fn power(p: f64) -> Result<Self> {
        let g = Self::Power { p };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Power { p } => check_param("p", p, p > 0.0, "must be positive"),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Self::Identity => t,
            Self::Power { p } => t.powf(p),
            Self::Log1p => t.ln_1p(),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            Self::Identity => 1.0,
            Self::Power { p } => {
                if p == 1.0 {
                    1.0
                } else {
                    p * t.powf(p - 1.0)
                }
            }
            Self::Log1p => 1.0 / (1.0 + t),
        }
    }

    pub fn inverse(&self, w: f64) -> f64 {
        match *self {
            Self::Identity => w,
            Self::Power { p } => w.powf(1.0 / p),
            Self::Log1p => w.exp_m1(),
        }
    }
}

pub fn scaling_eval(g: &ScalingFunction, t: f64) -> f64 {
    g.eval(t)
}

pub fn scaling_derivative(g: &ScalingFunction, t: f64) -> f64 {
    g.derivative(t)
}

pub fn scaling_inverse(g: &ScalingFunction, w: f64) -> f64 {
    g.inverse(w)
}
