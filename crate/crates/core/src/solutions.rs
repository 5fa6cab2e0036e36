//! Fundamental solutions of the non-Markovian diffusion equations: parent
//! Green functions, the subordination integral, closed forms, stationary laws
//! and a residual check of the integral equation.

use alloc::format;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::check_param;
use crate::kernels::{MemoryKernel, ScalingFunction};
use crate::quad::{integrate, QuadConfig};
use crate::specfun::{erfc, erfcx, reciprocal_gamma, wright_m_scaled, SeriesControl};
use crate::timedens::{law_from_kernel, support_end, TimeLaw};
use crate::{Error, Result};

/// Markovian parent diffusion. Brownian motion follows the convention
/// `B(t) ~ N(0, 2t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParentModel {
    StandardBM,
    /// `mu t + sigma B(t)`
    DriftBM { mu: f64, sigma: f64 },
    /// `x0 exp((mu - sigma^2/2) t + sigma B(t))`
    GeometricBM { mu: f64, sigma: f64, x0: f64 },
}

impl ParentModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::StandardBM => Ok(()),
            Self::DriftBM { mu, sigma } => {
                check_param("mu", mu, true, "must be finite")?;
                check_param("sigma", sigma, sigma > 0.0, "must be positive")
            }
            Self::GeometricBM { mu, sigma, x0 } => {
                check_param("mu", mu, true, "must be finite")?;
                check_param("sigma", sigma, sigma > 0.0, "must be positive")?;
                check_param("x0", x0, x0 > 0.0, "must be positive")
            }
        }
    }

    /// Starting point of the process.
    pub fn origin(&self) -> f64 {
        match *self {
            Self::GeometricBM { x0, .. } => x0,
            _ => 0.0,
        }
    }

    /// Green function `G(x, tau)`.
    pub fn green(&self, x: f64, tau: f64) -> Result<f64> {
        check_param("tau", tau, tau > 0.0, "must be positive")?;
        match *self {
            Self::StandardBM => Ok(gauss(x, 0.0, 1.0, tau)),
            Self::DriftBM { mu, sigma } => Ok(gauss(x, mu, sigma, tau)),
            Self::GeometricBM { mu, sigma, x0 } => {
                if !(x > 0.0) {
                    return Err(Error::Domain(format!("geometric Brownian motion needs x > 0, got {x}")));
                }
                Ok(gauss((x / x0).ln(), mu - 0.5 * sigma * sigma, sigma, tau) / x)
            }
        }
    }

    /// Fokker-Planck operator applied to `u` at `x`, from the value and the
    /// first two derivatives.
    pub fn operator(&self, x: f64, u: f64, du: f64, d2u: f64) -> f64 {
        match *self {
            Self::StandardBM => d2u,
            Self::DriftBM { mu, sigma } => -mu * du + sigma * sigma * d2u,
            Self::GeometricBM { mu, sigma, .. } => {
                let s2 = sigma * sigma;
                // mean growth rate of the process
                let m = mu + 0.5 * s2;
                (2.0 * s2 - m) * u + (4.0 * s2 - m) * x * du + s2 * x * x * d2u
            }
        }
    }
}

/// Density of `N(mu tau, 2 sigma^2 tau)` at `x`.
fn gauss(x: f64, mu: f64, sigma: f64, tau: f64) -> f64 {
    let var2 = 4.0 * sigma * sigma * tau;
    let d = x - mu * tau;
    (-d * d / var2).exp() / (PI * var2).sqrt()
}

pub fn parent_green(p: &ParentModel, x: f64, tau: f64) -> Result<f64> {
    p.validate()?;
    p.green(x, tau)
}

/// Parent diffusion, memory kernel and time scaling of one equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonMarkovModel {
    pub parent: ParentModel,
    pub kernel: MemoryKernel,
    pub scaling: ScalingFunction,
}

impl NonMarkovModel {
    pub fn new(parent: ParentModel, kernel: MemoryKernel, scaling: ScalingFunction) -> Result<Self> {
        let m = Self {
            parent,
            kernel,
            scaling,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        self.parent.validate()?;
        self.kernel.validate()?;
        self.scaling.validate()
    }

    pub fn time_law(&self) -> Result<TimeLaw> {
        law_from_kernel(&self.kernel)
    }
}

fn check_time(t: f64) -> Result<()> {
    check_param("t", t, t > 0.0, "must be positive")
}

fn subordination_config() -> QuadConfig {
    QuadConfig {
        abs_tol: 1e-13,
        rel_tol: 1e-11,
        max_subdivisions: 4000,
    }
}

/// `f(x, t) = int G(x, tau) h(tau, g(t)) dtau`, with the point mass of the
/// time law added exactly and `tau = u^2` removing the `tau^-1/2` behaviour of
/// the Green function at the origin.
pub fn solve_subordination(m: &NonMarkovModel, x: f64, t: f64) -> Result<f64> {
    m.validate()?;
    check_time(t)?;
    let law = m.time_law()?;
    let w = m.scaling.eval(t);
    subordinate(&m.parent, &law, x, w)
}

pub(crate) fn subordinate(parent: &ParentModel, law: &TimeLaw, x: f64, w: f64) -> Result<f64> {
    if let ParentModel::GeometricBM { .. } = parent {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("geometric Brownian motion needs x > 0, got {x}")));
        }
    }
    let ctrl = SeriesControl::default();
    let mut total = 0.0;
    if let Some((loc, weight)) = law.atom(w) {
        if weight > 0.0 {
            total += weight * parent.green(x, loc)?;
        }
    }
    if let TimeLaw::DeltaLaw = law {
        return Ok(total);
    }
    let upper = support_end(law, w, &ctrl)?;
    let mut failure = None;
    let integrand = |u: f64| {
        let tau = u * u;
        if tau == 0.0 {
            return 0.0;
        }
        let v = parent.green(x, tau).and_then(|g| Ok(g * law.continuous(tau, w, &ctrl)?));
        match v {
            Ok(v) => 2.0 * u * v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        }
    };
    let res = integrate(integrand, 0.0, upper.sqrt(), &subordination_config());
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((total + res?.value).max(0.0))
}

/// `int_0^w exp(shift - b tau) G(y, tau) dtau` for `b > 0` with the standard
/// heat kernel `G`, evaluated through `erfcx` so that large `|y| sqrt(b)`
/// neither overflows nor cancels.
fn damped_heat_integral(b: f64, y: f64, w: f64, shift: f64) -> f64 {
    let y = y.abs();
    let sb = b.sqrt();
    let sw = w.sqrt();
    let u_minus = y / (2.0 * sw) - (b * w).sqrt();
    let u_plus = y / (2.0 * sw) + (b * w).sqrt();
    // common exponent of both terms after pulling out exp(-u^2)
    let gauss_exp = shift - y * y / (4.0 * w) - b * w;
    let minus = if u_minus >= 0.0 {
        erfcx(u_minus) * gauss_exp.exp()
    } else {
        erfc(u_minus) * (shift - y * sb).exp()
    };
    let plus = erfcx(u_plus) * gauss_exp.exp();
    (minus - plus) / (4.0 * sb)
}

/// Drifted Brownian motion subordinated to the exponential time law at
/// (scaled) time `w`.
fn drift_exponential(mu: f64, sigma: f64, a: f64, x: f64, w: f64) -> f64 {
    let s2 = sigma * sigma;
    let b = a + mu * mu / (4.0 * s2);
    let atom = (-a * w).exp() * gauss(x, mu, sigma, w);
    atom + a / sigma * damped_heat_integral(b, x / sigma, w, mu * x / (2.0 * s2))
}

/// Stationary law of drifted Brownian motion under the exponential kernel.
fn drift_stationary(mu: f64, sigma: f64, a: f64, x: f64) -> f64 {
    let s2 = sigma * sigma;
    let b = a + mu * mu / (4.0 * s2);
    a / (2.0 * sigma * b.sqrt()) * (mu * x / (2.0 * s2) - (x / sigma).abs() * b.sqrt()).exp()
}

/// Half of the Wright law of order `beta/2` in `|y|`: the power-kernel
/// solution for unit-scale Brownian motion.
fn half_wright(beta: f64, y: f64, w: f64) -> Result<f64> {
    Ok(0.5 * wright_m_scaled(0.5 * beta, y.abs(), w, &SeriesControl::default())?)
}

/// Closed-form solution when one exists for the (parent, kernel, scaling)
/// combination; `None` sends the caller to [`solve_subordination`].
pub fn solve_closed(m: &NonMarkovModel, x: f64, t: f64) -> Result<Option<f64>> {
    m.validate()?;
    check_time(t)?;
    let law = match m.time_law() {
        Ok(l) => l,
        Err(Error::Unsupported(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let w = m.scaling.eval(t);
    // geometric Brownian motion is drifted Brownian motion in log(x / x0)
    let (y, mu, sigma, jacobian) = match m.parent {
        ParentModel::StandardBM => (x, 0.0, 1.0, 1.0),
        ParentModel::DriftBM { mu, sigma } => (x, mu, sigma, 1.0),
        ParentModel::GeometricBM { mu, sigma, x0 } => {
            if !(x > 0.0) {
                return Err(Error::Domain(format!("geometric Brownian motion needs x > 0, got {x}")));
            }
            ((x / x0).ln(), mu - 0.5 * sigma * sigma, sigma, 1.0 / x)
        }
    };
    let value = match law {
        TimeLaw::DeltaLaw => Some(m.parent.green(x, w)?),
        TimeLaw::WrightLaw { beta } => {
            if mu == 0.0 {
                Some(jacobian / sigma * half_wright(beta, y / sigma, w)?)
            } else {
                None
            }
        }
        TimeLaw::ExpMixture { a } => Some(jacobian * drift_exponential(mu, sigma, a, y, w)),
    };
    Ok(value)
}

/// How [`solve`] evaluates the density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Closed,
    Quadrature,
    /// Closed form when available, otherwise quadrature.
    Auto,
}

pub fn solve(m: &NonMarkovModel, x: f64, t: f64, method: SolveMethod) -> Result<f64> {
    match method {
        SolveMethod::Quadrature => solve_subordination(m, x, t),
        SolveMethod::Closed => solve_closed(m, x, t)?.ok_or_else(|| {
            Error::Unsupported(format!(
                "no closed form for {:?} with {:?}",
                m.parent, m.kernel
            ))
        }),
        SolveMethod::Auto => match solve_closed(m, x, t)? {
            Some(v) => Ok(v),
            None => solve_subordination(m, x, t),
        },
    }
}

/// Large-time limit of the solution under the exponential kernel.
pub fn stationary_density(m: &NonMarkovModel, x: f64) -> Result<f64> {
    m.validate()?;
    let a = match m.kernel {
        MemoryKernel::ExponentialDecay { a } if a > 0.0 => a,
        _ => {
            return Err(Error::Unsupported(
                "a stationary law exists only for the exponential kernel with a > 0".into(),
            ))
        }
    };
    match m.parent {
        ParentModel::StandardBM => Ok(drift_stationary(0.0, 1.0, a, x)),
        ParentModel::DriftBM { mu, sigma } => Ok(drift_stationary(mu, sigma, a, x)),
        ParentModel::GeometricBM { mu, sigma, x0 } => {
            if !(x > 0.0) {
                return Err(Error::Domain(format!("geometric Brownian motion needs x > 0, got {x}")));
            }
            Ok(drift_stationary(mu - 0.5 * sigma * sigma, sigma, a, (x / x0).ln()) / x)
        }
    }
}

/// Solution for an initial law made of point masses `(location, weight)`.
pub fn solve_with_initial(m: &NonMarkovModel, u0: &[(f64, f64)], x: f64, t: f64) -> Result<f64> {
    m.validate()?;
    if u0.is_empty() {
        return Err(Error::Domain("initial condition has no point masses".into()));
    }
    let mut total_weight = 0.0;
    for &(loc, weight) in u0 {
        check_param("location", loc, true, "must be finite")?;
        check_param("weight", weight, weight >= 0.0, "must be non-negative")?;
        total_weight += weight;
    }
    if (total_weight - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter {
            name: "weights",
            value: total_weight,
            reason: "must sum to 1",
        });
    }
    match m.parent {
        ParentModel::GeometricBM { mu, sigma, .. } => {
            if u0.len() != 1 {
                return Err(Error::Unsupported(
                    "geometric Brownian motion takes a single initial point mass".into(),
                ));
            }
            let moved = NonMarkovModel {
                parent: ParentModel::GeometricBM { mu, sigma, x0: u0[0].0 },
                ..*m
            };
            solve(&moved, x, t, SolveMethod::Auto)
        }
        _ => {
            let mut sum = 0.0;
            for &(loc, weight) in u0 {
                if weight > 0.0 {
                    sum += weight * solve(m, x - loc, t, SolveMethod::Auto)?;
                }
            }
            Ok(sum)
        }
    }
}

/// Absolute residual of the integral form of the equation,
/// `u(x,t) - int_0^t g'(s) K(g(t) - g(s)) P u(x, s) ds`, for `x` away from the
/// starting point.
///
/// The memory integral is taken in `w = g(s)`; for power kernels the further
/// substitution `q = (g(t) - w)^beta` removes the endpoint singularity.
/// `P u` uses five-point central differences of the solution in `x`, and
/// `n_time_nodes` is the evaluation budget of the adaptive time quadrature.
pub fn verify_integral_equation(m: &NonMarkovModel, x: f64, t: f64, n_time_nodes: usize) -> Result<f64> {
    m.validate()?;
    check_time(t)?;
    if n_time_nodes < 15 {
        return Err(Error::InvalidParameter {
            name: "n_time_nodes",
            value: n_time_nodes as f64,
            reason: "must be at least 15",
        });
    }
    let origin = m.parent.origin();
    let h = 1e-3 * x.abs().max(1.0);
    if (x - origin).abs() <= 2.0 * h {
        return Err(Error::Domain(format!(
            "x = {x} is too close to the initial point mass at {origin}"
        )));
    }
    let law = m.time_law()?;
    let base = NonMarkovModel {
        scaling: ScalingFunction::Identity,
        ..*m
    };
    let value = |w: f64| solve(&base, x, w, SolveMethod::Auto);
    let generator = |w: f64| -> Result<f64> {
        let f = |dx: f64| solve(&base, x + dx, w, SolveMethod::Auto);
        let (fm2, fm1, f0, fp1, fp2) = (f(-2.0 * h)?, f(-h)?, f(0.0)?, f(h)?, f(2.0 * h)?);
        let du = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
        let d2u = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
        Ok(m.parent.operator(x, f0, du, d2u))
    };
    let w_end = m.scaling.eval(t);
    let cfg = QuadConfig {
        abs_tol: 1e-10,
        rel_tol: 1e-9,
        max_subdivisions: (n_time_nodes / 30).max(1),
    };
    let mut failure = None;
    let mut guard = |r: Result<f64>| match r {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let memory = match (m.kernel, law) {
        (_, TimeLaw::DeltaLaw) => integrate(|w| guard(generator(w)), 0.0, w_end, &cfg),
        (MemoryKernel::PowerLaw { beta }, _) => {
            let scale = reciprocal_gamma(beta + 1.0);
            integrate(
                |q: f64| {
                    let w = w_end - q.powf(1.0 / beta);
                    if w <= 0.0 {
                        return 0.0;
                    }
                    scale * guard(generator(w))
                },
                0.0,
                w_end.powf(beta),
                &cfg,
            )
        }
        (k, _) => integrate(
            |w: f64| {
                let kv = k.eval(w_end - w).unwrap_or(f64::NAN);
                kv * guard(generator(w))
            },
            0.0,
            w_end,
            &cfg,
        ),
    };
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((value(w_end)? - memory?.value).abs())
}
