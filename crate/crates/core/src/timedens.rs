//! Marginal law `h(tau, t)` of the random time `l(t)` attached to a memory kernel.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::check_param;
use crate::kernels::MemoryKernel;
use crate::quad::{gk15, integrate_panels, QuadConfig};
use crate::specfun::{ln_gamma, talbot_invert, wright_m_scaled, SeriesControl};
use crate::{Error, Result};

/// Law of the random time `l(t)`: a point mass plus an absolutely continuous part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeLaw {
    /// Density `t^-beta M_beta(tau t^-beta)`, power-law kernel.
    WrightLaw { beta: f64 },
    /// `exp(-a t) delta(tau - t) + a exp(-a tau) 1{tau < t}`, exponential kernel.
    ExpMixture { a: f64 },
    /// `delta(tau - t)`, the Markovian limit.
    DeltaLaw,
}

/// Value of a mixture law at one `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureValue {
    pub atom_location: f64,
    pub atom_weight: f64,
    pub continuous_density: f64,
}

impl TimeLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::WrightLaw { beta } => check_param("beta", beta, beta > 0.0 && beta < 1.0, "must lie in (0, 1)"),
            Self::ExpMixture { a } => check_param("a", a, a > 0.0, "must be positive"),
            Self::DeltaLaw => Ok(()),
        }
    }

    /// Location and weight of the point mass at time `t`, if any.
    pub fn atom(&self, t: f64) -> Option<(f64, f64)> {
        match *self {
            Self::WrightLaw { .. } => None,
            Self::ExpMixture { a } => Some((t, (-a * t).exp())),
            Self::DeltaLaw => Some((t, 1.0)),
        }
    }

    /// Density of the continuous part, without argument checks.
    pub(crate) fn continuous(&self, tau: f64, t: f64, ctrl: &SeriesControl) -> Result<f64> {
        match *self {
            Self::WrightLaw { beta } => wright_m_scaled(beta, tau, t, ctrl),
            Self::ExpMixture { a } => Ok(if tau < t { a * (-a * tau).exp() } else { 0.0 }),
            Self::DeltaLaw => Ok(0.0),
        }
    }
}

/// Time law generated by a kernel. The power exponent 1 and the zero decay
/// rate both give the Markovian point mass.
pub fn law_from_kernel(k: &MemoryKernel) -> Result<TimeLaw> {
    k.validate()?;
    match *k {
        MemoryKernel::PowerLaw { beta } if beta == 1.0 => Ok(TimeLaw::DeltaLaw),
        MemoryKernel::PowerLaw { beta } => Ok(TimeLaw::WrightLaw { beta }),
        MemoryKernel::ExponentialDecay { a } if a == 0.0 => Ok(TimeLaw::DeltaLaw),
        MemoryKernel::ExponentialDecay { a } => Ok(TimeLaw::ExpMixture { a }),
        MemoryKernel::PowerExp { .. } => Err(Error::Unsupported(
            "no closed-form time law for the power-exponential kernel".into(),
        )),
    }
}

pub fn time_density(law: &TimeLaw, tau: f64, t: f64) -> Result<MixtureValue> {
    law.validate()?;
    check_param("tau", tau, tau >= 0.0, "must be non-negative")?;
    check_param("t", t, t > 0.0, "must be positive")?;
    let (atom_location, atom_weight) = law.atom(t).unwrap_or((t, 0.0));
    Ok(MixtureValue {
        atom_location,
        atom_weight,
        continuous_density: law.continuous(tau, t, &SeriesControl::default())?,
    })
}

/// Exact moment `E[l(t)^m]`.
pub fn time_moment(law: &TimeLaw, m: u32, t: f64) -> Result<f64> {
    law.validate()?;
    check_param("t", t, t > 0.0, "must be positive")?;
    let mf = m as f64;
    match *law {
        TimeLaw::WrightLaw { beta } => {
            // m! t^(beta m) / Gamma(beta m + 1)
            let ln = ln_gamma(mf + 1.0) + beta * mf * t.ln() - ln_gamma(beta * mf + 1.0);
            if m == 0 {
                Ok(1.0)
            } else if ln < 700.0 {
                Ok(ln.exp())
            } else {
                Err(Error::Overflow(format!("moment of order {m} at t = {t}")))
            }
        }
        TimeLaw::ExpMixture { a } => Ok(exp_mixture_moment(a, m, t)),
        TimeLaw::DeltaLaw => Ok(t.powi(m as i32)),
    }
}

/// `t^m e^{-at} [1 + sum_{j>=1} (at)^j m!/(m+j)!]`, the atom plus the
/// truncated-exponential part, summed without cancellation.
fn exp_mixture_moment(a: f64, m: u32, t: f64) -> f64 {
    let x = a * t;
    let mf = m as f64;
    if x > 700.0 {
        // the atom and the truncation are below double resolution
        return (ln_gamma(mf + 1.0) - mf * a.ln()).exp();
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut j = 1.0;
    loop {
        term *= x / (mf + j);
        sum += term;
        if term < 1e-17 * sum && j > x {
            break;
        }
        j += 1.0;
    }
    t.powi(m as i32) * (-x).exp() * sum
}

/// `P(l(t) <= tau)`.
pub fn time_cdf(law: &TimeLaw, tau: f64, t: f64) -> Result<f64> {
    law.validate()?;
    check_param("t", t, t > 0.0, "must be positive")?;
    if tau.is_nan() {
        return Err(Error::Domain("tau is NaN".into()));
    }
    match *law {
        TimeLaw::WrightLaw { beta } => Ok(WrightCdf::new(beta, t)?.eval(tau)),
        TimeLaw::ExpMixture { a } => Ok(if tau < 0.0 {
            0.0
        } else if tau < t {
            -(-a * tau).exp_m1()
        } else {
            1.0
        }),
        TimeLaw::DeltaLaw => Ok(if tau >= t { 1.0 } else { 0.0 }),
    }
}

/// Cumulative distribution of a Wright time law, built once from adaptive
/// panels and then evaluated cheaply. Immutable after construction.
#[derive(Debug, Clone)]
pub struct WrightCdf {
    beta: f64,
    t: f64,
    /// (left, right, mass left of `left`)
    panels: Vec<(f64, f64, f64)>,
    upper: f64,
    ctrl: SeriesControl,
}

/// Density level past which the Wright tail is dropped.
const TAIL_DENSITY: f64 = 1e-16;

impl WrightCdf {
    pub fn new(beta: f64, t: f64) -> Result<Self> {
        TimeLaw::WrightLaw { beta }.validate()?;
        check_param("t", t, t > 0.0, "must be positive")?;
        let ctrl = SeriesControl::default();
        let upper = wright_upper_cutoff(beta, t, &ctrl)?;
        let mut failure = None;
        let density = |tau: f64| match wright_m_scaled(beta, tau, t, &ctrl) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        };
        let cfg = QuadConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_subdivisions: 4000,
        };
        let part = integrate_panels(density, 0.0, upper, &cfg);
        if let Some(e) = failure {
            return Err(e);
        }
        let part = part?;
        let mut cum = 0.0;
        let panels = part
            .panels
            .iter()
            .map(|&(a, b, v)| {
                let before = cum;
                cum += v;
                (a, b, before)
            })
            .collect();
        Ok(Self {
            beta,
            t,
            panels,
            upper,
            ctrl,
        })
    }

    /// Upper end of the integration range.
    pub fn support_end(&self) -> f64 {
        self.upper
    }

    pub fn eval(&self, tau: f64) -> f64 {
        if !(tau > 0.0) {
            return 0.0;
        }
        if tau >= self.upper {
            return 1.0;
        }
        let idx = self.panels.partition_point(|p| p.0 <= tau) - 1;
        let (a, _, before) = self.panels[idx];
        let mut density = |x: f64| wright_m_scaled(self.beta, x, self.t, &self.ctrl).unwrap_or(0.0);
        let (partial, _) = gk15(&mut density, a, tau);
        (before + partial).clamp(0.0, 1.0)
    }

    /// Evaluates at many points; the output follows the input order.
    pub fn eval_many(&self, taus: &[f64]) -> Vec<f64> {
        taus.iter().map(|&x| self.eval(x)).collect()
    }
}

/// First point of a doubling scan beyond the bulk where the density drops below
/// the tail level.
fn wright_upper_cutoff(beta: f64, t: f64, ctrl: &SeriesControl) -> Result<f64> {
    let mut tau = t.powf(beta);
    for _ in 0..200 {
        if wright_m_scaled(beta, tau, t, ctrl)? < TAIL_DENSITY {
            return Ok(tau);
        }
        tau *= 1.5;
    }
    Err(Error::Domain(format!("no tail cutoff found for beta = {beta}, t = {t}")))
}

/// Upper cutoff for `tau`-integrals against the law at time `t`.
pub(crate) fn support_end(law: &TimeLaw, t: f64, ctrl: &SeriesControl) -> Result<f64> {
    match *law {
        TimeLaw::WrightLaw { beta } => wright_upper_cutoff(beta, t, ctrl),
        _ => Ok(t),
    }
}

/// Oracle density of the continuous part obtained by Talbot inversion of
/// `exp(-tau / K~(s)) / (s K~(s))` in `t`.
///
/// Kernels whose transform behaves like `1/s` at infinity carry a point mass
/// at `tau = t`; their transform is shifted by `exp(-tau s)` and its constant
/// limit removed before inversion, so only the continuous part is returned.
pub fn time_density_reference(k: &MemoryKernel, tau: f64, t: f64, nodes: usize) -> Result<f64> {
    k.validate()?;
    check_param("tau", tau, tau >= 0.0, "must be non-negative")?;
    check_param("t", t, t > 0.0, "must be positive")?;
    let shifted = match *k {
        MemoryKernel::PowerLaw { beta } | MemoryKernel::PowerExp { beta, .. } => beta == 1.0,
        MemoryKernel::ExponentialDecay { .. } => true,
    };
    let kernel = *k;
    if !shifted {
        let f = move |s: Complex64| {
            let kt = kernel.laplace_complex(s);
            (-tau / kt).exp() / (s * kt)
        };
        return talbot_invert(f, t, nodes);
    }
    if tau == t {
        return Err(Error::InversionFailure(format!("tau = {tau} sits on the point mass")));
    }
    if tau > t {
        return Ok(0.0);
    }
    // 1/K~(s) - s tends to the constant `a`
    let a = match kernel {
        MemoryKernel::ExponentialDecay { a } | MemoryKernel::PowerExp { a, .. } => a,
        MemoryKernel::PowerLaw { .. } => 0.0,
    };
    let limit = (-a * tau).exp();
    let f = move |s: Complex64| {
        let kt = kernel.laplace_complex(s);
        (-tau * (kt.inv() - s)).exp() / (s * kt) - limit
    };
    talbot_invert(f, t - tau, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_to_infinity;
    use crate::specfun::DEFAULT_TALBOT_NODES;
    use core::f64::consts::PI;

    const LAWS: [TimeLaw; 6] = [
        TimeLaw::WrightLaw { beta: 0.25 },
        TimeLaw::WrightLaw { beta: 0.5 },
        TimeLaw::WrightLaw { beta: 0.75 },
        TimeLaw::ExpMixture { a: 0.5 },
        TimeLaw::ExpMixture { a: 1.0 },
        TimeLaw::ExpMixture { a: 2.0 },
    ];

    #[test]
    fn laws_from_kernels() {
        assert_eq!(
            law_from_kernel(&MemoryKernel::PowerLaw { beta: 0.5 }).unwrap(),
            TimeLaw::WrightLaw { beta: 0.5 }
        );
        assert_eq!(
            law_from_kernel(&MemoryKernel::ExponentialDecay { a: 1.0 }).unwrap(),
            TimeLaw::ExpMixture { a: 1.0 }
        );
        assert_eq!(law_from_kernel(&MemoryKernel::PowerLaw { beta: 1.0 }).unwrap(), TimeLaw::DeltaLaw);
        assert_eq!(
            law_from_kernel(&MemoryKernel::ExponentialDecay { a: 0.0 }).unwrap(),
            TimeLaw::DeltaLaw
        );
        assert!(matches!(
            law_from_kernel(&MemoryKernel::PowerExp { beta: 0.5, a: 1.0 }),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn density_values() {
        let e = time_density(&TimeLaw::ExpMixture { a: 1.0 }, 0.5, 1.0).unwrap();
        assert_eq!(e.atom_location, 1.0);
        assert!((e.atom_weight - (-1.0f64).exp()).abs() < 1e-15);
        assert!((e.continuous_density - (-0.5f64).exp()).abs() < 1e-15);
        let beyond = time_density(&TimeLaw::ExpMixture { a: 1.0 }, 2.0, 1.0).unwrap();
        assert_eq!(beyond.continuous_density, 0.0);
        let w = time_density(&TimeLaw::WrightLaw { beta: 0.5 }, 0.0, 1.0).unwrap();
        assert_eq!(w.atom_weight, 0.0);
        assert!((w.continuous_density - 1.0 / PI.sqrt()).abs() < 1e-15);
        let d = time_density(&TimeLaw::DeltaLaw, 0.3, 2.0).unwrap();
        assert_eq!((d.atom_location, d.atom_weight, d.continuous_density), (2.0, 1.0, 0.0));
    }

    #[test]
    fn moment_values() {
        let w = time_moment(&TimeLaw::WrightLaw { beta: 0.5 }, 1, 1.0).unwrap();
        assert!((w - 2.0 / PI.sqrt()).abs() < 1e-14);
        let e = time_moment(&TimeLaw::ExpMixture { a: 1.0 }, 1, 1.0).unwrap();
        assert!((e - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert_eq!(time_moment(&TimeLaw::DeltaLaw, 3, 2.0).unwrap(), 8.0);
        for m in 0..5 {
            let near_delta = time_moment(&TimeLaw::ExpMixture { a: 1e-8 }, m, 1.7).unwrap();
            assert!((near_delta / 1.7f64.powi(m as i32) - 1.0).abs() < 1e-7);
        }
        // large rate: the exponential moments m!/a^m
        let big = time_moment(&TimeLaw::ExpMixture { a: 1000.0 }, 2, 1.0).unwrap();
        assert!((big - 2e-6).abs() < 1e-20);
        let mid = time_moment(&TimeLaw::ExpMixture { a: 300.0 }, 3, 1.0).unwrap();
        assert!(((mid - 6.0 / 300f64.powi(3)) / mid).abs() < 1e-13);
    }

    #[test]
    fn normalization() {
        let cfg = QuadConfig::with_tol(1e-12, 1e-12);
        for law in LAWS {
            for t in [0.25, 1.0, 4.0] {
                let mass = integrate_to_infinity(
                    |tau| time_density(&law, tau, t).unwrap().continuous_density,
                    0.0,
                    &cfg,
                )
                .unwrap()
                .value;
                let atom = law.atom(t).map_or(0.0, |a| a.1);
                assert!((mass + atom - 1.0).abs() < 1e-8, "{law:?} t={t}: {}", mass + atom);
            }
        }
    }

    #[test]
    fn moments_match_quadrature() {
        let cfg = QuadConfig::with_tol(1e-13, 1e-12);
        for law in LAWS {
            for t in [0.5, 1.0, 2.0] {
                for m in 0..=4u32 {
                    let q = integrate_to_infinity(
                        |tau| tau.powi(m as i32) * time_density(&law, tau, t).unwrap().continuous_density,
                        0.0,
                        &cfg,
                    )
                    .unwrap()
                    .value;
                    let atom = law.atom(t).map_or(0.0, |(x, w)| w * x.powi(m as i32));
                    let exact = time_moment(&law, m, t).unwrap();
                    assert!((q + atom - exact).abs() < 1e-6 * exact.max(1.0), "{law:?} t={t} m={m}");
                }
            }
        }
    }

    #[test]
    fn reference_oracle_agrees() {
        let nodes = DEFAULT_TALBOT_NODES;
        let r = time_density_reference(&MemoryKernel::PowerLaw { beta: 0.5 }, 1.0, 1.0, nodes).unwrap();
        assert!((r - (-0.25f64).exp() / PI.sqrt()).abs() < 1e-9);
        let e = time_density_reference(&MemoryKernel::ExponentialDecay { a: 1.0 }, 0.5, 1.0, nodes).unwrap();
        assert!((e - (-0.5f64).exp()).abs() < 1e-9);
        for (k, law) in [
            (MemoryKernel::PowerLaw { beta: 0.25 }, TimeLaw::WrightLaw { beta: 0.25 }),
            (MemoryKernel::PowerLaw { beta: 0.5 }, TimeLaw::WrightLaw { beta: 0.5 }),
            (MemoryKernel::PowerLaw { beta: 0.75 }, TimeLaw::WrightLaw { beta: 0.75 }),
            (MemoryKernel::ExponentialDecay { a: 0.5 }, TimeLaw::ExpMixture { a: 0.5 }),
            (MemoryKernel::ExponentialDecay { a: 1.0 }, TimeLaw::ExpMixture { a: 1.0 }),
            (MemoryKernel::ExponentialDecay { a: 2.0 }, TimeLaw::ExpMixture { a: 2.0 }),
        ] {
            for tau in [0.1, 0.4, 0.7, 1.3] {
                for t in [0.5, 1.0, 2.0] {
                    if (tau - t) as f64 == 0.0 {
                        continue;
                    }
                    let r = time_density_reference(&k, tau, t, nodes).unwrap();
                    let d = time_density(&law, tau, t).unwrap().continuous_density;
                    assert!((r - d).abs() < 1e-6, "{k:?} tau={tau} t={t}: {r} vs {d}");
                }
            }
        }
    }

    #[test]
    fn power_exp_reference_is_a_density() {
        let k = MemoryKernel::PowerExp { beta: 0.5, a: 1.0 };
        let cfg = QuadConfig::with_tol(1e-8, 1e-8);
        let mass = crate::quad::integrate(
            |tau| time_density_reference(&k, tau, 1.0, DEFAULT_TALBOT_NODES).unwrap(),
            0.0,
            30.0,
            &cfg,
        )
        .unwrap()
        .value;
        assert!((mass - 1.0).abs() < 1e-6, "{mass}");
    }

    #[test]
    fn self_similar_scaling() {
        for beta in [0.25, 0.5, 0.75] {
            let law = TimeLaw::WrightLaw { beta };
            for c in [0.5, 2.0] {
                for tau in [0.0, 0.3, 1.0, 2.5] {
                    let lhs = c.powf(-beta) * time_density(&law, c.powf(-beta) * tau, 1.3).unwrap().continuous_density;
                    let rhs = time_density(&law, tau, c * 1.3).unwrap().continuous_density;
                    assert!((lhs - rhs).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn cdf_properties() {
        assert_eq!(time_cdf(&TimeLaw::ExpMixture { a: 1.0 }, 1.0, 1.0).unwrap(), 1.0);
        let law = TimeLaw::WrightLaw { beta: 0.5 };
        assert_eq!(time_cdf(&law, 0.0, 1.0).unwrap(), 0.0);
        assert!((time_cdf(&law, 1e6, 1.0).unwrap() - 1.0).abs() < 1e-8);
        // l_{1/2}(1) is |N(0, 2)|
        let cdf = WrightCdf::new(0.5, 1.0).unwrap();
        for tau in [0.1, 0.5, 1.0, 2.0, 4.0] {
            let exact = crate::specfun::erf(tau / 2.0);
            assert!((cdf.eval(tau) - exact).abs() < 1e-10, "tau={tau}");
        }
        let mut prev = 0.0;
        for law in LAWS {
            let wright = match law {
                TimeLaw::WrightLaw { beta } => Some(WrightCdf::new(beta, 1.0).unwrap()),
                _ => None,
            };
            for i in 0..400 {
                let tau = i as f64 * 0.02;
                let c = match &wright {
                    Some(w) => w.eval(tau),
                    None => time_cdf(&law, tau, 1.0).unwrap(),
                };
                assert!(c >= prev - 1e-15 || i == 0, "{law:?} {tau}");
                prev = c;
            }
            prev = 0.0;
        }
    }
}
