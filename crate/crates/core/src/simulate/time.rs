use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use super::stable::stable_unchecked;
use super::{Path, PathGrid};
use crate::error::check_param;
use crate::timedens::TimeLaw;
use crate::Result;

/// Stochastic construction of the random time `l(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RandomTimeModel {
    /// `|b(t)|` for a Brownian motion `b`; Wright law of order 1/2.
    AbsBM,
    /// First passage of a one-sided `beta`-stable subordinator.
    InverseStable { beta: f64 },
    /// `min(X, t)` with one exponential `X` of rate `a` per path.
    MinExp { a: f64 },
    /// `min(X(t), t)` with an independent exponential draw at every grid node.
    MinExpNoise { a: f64 },
    /// `b_t t + (1 - b_t) j(t)`: a Bernoulli(`exp(-a t)`) choice between `t` and
    /// an exponential truncated to `[0, t)`, independently at every grid node.
    BernoulliMixture { a: f64 },
    /// `l(t) = t`.
    DeltaTime,
}

impl RandomTimeModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::InverseStable { beta } => check_param("beta", beta, beta > 0.0 && beta < 1.0, "must lie in (0, 1)"),
            Self::MinExp { a } | Self::MinExpNoise { a } | Self::BernoulliMixture { a } => {
                check_param("a", a, a > 0.0, "must be positive")
            }
            Self::AbsBM | Self::DeltaTime => Ok(()),
        }
    }

    /// One-dimensional law of `l(t)`.
    pub fn implied_law(&self) -> TimeLaw {
        match *self {
            Self::AbsBM => TimeLaw::WrightLaw { beta: 0.5 },
            Self::InverseStable { beta } => TimeLaw::WrightLaw { beta },
            Self::MinExp { a } | Self::MinExpNoise { a } | Self::BernoulliMixture { a } => TimeLaw::ExpMixture { a },
            Self::DeltaTime => TimeLaw::DeltaLaw,
        }
    }
}

/// One draw of `l(t)` from its marginal law.
pub fn sample_time_marginal<R: Rng + ?Sized>(law: &TimeLaw, t: f64, rng: &mut R) -> Result<f64> {
    law.validate()?;
    check_param("t", t, t > 0.0, "must be positive")?;
    Ok(marginal_unchecked(law, t, rng))
}

fn marginal_unchecked<R: Rng + ?Sized>(law: &TimeLaw, t: f64, rng: &mut R) -> f64 {
    match *law {
        // l(t) has the law of (t / S)^beta
        TimeLaw::WrightLaw { beta } => (t / stable_unchecked(beta, rng)).powf(beta),
        TimeLaw::ExpMixture { a } => truncated_exp_or_atom(a, t, rng),
        TimeLaw::DeltaLaw => t,
    }
}

/// `t` with probability `exp(-a t)`, otherwise an exponential of rate `a`
/// conditioned on `[0, t)`.
fn truncated_exp_or_atom<R: Rng + ?Sized>(a: f64, t: f64, rng: &mut R) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let v: f64 = rng.random();
    let mass = -(-a * t).exp_m1();
    if v >= mass {
        return t;
    }
    // inverse CDF of the truncated part: v < 1 - exp(-a t)
    (-(-v).ln_1p() / a).min(t)
}

/// Trajectory of the random time on `grid`.
pub fn sample_time_path<R: Rng + ?Sized>(model: &RandomTimeModel, grid: &PathGrid, rng: &mut R) -> Result<Path> {
    model.validate()?;
    let values = time_values(model, grid.times(), rng);
    Ok(Path {
        grid: grid.clone(),
        values,
        time_change: None,
    })
}

pub(crate) fn time_values<R: Rng + ?Sized>(model: &RandomTimeModel, times: &[f64], rng: &mut R) -> Vec<f64> {
    match *model {
        RandomTimeModel::AbsBM => {
            let mut b = 0.0f64;
            let mut prev = 0.0;
            times
                .iter()
                .map(|&t| {
                    let z: f64 = rng.sample(StandardNormal);
                    b += (2.0 * (t - prev)).sqrt() * z;
                    prev = t;
                    b.abs()
                })
                .collect()
        }
        RandomTimeModel::InverseStable { beta } => inverse_stable_path(beta, times, rng),
        RandomTimeModel::MinExp { a } => {
            let x: f64 = rng.sample::<f64, _>(Exp1) / a;
            times.iter().map(|&t| t.min(x)).collect()
        }
        RandomTimeModel::MinExpNoise { a } => times
            .iter()
            .map(|&t| {
                let x: f64 = rng.sample::<f64, _>(Exp1) / a;
                t.min(x)
            })
            .collect(),
        RandomTimeModel::BernoulliMixture { a } => times.iter().map(|&t| truncated_exp_or_atom(a, t, rng)).collect(),
        RandomTimeModel::DeltaTime => times.to_vec(),
    }
}

/// Number of subordinator steps per unit of the natural scale `t_max^beta`.
const STABLE_STEPS_PER_SCALE: f64 = 1024.0;

/// `l(t) = inf{u : S(u) > t}` for a `beta`-stable subordinator `S` simulated
/// on a uniform `u`-grid until it passes the largest query time. The passage
/// time is placed at the midpoint of the step that crosses.
fn inverse_stable_path<R: Rng + ?Sized>(beta: f64, times: &[f64], rng: &mut R) -> Vec<f64> {
    let t_max = times.iter().cloned().fold(0.0, f64::max);
    let mut out = alloc::vec![0.0; times.len()];
    if t_max == 0.0 {
        return out;
    }
    let du = t_max.powf(beta) / STABLE_STEPS_PER_SCALE;
    let jump_scale = du.powf(1.0 / beta);
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&i, &j| times[i].total_cmp(&times[j]));
    let mut s = 0.0;
    let mut steps = 0u64;
    for idx in order {
        let t = times[idx];
        if t == 0.0 {
            continue;
        }
        while s <= t {
            s += jump_scale * stable_unchecked(beta, rng);
            steps += 1;
        }
        out[idx] = (steps as f64 - 0.5) * du;
    }
    out
}
