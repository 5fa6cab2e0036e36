use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use super::fbm::sample_fbm_path;
use super::oracle::BrownianOracle;
use super::stable::stable_unchecked;
use super::time::{time_values, RandomTimeModel};
use super::{Path, PathGrid};
use crate::error::check_param;
use crate::kernels::ScalingFunction;
use crate::solutions::ParentModel;
use crate::Result;

/// Brownian motion with `Var B(t) = 2t` on `grid`.
pub fn sample_bm_path<R: Rng + ?Sized>(grid: &PathGrid, rng: &mut R) -> Path {
    let mut values = Vec::with_capacity(grid.len());
    values.push(0.0);
    let mut b = 0.0;
    for w in grid.times().windows(2) {
        let z: f64 = rng.sample(StandardNormal);
        b += (2.0 * (w[1] - w[0])).sqrt() * z;
        values.push(b);
    }
    Path {
        grid: grid.clone(),
        values,
        time_change: None,
    }
}

/// `Q(l(g(t)))` on `grid`, with `Q` the parent process and `l` the random
/// time. The parent is revealed lazily at the random times, so `Q` and `l`
/// are independent and the path is a single consistent realisation. The
/// random-time trajectory `l(g(t_i))` is kept in `time_change`.
pub fn sample_subordinated_path<R: Rng + ?Sized>(
    parent: &ParentModel,
    time: &RandomTimeModel,
    scaling: &ScalingFunction,
    grid: &PathGrid,
    rng: &mut R,
) -> Result<Path> {
    parent.validate()?;
    time.validate()?;
    scaling.validate()?;
    let w: Vec<f64> = grid.times().iter().map(|&t| scaling.eval(t)).collect();
    let l = time_values(time, &w, rng);
    let mut oracle = BrownianOracle::new();
    let values = l
        .iter()
        .map(|&tau| {
            let b = oracle.query(tau, rng);
            match *parent {
                ParentModel::StandardBM => b,
                ParentModel::DriftBM { mu, sigma } => mu * tau + sigma * b,
                ParentModel::GeometricBM { mu, sigma, x0 } => x0 * ((mu - 0.5 * sigma * sigma) * tau + sigma * b).exp(),
            }
        })
        .collect();
    Ok(Path {
        grid: grid.clone(),
        values,
        time_change: Some(l),
    })
}

/// Generalised grey Brownian motion `sqrt(l_beta(1)) B_H(t)` with `H = alpha/2`,
/// where `l_beta(1)` has the Wright law of order `beta` at unit time and
/// `B_H` is an independent fractional Brownian motion. The amplitude
/// `sqrt(l_beta(1))` is stored as a constant `time_change`.
pub fn sample_grey_bm<R: Rng + ?Sized>(alpha: f64, beta: f64, grid: &PathGrid, rng: &mut R) -> Result<Path> {
    check_param("alpha", alpha, alpha > 0.0 && alpha < 2.0, "must lie in (0, 2)")?;
    check_param("beta", beta, beta > 0.0 && beta <= 1.0, "must lie in (0, 1]")?;
    let level = if beta == 1.0 {
        1.0
    } else {
        stable_unchecked(beta, rng).powf(-beta)
    };
    let amp = level.sqrt();
    let mut path = sample_fbm_path(0.5 * alpha, grid, rng)?;
    for v in path.values.iter_mut() {
        *v *= amp;
    }
    path.time_change = Some(alloc::vec![level; grid.len()]);
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::RngStream;
    use crate::specfun::{gamma, wright_m, SeriesControl};
    use crate::quad::{integrate, QuadConfig};

    #[test]
    fn bm_variance() {
        let grid = PathGrid::uniform(1.0, 20).unwrap();
        let mut rng = RngStream::new(5, 0);
        let n = 40_000;
        let m: f64 = (0..n).map(|_| sample_bm_path(&grid, &mut rng).endpoint().powi(2)).sum::<f64>() / n as f64;
        assert!((m - 2.0).abs() < 4.0 * 2.0 * (2.0 / n as f64).sqrt(), "{m}");
    }

    #[test]
    fn subordinated_endpoint_matches_wright_density() {
        // |b| time change on BM: marginal at t=1 is (1/2) M_{1/4}(|x|)
        let grid = PathGrid::uniform(1.0, 50).unwrap();
        let mut rng = RngStream::new(11, 4);
        let n = 8000;
        let mut xs: Vec<f64> = (0..n)
            .map(|_| {
                sample_subordinated_path(&ParentModel::StandardBM, &RandomTimeModel::AbsBM, &ScalingFunction::Identity, &grid, &mut rng)
                    .unwrap()
                    .endpoint()
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        let cfg = QuadConfig::with_tol(1e-10, 1e-8);
        let cdf = |x: f64| {
            let half = integrate(|y| 0.5 * wright_m(0.25, y, &SeriesControl::default()).unwrap(), 0.0, x.abs(), &cfg).unwrap().value;
            0.5 + half.copysign(x)
        };
        let mut d: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate().step_by(7) {
            let f = cdf(x);
            d = d.max((f - i as f64 / n as f64).abs()).max((f - (i + 1) as f64 / n as f64).abs());
        }
        assert!(d < 1.63 / (n as f64).sqrt(), "{d}");
    }

    #[test]
    fn subordinated_paths_are_consistent() {
        let grid = PathGrid::uniform(2.0, 40).unwrap();
        let mut rng = RngStream::new(3, 3);
        let p = sample_subordinated_path(
            &ParentModel::GeometricBM { mu: 0.2, sigma: 0.3, x0: 1.5 },
            &RandomTimeModel::MinExp { a: 1.0 },
            &ScalingFunction::Power { p: 2.0 },
            &grid,
            &mut rng,
        )
        .unwrap();
        let l = p.time_change.as_ref().unwrap();
        assert_eq!(p.values[0], 1.5);
        // after the exponential clock stops, the path is frozen
        for i in 1..l.len() {
            if l[i] == l[i - 1] {
                assert_eq!(p.values[i], p.values[i - 1]);
            }
        }
        let d = sample_subordinated_path(&ParentModel::StandardBM, &RandomTimeModel::DeltaTime, &ScalingFunction::Identity, &grid, &mut rng).unwrap();
        assert_eq!(d.time_change.unwrap(), grid.times());
    }

    #[test]
    fn grey_bm_second_moment() {
        let (alpha, beta) = (1.0, 0.5);
        let grid = PathGrid::uniform(1.0, 32).unwrap();
        let mut rng = RngStream::new(8, 8);
        let n = 40_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_grey_bm(alpha, beta, &grid, &mut rng).unwrap().endpoint().powi(2)).collect();
        let m = xs.iter().sum::<f64>() / n as f64;
        let sd = (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n as f64).sqrt();
        let expect = 2.0 / gamma(1.0 + beta).unwrap();
        assert!((m - expect).abs() < 4.0 * sd / (n as f64).sqrt(), "{m} vs {expect}");
    }

    #[test]
    fn same_seed_same_path() {
        let grid = PathGrid::uniform(1.0, 10).unwrap();
        let run = |s| {
            let mut rng = RngStream::new(s, 1);
            sample_subordinated_path(&ParentModel::DriftBM { mu: 1.0, sigma: 1.0 }, &RandomTimeModel::InverseStable { beta: 0.7 }, &ScalingFunction::Identity, &grid, &mut rng).unwrap()
        };
        assert_eq!(run(1), run(1));
        assert_ne!(run(1).values, run(2).values);
    }
}
