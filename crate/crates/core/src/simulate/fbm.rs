use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::fft::fft_in_place;
use super::{Path, PathGrid};
use crate::error::check_param;
use crate::{Error, Result};

/// Largest grid for which the dense Cholesky fallback is used.
pub const FBM_CHOLESKY_LIMIT: usize = 2048;

/// Fractional Brownian motion with Hurst index `hurst` in (0, 1), normalised so
/// that `Var B(t) = 2 t^(2 hurst)`.
///
/// Uniform grids use circulant embedding; non-uniform grids, or embeddings with
/// negative eigenvalues, use a Cholesky factor of the full covariance for up to
/// [`FBM_CHOLESKY_LIMIT`] points.
pub fn sample_fbm_path<R: Rng + ?Sized>(hurst: f64, grid: &PathGrid, rng: &mut R) -> Result<Path> {
    check_param("hurst", hurst, hurst > 0.0 && hurst < 1.0, "must lie in (0, 1)")?;
    let values = match grid.uniform_step() {
        Some(dt) => match circulant(hurst, dt, grid.len() - 1, rng) {
            Some(v) => v,
            None => cholesky(hurst, grid.times(), rng)?,
        },
        None => cholesky(hurst, grid.times(), rng)?,
    };
    Ok(Path {
        grid: grid.clone(),
        values,
        time_change: None,
    })
}

fn increment_cov(hurst: f64, k: usize) -> f64 {
    let h2 = 2.0 * hurst;
    let k = k as f64;
    (k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2)
}

/// Davies–Harte sampler. `None` when the embedding is not non-negative definite.
fn circulant<R: Rng + ?Sized>(hurst: f64, dt: f64, n: usize, rng: &mut R) -> Option<Vec<f64>> {
    let half = n.next_power_of_two();
    let m = 2 * half;
    let mut c: Vec<Complex64> = (0..m)
        .map(|j| {
            let k = if j <= half { j } else { m - j };
            Complex64::new(increment_cov(hurst, k), 0.0)
        })
        .collect();
    fft_in_place(&mut c);
    let scale = c.iter().fold(0.0f64, |a, z| a.max(z.re.abs()));
    let mut lambda = Vec::with_capacity(m);
    for z in &c {
        if z.re < -1e-10 * scale {
            return None;
        }
        lambda.push(z.re.max(0.0));
    }
    let mut y: Vec<Complex64> = lambda
        .iter()
        .map(|&l| {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            Complex64::new(a, b) * (l / m as f64).sqrt()
        })
        .collect();
    fft_in_place(&mut y);
    let step = dt.powf(hurst);
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for z in y.iter().take(n) {
        acc += step * z.re;
        out.push(acc);
    }
    Some(out)
}

fn cholesky<R: Rng + ?Sized>(hurst: f64, times: &[f64], rng: &mut R) -> Result<Vec<f64>> {
    let n = times.len() - 1;
    if n > FBM_CHOLESKY_LIMIT {
        return Err(Error::Grid(format!(
            "non-uniform fBm grids are limited to {FBM_CHOLESKY_LIMIT} points, got {n}"
        )));
    }
    let h2 = 2.0 * hurst;
    let t = &times[1..];
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let cov = t[i].powf(h2) + t[j].powf(h2) - (t[i] - t[j]).abs().powf(h2);
            let mut s = cov;
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if !(s > 0.0) {
                    return Err(Error::Grid("fBm covariance is numerically singular on this grid".into()));
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    for i in 0..n {
        out.push((0..=i).map(|k| l[i * n + k] * z[k]).sum());
    }
    Ok(out)
}
