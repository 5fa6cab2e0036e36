//! Path-level simulation: Brownian and fractional Brownian paths, random
//! times, subordinated processes and grey Brownian motion.

mod fbm;
mod fft;
mod oracle;
mod paths;
mod rng;
mod stable;
mod time;

use alloc::format;
use alloc::vec::Vec;

pub use fbm::{sample_fbm_path, FBM_CHOLESKY_LIMIT};
pub use fft::fft_in_place;
pub use oracle::BrownianOracle;
pub use paths::{sample_bm_path, sample_grey_bm, sample_subordinated_path};
pub use rng::RngStream;
pub use stable::sample_positive_stable;
pub use time::{sample_time_marginal, sample_time_path, RandomTimeModel};

use crate::{Error, Result};

/// Strictly increasing simulation times starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGrid {
    times: Vec<f64>,
}

impl PathGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::Grid(format!("a path grid needs at least 2 times, got {}", times.len())));
        }
        if times[0] != 0.0 {
            return Err(Error::Grid(format!("a path grid starts at 0, got {}", times[0])));
        }
        for w in times.windows(2) {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(Error::Grid("path grid times must be finite and strictly increasing".into()));
            }
        }
        Ok(Self { times })
    }

    /// `steps + 1` equally spaced times on `[0, t_max]`.
    pub fn uniform(t_max: f64, steps: usize) -> Result<Self> {
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(Error::Grid(format!("t_max must be positive, got {t_max}")));
        }
        if steps == 0 {
            return Err(Error::Grid("need at least one step".into()));
        }
        let dt = t_max / steps as f64;
        let mut times: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
        times[steps] = t_max;
        Self::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Common step when the grid is uniform to relative precision 1e-9.
    pub fn uniform_step(&self) -> Option<f64> {
        let dt = self.t_max() / (self.times.len() - 1) as f64;
        self.times
            .windows(2)
            .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt)
            .then_some(dt)
    }

    /// Image of the grid under an increasing map with `g(0) = 0`.
    pub fn map(&self, g: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.times.iter().map(|&t| g(t)).collect())
    }
}

/// Values on a grid plus the optional random-time trajectory that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub grid: PathGrid,
    pub values: Vec<f64>,
    pub time_change: Option<Vec<f64>>,
}

impl Path {
    pub fn endpoint(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}
