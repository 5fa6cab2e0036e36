use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

/// One Brownian path (`Var B(t) = 2t`) revealed lazily at arbitrary query
/// times. Queries between known times are filled by Brownian-bridge draws and
/// queries past the last known time by fresh increments, so every answer is
/// consistent with a single realisation whatever the query order.
#[derive(Debug, Clone)]
pub struct BrownianOracle {
    /// (time, value), sorted by time
    known: Vec<(f64, f64)>,
}

impl Default for BrownianOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl BrownianOracle {
    pub fn new() -> Self {
        Self {
            known: alloc::vec![(0.0, 0.0)],
        }
    }

    /// Value at time `tau >= 0`.
    pub fn query<R: Rng + ?Sized>(&mut self, tau: f64, rng: &mut R) -> f64 {
        let tau = tau.max(0.0);
        let idx = self.known.partition_point(|p| p.0 < tau);
        if idx < self.known.len() && self.known[idx].0 == tau {
            return self.known[idx].1;
        }
        let z: f64 = rng.sample(StandardNormal);
        let value = if idx == self.known.len() {
            let (t0, v0) = self.known[idx - 1];
            v0 + (2.0 * (tau - t0)).sqrt() * z
        } else {
            let (t0, v0) = self.known[idx - 1];
            let (t1, v1) = self.known[idx];
            let frac = (tau - t0) / (t1 - t0);
            let var = 2.0 * (tau - t0) * (t1 - tau) / (t1 - t0);
            v0 + frac * (v1 - v0) + var.sqrt() * z
        };
        self.known.insert(idx, (tau, value));
        value
    }

    pub fn known_points(&self) -> usize {
        self.known.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::RngStream;

    #[test]
    fn repeated_queries_agree() {
        let mut rng = RngStream::new(1, 2);
        let mut o = BrownianOracle::new();
        let a = o.query(1.0, &mut rng);
        let b = o.query(0.3, &mut rng);
        assert_eq!(o.query(1.0, &mut rng), a);
        assert_eq!(o.query(0.3, &mut rng), b);
        assert_eq!(o.query(0.0, &mut rng), 0.0);
        assert_eq!(o.known_points(), 3);
    }

    #[test]
    fn bridge_has_brownian_covariance() {
        // query the far point first, then the midpoint: Cov(B(0.5), B(1)) = 1
        let n = 40_000;
        let mut rng = RngStream::new(3, 0);
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for _ in 0..n {
            let mut o = BrownianOracle::new();
            let y = o.query(1.0, &mut rng);
            let x = o.query(0.5, &mut rng);
            sxy += x * y;
            sxx += x * x;
        }
        let (cov, var) = (sxy / n as f64, sxx / n as f64);
        assert!((cov - 1.0).abs() < 0.05, "{cov}");
        assert!((var - 1.0).abs() < 0.05, "{var}");
    }
}
