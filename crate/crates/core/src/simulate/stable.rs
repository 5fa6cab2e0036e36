use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use rand::distr::Open01;
use rand::Rng;
use rand_distr::Exp1;

use crate::error::check_param;
use crate::Result;

/// Draw from the one-sided stable law with `E[exp(-u S)] = exp(-u^beta)`,
/// by Kanter's representation
/// `S = sin(beta U) / sin(U)^(1/beta) * (sin((1-beta) U) / W)^((1-beta)/beta)`
/// with `U` uniform on `(0, pi)` and `W` standard exponential.
pub fn sample_positive_stable<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> Result<f64> {
    check_param("beta", beta, beta > 0.0 && beta < 1.0, "must lie in (0, 1)")?;
    Ok(stable_unchecked(beta, rng))
}

pub(crate) fn stable_unchecked<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> f64 {
    loop {
        let u = PI * rng.sample::<f64, _>(Open01);
        let w: f64 = rng.sample(Exp1);
        let ln_s = (beta * u).sin().ln() - (u.sin().ln()) / beta
            + (1.0 - beta) / beta * (((1.0 - beta) * u).sin().ln() - w.ln());
        let s = ln_s.exp();
        if s > 0.0 && s.is_finite() {
            return s;
        }
    }
}
