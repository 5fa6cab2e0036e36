//! Monte Carlo ensembles, estimators, goodness-of-fit statistics and reports.

use nmdiff_core::moments::{moment, variance_curve};
use nmdiff_core::simulate::{sample_grey_bm, sample_subordinated_path, Path, PathGrid, RandomTimeModel, RngStream};
use nmdiff_core::solutions::{solve, SolveMethod};
use nmdiff_core::specfun::gamma;
use nmdiff_core::{MemoryKernel, NonMarkovModel, ParentModel, ScalingFunction, TimeLaw};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Paths per work unit. Fixed so that the reduction order, and hence every
/// floating-point result, is independent of the number of workers.
const CHUNK: usize = 64;

/// Process simulated by an ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnsembleSpec {
    /// `Q(l(g(t)))`.
    Subordinated {
        parent: ParentModel,
        time: RandomTimeModel,
        scaling: ScalingFunction,
    },
    /// `sqrt(l_beta(1)) B_{alpha/2}(t)`.
    GreyBm { alpha: f64, beta: f64 },
}

impl EnsembleSpec {
    pub fn sample<R: rand::Rng + ?Sized>(&self, grid: &PathGrid, rng: &mut R) -> nmdiff_core::Result<Path> {
        match self {
            Self::Subordinated { parent, time, scaling } => sample_subordinated_path(parent, time, scaling, grid, rng),
            Self::GreyBm { alpha, beta } => sample_grey_bm(*alpha, *beta, grid, rng),
        }
    }

    /// Equation whose fundamental solution is the marginal law at time `t`,
    /// together with the time at which to evaluate it.
    pub fn marginal_model(&self, t: f64) -> nmdiff_core::Result<(NonMarkovModel, f64)> {
        match *self {
            Self::Subordinated { parent, time, scaling } => {
                let kernel = match time.implied_law() {
                    TimeLaw::WrightLaw { beta } => MemoryKernel::PowerLaw { beta },
                    TimeLaw::ExpMixture { a } => MemoryKernel::ExponentialDecay { a },
                    TimeLaw::DeltaLaw => MemoryKernel::PowerLaw { beta: 1.0 },
                };
                Ok((NonMarkovModel::new(parent, kernel, scaling)?, t))
            }
            // l_beta(s) scales like s^beta, so Y(t) matches B(l_beta(t^(alpha/beta)))
            Self::GreyBm { alpha, beta } => Ok((
                NonMarkovModel::new(ParentModel::StandardBM, MemoryKernel::PowerLaw { beta }, ScalingFunction::Identity)?,
                t.powf(alpha / beta),
            )),
        }
    }

    pub fn theory_mean(&self, t: f64) -> f64 {
        if let Self::Subordinated { parent, .. } = self {
            if t == 0.0 {
                return parent.origin();
            }
        }
        self.marginal_model(t).and_then(|(m, s)| moment(&m, 1, s)).unwrap_or(f64::NAN)
    }

    pub fn theory_var(&self, t: f64) -> f64 {
        match *self {
            Self::GreyBm { alpha, beta } => 2.0 * t.powf(alpha) / gamma(1.0 + beta).unwrap_or(f64::NAN),
            _ => {
                if t == 0.0 {
                    return 0.0;
                }
                self.marginal_model(t).and_then(|(m, s)| variance_curve(&m, s)).unwrap_or(f64::NAN)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub n_paths: usize,
    pub master_seed: u64,
    pub workers: usize,
    pub grid: PathGrid,
}

/// Optional report sections.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportOptions {
    /// Histogram edges for the endpoint sample; `None` uses `hist_bins`
    /// equal bins over the sample range.
    pub hist_edges: Option<Vec<f64>>,
    pub hist_bins: usize,
    /// Kolmogorov-Smirnov test of the endpoints against the exact marginal.
    pub ks: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsSummary {
    pub stat: f64,
    pub n: usize,
    pub crit_1pct: f64,
}

impl KsSummary {
    pub fn passes(&self) -> bool {
        self.stat < self.crit_1pct
    }
}

/// Ensemble estimates. Standard errors are `NaN` (serialized as `null`) when
/// they are undefined, e.g. for a single path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub n_paths: usize,
    pub master_seed: u64,
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub mean_se: Vec<f64>,
    pub var: Vec<f64>,
    pub var_se: Vec<f64>,
    pub theory_mean: Vec<f64>,
    pub theory_var: Vec<f64>,
    pub hist: Histogram,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ks: Option<KsSummary>,
    /// Path values at the last grid time, in path order.
    #[serde(skip)]
    pub endpoints: Vec<f64>,
}

impl McReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Variance table `t,var_est,var_se,var_theory`.
    pub fn variance_table(&self) -> crate::csvio::Table {
        crate::csvio::Table::from_columns(
            &["t", "var_est", "var_se", "var_theory"],
            &[self.times.clone(), self.var.clone(), self.var_se.clone(), self.theory_var.clone()],
        )
    }

    /// Mean table `t,mean_est,mean_se,mean_theory`.
    pub fn mean_table(&self) -> crate::csvio::Table {
        crate::csvio::Table::from_columns(
            &["t", "mean_est", "mean_se", "mean_theory"],
            &[self.times.clone(), self.mean.clone(), self.mean_se.clone(), self.theory_mean.clone()],
        )
    }

    /// Largest `|estimate - theory| / se` of the variance over grid times
    /// with a positive standard error.
    pub fn max_var_z(&self) -> f64 {
        max_z(&self.var, &self.var_se, &self.theory_var)
    }

    pub fn max_mean_z(&self) -> f64 {
        max_z(&self.mean, &self.mean_se, &self.theory_mean)
    }
}

fn max_z(est: &[f64], se: &[f64], theory: &[f64]) -> f64 {
    est.iter()
        .zip(se)
        .zip(theory)
        .filter(|((_, s), _)| **s > 0.0)
        .map(|((e, s), th)| (e - th).abs() / s)
        .fold(0.0, f64::max)
}

/// Central moments up to order four, mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments4 {
    n: f64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments4 {
    fn push(&mut self, x: f64) {
        self.merge(&Moments4 {
            n: 1.0,
            mean: x,
            ..Default::default()
        });
    }

    fn merge(&mut self, o: &Moments4) {
        if o.n == 0.0 {
            return;
        }
        if self.n == 0.0 {
            *self = *o;
            return;
        }
        let (na, nb) = (self.n, o.n);
        let n = na + nb;
        let d = o.mean - self.mean;
        let d2 = d * d;
        let m2 = self.m2 + o.m2 + d2 * na * nb / n;
        let m3 = self.m3 + o.m3 + d * d2 * na * nb * (na - nb) / (n * n) + 3.0 * d * (na * o.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + o.m4
            + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * o.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * d * (na * o.m3 - nb * self.m3) / n;
        *self = Moments4 {
            n,
            mean: self.mean + d * nb / n,
            m2,
            m3,
            m4,
        };
    }

    fn variance(&self) -> f64 {
        if self.n < 2.0 {
            f64::NAN
        } else {
            self.m2 / (self.n - 1.0)
        }
    }

    fn mean_se(&self) -> f64 {
        (self.variance() / self.n).sqrt()
    }

    /// Large-sample standard error of the unbiased sample variance.
    fn var_se(&self) -> f64 {
        if self.n < 4.0 {
            return f64::NAN;
        }
        let n = self.n;
        let v = self.variance();
        let m4 = self.m4 / n;
        ((m4 - v * v * (n - 3.0) / (n - 1.0)) / n).max(0.0).sqrt()
    }
}

struct ChunkResult {
    moments: Vec<Moments4>,
    endpoints: Vec<f64>,
}

/// Simulate `cfg.n_paths` paths, path `i` on stream `(master_seed, i)`, and
/// summarise them. Results are bit-identical for any `cfg.workers`.
pub fn run_ensemble(spec: &EnsembleSpec, cfg: &McConfig, opts: &ReportOptions) -> nmdiff_core::Result<McReport> {
    if cfg.n_paths == 0 {
        return Err(nmdiff_core::Error::InvalidParameter {
            name: "n_paths",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    let n_times = cfg.grid.len();
    let chunks: Vec<(usize, usize)> = (0..cfg.n_paths)
        .step_by(CHUNK)
        .map(|s| (s, (s + CHUNK).min(cfg.n_paths)))
        .collect();
    let run_chunk = |&(start, end): &(usize, usize)| -> nmdiff_core::Result<ChunkResult> {
        let mut moments = vec![Moments4::default(); n_times];
        let mut endpoints = Vec::with_capacity(end - start);
        for i in start..end {
            let mut rng = RngStream::new(cfg.master_seed, i as u64);
            let path = spec.sample(&cfg.grid, &mut rng)?;
            for (m, v) in moments.iter_mut().zip(&path.values) {
                m.push(*v);
            }
            endpoints.push(path.endpoint());
        }
        Ok(ChunkResult { moments, endpoints })
    };
    let results: Vec<nmdiff_core::Result<ChunkResult>> = with_workers(cfg.workers, || chunks.par_iter().map(run_chunk).collect());

    let mut total = vec![Moments4::default(); n_times];
    let mut endpoints = Vec::with_capacity(cfg.n_paths);
    for r in results {
        let r = r?;
        for (t, c) in total.iter_mut().zip(&r.moments) {
            t.merge(c);
        }
        endpoints.extend(r.endpoints);
    }

    let times = cfg.grid.times().to_vec();
    let theory_mean = times.iter().map(|&t| spec.theory_mean(t)).collect();
    let theory_var = times.iter().map(|&t| spec.theory_var(t)).collect();
    let edges = match &opts.hist_edges {
        Some(e) => e.clone(),
        None => range_edges(&endpoints, opts.hist_bins.max(1)),
    };
    let hist = histogram(&endpoints, &edges);
    let ks = if opts.ks {
        let t = cfg.grid.t_max();
        let cdf = MarginalCdf::new(spec, t, &endpoints)?;
        Some(KsSummary {
            stat: ks_statistic(&endpoints, |x| cdf.eval(x)),
            n: endpoints.len(),
            crit_1pct: ks_critical_1pct(endpoints.len()),
        })
    } else {
        None
    };
    let mut var: Vec<f64> = total.iter().map(Moments4::variance).collect();
    let mut var_se: Vec<f64> = total.iter().map(Moments4::var_se).collect();
    let mut mean_se: Vec<f64> = total.iter().map(Moments4::mean_se).collect();
    // the deterministic starting value has no spread
    if cfg.n_paths >= 2 {
        for i in 0..n_times {
            if total[i].m2 == 0.0 {
                var[i] = 0.0;
                mean_se[i] = 0.0;
                if cfg.n_paths >= 4 {
                    var_se[i] = 0.0;
                }
            }
        }
    }
    Ok(McReport {
        n_paths: cfg.n_paths,
        master_seed: cfg.master_seed,
        times,
        mean: total.iter().map(|m| m.mean).collect(),
        mean_se,
        var,
        var_se,
        theory_mean,
        theory_var,
        hist,
        ks,
        endpoints,
    })
}

/// Run `f` on a pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn range_edges(samples: &[f64], bins: usize) -> Vec<f64> {
    let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if lo.is_finite() && hi > lo { (lo, hi) } else { (lo.min(0.0) - 0.5, lo.max(0.0) + 0.5) };
    let lo = if lo.is_finite() { lo } else { -0.5 };
    let hi = if hi.is_finite() && hi > lo { hi } else { lo + 1.0 };
    // nudge the top edge so the maximum falls inside the last bin
    let hi = hi + 1e-9 * (hi - lo);
    (0..=bins).map(|i| lo + (hi - lo) * i as f64 / bins as f64).collect()
}

/// `n + 1` equally spaced edges on `[lo, hi]`.
pub fn uniform_edges(lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    (0..=bins).map(|i| lo + (hi - lo) * i as f64 / bins as f64).collect()
}

/// Counts over bins `[e_i, e_{i+1})`. A sample on an interior edge goes to the
/// bin on its right; samples below the first edge, at or above the last
/// edge, or NaN are counted as underflow or overflow.
pub fn histogram(samples: &[f64], edges: &[f64]) -> Histogram {
    let bins = edges.len().saturating_sub(1);
    let mut counts = vec![0u64; bins];
    let (mut underflow, mut overflow) = (0, 0);
    for &x in samples {
        if bins == 0 || x.is_nan() || x >= edges[bins] {
            overflow += 1;
        } else if x < edges[0] {
            underflow += 1;
        } else {
            let k = edges.partition_point(|&e| e <= x) - 1;
            counts[k] += 1;
        }
    }
    Histogram {
        edges: edges.to_vec(),
        counts,
        underflow,
        overflow,
    }
}

/// `sup |F_n - F|` for the empirical distribution of `samples`. Ties are
/// compared at both one-sided limits, so distributions with atoms are handled.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == x {
            j += 1;
        }
        let f = cdf(x);
        let f_left = if j > i { cdf(next_down(x)) } else { f };
        d = d.max((i as f64 / n - f_left).abs()).max(((j + 1) as f64 / n - f).abs());
        i = j + 1;
    }
    d
}

fn next_down(x: f64) -> f64 {
    x - 1e-12 * x.abs().max(1e-300)
}

/// Two-sample statistic `sup |F_n - G_m|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic 1% critical value of the one-sample statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

/// Asymptotic 1% critical value of the two-sample statistic.
pub fn ks_two_sample_critical_1pct(n: usize, m: usize) -> f64 {
    1.63 * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

const CDF_INTERVALS: usize = 4000;

/// CDF of an ensemble's exact marginal, tabulated once by trapezoidal
/// integration of the density over a range covering a sample.
#[derive(Debug, Clone)]
pub struct MarginalCdf {
    xs: Vec<f64>,
    cdf: Vec<f64>,
}

impl MarginalCdf {
    pub fn new(spec: &EnsembleSpec, t: f64, sample: &[f64]) -> nmdiff_core::Result<Self> {
        let (model, s) = spec.marginal_model(t)?;
        let lo = sample.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = sample.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let width = (hi - lo).max(1.0);
        let (mut lo, hi) = (lo - 0.25 * width, hi + 0.25 * width);
        if let ParentModel::GeometricBM { .. } = model.parent {
            lo = lo.max(0.5 * sample.iter().cloned().fold(f64::INFINITY, f64::min));
        }
        Self::tabulate(|x| solve(&model, x, s, SolveMethod::Auto), lo, hi, model.parent.origin())
    }

    /// Tabulate from a density on `[lo, hi]`, with `kink` placed on a node
    /// when it lies inside the range.
    pub fn tabulate(
        density: impl Fn(f64) -> nmdiff_core::Result<f64> + Sync,
        lo: f64,
        hi: f64,
        kink: f64,
    ) -> nmdiff_core::Result<Self> {
        let xs = kinked_grid(lo, hi, kink, CDF_INTERVALS);
        let f: Vec<f64> = xs
            .par_iter()
            .map(|&x| density(x))
            .collect::<nmdiff_core::Result<Vec<f64>>>()?;
        let mut cdf = Vec::with_capacity(xs.len());
        cdf.push(0.0);
        for i in 1..xs.len() {
            cdf.push(cdf[i - 1] + 0.5 * (xs[i] - xs[i - 1]) * (f[i] + f[i - 1]));
        }
        Ok(Self { xs, cdf })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return 0.0;
        }
        if x >= self.xs[n - 1] {
            return self.cdf[n - 1].min(1.0);
        }
        let k = self.xs.partition_point(|&v| v <= x) - 1;
        let w = (x - self.xs[k]) / (self.xs[k + 1] - self.xs[k]);
        (self.cdf[k] + w * (self.cdf[k + 1] - self.cdf[k])).min(1.0)
    }
}

fn kinked_grid(lo: f64, hi: f64, kink: f64, intervals: usize) -> Vec<f64> {
    if kink > lo && kink < hi {
        let left = (((kink - lo) / (hi - lo)) * intervals as f64).round().clamp(1.0, intervals as f64 - 1.0) as usize;
        let right = intervals - left;
        let mut xs: Vec<f64> = (0..left).map(|i| lo + (kink - lo) * i as f64 / left as f64).collect();
        xs.extend((0..=right).map(|i| kink + (hi - kink) * i as f64 / right as f64));
        xs
    } else {
        (0..=intervals).map(|i| lo + (hi - lo) * i as f64 / intervals as f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nmdiff_core::specfun::erf;
    use proptest::prelude::*;
    use rand::Rng;

    fn bm_spec() -> EnsembleSpec {
        EnsembleSpec::Subordinated {
            parent: ParentModel::StandardBM,
            time: RandomTimeModel::DeltaTime,
            scaling: ScalingFunction::Identity,
        }
    }

    fn cfg(n: usize, workers: usize) -> McConfig {
        McConfig {
            n_paths: n,
            master_seed: 2024,
            workers,
            grid: PathGrid::uniform(1.0, 16).unwrap(),
        }
    }

    #[test]
    fn plain_bm_is_calibrated() {
        let opts = ReportOptions {
            ks: true,
            hist_bins: 20,
            ..Default::default()
        };
        let r = run_ensemble(&bm_spec(), &cfg(4000, 4), &opts).unwrap();
        let last = r.times.len() - 1;
        assert!((r.var[last] - 2.0).abs() < 4.0 * r.var_se[last]);
        assert!(r.max_var_z() < 4.0);
        let ks = r.ks.unwrap();
        assert!(ks.passes(), "{ks:?}");
        let direct = ks_statistic(&r.endpoints, |x| 0.5 * (1.0 + erf(x / 2.0)));
        assert!((direct - ks.stat).abs() < 1e-4);
        assert_eq!(r.hist.counts.iter().sum::<u64>() + r.hist.underflow + r.hist.overflow, 4000);
        assert_eq!(r.var[0], 0.0);
    }

    #[test]
    fn workers_do_not_change_results() {
        let spec = EnsembleSpec::Subordinated {
            parent: ParentModel::DriftBM { mu: 1.0, sigma: 1.0 },
            time: RandomTimeModel::AbsBM,
            scaling: ScalingFunction::Identity,
        };
        let opts = ReportOptions { hist_bins: 10, ..Default::default() };
        let a = run_ensemble(&spec, &cfg(300, 1), &opts).unwrap();
        let b = run_ensemble(&spec, &cfg(300, 8), &opts).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.endpoints, b.endpoints);
    }

    #[test]
    fn single_path_flags_errors() {
        let r = run_ensemble(&bm_spec(), &cfg(1, 2), &ReportOptions::default()).unwrap();
        assert!(r.mean_se[5].is_nan() && r.var_se[5].is_nan());
        let json = r.to_json();
        assert!(json.contains("null"));
        assert!(run_ensemble(&bm_spec(), &cfg(0, 1), &ReportOptions::default()).is_err());
    }

    #[test]
    fn moments_merge_matches_direct() {
        let mut rng = RngStream::new(1, 2);
        let xs: Vec<f64> = (0..1000).map(|_| rng.random::<f64>() * 3.0 + 10.0).collect();
        let mut a = Moments4::default();
        for &x in &xs {
            a.push(x);
        }
        let mean = xs.iter().sum::<f64>() / 1000.0;
        let m4: f64 = xs.iter().map(|x| (x - mean).powi(4)).sum();
        let m2: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
        assert!((a.mean - mean).abs() < 1e-12);
        assert!((a.m2 - m2).abs() < 1e-9 * m2);
        assert!((a.m4 - m4).abs() < 1e-9 * m4);
    }

    #[test]
    fn ks_examples() {
        assert_eq!(ks_statistic(&[0.0], |x| 0.5 * (1.0 + erf(x))), 0.5);
        assert_eq!(ks_statistic(&[-3.0, -2.0], |x| if x < 0.0 { 0.0 } else { 1.0 - (-x).exp() }), 1.0);
        let mut rng = RngStream::new(99, 0);
        let n = 10_000;
        let u: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let expo: Vec<f64> = u.iter().map(|u| -(1.0 - u).ln()).collect();
        assert!(ks_statistic(&expo, |x| 1.0 - (-x).exp()) < ks_critical_1pct(n));
        let v: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        assert!(ks_two_sample(&u, &v) < ks_two_sample_critical_1pct(n, n));
        let shifted: Vec<f64> = v.iter().map(|x| x + 0.1).collect();
        assert!(ks_two_sample(&u, &shifted) > 0.09);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
    }

    #[test]
    fn histogram_conventions() {
        let edges = [0.0, 1.0, 2.0];
        let h = histogram(&[], &edges);
        assert_eq!(h.counts, vec![0, 0]);
        let h = histogram(&[0.0, 1.0, 1.5, 2.0, -1.0, f64::NAN], &edges);
        assert_eq!(h.counts, vec![1, 2]);
        assert_eq!((h.underflow, h.overflow), (1, 2));
    }

    proptest! {
        #[test]
        fn histogram_conserves_samples(xs in proptest::collection::vec(-10.0f64..10.0, 0..200), bins in 1usize..20) {
            let h = histogram(&xs, &uniform_edges(-5.0, 5.0, bins));
            prop_assert_eq!(h.counts.iter().sum::<u64>() + h.underflow + h.overflow, xs.len() as u64);
        }

        #[test]
        fn ks_is_a_distance(xs in proptest::collection::vec(-3.0f64..3.0, 1..100)) {
            let d = ks_statistic(&xs, |x| 0.5 * (1.0 + erf(x / 2.0)));
            prop_assert!((0.0..=1.0).contains(&d));
            prop_assert!(d >= 0.5 / xs.len() as f64 - 1e-12);
        }
    }
}
