//! CSV datasets behind the nineteen reproduced figures.
//!
//! Every file is a pure function of the figure id and the seed. Density
//! figures evaluate closed forms (or subordination quadrature) on fixed grids;
//! simulation figures run fixed-size ensembles through [`crate::mc`].

use std::path::{Path, PathBuf};

use nmdiff_core::simulate::{PathGrid, RandomTimeModel, RngStream};
use nmdiff_core::solutions::{solve, stationary_density, SolveMethod};
use nmdiff_core::specfun::wright_m_scaled;
use nmdiff_core::timedens::time_density;
use nmdiff_core::{MemoryKernel, NonMarkovModel, ParentModel, ScalingFunction, SeriesControl, TimeLaw};
use rayon::prelude::*;

use crate::csvio::{path_table, Table};
use crate::mc::{run_ensemble, uniform_edges, EnsembleSpec, McConfig, McReport, ReportOptions};
use crate::AppError;

pub const FIGURE_IDS: std::ops::RangeInclusive<u32> = 1..=19;

/// Settings shared by the simulation figures.
#[derive(Debug, Clone, Copy)]
pub struct FigureOptions {
    pub seed: u64,
    pub workers: usize,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self { seed: 20_240_601, workers: 1 }
    }
}

/// Drift and volatility used by the geometric Brownian motion figures whose
/// parameters are not fixed by a caption.
pub const GBM_MU: f64 = 0.2;
pub const GBM_SIGMA: f64 = 0.3;

/// Write the datasets of figure `id` into `out_dir`; returns the files written.
pub fn write_figure(id: u32, out_dir: &Path, opts: &FigureOptions) -> Result<Vec<PathBuf>, AppError> {
    let tables = figure_tables(id, opts)?;
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for (name, table) in tables {
        let p = out_dir.join(name);
        table.write(&p)?;
        written.push(p);
    }
    Ok(written)
}

/// Named tables of figure `id`.
pub fn figure_tables(id: u32, opts: &FigureOptions) -> Result<Vec<(String, Table)>, AppError> {
    let seed = opts.seed.wrapping_add(id as u64);
    let o = FigureOptions { seed, workers: opts.workers };
    let bm = ParentModel::StandardBM;
    let out = match id {
        1 => {
            let taus = linspace(0.0, 5.0, 501);
            let cols = [0.25, 0.5, 0.75]
                .iter()
                .map(|&b| taus.iter().map(|&tau| wright_m_scaled(b, tau, 1.0, &SeriesControl::default())).collect())
                .collect::<nmdiff_core::Result<Vec<Vec<f64>>>>()?;
            vec![("fig1_hbeta.csv".into(), with_axis("tau", &taus, &["h_025", "h_05", "h_075"], cols))]
        }
        2 => {
            let models = [0.25, 0.5, 0.75, 1.0].map(|b| (power(bm, b), 1.0));
            vec![density_file("fig2_density_beta.csv", -5.0, 5.0, 501, &["f_025", "f_05", "f_075", "f_1"], &models)?]
        }
        3 => {
            let models = [0.1, 1.0, 10.0, 100.0].map(|t| (power(bm, 0.5), t));
            vec![density_file("fig3_density_time.csv", -5.0, 5.0, 501, &["f_t01", "f_t1", "f_t10", "f_t100"], &models)?]
        }
        4 => {
            let spec = subordinated(bm, RandomTimeModel::AbsBM, ScalingFunction::Identity);
            simulation_figure(4, &spec, 1.0, 256, 5000, &o, false)?
        }
        5 => {
            let spec = subordinated(bm, RandomTimeModel::AbsBM, ScalingFunction::Identity);
            histogram_figure(5, &spec, 10_000, -5.0, 5.0, 50, &o)?
        }
        6 => {
            let spec = EnsembleSpec::GreyBm { alpha: 1.5, beta: 0.5 };
            let mut v = simulation_figure(6, &spec, 1.0, 256, 5000, &o, false)?;
            v.extend(histogram_figure(6, &spec, 10_000, -5.0, 5.0, 50, &o)?);
            v
        }
        7 => {
            let taus = linspace(0.0, 2.0, 401);
            let law = TimeLaw::ExpMixture { a: 1.0 };
            let times = [0.5, 1.0, 1.5];
            let cols = times
                .iter()
                .map(|&t| taus.iter().map(|&tau| time_density(&law, tau, t).map(|v| v.continuous_density)).collect())
                .collect::<nmdiff_core::Result<Vec<Vec<f64>>>>()?;
            let mut atoms = Table::new(&["t", "atom_location", "atom_weight"]);
            for &t in &times {
                let (loc, w) = law.atom(t).unwrap_or((t, 0.0));
                atoms.push(vec![t, loc, w]);
            }
            vec![
                ("fig7_time_density.csv".into(), with_axis("tau", &taus, &["h_t05", "h_t1", "h_t15"], cols)),
                ("fig7_atoms.csv".into(), atoms),
            ]
        }
        8 => {
            let models = [0.0, 0.1, 1.0, 2.0].map(|a| (exp_model(bm, a), 1.0));
            vec![density_file("fig8_density_a.csv", -5.0, 5.0, 501, &["f_a0", "f_a01", "f_a1", "f_a2"], &models)?]
        }
        9 => {
            let models = [0.5, 1.0, 1.5].map(|t| (exp_model(bm, 1.0), t));
            let (name, mut table) = density_file("fig9_density_time.csv", -5.0, 5.0, 501, &["f_t05", "f_t1", "f_t15"], &models)?;
            add_column(&mut table, "stationary", |x| stationary_density(&exp_model(bm, 1.0), x))?;
            vec![(name, table)]
        }
        10 => {
            let spec = subordinated(bm, RandomTimeModel::MinExpNoise { a: 1.0 }, ScalingFunction::Identity);
            simulation_figure(10, &spec, 10.0, 200, 500, &o, false)?
        }
        11 => {
            let spec = subordinated(bm, RandomTimeModel::MinExpNoise { a: 1.0 }, ScalingFunction::Log1p);
            simulation_figure(11, &spec, 10.0, 200, 500, &o, false)?
        }
        12 => {
            let models = [1.0, 1.5, 2.0].map(|p| (power(ParentModel::DriftBM { mu: p, sigma: p }, 0.5), 1.0));
            vec![density_file(
                "fig12_drift_params.csv",
                -5.0,
                10.0,
                601,
                &["f_mu1_s1", "f_mu15_s15", "f_mu2_s2"],
                &models,
            )?]
        }
        13 => {
            let models = [0.1, 1.0, 2.0].map(|t| (power(drift_fig(), 0.5), t));
            vec![density_file("fig13_drift_time.csv", -5.0, 10.0, 601, &["f_t01", "f_t1", "f_t2"], &models)?]
        }
        14 => {
            let spec = subordinated(drift_fig(), RandomTimeModel::AbsBM, ScalingFunction::Identity);
            simulation_figure(14, &spec, 1.0, 64, 50_000, &o, true)?
        }
        15 => {
            let spec = subordinated(drift_fig(), RandomTimeModel::AbsBM, ScalingFunction::Identity);
            histogram_figure(15, &spec, 100_000, -4.0, 8.0, 60, &o)?
        }
        16 => {
            let p = ParentModel::GeometricBM {
                mu: 1.0,
                sigma: std::f64::consts::SQRT_2,
                x0: 1.0,
            };
            let models = [0.25, 0.5, 0.75, 1.0].map(|b| (power(p, b), 1.0));
            vec![density_file("fig16_gbm_beta.csv", 0.01, 5.0, 500, &["f_025", "f_05", "f_075", "f_1"], &models)?]
        }
        17 => {
            let models = [0.1, 0.5, 1.0, 2.0].map(|mu| (power(ParentModel::GeometricBM { mu, sigma: 1.0, x0: 1.0 }, 0.5), 1.0));
            vec![density_file("fig17_gbm_mu.csv", 0.01, 5.0, 500, &["f_mu01", "f_mu05", "f_mu1", "f_mu2"], &models)?]
        }
        18 => {
            let mut models = Vec::new();
            let mut names = Vec::new();
            for (b, bn) in [(0.25, "025"), (0.5, "05")] {
                for (t, tn) in [(0.5, "05"), (1.0, "1"), (2.0, "2"), (10.0, "10")] {
                    models.push((power(gbm_fig(), b), t));
                    names.push(format!("f_b{bn}_t{tn}"));
                }
            }
            vec![density_file("fig18_gbm_time.csv", 0.01, 3.0, 500, &names, &models)?]
        }
        19 => {
            let spec = subordinated(gbm_fig(), RandomTimeModel::AbsBM, ScalingFunction::Identity);
            simulation_figure(19, &spec, 1.0, 64, 50_000, &o, true)?
        }
        _ => return Err(AppError::Usage(format!("unknown figure id {id}; expected 1..=19"))),
    };
    Ok(out)
}

fn drift_fig() -> ParentModel {
    ParentModel::DriftBM { mu: 1.0, sigma: 1.0 }
}

fn gbm_fig() -> ParentModel {
    ParentModel::GeometricBM {
        mu: GBM_MU,
        sigma: GBM_SIGMA,
        x0: 1.0,
    }
}

fn power(parent: ParentModel, beta: f64) -> NonMarkovModel {
    NonMarkovModel {
        parent,
        kernel: MemoryKernel::PowerLaw { beta },
        scaling: ScalingFunction::Identity,
    }
}

fn exp_model(parent: ParentModel, a: f64) -> NonMarkovModel {
    NonMarkovModel {
        parent,
        kernel: MemoryKernel::ExponentialDecay { a },
        scaling: ScalingFunction::Identity,
    }
}

fn subordinated(parent: ParentModel, time: RandomTimeModel, scaling: ScalingFunction) -> EnsembleSpec {
    EnsembleSpec::Subordinated { parent, time, scaling }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn with_axis<S: AsRef<str>>(axis: &str, xs: &[f64], names: &[S], cols: Vec<Vec<f64>>) -> Table {
    let mut header = vec![axis.to_string()];
    header.extend(names.iter().map(|s| s.as_ref().to_string()));
    let mut all = vec![xs.to_vec()];
    all.extend(cols);
    Table::from_columns(&header, &all)
}

fn add_column(table: &mut Table, name: &str, f: impl Fn(f64) -> nmdiff_core::Result<f64>) -> nmdiff_core::Result<()> {
    table.header.push(name.into());
    for row in table.rows.iter_mut() {
        row.push(f(row[0])?);
    }
    Ok(())
}

/// Densities of several (model, time) pairs on a common x-grid.
pub fn density_columns(xs: &[f64], models: &[(NonMarkovModel, f64)]) -> nmdiff_core::Result<Vec<Vec<f64>>> {
    models
        .iter()
        .map(|(m, t)| xs.par_iter().map(|&x| solve(m, x, *t, SolveMethod::Auto)).collect())
        .collect()
}

fn density_file<S: AsRef<str>>(
    name: &str,
    lo: f64,
    hi: f64,
    n: usize,
    names: &[S],
    models: &[(NonMarkovModel, f64)],
) -> Result<(String, Table), AppError> {
    let xs = linspace(lo, hi, n);
    let cols = density_columns(&xs, models)?;
    Ok((name.to_string(), with_axis("x", &xs, names, cols)))
}

/// One trajectory plus ensemble mean/variance tables on `[0, t_max]`.
fn simulation_figure(
    id: u32,
    spec: &EnsembleSpec,
    t_max: f64,
    steps: usize,
    n: usize,
    o: &FigureOptions,
    with_mean: bool,
) -> Result<Vec<(String, Table)>, AppError> {
    let grid = PathGrid::uniform(t_max, steps)?;
    let mut rng = RngStream::new(o.seed, u64::MAX);
    let path = spec.sample(&grid, &mut rng)?;
    let report = ensemble(spec, grid, n, o)?;
    let mut out = vec![
        (format!("fig{id}_path.csv"), path_table(&path, None)),
        (format!("fig{id}_variance.csv"), report.variance_table()),
    ];
    if with_mean {
        out.push((format!("fig{id}_mean.csv"), report.mean_table()));
    }
    Ok(out)
}

fn ensemble(spec: &EnsembleSpec, grid: PathGrid, n: usize, o: &FigureOptions) -> Result<McReport, AppError> {
    let cfg = McConfig {
        n_paths: n,
        master_seed: o.seed,
        workers: o.workers,
        grid,
    };
    Ok(run_ensemble(spec, &cfg, &ReportOptions { hist_bins: 1, ..Default::default() })?)
}

/// Endpoint histogram at `t = 1` with the exact marginal density overlay.
fn histogram_figure(
    id: u32,
    spec: &EnsembleSpec,
    n: usize,
    lo: f64,
    hi: f64,
    bins: usize,
    o: &FigureOptions,
) -> Result<Vec<(String, Table)>, AppError> {
    let cfg = McConfig {
        n_paths: n,
        master_seed: o.seed ^ 0x5eed,
        workers: o.workers,
        grid: PathGrid::uniform(1.0, 1)?,
    };
    let opts = ReportOptions {
        hist_edges: Some(uniform_edges(lo, hi, bins)),
        hist_bins: bins,
        ks: false,
    };
    let report = run_ensemble(spec, &cfg, &opts)?;
    let h = &report.hist;
    let mut hist = Table::new(&["left", "right", "count", "density"]);
    for (k, &c) in h.counts.iter().enumerate() {
        let (a, b) = (h.edges[k], h.edges[k + 1]);
        hist.push(vec![a, b, c as f64, c as f64 / (n as f64 * (b - a))]);
    }
    let (model, s) = spec.marginal_model(1.0)?;
    let xs = linspace(lo, hi, 501);
    let f = density_columns(&xs, &[(model, s)])?;
    Ok(vec![
        (format!("fig{id}_hist.csv"), hist),
        (format!("fig{id}_density.csv"), with_axis("x", &xs, &["f"], f)),
    ])
}
