//! Command-line front end. Exit codes: 0 success, 2 usage or configuration
//! error, 3 numerical or IO failure, 4 failed validation.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nmdiff_core::kernels::{check_suitability, geometric_grid};
use nmdiff_core::simulate::{PathGrid, RngStream};
use nmdiff_core::solutions::{solve, verify_integral_equation, SolveMethod};
use nmdiff_core::MemoryKernel;
use rayon::prelude::*;

use crate::config::ModelConfig;
use crate::csvio::{append_path, open_output, path_table, Table};
use crate::figures::{linspace, write_figure, FigureOptions, FIGURE_IDS};
use crate::mc::{run_ensemble, uniform_edges, EnsembleSpec, McConfig, ReportOptions};
use crate::AppError;

#[derive(Debug, Parser)]
#[command(name = "nmdiff", version, about = "Non-Markovian diffusion: densities, simulation and Monte Carlo checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Model configuration shared by most commands. `--set` overrides fields of
/// the JSON document and takes precedence over it.
#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// JSON model configuration
    #[arg(long)]
    pub config: PathBuf,
    /// Override a config field, e.g. `--set kernel.beta=0.75` (repeatable)
    #[arg(long = "set", value_name = "FIELD=VALUE")]
    pub overrides: Vec<String>,
}

impl ConfigArgs {
    fn load(&self) -> Result<ModelConfig, AppError> {
        Ok(ModelConfig::from_file(&self.config, &self.overrides)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Quadrature,
    Auto,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fundamental solution on an x-grid, CSV `x,f`
    Density {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        x_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Sample paths, CSV `t,value[,time_change]`
    Simulate {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        t_max: f64,
        #[arg(long, default_value_t = 256)]
        steps: usize,
        /// Output file; with several paths and no `--concat`, files are
        /// suffixed `_<index>`
        #[arg(long, default_value = "-")]
        out: PathBuf,
        /// Write all paths into one file with a leading `path_id` column
        #[arg(long)]
        concat: bool,
    },
    /// Ensemble estimates as JSON plus the variance table as CSV
    Mc {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `T_MAX:STEPS` for a uniform grid, or a comma list starting at 0
        #[arg(long, default_value = "1:16")]
        t_grid: String,
        /// JSON report path
        #[arg(long, default_value = "-")]
        out: PathBuf,
        /// Variance CSV path; defaults to the report path with extension `.csv`
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value_t = 50)]
        bins: usize,
        /// Histogram range `LO,HI`; defaults to the endpoint range
        #[arg(long, allow_hyphen_values = true)]
        hist_range: Option<String>,
        /// Add a Kolmogorov-Smirnov test of the endpoints against the exact marginal
        #[arg(long)]
        ks: bool,
    },
    /// Suitability report as JSON; exit 4 when the kernel fails
    ValidateKernel {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, default_value_t = 1e-2)]
        s_min: f64,
        #[arg(long, default_value_t = 1e2)]
        s_max: f64,
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Residual of the integral equation; exit 4 when above the budget
    Verify {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 4000)]
        nodes: usize,
        /// Residual budget; defaults to 1e-4 (power), 1e-5 (exponential), 1e-6 (Markovian)
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Datasets of figure 1..19 as `figN_*.csv`
    Figure {
        id: u32,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
    },
}

/// Worker count: the request (or all cores) capped by `NMDIFF_THREADS`.
pub fn worker_count(requested: Option<usize>) -> usize {
    let base = requested.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let cap = std::env::var("NMDIFF_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&c| c > 0);
    cap.map_or(base, |c| base.min(c)).max(1)
}

/// Parse arguments, run, report errors on stderr and return the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("nmdiff: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Density {
            cfg,
            t,
            x_min,
            x_max,
            points,
            method,
            out,
        } => cmd_density(&cfg.load()?, t, x_min, x_max, points, method, &out),
        Command::Simulate {
            cfg,
            n,
            seed,
            t_max,
            steps,
            out,
            concat,
        } => cmd_simulate(&cfg.load()?, n, seed, t_max, steps, &out, concat),
        Command::Mc {
            cfg,
            n,
            seed,
            t_grid,
            out,
            csv,
            workers,
            bins,
            hist_range,
            ks,
        } => {
            let grid = parse_grid(&t_grid)?;
            let edges = match hist_range {
                Some(r) => {
                    let (lo, hi) = parse_pair(&r)?;
                    Some(uniform_edges(lo, hi, bins.max(1)))
                }
                None => None,
            };
            let opts = ReportOptions {
                hist_edges: edges,
                hist_bins: bins,
                ks,
            };
            cmd_mc(&cfg.load()?, n, seed, grid, worker_count(workers), &opts, &out, csv.as_deref())
        }
        Command::ValidateKernel {
            cfg,
            order,
            s_min,
            s_max,
            points,
            out,
        } => cmd_validate_kernel(&cfg.load()?, order, s_min, s_max, points, &out),
        Command::Verify { cfg, x, t, nodes, budget } => cmd_verify(&cfg.load()?, x, t, nodes, budget),
        Command::Figure {
            id,
            out_dir,
            seed,
            workers,
        } => {
            if !FIGURE_IDS.contains(&id) {
                return Err(AppError::Usage(format!("unknown figure id {id}; expected 1..=19")));
            }
            let mut opts = FigureOptions {
                workers: worker_count(workers),
                ..Default::default()
            };
            if let Some(s) = seed {
                opts.seed = s;
            }
            for p in write_figure(id, &out_dir, &opts)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        }
    }
}

fn positive(name: &str, v: f64) -> Result<(), AppError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(AppError::Usage(format!("--{name} must be positive, got {v}")))
    }
}

pub fn cmd_density(
    cfg: &ModelConfig,
    t: f64,
    x_min: f64,
    x_max: f64,
    points: usize,
    method: MethodArg,
    out: &Path,
) -> Result<(), AppError> {
    positive("t", t)?;
    if points == 0 || !(x_max >= x_min) || (points == 1 && x_max != x_min) {
        return Err(AppError::Usage(format!(
            "need points >= 1 and x-min <= x-max (a single point needs x-min = x-max); got {points} on [{x_min}, {x_max}]"
        )));
    }
    let model = cfg.model()?;
    let method = match method {
        MethodArg::Closed => SolveMethod::Closed,
        MethodArg::Quadrature => SolveMethod::Quadrature,
        MethodArg::Auto => SolveMethod::Auto,
    };
    let xs = linspace(x_min, x_max, points);
    let f = xs
        .par_iter()
        .map(|&x| solve(&model, x, t, method))
        .collect::<nmdiff_core::Result<Vec<f64>>>()?;
    Table::from_columns(&["x", "f"], &[xs, f]).write(out)?;
    Ok(())
}

pub fn cmd_simulate(
    cfg: &ModelConfig,
    n: usize,
    seed: u64,
    t_max: f64,
    steps: usize,
    out: &Path,
    concat: bool,
) -> Result<(), AppError> {
    if n == 0 {
        return Err(AppError::Usage("--n must be at least 1".into()));
    }
    let spec = ensemble_spec(cfg)?;
    let grid = PathGrid::uniform(t_max, steps).map_err(|e| AppError::Usage(e.to_string()))?;
    let paths = (0..n)
        .map(|i| spec.sample(&grid, &mut RngStream::new(seed, i as u64)))
        .collect::<nmdiff_core::Result<Vec<_>>>()?;
    if n == 1 {
        path_table(&paths[0], None).write(out)?;
    } else if concat || out.as_os_str() == "-" {
        let mut table = path_table(&paths[0], Some(0));
        for (i, p) in paths.iter().enumerate().skip(1) {
            append_path(&mut table, p, Some(i));
        }
        table.write(out)?;
    } else {
        for (i, p) in paths.iter().enumerate() {
            path_table(p, None).write(&indexed(out, i))?;
        }
    }
    Ok(())
}

fn indexed(out: &Path, i: usize) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}_{i}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{i}"),
    };
    out.with_file_name(name)
}

pub fn ensemble_spec(cfg: &ModelConfig) -> Result<EnsembleSpec, AppError> {
    cfg.model()?;
    Ok(EnsembleSpec::Subordinated {
        parent: cfg.parent(),
        time: cfg.random_time()?,
        scaling: cfg.scaling(),
    })
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_mc(
    cfg: &ModelConfig,
    n: usize,
    seed: u64,
    grid: PathGrid,
    workers: usize,
    opts: &ReportOptions,
    out: &Path,
    csv: Option<&Path>,
) -> Result<(), AppError> {
    if n == 0 {
        return Err(AppError::Usage("--n must be at least 1".into()));
    }
    let spec = ensemble_spec(cfg)?;
    let mc = McConfig {
        n_paths: n,
        master_seed: seed,
        workers,
        grid,
    };
    let report = run_ensemble(&spec, &mc, opts)?;
    let mut w = open_output(out)?;
    writeln!(w, "{}", report.to_json())?;
    w.flush()?;
    let csv_path = match csv {
        Some(p) => Some(p.to_path_buf()),
        None if out.as_os_str() != "-" => Some(out.with_extension("csv")),
        None => None,
    };
    if let Some(p) = csv_path {
        report.variance_table().write(&p)?;
    }
    Ok(())
}

use std::io::Write;

pub fn cmd_validate_kernel(
    cfg: &ModelConfig,
    order: usize,
    s_min: f64,
    s_max: f64,
    points: usize,
    out: &Path,
) -> Result<(), AppError> {
    let grid = geometric_grid(s_min, s_max, points).map_err(|e| AppError::Usage(e.to_string()))?;
    let report = check_suitability(&cfg.kernel(), &grid, order).map_err(|e| AppError::Usage(e.to_string()))?;
    let json = serde_json::json!({
        "kernel": kernel_json(&cfg.kernel()),
        "order_checked": report.order_checked,
        "grid": report.grid,
        "pass": report.pass,
        "first_violation": report.first_violation.map(|v| serde_json::json!({
            "condition": v.condition.id(),
            "s": v.s,
            "derivative_order": v.derivative_order,
        })),
    });
    let mut w = open_output(out)?;
    writeln!(w, "{}", serde_json::to_string_pretty(&json).expect("json"))?;
    w.flush()?;
    if report.pass {
        Ok(())
    } else {
        Err(AppError::Validation("kernel is not suitable".into()))
    }
}

fn kernel_json(k: &MemoryKernel) -> serde_json::Value {
    match *k {
        MemoryKernel::PowerLaw { beta } => serde_json::json!({"kind": "power", "beta": beta}),
        MemoryKernel::ExponentialDecay { a } => serde_json::json!({"kind": "exp", "a": a}),
        MemoryKernel::PowerExp { beta, a } => serde_json::json!({"kind": "power_exp", "beta": beta, "a": a}),
    }
}

/// Default residual budget for a kernel.
pub fn default_budget(k: &MemoryKernel) -> f64 {
    match *k {
        MemoryKernel::PowerLaw { beta } if beta == 1.0 => 1e-6,
        MemoryKernel::ExponentialDecay { a } if a == 0.0 => 1e-6,
        MemoryKernel::PowerLaw { .. } | MemoryKernel::PowerExp { .. } => 1e-4,
        MemoryKernel::ExponentialDecay { .. } => 1e-5,
    }
}

pub fn cmd_verify(cfg: &ModelConfig, x: f64, t: f64, nodes: usize, budget: Option<f64>) -> Result<(), AppError> {
    positive("t", t)?;
    let model = cfg.model()?;
    let residual = verify_integral_equation(&model, x, t, nodes)?;
    let budget = budget.unwrap_or_else(|| default_budget(&model.kernel));
    println!("{}", crate::csvio::fmt_f64(residual));
    if residual <= budget {
        Ok(())
    } else {
        Err(AppError::Validation(format!("residual {residual:e} exceeds budget {budget:e}")))
    }
}

/// `T:STEPS` or an explicit comma-separated list of times.
pub fn parse_grid(s: &str) -> Result<PathGrid, AppError> {
    let bad = |m: String| AppError::Usage(format!("--t-grid {s}: {m}"));
    if let Some((t, k)) = s.split_once(':') {
        let t: f64 = t.trim().parse().map_err(|e| bad(format!("{e}")))?;
        let k: usize = k.trim().parse().map_err(|e| bad(format!("{e}")))?;
        PathGrid::uniform(t, k).map_err(|e| bad(e.to_string()))
    } else {
        let times = s
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| bad(format!("{e}")))?;
        PathGrid::new(times).map_err(|e| bad(e.to_string()))
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), AppError> {
    let bad = || AppError::Usage(format!("expected LO,HI with LO < HI, got {s}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let lo: f64 = a.trim().parse().map_err(|_| bad())?;
    let hi: f64 = b.trim().parse().map_err(|_| bad())?;
    if lo < hi {
        Ok((lo, hi))
    } else {
        Err(bad())
    }
}
