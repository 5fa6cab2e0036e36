//! Adaptive Gauss–Kronrod (7/15) quadrature on finite and infinite intervals.

use alloc::collections::BinaryHeap;
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and subdivision budget for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

/// One Gauss–Kronrod 15-point panel: (integral, error estimate).
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let integral = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    (integral, err)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Accepted partition of `[a, b]` produced by [`integrate_panels`].
#[derive(Debug, Clone)]
pub struct Partition {
    /// Panels sorted by left endpoint: (left, right, integral).
    pub panels: Vec<(f64, f64, f64)>,
    pub result: QuadResult,
}

fn adaptive<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<(BinaryHeap<Panel>, QuadResult)> {
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    let (v, e) = gk15(f, a, b);
    evaluations += 15;
    heap.push(Panel {
        a,
        b,
        value: v,
        error: e,
    });
    let mut total = v;
    let mut total_err = e;
    let mut subdivisions = 1usize;
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::Quadrature {
                estimate: total,
                error: total_err,
                subdivisions,
            });
        }
        if total_err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            break;
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::Quadrature {
                estimate: total,
                error: total_err,
                subdivisions,
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a).abs() < 1e-15 * mid.abs() {
            // cannot refine further; accept and stop
            heap.push(worst);
            if total_err <= 1e3 * cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
                break;
            }
            return Err(Error::Quadrature {
                estimate: total,
                error: total_err,
                subdivisions,
            });
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        evaluations += 30;
        subdivisions += 1;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // recompute sums from the panels to shed accumulated update error
    let mut value = 0.0;
    let mut err = 0.0;
    for p in heap.iter() {
        value += p.value;
        err += p.error;
    }
    Ok((
        heap,
        QuadResult {
            value,
            abs_error: err,
            evaluations,
        },
    ))
}

/// Integrate `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    adaptive(&mut f, a, b, cfg).map(|(_, r)| r)
}

/// Integrate over `[a, b]` and keep the accepted panels for later partial sums.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<Partition> {
    let (heap, result) = adaptive(&mut f, a, b, cfg)?;
    let mut panels: Vec<(f64, f64, f64)> = heap.into_iter().map(|p| (p.a, p.b, p.value)).collect();
    panels.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(Partition { panels, result })
}

/// Integrate `f` over `[a, inf)` through `x = a + (1 - u) / u`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    let g = |u: f64| {
        let x = a + (1.0 - u) / u;
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            v / (u * u)
        }
    };
    integrate(g, 0.0, 1.0, cfg)
}

/// Integrate `f` over `(-inf, b]`.
pub fn integrate_from_neg_infinity<F: FnMut(f64) -> f64>(mut f: F, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    integrate_to_infinity(|y| f(-y), -b, cfg)
}

/// Integrate `f` over the real line, splitting at `center`.
pub fn integrate_real_line<F: FnMut(f64) -> f64>(mut f: F, center: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    let right = integrate_to_infinity(&mut f, center, cfg)?;
    let left = integrate_from_neg_infinity(&mut f, center, cfg)?;
    Ok(QuadResult {
        value: left.value + right.value,
        abs_error: left.abs_error + right.abs_error,
        evaluations: left.evaluations + right.evaluations,
    })
}
