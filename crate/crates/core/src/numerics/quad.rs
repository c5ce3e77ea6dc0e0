//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol·|I|)`. The error of a panel is the
//! difference between its Kronrod and Gauss values. Infinite limits are
//! mapped onto finite ones with `t = lo + u/(1-u)` (and its mirror image).

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub abs_tol: f64,
    /// Relative tolerance; `0` disables it.
    pub rel_tol: f64,
    /// Maximum number of bisections applied to any one panel.
    pub max_depth: u32,
    /// Hard cap on the number of live panels.
    pub max_intervals: usize,
}

impl QuadSpec {
    pub fn new(abs_tol: f64, max_depth: u32) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::argument(format!("abs_tol must be > 0, got {abs_tol}")));
        }
        if max_depth < 1 {
            return Err(Error::argument("max_depth must be >= 1"));
        }
        Ok(Self {
            abs_tol,
            rel_tol: 0.0,
            max_depth,
            max_intervals: 200_000,
        })
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol.max(0.0);
        self
    }

    pub fn with_max_intervals(mut self, n: usize) -> Self {
        self.max_intervals = n.max(1);
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_depth: 60,
            max_intervals: 200_000,
        }
    }
}

/// Values the integrator can accumulate: real or complex.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

// Kronrod abscissae (descending), Kronrod weights, Gauss weights for the
// abscissae with odd index.
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

fn gk15<T: QuadValue, F: FnMut(f64) -> T + ?Sized>(f: &mut F, lo: f64, hi: f64) -> (T, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    let err = (kronrod - gauss).magnitude();
    (kronrod, err)
}

struct Panel<T> {
    lo: f64,
    hi: f64,
    value: T,
    err: f64,
    depth: u32,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn sum_panels<'a, T: QuadValue + 'a>(panels: impl Iterator<Item = &'a Panel<T>>) -> (T, f64) {
    let mut value = T::zero();
    let mut err = 0.0;
    for p in panels {
        value = value + p.value;
        err += p.err;
    }
    (value, err)
}

/// Adaptive integration over the finite partition `breaks` (strictly increasing).
fn adapt<T: QuadValue, F: FnMut(f64) -> T + ?Sized>(
    f: &mut F,
    breaks: &[f64],
    spec: &QuadSpec,
) -> Result<T> {
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel<T>> = Vec::new();
    for w in breaks.windows(2) {
        let (value, err) = gk15(f, w[0], w[1]);
        heap.push(Panel { lo: w[0], hi: w[1], value, err, depth: 0 });
    }
    let mut iterations = 0usize;
    loop {
        let (v_live, e_live) = sum_panels(heap.iter());
        let (v_frozen, e_frozen) = sum_panels(frozen.iter());
        let total = v_live + v_frozen;
        let err = e_live + e_frozen;
        if !total.is_finite_value() || !err.is_finite() {
            return Err(Error::Convergence {
                message: "integrand produced a non-finite value".into(),
                estimate: total.magnitude(),
                error: err,
            });
        }
        let target = spec.abs_tol.max(spec.rel_tol * total.magnitude());
        if err <= target {
            return Ok(total);
        }
        // Bisect a batch of the worst panels before re-summing so the exact
        // re-summation stays amortised.
        let batch = (heap.len() / 16).max(1);
        let mut worked = false;
        for _ in 0..batch {
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.lo + worst.hi);
            if worst.depth >= spec.max_depth || !(mid > worst.lo && mid < worst.hi) {
                frozen.push(worst);
                continue;
            }
            if heap.len() + frozen.len() + 2 > spec.max_intervals {
                heap.push(worst);
                break;
            }
            let (vl, el) = gk15(f, worst.lo, mid);
            let (vr, er) = gk15(f, mid, worst.hi);
            let depth = worst.depth + 1;
            heap.push(Panel { lo: worst.lo, hi: mid, value: vl, err: el, depth });
            heap.push(Panel { lo: mid, hi: worst.hi, value: vr, err: er, depth });
            worked = true;
        }
        iterations += 1;
        if !worked {
            return Err(Error::Convergence {
                message: format!(
                    "adaptive quadrature exhausted its subdivision budget after {iterations} rounds"
                ),
                estimate: total.magnitude(),
                error: err,
            });
        }
    }
}

/// Integrates `f` over `[lo, hi]`; either limit may be infinite.
pub fn integrate<T: QuadValue, F: FnMut(f64) -> T>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadSpec,
) -> Result<T> {
    integrate_breaks(f, &[lo, hi], spec)
}

/// Like [`integrate`], starting from the partition given by `points`
/// (sorted ascending; only the first and last entry may be infinite).
pub fn integrate_breaks<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    points: &[f64],
    spec: &QuadSpec,
) -> Result<T> {
    integrate_dyn(&mut f, points, spec)
}

fn integrate_dyn<T: QuadValue>(
    f: &mut dyn FnMut(f64) -> T,
    points: &[f64],
    spec: &QuadSpec,
) -> Result<T> {
    if points.len() < 2 {
        return Err(Error::argument("integration needs at least two limits"));
    }
    if points.iter().any(|p| p.is_nan()) {
        return Err(Error::argument("NaN integration limit"));
    }
    if points.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::argument("integration limits must be ascending"));
    }
    let inner = &points[1..points.len() - 1];
    if inner.iter().any(|p| !p.is_finite()) {
        return Err(Error::argument("only the outer limits may be infinite"));
    }
    let lo = points[0];
    let hi = points[points.len() - 1];
    if lo == hi {
        return Ok(T::zero());
    }

    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let breaks = dedup(points);
            adapt(f, &breaks, spec)
        }
        (true, false) => {
            // t = lo + u/(1-u); breakpoints map to u = (t-lo)/(1+t-lo).
            let mut us: Vec<f64> = points[..points.len() - 1]
                .iter()
                .map(|&t| (t - lo) / (1.0 + t - lo))
                .collect();
            us.push(1.0);
            let mut g = |u: f64| {
                let d = 1.0 - u;
                if d <= 0.0 {
                    return T::zero();
                }
                f(lo + u / d) * (1.0 / (d * d))
            };
            adapt(&mut g, &dedup(&us), spec)
        }
        (false, true) => {
            // t = hi - u/(1-u)
            let mut us: Vec<f64> = points[1..]
                .iter()
                .rev()
                .map(|&t| (hi - t) / (1.0 + hi - t))
                .collect();
            us.push(1.0);
            let mut g = |u: f64| {
                let d = 1.0 - u;
                if d <= 0.0 {
                    return T::zero();
                }
                f(hi - u / d) * (1.0 / (d * d))
            };
            adapt(&mut g, &dedup(&us), spec)
        }
        (false, false) => {
            let split = inner.first().copied().unwrap_or(0.0);
            let left: Vec<f64> = std::iter::once(lo)
                .chain(inner.iter().copied().filter(|&p| p <= split))
                .chain(std::iter::once(split))
                .collect();
            let right: Vec<f64> = std::iter::once(split)
                .chain(inner.iter().copied().filter(|&p| p > split))
                .chain(std::iter::once(hi))
                .collect();
            let half = spec.with_abs_tol(0.5 * spec.abs_tol);
            let a = integrate_dyn(f, &dedup(&left), &half)?;
            let b = integrate_dyn(f, &dedup(&right), &half)?;
            Ok(a + b)
        }
    }
}

fn dedup(points: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(points.len());
    for &p in points {
        if out.last().map_or(true, |&q| p > q) {
            out.push(p);
        }
    }
    if out.len() == 1 {
        out.push(out[0]);
    }
    out
}
