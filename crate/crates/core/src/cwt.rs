//! The Lusin wavelet `ψ(x) = 1/(π(x+i)²)` and continuous wavelet transforms
//! `W f(a,b) = ∫ f(x) a⁻¹ ψ̄((x−b)/a) dx`, in closed form for `R_{α,β}` and
//! nonharmonic series, and by quadrature for arbitrary bounded `f`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{
    cos_pi, exp_integral_e1, integrate_breaks, sin_pi, upper_gamma_any, upper_incomplete_gamma,
    CompensatedSum, QuadSpec,
};
use crate::series::{phase_mod2, ComplexSum, NonharmonicSpec, SeriesParams};

/// Terms summed directly before the Euler–Maclaurin tail takes over (b = 0 only).
const DIRECT_LIMIT: u64 = 1 << 17;

/// Hard cap on direct summation at positions with a non-trivial phase.
const MAX_DIRECT: u64 = 1 << 26;

/// `ψ(x) = 1/(π(x+i)²)`.
pub fn lusin_eval(x: f64) -> Complex64 {
    let z = Complex64::new(x, 1.0);
    1.0 / (PI * z * z)
}

/// `ψ̂(ξ) = −2ξe^{−ξ}` for `ξ ≥ 0`, zero otherwise.
pub fn lusin_ft(xi: f64) -> f64 {
    if xi >= 0.0 {
        -2.0 * xi * (-xi).exp()
    } else {
        0.0
    }
}

/// Unit handle on the Lusin wavelet.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LusinWavelet;

impl LusinWavelet {
    pub fn eval(&self, x: f64) -> Complex64 {
        lusin_eval(x)
    }

    pub fn ft(&self, xi: f64) -> f64 {
        lusin_ft(xi)
    }
}

fn check_scale(a: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain(format!("scale must be positive and finite, got {a}")));
    }
    Ok(())
}

fn check_tol(abs_tol: f64) -> Result<()> {
    if !(abs_tol.is_finite() && abs_tol > 0.0) {
        return Err(Error::argument(format!("abs_tol must be positive, got {abs_tol}")));
    }
    Ok(())
}

/// Truncation state for `Σ n^{−γ} e^{−c n^β}` where the summand is unimodal.
struct Tail {
    alpha: f64,
    beta: f64,
    c: f64,
    /// scale applied to `N^{1−α} e^{−cN^β}/(βc)` to bound the weighted tail
    weight: f64,
    peak: f64,
}

impl Tail {
    fn new(alpha: f64, beta: f64, c: f64, weight: f64) -> Self {
        let peak = if beta > alpha {
            ((beta - alpha) / (c * beta)).powf(1.0 / beta)
        } else {
            0.0
        };
        Tail { alpha, beta, c, weight, peak }
    }

    /// Upper bound on `weight · Σ_{k>n} k^{β−α} e^{−c k^β}` once the summand decreases.
    fn bound(&self, n: u64) -> f64 {
        let nf = n as f64;
        if nf < self.peak {
            return f64::INFINITY;
        }
        self.weight * (-(self.alpha - 1.0) * nf.ln() - self.c * nf.powf(self.beta)).exp()
            / (self.beta * self.c)
    }
}

fn amplitude(params: &SeriesParams, c: f64, n: u64) -> (f64, f64) {
    let k = params.frequency(n);
    let amp = ((params.beta() - params.alpha()) * (n as f64).ln() - c * k).exp();
    (k, amp)
}

/// Smallest `N` with `aπ Σ_{n>N} n^{β−α} e^{−aπn^β} ≤ abs_tol`.
///
/// This bounds the transform of the tail `R − R_N` uniformly in `b`.
pub fn partial_sum_terms(params: &SeriesParams, a: f64, abs_tol: f64) -> u64 {
    let c = a * PI;
    let tail = Tail::new(params.alpha(), params.beta(), c, c);
    let mut n = 1;
    while tail.bound(n) > abs_tol {
        n += 1;
    }
    n
}

/// `∫_{x0}^∞ x^{β−α} e^{−c x^β} dx` through the incomplete Gamma function.
fn tail_integral(alpha: f64, beta: f64, c: f64, x0: f64) -> Result<f64> {
    let s = (beta - alpha + 1.0) / beta;
    let y = c * x0.powf(beta);
    let g = if s == 0.0 {
        exp_integral_e1(y)?
    } else if s > 0.0 {
        upper_incomplete_gamma(s, y)?
    } else {
        upper_gamma_any(s, y)?
    };
    Ok(c.powf(-s) * g / beta)
}

/// `Σ_{n≥n0} n^{β−α} e^{−c n^β}` by Euler–Maclaurin through the `f'''` term.
fn em_tail(alpha: f64, beta: f64, c: f64, n0: u64) -> Result<f64> {
    let x = n0 as f64;
    let gam = alpha - beta;
    let cx = c * x.powf(beta);
    let f = (-gam * x.ln() - cx).exp();
    let g1 = -gam / x - beta * cx / x;
    let g2 = gam / (x * x) - beta * (beta - 1.0) * cx / (x * x);
    let g3 = -2.0 * gam / (x * x * x) - beta * (beta - 1.0) * (beta - 2.0) * cx / (x * x * x);
    let d1 = f * g1;
    let d3 = f * (g3 + 3.0 * g1 * g2 + g1 * g1 * g1);
    Ok(tail_integral(alpha, beta, c, x)? + f / 2.0 - d1 / 12.0 + d3 / 720.0)
}

/// Whether `e^{iπn^β b} = 1` for every `n`.
fn trivial_phase(params: &SeriesParams, b: f64) -> bool {
    b == 0.0 || (params.integer_beta().is_some() && b % 2.0 == 0.0)
}

/// `W R_{α,β}(a,b) = iaπ Σ_{n≥1} e^{iπn^β(b+ia)} / n^{α−β}` to within `abs_tol`.
pub fn cwt_analytic(params: &SeriesParams, a: f64, b: f64, abs_tol: f64) -> Result<Complex64> {
    check_scale(a)?;
    check_tol(abs_tol)?;
    if !b.is_finite() {
        return Err(Error::domain(format!("position must be finite, got {b}")));
    }
    let c = a * PI;
    let tail = Tail::new(params.alpha(), params.beta(), c, c);

    if trivial_phase(params, b) {
        let mut acc = CompensatedSum::new();
        let mut n = 1;
        loop {
            acc.add(amplitude(params, c, n).1);
            if tail.bound(n) <= abs_tol {
                break;
            }
            if n == DIRECT_LIMIT {
                acc.add(em_tail(params.alpha(), params.beta(), c, n + 1)?);
                break;
            }
            n += 1;
        }
        return Ok(Complex64::new(0.0, c * acc.value()));
    }

    let mut acc = ComplexSum::new();
    let mut n = 1;
    loop {
        let (k, amp) = amplitude(params, c, n);
        let t = phase_mod2(k, b);
        acc.add(Complex64::new(amp * cos_pi(t), amp * sin_pi(t)));
        if tail.bound(n) <= abs_tol {
            break;
        }
        if n == MAX_DIRECT {
            return Err(Error::Convergence {
                message: format!("transform at a = {a}, b = {b} needs more than {MAX_DIRECT} terms"),
                estimate: (Complex64::new(0.0, c) * acc.value()).norm(),
                error: tail.bound(n),
            });
        }
        n += 1;
    }
    Ok(Complex64::new(0.0, c) * acc.value())
}

/// `W S(a,b) = −2a Σ a_n λ_n e^{iλ_n(b+ia)}` to within `abs_tol`.
pub fn cwt_nonharmonic(spec: &NonharmonicSpec, a: f64, b: f64, abs_tol: f64) -> Result<Complex64> {
    check_scale(a)?;
    check_tol(abs_tol)?;
    let e = spec.envelope();
    let c = e.c2 * a;
    // 2a C1 C3 Σ n^{β−α} e^{−C2 a n^β}
    let tail = Tail::new(e.alpha, e.beta, c, 2.0 * a * e.c1 * e.c3);
    let mut acc = ComplexSum::new();
    let mut n = 1;
    loop {
        let an = spec.coeff(n);
        if an.re != 0.0 || an.im != 0.0 {
            let lam = spec.freq(n);
            let t = phase_mod2(lam / PI, b);
            let w = -2.0 * a * lam * (-a * lam).exp();
            acc.add(an * Complex64::new(w * cos_pi(t), w * sin_pi(t)));
        }
        if tail.bound(n) <= abs_tol {
            break;
        }
        if n == MAX_DIRECT {
            return Err(Error::Convergence {
                message: format!("nonharmonic transform at a = {a} needs more than {MAX_DIRECT} terms"),
                estimate: acc.value().norm(),
                error: tail.bound(n),
            });
        }
        n += 1;
    }
    Ok(acc.value())
}

/// Breakpoints `0, ±1, ±10, …` inside `[−u, u]`.
fn decade_breaks(u: f64) -> Vec<f64> {
    let mut pos = vec![0.0];
    let mut d = 1.0;
    while d < u {
        pos.push(d);
        d *= 10.0;
    }
    pos.push(u);
    let mut pts: Vec<f64> = pos.iter().rev().map(|v| -v).collect();
    pts.extend(pos.into_iter().skip(1));
    pts
}

/// Quadrature of the defining integral for a bounded `f` with `|f| ≤ bound`.
///
/// The domain is cut to `|x − b| ≤ U a` with `U = 4·bound/(π·abs_tol)`, so the
/// discarded part is at most `abs_tol/2`.
pub fn cwt_numeric<F>(f: F, bound: f64, a: f64, b: f64, quad: &QuadSpec) -> Result<Complex64>
where
    F: Fn(f64) -> f64,
{
    check_scale(a)?;
    if !(bound.is_finite() && bound > 0.0) {
        return Err(Error::argument(format!("bound must be positive, got {bound}")));
    }
    let u_max = 4.0 * bound / (PI * quad.abs_tol);
    let inner = quad.with_abs_tol(quad.abs_tol / 2.0);
    integrate_breaks(
        |u| f(b + a * u) * lusin_eval(u).conj(),
        &decade_breaks(u_max),
        &inner,
    )
}

/// Defining integral for `f` periodic with the given period, folded onto one
/// period against the periodized kernel `aπ / (p² sin²(π(x−b−ia)/p))`.
pub fn cwt_numeric_periodic<F>(f: F, period: f64, a: f64, b: f64, quad: &QuadSpec) -> Result<Complex64>
where
    F: Fn(f64) -> f64,
{
    check_scale(a)?;
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::argument(format!("period must be positive, got {period}")));
    }
    let h = period / 2.0;
    let kernel = |t: f64| {
        let s = (Complex64::new(t, -a) * (PI / period)).sin();
        a * PI / (period * period * s * s)
    };
    let mut pts = vec![-h, 0.0, h];
    let mut d = a;
    while d < h {
        pts.push(d);
        pts.push(-d);
        d *= 4.0;
    }
    pts.sort_by(f64::total_cmp);
    integrate_breaks(|t| f(b + t) * kernel(t), &pts, quad)
}

/// Complex transform values over a scale × position grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Scalogram {
    scales: Vec<f64>,
    positions: Vec<f64>,
    values: Vec<Complex64>,
    pub params: SeriesParams,
    pub abs_tol: f64,
}

impl Scalogram {
    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// Row-major (scale-major) values.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.positions.len() + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        let m = self.positions.len();
        &self.values[i * m..(i + 1) * m]
    }
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

pub fn scalogram(
    params: &SeriesParams,
    scales: &[f64],
    positions: &[f64],
    abs_tol: f64,
) -> Result<Scalogram> {
    if scales.is_empty() || positions.is_empty() {
        return Err(Error::argument("scalogram grid must be non-empty"));
    }
    if !scales.iter().all(|&a| a.is_finite() && a > 0.0) || !strictly_increasing(scales) {
        return Err(Error::argument("scales must be positive and strictly increasing"));
    }
    if !positions.iter().all(|b| b.is_finite()) || !strictly_increasing(positions) {
        return Err(Error::argument("positions must be finite and strictly increasing"));
    }
    check_tol(abs_tol)?;
    let m = positions.len();
    let values = (0..scales.len() * m)
        .into_par_iter()
        .map(|k| cwt_analytic(params, scales[k / m], positions[k % m], abs_tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(Scalogram {
        scales: scales.to_vec(),
        positions: positions.to_vec(),
        values,
        params: *params,
        abs_tol,
    })
}
