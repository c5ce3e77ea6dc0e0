//! Truncated inversion of the Lusin-wavelet transform:
//! `f_{ε,r}(x) = 2 ∫_ε^r ∫ W f(a,b) a⁻¹ φ((x−b)/a) db da/a`
//! with the reconstruction wavelet `φ(x) = 2i/(π(x+i)³)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cwt::{cwt_analytic, lusin_ft};
use crate::error::{Error, Result};
use crate::numerics::{cos_pi, integrate, integrate_breaks, sin_pi, QuadSpec};
use crate::series::{phase_mod2, ComplexSum, SeriesParams, MAX_TERMS};

/// `φ(x) = 2i/(π(x+i)³)`.
pub fn recon_wavelet_eval(x: f64) -> Complex64 {
    let z = Complex64::new(x, 1.0);
    Complex64::new(0.0, 2.0 / PI) / (z * z * z)
}

/// `φ̂(ξ) = −2ξ²e^{−ξ}` for `ξ ≥ 0`, zero otherwise.
pub fn recon_wavelet_ft(xi: f64) -> f64 {
    if xi >= 0.0 {
        -2.0 * xi * xi * (-xi).exp()
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReconWavelet;

impl ReconWavelet {
    pub fn eval(&self, x: f64) -> Complex64 {
        recon_wavelet_eval(x)
    }

    pub fn ft(&self, xi: f64) -> f64 {
        recon_wavelet_ft(xi)
    }
}

fn pairing(xi: f64) -> f64 {
    if xi > 0.0 {
        lusin_ft(xi) * recon_wavelet_ft(xi) / xi
    } else {
        0.0
    }
}

fn value_or_estimate(r: Result<f64>) -> f64 {
    match r {
        Ok(v) => v,
        Err(Error::Convergence { estimate, .. }) => estimate,
        Err(_) => f64::NAN,
    }
}

/// `∫₀^∞ ψ̂(ξ) φ̂(ξ) dξ/ξ` by quadrature (exactly 1).
pub fn admissibility_integral() -> f64 {
    let quad = QuadSpec::new(1e-14, 60).expect("valid tolerance");
    value_or_estimate(integrate(pairing, 0.0, f64::INFINITY, &quad))
}

/// `m(ξ) = ∫_ξ^∞ ψ̂(a) φ̂(a) da/a = e^{−2ξ}(2ξ² + 2ξ + 1)` for `ξ ≥ 0`, else 0.
pub fn kernel_m(xi: f64) -> f64 {
    if xi < 0.0 {
        return 0.0;
    }
    (-2.0 * xi).exp() * (2.0 * xi * xi + 2.0 * xi + 1.0)
}

/// The defining integral of [`kernel_m`], by quadrature.
pub fn kernel_m_quadrature(xi: f64, quad: &QuadSpec) -> Result<f64> {
    if xi.is_nan() {
        return Err(Error::domain("kernel_m_quadrature needs a number"));
    }
    integrate(pairing, xi.max(0.0), f64::INFINITY, quad)
}

/// `sup_{ξ≥0} (1+ξ)^{3/2} m(ξ)`, located by bisection on the logarithmic derivative.
pub fn kernel_envelope_constant() -> f64 {
    let slope = |x: f64| 1.5 / (1.0 + x) - 2.0 + (4.0 * x + 2.0) / (2.0 * x * x + 2.0 * x + 1.0);
    let (mut lo, mut hi) = (0.0, 5.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    (1.0 + x).powf(1.5) * kernel_m(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconParams {
    /// Inner scale ε.
    pub eps: f64,
    /// Outer scale r.
    pub r: f64,
    /// Half-width of the position integral in units of `a`.
    pub b_halfwidth: f64,
    /// `abs_tol` is the target error of the double integral.
    pub quad: QuadSpec,
}

impl ReconParams {
    pub fn new(eps: f64, r: f64, b_halfwidth: f64, quad: QuadSpec) -> Result<Self> {
        let rp = ReconParams { eps, r, b_halfwidth, quad };
        rp.validate()?;
        Ok(rp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps.is_finite() && self.eps > 0.0 && self.r.is_finite() && self.r > self.eps) {
            return Err(Error::argument(format!(
                "need 0 < eps < r < inf, got eps = {}, r = {}",
                self.eps, self.r
            )));
        }
        if !(self.b_halfwidth.is_finite() && self.b_halfwidth > 0.0) {
            return Err(Error::argument(format!("b_halfwidth must be positive, got {}", self.b_halfwidth)));
        }
        if !(self.quad.abs_tol.is_finite() && self.quad.abs_tol > 0.0) {
            return Err(Error::argument(format!("abs_tol must be positive, got {}", self.quad.abs_tol)));
        }
        Ok(())
    }
}

impl Default for ReconParams {
    fn default() -> Self {
        ReconParams {
            eps: 1e-3,
            r: 1e3,
            b_halfwidth: 1e3,
            quad: QuadSpec::default().with_abs_tol(1e-4),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconstruction {
    /// Real part of the double integral.
    pub value: f64,
    /// Imaginary part of the double integral.
    pub imag: f64,
    /// Closed form of the same double integral, summed term by term.
    pub reference: Complex64,
    /// `|imag − reference.im|`.
    pub imag_residual: f64,
}

/// `−i Σ n^{−α} e^{iπn^β x} (m(επn^β) − m(rπn^β))`, the exact value of the
/// truncated inversion of `R_{α,β}`; its real part tends to `R_{α,β}(x)`.
pub fn reconstruct_reference(params: &SeriesParams, x: f64, eps: f64, r: f64, abs_tol: f64) -> Result<Complex64> {
    if !(eps > 0.0 && r > eps && r.is_finite()) {
        return Err(Error::argument(format!("need 0 < eps < r < inf, got eps = {eps}, r = {r}")));
    }
    if !(abs_tol.is_finite() && abs_tol > 0.0) {
        return Err(Error::argument(format!("abs_tol must be positive, got {abs_tol}")));
    }
    if !x.is_finite() {
        return Err(Error::domain(format!("x must be finite, got {x}")));
    }
    let alpha = params.alpha();
    let mut acc = ComplexSum::new();
    let mut n = 1u64;
    loop {
        let k = params.frequency(n);
        let lam = PI * k;
        let g = (kernel_m(eps * lam) - kernel_m(r * lam)) * (n as f64).powf(-alpha);
        let t = phase_mod2(k, x);
        acc.add(Complex64::new(g * sin_pi(t), -g * cos_pi(t)));
        // m is decreasing, so the tail is at most m(επn^β) Σ_{k>n} k^{−α}
        let tail = kernel_m(eps * lam) * (n as f64).powf(1.0 - alpha) / (alpha - 1.0);
        if tail <= abs_tol {
            break;
        }
        if n == MAX_TERMS {
            return Err(Error::Convergence {
                message: format!("reference sum needs more than {MAX_TERMS} terms"),
                estimate: acc.value().re,
                error: tail,
            });
        }
        n += 1;
    }
    Ok(acc.value())
}

/// `(4/π)(1 − H/√(H²+1)) = ∫_{|u|>H} |φ(u)| du`.
fn wavelet_tail_mass(h: f64) -> f64 {
    let s = (h * h + 1.0).sqrt();
    4.0 / (PI * s * (s + h))
}

struct Budget {
    w_tol: f64,
    tail_tol: f64,
    inner: QuadSpec,
}

/// `∫_{−H}^{H} W(a, x − au) φ(u) du`.
fn inner_integral(params: &SeriesParams, x: f64, a: f64, h: f64, budget: &Budget) -> Result<Complex64> {
    let sup = cwt_analytic(params, a, 0.0, budget.w_tol)?.norm();
    let tail = sup * wavelet_tail_mass(h);
    if tail > budget.tail_tol {
        return Err(Error::argument(format!(
            "b_halfwidth {h} too small at a = {a}: position tail bound {tail:e} exceeds {:e}",
            budget.tail_tol
        )));
    }
    let mut points = vec![-h, 0.0, h];
    let mut d = 1.0;
    while d < h {
        points.push(d);
        points.push(-d);
        d *= 10.0;
    }
    points.sort_by(f64::total_cmp);
    let mut failure = None;
    let v = integrate_breaks(
        |u| match cwt_analytic(params, a, x - a * u, budget.w_tol) {
            Ok(w) => w * recon_wavelet_eval(u),
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        &points,
        &budget.inner,
    );
    match failure {
        Some(e) => Err(e),
        None => v,
    }
}

/// The truncated inversion of `R_{α,β}` at `x`, evaluated as a double integral
/// of `cwt_analytic`: outer integral in `ln a` over unit panels (in parallel,
/// summed in panel order), inner integral over `|x − b| ≤ b_halfwidth·a`.
///
/// The imaginary part is compared against [`reconstruct_reference`]; a
/// residual above `10·abs_tol` is a consistency error.
pub fn reconstruct_approx(params: &SeriesParams, x: f64, rp: &ReconParams) -> Result<Reconstruction> {
    rp.validate()?;
    if !x.is_finite() {
        return Err(Error::domain(format!("x must be finite, got {x}")));
    }
    let tau = rp.quad.abs_tol;
    let (lo, hi) = (rp.eps.ln(), rp.r.ln());
    let span = hi - lo;
    let n_panels = span.ceil().max(1.0) as usize;
    // per-scale budget δ; 2·span·δ ≤ τ/2 and the outer rule gets τ/4
    let delta = tau / (4.0 * span);
    let budget = Budget {
        w_tol: delta * PI / 16.0,
        tail_tol: delta / 4.0,
        inner: rp.quad.with_abs_tol(delta / 2.0).with_rel_tol(0.0),
    };
    let outer = rp.quad.with_abs_tol(tau / (8.0 * n_panels as f64)).with_rel_tol(0.0);
    let width = span / n_panels as f64;

    let panels: Vec<Result<Complex64>> = (0..n_panels)
        .into_par_iter()
        .map(|j| {
            let t0 = lo + j as f64 * width;
            let t1 = if j + 1 == n_panels { hi } else { t0 + width };
            let mut failure = None;
            let v = integrate(
                |t| match inner_integral(params, x, t.exp(), rp.b_halfwidth, &budget) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        Complex64::new(0.0, 0.0)
                    }
                },
                t0,
                t1,
                &outer,
            );
            match failure {
                Some(e) => Err(e),
                None => v,
            }
        })
        .collect();

    let mut acc = ComplexSum::new();
    for p in panels {
        acc.add(p?);
    }
    let total = 2.0 * acc.value();

    let reference = reconstruct_reference(params, x, rp.eps, rp.r, tau / 4.0)?;
    let imag_residual = (total.im - reference.im).abs();
    if imag_residual > 10.0 * tau {
        return Err(Error::Consistency(format!(
            "imaginary part {} differs from its closed form {} by {imag_residual:e} (> 10 abs_tol)",
            total.im, reference.im
        )));
    }
    Ok(Reconstruction {
        value: total.re,
        imag: total.im,
        reference,
        imag_residual,
    })
}
