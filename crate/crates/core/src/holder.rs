//! Uniform Hölder exponents of `R_{α,β}`: theoretical values, analytic
//! envelopes for `|W(a,0)|`, log-log slope estimates, pointwise decay scans
//! and the two theta-function representations of `W R_{2,2}(a,1)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cwt::cwt_analytic;
use crate::error::{Error, Result};
use crate::numerics::dd::{Dd, DD_PI};
use crate::numerics::{
    exp_integral_e1, fit_line, gamma, lin_space, log_space, upper_incomplete_gamma,
    CompensatedSum, LineFit,
};
use crate::series::{Regime, SeriesParams};

/// Slack below the target exponent before a decay scan reports growth.
const GROWTH_SLACK: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoreticalExponent {
    pub value: f64,
    pub regime: Regime,
}

pub fn theoretical_exponent(params: &SeriesParams) -> TheoreticalExponent {
    let regime = params.regime();
    let value = match regime {
        Regime::Rough => (params.alpha() - 1.0) / params.beta(),
        Regime::Critical | Regime::Differentiable => 1.0,
    };
    TheoreticalExponent { value, regime }
}

/// Lower and upper bounds for `|W R_{α,β}(a,0)|` at one scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopePair {
    pub lower: f64,
    pub upper: f64,
    pub scale: f64,
}

fn check_scale(a: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain(format!("scale must be positive and finite, got {a}")));
    }
    Ok(())
}

/// Analytic envelope of `|W(a,0)|`, valid for `β ≥ α − 1`.
///
/// For `β ≥ α` and `a ≤ 1` the split index is
/// `N_a = ⌊((β−α)/(aπβ))^{1/β}⌋ + 1`; the bounds use its real majorant.
pub fn envelope(params: &SeriesParams, a: f64) -> Result<EnvelopePair> {
    check_scale(a)?;
    let (alpha, beta) = (params.alpha(), params.beta());
    let c = a * PI;
    let first = c * (-c).exp();
    let (lower, upper) = match params.regime() {
        Regime::Differentiable => {
            return Err(Error::scope(format!(
                "envelopes need beta >= alpha - 1, got alpha = {alpha}, beta = {beta}"
            )))
        }
        Regime::Critical => {
            let e = c / (alpha - 1.0) * exp_integral_e1(c)?;
            (e, first + e)
        }
        Regime::Rough => {
            let h = (alpha - 1.0) / beta;
            let s = (beta - alpha + 1.0) / beta;
            let whole = c.powf(h) * gamma(s)? / beta;
            if beta < alpha || a > 1.0 {
                let lower = c.powf(h) * upper_incomplete_gamma(s, c)? / beta;
                (lower, first + whole)
            } else {
                let d = (beta - alpha) / beta;
                let y = (d.powf(1.0 / beta) + c.powf(1.0 / beta)).powf(beta);
                let lower = c.powf(h) * upper_incomplete_gamma(s, y)? / beta;
                let head = a.powf(h) * PI * ((d / PI).powf(1.0 / beta) + 1.0).powf(beta - alpha + 1.0);
                (lower, head + whole)
            }
        }
    };
    Ok(EnvelopePair { lower, upper, scale: a })
}

/// Log-log fit of `|W(a,0)|` against `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub fit: LineFit,
    pub theoretical: TheoreticalExponent,
    pub scale_window: (f64, f64),
    pub n_scales: usize,
    pub scales: Vec<f64>,
    pub moduli: Vec<f64>,
    /// Set in the critical case, where `|W(a,0)| ≈ aπ ln(1/(aπ))`.
    pub log_correction: bool,
}

/// Tolerance for `W(a,0)` relative to its first term `aπe^{−aπ}`.
fn scale_tol(a: f64, rel: f64) -> f64 {
    let c = a * PI;
    (rel * c * (-c).exp()).max(f64::MIN_POSITIVE)
}

/// Slope of `log|W(a,0)|` over `n_scales` log-spaced scales in `[a_min, a_max]`.
///
/// `abs_tol` is taken relative to `aπe^{−aπ}`, a lower bound of `|W(a,0)|`.
pub fn estimate_uniform_exponent(
    params: &SeriesParams,
    a_min: f64,
    a_max: f64,
    n_scales: usize,
    abs_tol: f64,
) -> Result<ExponentFit> {
    if !(a_min > 0.0 && a_min < a_max && a_max.is_finite()) {
        return Err(Error::argument(format!(
            "need 0 < a_min < a_max, got [{a_min}, {a_max}]"
        )));
    }
    if n_scales < 8 {
        return Err(Error::argument(format!("need at least 8 scales, got {n_scales}")));
    }
    if !(abs_tol > 0.0) {
        return Err(Error::argument(format!("abs_tol must be positive, got {abs_tol}")));
    }
    let scales = log_space(a_min, a_max, n_scales);
    let moduli = scales
        .par_iter()
        .map(|&a| cwt_analytic(params, a, 0.0, scale_tol(a, abs_tol)).map(|w| w.norm()))
        .collect::<Result<Vec<_>>>()?;
    let la: Vec<f64> = scales.iter().map(|a| a.ln()).collect();
    let lw: Vec<f64> = moduli.iter().map(|w| w.ln()).collect();
    let fit = fit_line(&la, &lw)?;
    let theoretical = theoretical_exponent(params);
    Ok(ExponentFit {
        fit,
        theoretical,
        scale_window: (a_min, a_max),
        n_scales,
        scales,
        moduli,
        log_correction: theoretical.regime == Regime::Critical,
    })
}

/// Grid for [`pointwise_decay_check`]: scales span `decades` decades below
/// the window, positions are evenly spaced and centred on `x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayGrid {
    pub n_scales: usize,
    /// Must be odd so that `x0` itself is on the grid.
    pub n_positions: usize,
    pub decades: f64,
}

impl Default for DecayGrid {
    fn default() -> Self {
        DecayGrid {
            n_scales: 24,
            n_positions: 41,
            decades: 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayReport {
    /// Smallest `C` with `|W(a,b)| ≤ C a^h (1 + (|b−x0|/a)^h)` on the grid.
    pub min_constant: f64,
    /// Fit of `log|W(a,x0)|` against `log a`.
    pub local_slope: LineFit,
    /// The local slope falls short of `h` by more than 0.02.
    pub growth: bool,
    pub n_points: usize,
}

/// Scans `(a,b) ∈ (0,window] × [x0−window, x0+window]` for the pointwise
/// decay bound with exponent `h`. For integer β, `x0` is reduced modulo 2.
pub fn pointwise_decay_check(
    params: &SeriesParams,
    x0: f64,
    exponent: f64,
    window: f64,
    grid: DecayGrid,
) -> Result<DecayReport> {
    if !(exponent > 0.0 && exponent < 1.0) {
        return Err(Error::argument(format!("exponent must lie in (0, 1), got {exponent}")));
    }
    if !(window.is_finite() && window > 0.0) {
        return Err(Error::argument(format!("window must be positive, got {window}")));
    }
    if grid.n_scales < 2 || grid.n_positions % 2 == 0 || !(grid.decades > 0.0) {
        return Err(Error::argument(
            "decay grid needs >= 2 scales, an odd number of positions and positive decades",
        ));
    }
    if !x0.is_finite() {
        return Err(Error::argument(format!("x0 must be finite, got {x0}")));
    }
    let x0 = if params.integer_beta().is_some() { x0 % 2.0 } else { x0 };
    let scales = log_space(window * 10f64.powf(-grid.decades), window, grid.n_scales);
    let mid = grid.n_positions / 2;
    let offsets = lin_space(-window, window, grid.n_positions);
    let cells: Vec<(usize, usize)> = (0..scales.len())
        .flat_map(|i| (0..grid.n_positions).map(move |j| (i, j)))
        .collect();
    let values = cells
        .par_iter()
        .map(|&(i, j)| {
            let a = scales[i];
            let t = if j == mid { 0.0 } else { offsets[j] };
            cwt_analytic(params, a, x0 + t, scale_tol(a, 1e-12)).map(|w| (a, t, w.norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut min_constant: f64 = 0.0;
    for &(a, t, w) in &values {
        let env = a.powf(exponent) * (1.0 + (t.abs() / a).powf(exponent));
        min_constant = min_constant.max(w / env);
    }
    let (la, lw): (Vec<f64>, Vec<f64>) = values
        .iter()
        .enumerate()
        .filter(|(k, _)| k % grid.n_positions == mid)
        .map(|(_, &(a, _, w))| (a.ln(), w.ln()))
        .unzip();
    let local_slope = fit_line(&la, &lw)?;
    Ok(DecayReport {
        min_constant,
        local_slope,
        growth: local_slope.slope < exponent - GROWTH_SLACK,
        n_points: values.len(),
    })
}

fn check_theta_scale(a: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain(format!("scale must be positive and finite, got {a}")));
    }
    Ok(())
}

/// `W R_{2,2}(a,1) = iaπ Σ_{n≥1} (−1)^n e^{−aπn²}` by direct summation.
pub fn theta_w_at_one_direct(a: f64) -> Result<Complex64> {
    check_theta_scale(a)?;
    let c = a * PI;
    let first = (-c).exp();
    let mut acc = CompensatedSum::new();
    let mut n: u64 = 1;
    loop {
        let t = (-c * (n * n) as f64).exp();
        acc.add(if n % 2 == 1 { -t } else { t });
        if t <= 1e-17 * first || t == 0.0 {
            break;
        }
        n += 1;
    }
    Ok(Complex64::new(0.0, c * acc.value()))
}

/// The same value through the dual series
/// `Σ_{n∈ℤ} (−1)^n e^{−aπn²} = (2/√a) Σ_{k≥0} e^{−π(2k+1)²/(4a)}`,
/// in double-double arithmetic because of the cancellation against 1.
pub fn theta_w_at_one_poisson(a: f64) -> Result<Complex64> {
    check_theta_scale(a)?;
    let four_a = Dd::new(4.0 * a);
    let mut s = Dd::new(0.0);
    let mut k: u64 = 0;
    loop {
        let m = (2 * k + 1) as f64;
        let t = (-(DD_PI * Dd::new(m * m)) / four_a).exp();
        s = s + t;
        if t.hi == 0.0 || t.hi < 1e-34 * s.hi {
            break;
        }
        k += 1;
    }
    let v = Dd::new(2.0) * s / Dd::sqrt(a) - Dd::new(1.0);
    Ok(Complex64::new(0.0, a * PI / 2.0 * v.to_f64()))
}
