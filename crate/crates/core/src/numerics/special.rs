//! ζ, Γ, upper incomplete Γ and E₁ built on the adaptive integrator.

use crate::error::{Error, Result};

use super::quad::{integrate, QuadSpec};
use super::sum::CompensatedSum;

/// Relative target used internally; leaves headroom below the documented
/// accuracy of every public function.
const REL: f64 = 2e-15;

fn rel_spec() -> QuadSpec {
    QuadSpec {
        abs_tol: f64::MIN_POSITIVE,
        rel_tol: REL,
        max_depth: 80,
        max_intervals: 100_000,
    }
}

/// `Σ_{n ≥ start} n^{-s}` for `s > 1`: the first terms summed directly (in
/// descending order) and the remainder from Euler–Maclaurin through `B₂`.
fn zeta_from(s: f64, start: u64) -> f64 {
    let lead = (start as f64).powf(-s);
    // First omitted Euler–Maclaurin term: s(s+1)(s+2)/720 · N^{-s-3}.
    let remainder = |n: f64| s * (s + 1.0) * (s + 2.0) / 720.0 * n.powf(-s - 3.0);
    let mut cut = start + 8;
    while remainder(cut as f64) > 1e-17 * lead && cut < 50_000_000 {
        cut = cut + cut / 2 + 1;
    }
    let n = cut as f64;
    let mut acc = CompensatedSum::new();
    acc.add(n.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * n.powf(-s));
    acc.add(s / 12.0 * n.powf(-s - 1.0));
    for k in (start..cut).rev() {
        acc.add((k as f64).powf(-s));
    }
    acc.value()
}

/// Riemann ζ(s) for real `s > 1`.
pub fn zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::domain(format!("zeta requires s > 1, got {s}")));
    }
    Ok(1.0 + zeta_from(s, 2))
}

/// `ζ(s) − 1 = Σ_{n≥2} n^{-s}`, accurate in the relative sense even when `s` is large.
pub fn zeta_minus_one(s: f64) -> Result<f64> {
    if !(s > 1.0) || s.is_nan() {
        return Err(Error::domain(format!("zeta requires s > 1, got {s}")));
    }
    if s == f64::INFINITY {
        return Ok(0.0);
    }
    Ok(zeta_from(s, 2))
}

/// `∫_lo^hi e^{-t} t^{x-1} dt` for `0 ≤ lo < hi < ∞`. For `x < 1` the
/// substitution `s = t^x` removes the endpoint singularity.
fn gamma_head(x: f64, lo: f64, hi: f64) -> Result<f64> {
    if lo >= hi {
        return Ok(0.0);
    }
    if x < 1.0 {
        let inv = 1.0 / x;
        let v = integrate(
            |s: f64| (-s.powf(inv)).exp(),
            lo.powf(x),
            hi.powf(x),
            &rel_spec(),
        )?;
        Ok(v / x)
    } else {
        integrate(
            |t: f64| (-t).exp() * t.powf(x - 1.0),
            lo,
            hi,
            &rel_spec(),
        )
    }
}

/// `∫_y^∞ e^{-t} t^{x-1} dt = e^{-y} y^{x-1} ∫_0^∞ e^{-u} (1+u/y)^{x-1} du`, `y > 0`.
fn gamma_tail(x: f64, y: f64) -> Result<f64> {
    let scale = (-y + (x - 1.0) * y.ln()).exp();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let v = integrate(
        |u: f64| (-u).exp() * (1.0 + u / y).powf(x - 1.0),
        0.0,
        f64::INFINITY,
        &rel_spec(),
    )?;
    Ok(scale * v)
}

/// Γ(x) for `x > 0`, from its defining integral split at `max(1, x)`.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("gamma requires x > 0, got {x}")));
    }
    let split = x.max(1.0);
    Ok(gamma_head(x, 0.0, split)? + gamma_tail(x, split)?)
}

/// Upper incomplete Gamma `Γ(x, y) = ∫_y^∞ e^{-t} t^{x-1} dt`, `x > 0`, `y ≥ 0`.
pub fn upper_incomplete_gamma(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("incomplete gamma requires x > 0, got {x}")));
    }
    if !(y >= 0.0) {
        return Err(Error::domain(format!("incomplete gamma requires y >= 0, got {y}")));
    }
    if y == 0.0 {
        return gamma(x);
    }
    if y == f64::INFINITY {
        return Ok(0.0);
    }
    if y >= 1.0 {
        gamma_tail(x, y)
    } else {
        Ok(gamma_head(x, y, 1.0)? + gamma_tail(x, 1.0)?)
    }
}

/// `∫_y^∞ e^{-t} t^{s-1} dt` for any real `s` and `y > 0`. Used for the tails
/// of transform sums, where `s ≤ 0` occurs.
pub(crate) fn upper_gamma_any(s: f64, y: f64) -> Result<f64> {
    if s > 0.0 {
        return upper_incomplete_gamma(s, y);
    }
    if !(y > 0.0) {
        return Err(Error::domain(format!(
            "incomplete gamma with s = {s} <= 0 requires y > 0, got {y}"
        )));
    }
    gamma_tail(s, y)
}

/// Exponential integral `E₁(x) = ∫_1^∞ e^{-xt}/t dt` for `x > 0`.
///
/// Evaluated as `e^{-x} ∫_0^∞ e^{-u}/(x+u) du` after `u = x(t-1)`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::domain(format!("E1 requires x > 0, got {x}")));
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    let scale = (-x).exp();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let v = integrate(
        |u: f64| (-u).exp() / (x + u),
        0.0,
        f64::INFINITY,
        &rel_spec(),
    )?;
    Ok(scale * v)
}
