//! Interval means, the Parseval fluctuation amplitude `ζ(2α) − 1`, the
//! Fourier coefficients `b_m` and the uniform deviation bound `ζ(α) − 1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{cos_pi, sin_pi, zeta_minus_one, CompensatedSum, QuadSpec};
use crate::series::{phase_mod2, tail_terms, SeriesParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanReport {
    pub interval: (f64, f64),
    /// Mean of `R_{α,β}` over the interval.
    pub mean_r: f64,
    /// Mean of `sin(πx)` over the interval.
    pub mean_s: f64,
    /// `2(ζ(α+β) − 1) / (π(hi − lo))`.
    pub bound: f64,
}

/// Means of `R_{α,β}` and `sin(πx)` over `(lo, hi)` from term-wise
/// antiderivatives `−cos(πn^β x)/(πn^β)`.
pub fn interval_mean(params: &SeriesParams, lo: f64, hi: f64, abs_tol: f64) -> Result<MeanReport> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::argument(format!("need a finite interval lo < hi, got ({lo}, {hi})")));
    }
    let len = hi - lo;
    let (alpha, beta) = (params.alpha(), params.beta());
    // |term_n| ≤ 2 n^{−α−β} / (π len)
    let n_terms = tail_terms(alpha + beta, abs_tol, 2.0 / (PI * len))?;
    let mut acc = CompensatedSum::new();
    for n in 1..=n_terms {
        let k = params.frequency(n);
        let diff = cos_pi(phase_mod2(k, lo)) - cos_pi(phase_mod2(k, hi));
        acc.add(diff / (PI * k * (n as f64).powf(alpha)));
    }
    let mean_s = (cos_pi(lo) - cos_pi(hi)) / (PI * len);
    let bound = 2.0 * zeta_minus_one(alpha + beta)? / (PI * len);
    Ok(MeanReport {
        interval: (lo, hi),
        mean_r: acc.value() / len,
        mean_s,
        bound,
    })
}

fn require_integer_beta(params: &SeriesParams, what: &str) -> Result<u32> {
    params.integer_beta().ok_or_else(|| {
        Error::scope(format!(
            "{what} needs a positive integer beta (R is then 2-periodic), got {}",
            params.beta()
        ))
    })
}

fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(n: u64, k: u32, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let base = (n % m) as u128;
    for _ in 0..k {
        acc = acc * base % m as u128;
    }
    acc as u64
}

/// Residues `n^k mod M` for `n = 1..=N`, or `None` if the grid would alias:
/// `M | n^k ± m^k` for some `n, m` (including `n = m` on the `+` side).
fn alias_free_residues(n_terms: u64, k: u32, m: u64) -> Option<Vec<u64>> {
    let r: Vec<u64> = (1..=n_terms).map(|n| pow_mod(n, k, m)).collect();
    for (i, &ri) in r.iter().enumerate() {
        if ri == 0 {
            return None;
        }
        for &rj in &r[..i] {
            if ri == rj || ri + rj == m {
                return None;
            }
        }
    }
    Some(r)
}

/// `∫_{−1}^{1} (R_{α,β}(x) − sin(πx))² dx` for integer β.
///
/// The series is cut where `Σ_{n>N} n^{−2α} ≤ abs_tol/4`; the squared
/// deviation of the cut series is a trigonometric polynomial, integrated by
/// the periodic trapezoid rule on a prime number `M` of nodes chosen so that
/// no product of two terms aliases to a constant.
pub fn l2_fluctuation(params: &SeriesParams, quad: &QuadSpec) -> Result<f64> {
    let k = require_integer_beta(params, "l2_fluctuation")?;
    let alpha = params.alpha();
    let n_terms = tail_terms(2.0 * alpha, quad.abs_tol / 4.0, 1.0)?.max(2);
    if n_terms > 20_000 {
        return Err(Error::Convergence {
            message: format!("l2_fluctuation needs {n_terms} terms at abs_tol {}", quad.abs_tol),
            estimate: f64::NAN,
            error: f64::INFINITY,
        });
    }
    let mut m = 4 * n_terms * n_terms + 1;
    let residues = loop {
        if is_prime(m) {
            if let Some(r) = alias_free_residues(n_terms, k, m) {
                break r;
            }
        }
        m += 1;
    };
    let table: Vec<f64> = (0..m).map(|t| sin_pi(2.0 * t as f64 / m as f64)).collect();
    // sin(π n^k x_j) with x_j = −1 + 2j/M equals (−1)^{n^k} sin(2π (n^k j mod M)/M)
    let weights: Vec<f64> = (2..=n_terms)
        .map(|n| {
            let w = (n as f64).powf(-alpha);
            if n % 2 == 1 { -w } else { w }
        })
        .collect();
    let steps = &residues[1..];
    let mut idx = vec![0u64; steps.len()];
    let mut acc = CompensatedSum::new();
    for _ in 0..m {
        let mut g = CompensatedSum::new();
        for ((i, &step), &w) in idx.iter_mut().zip(steps).zip(&weights) {
            g.add(w * table[*i as usize]);
            *i += step;
            if *i >= m {
                *i -= m;
            }
        }
        let g = g.value();
        acc.add(g * g);
    }
    Ok(2.0 * acc.value() / m as f64)
}

/// `b_m = m^{−α/β}` when `m = k^β` for an integer `k ≥ 2`, else 0.
pub fn fourier_b(m: u64, params: &SeriesParams) -> Result<f64> {
    if m == 0 {
        return Err(Error::argument("fourier_b needs m >= 1"));
    }
    let k = require_integer_beta(params, "fourier_b")?;
    let guess = (m as f64).powf(1.0 / k as f64).round() as u64;
    for root in guess.saturating_sub(1)..=guess + 1 {
        if root >= 2 && root.checked_pow(k) == Some(m) {
            return Ok((root as f64).powf(-params.alpha()));
        }
    }
    Ok(0.0)
}

/// `(Σ_{m≤M} b_m², ζ(2α) − 1)`.
pub fn parseval_check(params: &SeriesParams, big_m: u64) -> Result<(f64, f64)> {
    if big_m == 0 {
        return Err(Error::argument("parseval_check needs M >= 1"));
    }
    let mut acc = CompensatedSum::new();
    for m in 1..=big_m {
        let b = fourier_b(m, params)?;
        if b != 0.0 {
            acc.add(b * b);
        }
    }
    Ok((acc.value(), zeta_minus_one(2.0 * params.alpha())?))
}

/// `ζ(α) − 1`, a bound for `|R_{α,β}(x) − sin(πx)|`.
pub fn sup_deviation_bound(alpha: f64) -> Result<f64> {
    zeta_minus_one(alpha)
}
