//! Evaluation of `R_{α,β}(x) = Σ sin(π n^β x) / n^α` and of general
//! nonharmonic series `S(x) = Σ a_n e^{i λ_n x}` with certified truncation.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{cos_pi, sin_pi, CompensatedSum};

/// Tolerance used to decide `β = α − 1`.
pub const CRITICAL_TOL: f64 = 1e-12;

/// Largest number of terms any direct summation in this module will attempt.
pub const MAX_TERMS: u64 = 1 << 27;

/// Number of leading terms on which [`NonharmonicSpec`] envelopes are checked.
pub const ENVELOPE_CHECK_TERMS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `β < α − 1`: the series is C¹.
    Differentiable,
    /// `β = α − 1` within [`CRITICAL_TOL`].
    Critical,
    /// `β > α − 1`.
    Rough,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Differentiable => "differentiable",
            Regime::Critical => "critical",
            Regime::Rough => "rough",
        })
    }
}

/// The exponent pair `(α, β)` with `α > 1`, `β > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesParams {
    alpha: f64,
    beta: f64,
}

impl SeriesParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(Error::domain(format!("alpha must be finite and > 1, got {alpha}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::domain(format!("beta must be finite and > 0, got {beta}")));
        }
        Ok(SeriesParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn regime(&self) -> Regime {
        let d = self.beta - (self.alpha - 1.0);
        if d.abs() <= CRITICAL_TOL {
            Regime::Critical
        } else if d < 0.0 {
            Regime::Differentiable
        } else {
            Regime::Rough
        }
    }

    /// `Some(k)` when β is a positive integer.
    pub fn integer_beta(&self) -> Option<u32> {
        if self.beta.fract() == 0.0 && self.beta <= u32::MAX as f64 {
            Some(self.beta as u32)
        } else {
            None
        }
    }

    /// `n^β`, exact whenever β is an integer and the power stays below 2⁵³.
    pub fn frequency(&self, n: u64) -> f64 {
        if let Some(k) = self.integer_beta() {
            if let Some(v) = exact_pow(n, k) {
                return v as f64;
            }
        }
        (n as f64).powf(self.beta)
    }
}

pub(crate) fn exact_pow(n: u64, k: u32) -> Option<u64> {
    let v = n.checked_pow(k)?;
    (v < 1 << 53).then_some(v)
}

/// Reduce `k·x` modulo 2, carrying the rounding error of the product, so that
/// `sin_pi(phase_mod2(k, x))` resolves `sin(π k x)` for large `k`.
pub(crate) fn phase_mod2(k: f64, x: f64) -> f64 {
    let p = k * x;
    let e = k.mul_add(x, -p);
    (p % 2.0) + e
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationBudget {
    pub abs_tol: f64,
    pub n_terms: u64,
}

/// Smallest `N` with `N^{1−α}/(α−1) ≤ scale·abs_tol⁻¹`, i.e. the tail
/// `scale·Σ_{n>N} n^{−α}` is below `abs_tol`.
pub(crate) fn tail_terms(alpha: f64, abs_tol: f64, scale: f64) -> Result<u64> {
    if !(abs_tol.is_finite() && abs_tol > 0.0) {
        return Err(Error::argument(format!("abs_tol must be positive, got {abs_tol}")));
    }
    let bound = |n: f64| scale * n.powf(1.0 - alpha) / (alpha - 1.0);
    let guess = (scale / ((alpha - 1.0) * abs_tol)).powf(1.0 / (alpha - 1.0));
    if !(guess < 1e18) {
        return Ok(u64::MAX);
    }
    let mut n = guess.ceil().max(1.0);
    while n > 1.0 && bound(n - 1.0) <= abs_tol {
        n -= 1.0;
    }
    while bound(n) > abs_tol {
        n += 1.0;
    }
    Ok(n as u64)
}

pub fn truncation_terms(params: &SeriesParams, abs_tol: f64) -> Result<TruncationBudget> {
    Ok(TruncationBudget {
        abs_tol,
        n_terms: tail_terms(params.alpha, abs_tol, 1.0)?,
    })
}

fn check_terms(n: u64, what: &str) -> Result<()> {
    if n > MAX_TERMS {
        return Err(Error::Convergence {
            message: format!("{what} needs {n} terms, more than the limit {MAX_TERMS}"),
            estimate: f64::NAN,
            error: f64::INFINITY,
        });
    }
    Ok(())
}

/// `Σ_{n=1}^{N} sin(π n^β x)/n^α`, summed in ascending `n`.
pub fn riemann_partial(params: &SeriesParams, x: f64, n_terms: u64) -> f64 {
    let mut acc = CompensatedSum::new();
    for n in 1..=n_terms {
        let k = params.frequency(n);
        acc.add(sin_pi(phase_mod2(k, x)) * (n as f64).powf(-params.alpha));
    }
    acc.value()
}

/// `R_{α,β}(x)` to within `abs_tol`.
pub fn riemann_eval(params: &SeriesParams, x: f64, abs_tol: f64) -> Result<f64> {
    let budget = truncation_terms(params, abs_tol)?;
    check_terms(budget.n_terms, "riemann_eval")?;
    Ok(riemann_partial(params, x, budget.n_terms))
}

/// `sin(πx)`.
pub fn sin_baseline(x: f64) -> f64 {
    sin_pi(x)
}

/// Growth constants: `|a_n| ≤ C1 n^{−α}` and `C2 n^β ≤ λ_n ≤ C3 n^β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Envelope {
    pub fn new(c1: f64, c2: f64, c3: f64, alpha: f64, beta: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(c1) && ok(c2) && ok(c3) && ok(beta)) || c2 > c3 {
            return Err(Error::argument(format!(
                "envelope constants must be positive with C2 <= C3, got ({c1}, {c2}, {c3}, beta {beta})"
            )));
        }
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(Error::domain(format!("envelope alpha must be > 1, got {alpha}")));
        }
        Ok(Envelope { c1, c2, c3, alpha, beta })
    }
}

type CoeffRule = Arc<dyn Fn(u64) -> Complex64 + Send + Sync>;
type FreqRule = Arc<dyn Fn(u64) -> f64 + Send + Sync>;

/// A series `Σ a_n e^{i λ_n x}` given by coefficient and frequency rules.
///
/// The envelope is only verified on `n ≤ ENVELOPE_CHECK_TERMS`.
#[derive(Clone)]
pub struct NonharmonicSpec {
    coeff: CoeffRule,
    freq: FreqRule,
    envelope: Envelope,
}

impl fmt::Debug for NonharmonicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NonharmonicSpec")
            .field("envelope", &self.envelope)
            .finish_non_exhaustive()
    }
}

impl NonharmonicSpec {
    pub fn new<A, L>(coeff: A, freq: L, envelope: Envelope) -> Result<Self>
    where
        A: Fn(u64) -> Complex64 + Send + Sync + 'static,
        L: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        let spec = NonharmonicSpec {
            coeff: Arc::new(coeff),
            freq: Arc::new(freq),
            envelope,
        };
        spec.verify()?;
        Ok(spec)
    }

    fn verify(&self) -> Result<()> {
        let e = &self.envelope;
        let slack = 1.0 + 1e-12;
        let mut prev = 0.0;
        for n in 1..=ENVELOPE_CHECK_TERMS {
            let nf = n as f64;
            let a = (self.coeff)(n);
            let lam = (self.freq)(n);
            if !(a.re.is_finite() && a.im.is_finite() && lam.is_finite()) {
                return Err(Error::Specification(format!("non-finite term at n = {n}")));
            }
            if !(lam > prev) {
                return Err(Error::Specification(format!(
                    "frequencies must be positive and strictly increasing: lambda_{n} = {lam} after {prev}"
                )));
            }
            prev = lam;
            if a.norm() > e.c1 * nf.powf(-e.alpha) * slack {
                return Err(Error::Specification(format!(
                    "|a_{n}| = {} exceeds C1 n^-alpha = {}",
                    a.norm(),
                    e.c1 * nf.powf(-e.alpha)
                )));
            }
            let nb = nf.powf(e.beta);
            if lam < e.c2 * nb / slack || lam > e.c3 * nb * slack {
                return Err(Error::Specification(format!(
                    "lambda_{n} = {lam} outside [C2 n^beta, C3 n^beta] = [{}, {}]",
                    e.c2 * nb,
                    e.c3 * nb
                )));
            }
        }
        Ok(())
    }

    /// `a_n = n^{−α}`, `λ_n = π n^β`; the imaginary part of `S` is `R_{α,β}`.
    pub fn riemann(params: &SeriesParams) -> Self {
        let p = *params;
        NonharmonicSpec {
            coeff: Arc::new(move |n| Complex64::new((n as f64).powf(-p.alpha), 0.0)),
            freq: Arc::new(move |n| PI * p.frequency(n)),
            envelope: Envelope {
                c1: 1.0,
                c2: PI,
                c3: PI,
                alpha: p.alpha,
                beta: p.beta,
            },
        }
    }

    /// `a_n = −i n^{−α}`, `λ_n = π n^β`: twice the analytic part of `R_{α,β}`.
    pub fn riemann_analytic(params: &SeriesParams) -> Self {
        let p = *params;
        NonharmonicSpec {
            coeff: Arc::new(move |n| Complex64::new(0.0, -(n as f64).powf(-p.alpha))),
            freq: Arc::new(move |n| PI * p.frequency(n)),
            envelope: Envelope {
                c1: 1.0,
                c2: PI,
                c3: PI,
                alpha: p.alpha,
                beta: p.beta,
            },
        }
    }

    /// `a_n = n^{−α}`, `λ_n = π n^β + 1` with `C1 = 1`, `C2 = π`, `C3 = π + 1`.
    pub fn perturbed(params: &SeriesParams) -> Result<Self> {
        let p = *params;
        NonharmonicSpec::new(
            move |n| Complex64::new((n as f64).powf(-p.alpha), 0.0),
            move |n| PI * p.frequency(n) + 1.0,
            Envelope::new(1.0, PI, PI + 1.0, p.alpha, p.beta)?,
        )
    }

    pub fn envelope(&self) -> &Envelope {
        &self.envelope
    }

    pub fn coeff(&self, n: u64) -> Complex64 {
        (self.coeff)(n)
    }

    pub fn freq(&self, n: u64) -> f64 {
        (self.freq)(n)
    }
}

/// Compensated accumulator for complex terms.
#[derive(Debug, Clone, Default)]
pub(crate) struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub(crate) fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `S(x)` to within `abs_tol`, using the tail bound `C1 Σ_{n>N} n^{−α}`.
pub fn nonharmonic_eval(spec: &NonharmonicSpec, x: f64, abs_tol: f64) -> Result<Complex64> {
    let n_terms = tail_terms(spec.envelope.alpha, abs_tol, spec.envelope.c1)?;
    check_terms(n_terms, "nonharmonic_eval")?;
    let mut acc = ComplexSum::new();
    for n in 1..=n_terms {
        let a = (spec.coeff)(n);
        if a.re == 0.0 && a.im == 0.0 {
            continue;
        }
        let t = phase_mod2((spec.freq)(n) / PI, x);
        acc.add(a * Complex64::new(cos_pi(t), sin_pi(t)));
    }
    Ok(acc.value())
}
