//! Self-contained numerical building blocks: compensated summation, exact
//! `sin(πx)` reductions, adaptive Gauss–Kronrod quadrature, the special
//! functions ζ, Γ, Γ(x, y) and E₁, and ordinary least-squares line fits.

pub(crate) mod dd;
mod fit;
mod quad;
mod special;
mod sum;

pub use fit::{fit_line, LineFit};
pub use quad::{integrate, integrate_breaks, QuadSpec, QuadValue};
pub use special::{
    exp_integral_e1, gamma, upper_incomplete_gamma, zeta, zeta_minus_one,
};
pub(crate) use special::upper_gamma_any;
pub use sum::{cos_pi, sin_pi, CompensatedSum};

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (l0, l1) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| {
                    if i == 0 {
                        lo
                    } else if i == n - 1 {
                        hi
                    } else {
                        (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
