//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use genriemann::cwt::{
    cwt_analytic, cwt_nonharmonic, cwt_numeric_periodic, partial_sum_terms, scalogram,
};
use genriemann::fluctuation::{interval_mean, l2_fluctuation, parseval_check, sup_deviation_bound};
use genriemann::holder::{
    envelope, estimate_uniform_exponent, theta_w_at_one_direct, theta_w_at_one_poisson,
};
use genriemann::numerics::{
    exp_integral_e1, fit_line, gamma, integrate_breaks, lin_space, log_space, upper_incomplete_gamma,
    zeta, zeta_minus_one, QuadSpec,
};
use genriemann::reconstruction::{
    admissibility_integral, kernel_m, kernel_m_quadrature, reconstruct_approx, ReconParams,
};
use genriemann::series::{riemann_eval, sin_baseline, NonharmonicSpec, SeriesParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(bool, String), String>;

fn p(alpha: f64, beta: f64) -> SeriesParams {
    SeriesParams::new(alpha, beta).unwrap()
}

fn err(e: genriemann::Error) -> String {
    e.to_string()
}

fn w0(params: &SeriesParams, a: f64) -> Result<f64, String> {
    let tol = (1e-15 * a * PI * (-a * PI).exp()).max(f64::MIN_POSITIVE);
    Ok(cwt_analytic(params, a, 0.0, tol).map_err(err)?.norm())
}

fn slope_of(scales: &[f64], values: &[f64]) -> Result<f64, String> {
    let la: Vec<f64> = scales.iter().map(|a| a.ln()).collect();
    let lv: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    Ok(fit_line(&la, &lv).map_err(err)?.slope)
}

fn exponent_recovery() -> Check {
    let cases = [(2.0, 2.0, 0.5, 0.02), (2.0, 4.0, 0.25, 0.02), (2.0, 10.0, 0.1, 0.02), (1.5, 1.0, 0.5, 0.03)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (alpha, beta, target, tol) in cases {
        let t = Instant::now();
        let fit = estimate_uniform_exponent(&p(alpha, beta), 1e-6, 1e-3, 32, 1e-10).map_err(err)?;
        let secs = t.elapsed().as_secs_f64();
        let good = (fit.fit.slope - target).abs() <= tol && secs <= 60.0;
        ok &= good;
        let mut s = format!("({alpha},{beta}) slope {:.4} target {target}±{tol} {secs:.1}s", fit.fit.slope);
        if !good && beta == 10.0 {
            let deep = estimate_uniform_exponent(&p(alpha, beta), 1e-12, 1e-9, 32, 1e-10).map_err(err)?;
            s.push_str(&format!(" [only 3-4 terms active here; slope on [1e-12,1e-9] is {:.4}]", deep.fit.slope));
        }
        parts.push(s);
    }
    Ok((ok, parts.join("; ")))
}

fn critical_case() -> Check {
    let params = p(2.0, 1.0);
    let s1 = estimate_uniform_exponent(&params, 1e-8, 1e-4, 32, 1e-10).map_err(err)?.fit.slope;
    let s2 = estimate_uniform_exponent(&params, 1e-10, 1e-6, 32, 1e-10).map_err(err)?.fit.slope;
    let ok = (0.90..=0.99).contains(&s1) && s2 > s1;
    Ok((ok, format!("slope {s1:.4} on [1e-8,1e-4], {s2:.4} on [1e-10,1e-6]")))
}

fn envelope_sandwich() -> Check {
    let mut violations = 0;
    let mut worst: f64 = f64::NEG_INFINITY;
    for (alpha, beta) in [(2.0, 1.5), (2.0, 2.0), (2.0, 5.0), (3.0, 2.0)] {
        let params = p(alpha, beta);
        for a in log_space(1e-6, 10.0, 1000) {
            let e = envelope(&params, a).map_err(err)?;
            let w = w0(&params, a)?;
            worst = worst.max(e.lower / w - 1.0).max(w / e.upper - 1.0);
            if e.lower > w * (1.0 + 1e-12) || w > e.upper * (1.0 + 1e-12) {
                violations += 1;
            }
        }
    }
    Ok((violations == 0, format!("{violations} violations in 4000 points; largest relative excess {worst:.2e} (negative: strictly inside)")))
}

fn gamma_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let quad = QuadSpec::new(1e-300, 60).map_err(err)?.with_rel_tol(1e-13);
    let mut worst: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..20 {
        let alpha = rng.gen_range(1.1..3.5);
        let beta = rng.gen_range(alpha - 1.0 + 0.05..8.0);
        let a = 10f64.powf(rng.gen_range(-3.0..2.0));
        let s = beta - alpha + 1.0;
        // x = e^t
        let f = |t: f64| (s * t - a * PI * (beta * t).exp()).exp();
        let peak = (s / (a * PI * beta)).ln() / beta;
        let q = integrate_breaks(f, &[f64::NEG_INFINITY, peak, f64::INFINITY], &quad).map_err(err)?;
        let h = (alpha - 1.0) / beta;
        let g = gamma(s / beta).map_err(err)?;
        let closed = PI.powf(h - 1.0) * g * a.powf(h - 1.0) / beta;
        let variant = PI.powf(h) * g * a.powf(h - 1.0) / beta;
        worst = worst.max((q / closed - 1.0).abs());
        worst_ratio = worst_ratio.max((variant / closed / PI - 1.0).abs());
    }
    let ok = worst <= 1e-8 && worst_ratio <= 1e-12;
    Ok((
        ok,
        format!(
            "20 random cases, max relative error {worst:.2e} against (1/β)π^((α−1)/β−1)Γ((1+β−α)/β)a^((α−1)/β−1); \
             the constant π^((α−1)/β) instead is too large by exactly π (max deviation of ratio/π from 1: {worst_ratio:.1e})"
        ),
    ))
}

fn e1_bracket() -> Check {
    let mut violations = 0;
    for x in log_space(1e-3, 50.0, 200) {
        let e1 = exp_integral_e1(x).map_err(err)?;
        let lo = 0.5 * (-x).exp() * (1.0 + 2.0 / x).ln();
        let hi = (-x).exp() * (1.0 + 1.0 / x).ln();
        if !(lo < e1 && e1 < hi) {
            violations += 1;
        }
    }
    Ok((violations == 0, format!("{violations} violations at 200 points")))
}

fn numeric_cwt() -> Check {
    let params = p(2.0, 2.0);
    let quad = QuadSpec::new(1e-9, 60).map_err(err)?;
    let mut worst: f64 = 0.0;
    for a in [0.05, 0.1, 0.5] {
        let n = partial_sum_terms(&params, a, 1e-8);
        for b in [0.0, 0.3, 1.7] {
            let f = |x: f64| genriemann::series::riemann_partial(&params, x, n);
            let w = cwt_numeric_periodic(f, 2.0, a, b, &quad).map_err(err)?;
            let wa = cwt_analytic(&params, a, b, 1e-12).map_err(err)?;
            worst = worst.max((w - wa).norm());
        }
    }
    Ok((worst <= 1e-6, format!("max |numeric − analytic| {worst:.2e} over 9 points")))
}

fn fluctuation_amplitude() -> Check {
    let quad = QuadSpec::new(1e-6, 50).map_err(err)?;
    let mut worst: f64 = 0.0;
    let z4 = zeta_minus_one(4.0).map_err(err)?;
    for beta in [1.0, 2.0, 3.0, 10.0] {
        worst = worst.max((l2_fluctuation(&p(2.0, beta), &quad).map_err(err)? - z4).abs());
    }
    let z6 = zeta_minus_one(6.0).map_err(err)?;
    worst = worst.max((l2_fluctuation(&p(3.0, 2.0), &quad).map_err(err)? - z6).abs());
    Ok((worst <= 1e-4, format!("max deviation {worst:.2e} over 5 cases")))
}

fn parseval() -> Check {
    let (s, z) = parseval_check(&p(2.0, 2.0), 1_000_000).map_err(err)?;
    Ok(((s - z).abs() <= 1e-6, format!("partial sum {s:.12}, ζ(4)−1 = {z:.12}, gap {:.2e}", z - s)))
}

fn mean_drift() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut violations = 0;
    let mut worst: f64 = f64::NEG_INFINITY;
    for _ in 0..50 {
        let alpha = rng.gen_range(1.5..=3.0);
        let beta = rng.gen_range(1.0..=12.0);
        let lo = rng.gen_range(-3.0..3.0);
        let hi = lo + rng.gen_range(0.05..4.0);
        let m = interval_mean(&p(alpha, beta), lo, hi, 1e-11).map_err(err)?;
        let drift = (m.mean_r - m.mean_s).abs();
        worst = worst.max(drift - m.bound);
        if drift > m.bound + 1e-10 {
            violations += 1;
        }
    }
    Ok((violations == 0, format!("{violations} violations in 50 cases; max(drift − bound) {worst:.2e}")))
}

fn theta_check() -> Check {
    let mut worst: f64 = 0.0;
    for a in [0.05, 0.2, 1.0, 5.0] {
        let d = theta_w_at_one_direct(a).map_err(err)?;
        let q = theta_w_at_one_poisson(a).map_err(err)?;
        worst = worst.max((d - q).norm() / d.norm());
    }
    let scales = log_space(1e-5, 1e-2, 32);
    let w: Vec<f64> = scales
        .iter()
        .map(|&a| theta_w_at_one_poisson(a).map(|w| w.norm()))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let slope = slope_of(&scales, &w)?;
    let ok = worst <= 1e-12 && (slope - 1.0).abs() <= 0.01;
    Ok((ok, format!("max relative gap {worst:.2e}; slope on [1e-5,1e-2] {slope:.5}")))
}

fn reconstruction() -> Check {
    let params = p(2.0, 2.0);
    let tau = 1e-4;
    let quad = QuadSpec::new(tau, 50).map_err(err)?;
    let coarse = ReconParams::new(1e-3, 1e3, 1e3, quad).map_err(err)?;
    let fine = ReconParams::new(5e-4, 2e3, 1e3, quad).map_err(err)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for x in [0.3, 0.7, 1.2] {
        let f = riemann_eval(&params, x, 1e-8).map_err(err)?;
        let e1 = (reconstruct_approx(&params, x, &coarse).map_err(err)?.value - f).abs();
        let e2 = (reconstruct_approx(&params, x, &fine).map_err(err)?.value - f).abs();
        // both errors carry up to τ of quadrature noise
        let good = e1 <= 0.05 && e2 <= e1 + 2.0 * tau;
        ok &= good;
        parts.push(format!("x={x}: {e1:.3e} -> {e2:.3e}"));
    }
    Ok((ok, parts.join("; ")))
}

fn kernel_checks() -> Check {
    let quad = QuadSpec::new(1e-13, 50).map_err(err)?;
    let mut xs = lin_space(0.0, 3.0, 25);
    xs.extend(log_space(3.5, 40.0, 25));
    let mut worst: f64 = 0.0;
    for xi in xs {
        worst = worst.max((kernel_m_quadrature(xi, &quad).map_err(err)? - kernel_m(xi)).abs());
    }
    let adm = admissibility_integral();
    let ok = kernel_m(0.0) == 1.0 && worst <= 1e-10 && (adm - 1.0).abs() <= 1e-10;
    Ok((ok, format!("m(0) = {}; closed form vs quadrature {worst:.2e}; admissibility − 1 = {:.2e}", kernel_m(0.0), adm - 1.0)))
}

fn nonharmonic_slope() -> Check {
    let params = p(2.0, 2.0);
    let spec = NonharmonicSpec::perturbed(&params).map_err(err)?;
    let scales = log_space(1e-6, 1e-3, 32);
    let w: Vec<f64> = scales
        .iter()
        .map(|&a| cwt_nonharmonic(&spec, a, 0.0, 1e-10 * a).map(|w| w.norm()))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let slope = slope_of(&scales, &w)?;
    Ok(((slope - 0.5).abs() <= 0.05, format!("slope {slope:.4}")))
}

#[derive(Default)]
struct Tally {
    checked: usize,
    failed: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed.push(what());
        }
    }
}

fn invariants() -> Check {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(14);

    // series: oddness, periodicity, boundedness, proximity to sin(πx)
    let tol = 1e-6;
    for _ in 0..200 {
        let alpha = rng.gen_range(2.5..4.0);
        let beta = if rng.gen_bool(0.5) { rng.gen_range(1..=6) as f64 } else { rng.gen_range(0.5..8.0) };
        let x = rng.gen_range(-5.0..5.0);
        let params = p(alpha, beta);
        let r = riemann_eval(&params, x, tol).map_err(err)?;
        let rm = riemann_eval(&params, -x, tol).map_err(err)?;
        t.check((r + rm).abs() <= 2.0 * tol, || format!("oddness ({alpha},{beta}) x={x}"));
        t.check(r.abs() <= zeta(alpha).map_err(err)? + tol, || format!("bound ({alpha},{beta}) x={x}"));
        let dev = sup_deviation_bound(alpha).map_err(err)?;
        t.check((r - sin_baseline(x)).abs() <= dev + tol, || format!("proximity ({alpha},{beta}) x={x}"));
        if params.integer_beta().is_some() {
            let r2 = riemann_eval(&params, x + 2.0, tol).map_err(err)?;
            t.check((r2 - r).abs() <= 2.0 * tol, || format!("period ({alpha},{beta}) x={x}"));
        }
    }
    let params = p(2.0, 2.0);
    let dev = sup_deviation_bound(2.0).map_err(err)?;
    for x in lin_space(-1.0, 1.0, 1000) {
        let r = riemann_eval(&params, x, 1e-4).map_err(err)?;
        t.check((r - sin_baseline(x)).abs() <= dev + 1e-4, || format!("pointwise deviation x={x}"));
    }

    // cwt: modulus maximal at b = 0, equal columns at b ≡ 0 mod 2 for integer β, limits in a
    let positions = lin_space(-3.0, 3.0, 61);
    for _ in 0..40 {
        let alpha = rng.gen_range(1.5..4.0);
        let beta = if rng.gen_bool(0.5) { rng.gen_range(1..=6) as f64 } else { rng.gen_range(0.5..8.0) };
        let a = 10f64.powf(rng.gen_range(-4.0..1.0));
        let params = p(alpha, beta);
        let sg = scalogram(&params, &[a], &positions, 1e-13).map_err(err)?;
        let row = sg.row(0);
        let peak = row[30].norm();
        let max = row.iter().map(|w| w.norm()).fold(0.0, f64::max);
        t.check(max <= peak * (1.0 + 1e-12) + 1e-13, || format!("sup at b=0 ({alpha},{beta}) a={a}"));
        if params.integer_beta().is_some() {
            for j in [10, 50] {
                t.check(row[j] == row[30], || format!("column b={} ({alpha},{beta}) a={a}", positions[j]));
            }
        }
    }
    for (alpha, beta) in [(2.0, 1.0), (2.0, 2.0), (3.0, 5.0)] {
        let params = p(alpha, beta);
        let (tiny, small) = (w0(&params, 1e-12)?, w0(&params, 1e-6)?);
        let (big, huge) = (w0(&params, 10.0)?, w0(&params, 100.0)?);
        t.check(tiny < small && huge < big && huge < 1e-100, || format!("scale limits ({alpha},{beta})"));
    }

    // holder: slopes decrease with β
    let s: Vec<f64> = [2.0, 4.0, 10.0]
        .iter()
        .map(|&b| estimate_uniform_exponent(&p(2.0, b), 1e-6, 1e-3, 32, 1e-10).map(|f| f.fit.slope))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    t.check(s[0] > s[1] && s[1] > s[2], || format!("slope hierarchy {s:?}"));

    // fluctuation: β-independence, Parseval from below
    let quad = QuadSpec::new(1e-6, 50).map_err(err)?;
    let l2: Vec<f64> = [1.0, 2.0, 3.0, 5.0, 10.0]
        .iter()
        .map(|&b| l2_fluctuation(&p(2.0, b), &quad))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let spread = l2.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v)) - l2.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    t.check(spread <= 2e-4, || format!("fluctuation spread {spread}"));
    let mut prev = 0.0;
    for m in [1, 10, 100, 1000, 10_000, 100_000] {
        let (s, z) = parseval_check(&p(2.0, 2.0), m).map_err(err)?;
        t.check(s >= prev && s <= z, || format!("parseval M={m}"));
        prev = s;
    }

    // numerics: Γ recurrence, monotonicity of Γ(x,·) and ζ
    for x in lin_space(0.1, 10.0, 40) {
        let (g1, g) = (gamma(x + 1.0).map_err(err)?, gamma(x).map_err(err)?);
        t.check((g1 - x * g).abs() <= 1e-10 * g1, || format!("gamma recurrence x={x}"));
        let mut last = f64::INFINITY;
        for y in lin_space(0.0, 20.0, 21) {
            let v = upper_incomplete_gamma(x, y).map_err(err)?;
            t.check(v < last, || format!("Γ({x}, ·) not decreasing at {y}"));
            last = v;
        }
    }
    let mut last = f64::INFINITY;
    for s in lin_space(1.05, 30.0, 60) {
        let z = zeta(s).map_err(err)?;
        t.check(z < last, || format!("zeta not decreasing at {s}"));
        last = z;
    }

    // reconstruction kernel: m ≤ 1, decreasing
    let mut last = 1.0;
    for xi in lin_space(0.0, 30.0, 301).into_iter().skip(1) {
        let m = kernel_m(xi);
        t.check(m < last && m < 1.0, || format!("kernel_m at {xi}"));
        last = m;
    }

    let n_failed = t.failed.len();
    let mut detail = format!("{n_failed} violations in {} checks", t.checked);
    if n_failed > 0 {
        detail.push_str(&format!(" (first: {})", t.failed[0]));
    }
    Ok((n_failed == 0, detail))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Option<f64>); 14] = [
        ("exponent recovery", exponent_recovery, None),
        ("critical case", critical_case, None),
        ("envelope sandwich", envelope_sandwich, None),
        ("gamma identity", gamma_identity, None),
        ("E1 bracket", e1_bracket, None),
        ("analytic vs numeric transform", numeric_cwt, Some(120.0)),
        ("fluctuation amplitude", fluctuation_amplitude, None),
        ("Parseval partial sums", parseval, None),
        ("mean drift", mean_drift, None),
        ("theta representations", theta_check, None),
        ("reconstruction", reconstruction, Some(600.0)),
        ("kernel checks", kernel_checks, None),
        ("nonharmonic slope", nonharmonic_slope, None),
        ("invariant suites", invariants, None),
    ];
    let mut failures = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        let (mut ok, mut detail) = match outcome {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        if let Some(limit) = limit {
            if secs > *limit {
                ok = false;
                detail.push_str(&format!("; over the {limit} s budget"));
            }
        }
        if !ok {
            failures += 1;
        }
        println!("{} {:>2} {name} ({secs:.1} s): {detail}", if ok { "PASS" } else { "FAIL" }, k + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
