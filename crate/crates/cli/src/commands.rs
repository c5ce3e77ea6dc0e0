use std::f64::consts::PI;

use genriemann::cwt::{cwt_analytic, cwt_nonharmonic, scalogram};
use genriemann::fluctuation::{interval_mean, l2_fluctuation};
use genriemann::holder::{
    envelope, estimate_uniform_exponent, pointwise_decay_check, theoretical_exponent,
    theta_w_at_one_direct, theta_w_at_one_poisson, DecayGrid,
};
use genriemann::numerics::{fit_line, lin_space, log_space, zeta_minus_one, LineFit, QuadSpec};
use genriemann::reconstruction::{reconstruct_approx, ReconParams};
use genriemann::series::{riemann_eval, sin_baseline, NonharmonicSpec, SeriesParams};
use serde_json::json;

use crate::output::{num, CliError, CliResult, Csv};
use crate::{Command, Exponents, Preset, Report, Scales};

fn params(e: Exponents) -> CliResult<SeriesParams> {
    Ok(SeriesParams::new(e.alpha, e.beta)?)
}

fn positive(name: &str, v: f64) -> CliResult<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::Argument(format!("--{name} must be positive, got {v}")))
    }
}

fn ordered(lo_name: &str, lo: f64, hi_name: &str, hi: f64) -> CliResult<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(CliError::Argument(format!("need --{lo_name} < --{hi_name}, got {lo} and {hi}")))
    }
}

fn scale_grid(s: &Scales) -> CliResult<Vec<f64>> {
    positive("amin", s.amin)?;
    ordered("amin", s.amin, "amax", s.amax)?;
    if s.nscales < 2 {
        return Err(CliError::Argument(format!("--nscales must be at least 2, got {}", s.nscales)));
    }
    Ok(log_space(s.amin, s.amax, s.nscales))
}

fn fit_footer(fit: &LineFit, theoretical: f64, extra: (&str, &str)) -> String {
    let mut v = json!({
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "theoretical": theoretical,
    });
    v[extra.0] = json!(extra.1);
    v.to_string()
}

pub fn dispatch(command: Command) -> CliResult<Report> {
    match command {
        Command::Eval { exps, from, to, points, tol, .. } => eval(exps, from, to, points, tol),
        Command::Cwt { exps, scales, bmin, bmax, npos, tol, .. } => cwt(exps, &scales, bmin, bmax, npos, tol),
        Command::Exponent { exps, scales, tol, .. } => exponent(exps, &scales, tol),
        Command::Envelope { exps, scales, .. } => envelopes(exps, &scales),
        Command::Fluct { alpha, beta, tol, .. } => fluct(alpha, &beta, tol),
        Command::Mean { alpha, beta, lo, hi, tol, .. } => mean(alpha, &beta, lo, hi, tol),
        Command::Reconstruct { exps, x, eps, r, halfwidth, tol, true_tol, .. } => {
            reconstruct(exps, &x, eps, r, halfwidth, tol, true_tol)
        }
        Command::ThetaCheck { amin, amax, nscales, .. } => theta_check(&Scales { amin, amax, nscales }),
        Command::Pointwise { exps, x0, exponent, window, nscales, npos, decades, .. } => {
            let grid = DecayGrid {
                n_scales: nscales,
                n_positions: npos,
                decades,
            };
            pointwise(exps, x0, exponent, window, grid)
        }
        Command::Nonharmonic { preset, exps, scales, b, tol, .. } => nonharmonic(preset, exps, &scales, b, tol),
    }
}

fn eval(exps: Exponents, from: f64, to: f64, points: usize, tol: f64) -> CliResult<Report> {
    let p = params(exps)?;
    ordered("from", from, "to", to)?;
    positive("tol", tol)?;
    if points < 2 {
        return Err(CliError::Argument(format!("--points must be at least 2, got {points}")));
    }
    let mut csv = Csv::new(&["x", "r", "s"]);
    let mut plot = Vec::with_capacity(points);
    for x in lin_space(from, to, points) {
        let r = riemann_eval(&p, x, tol)?;
        csv.row(vec![num(x), num(r), num(sin_baseline(x))]);
        plot.push((x, r));
    }
    Ok(Report {
        csv: csv.render(),
        plot: Some(plot),
    })
}

fn cwt(exps: Exponents, scales: &Scales, bmin: f64, bmax: f64, npos: usize, tol: f64) -> CliResult<Report> {
    let p = params(exps)?;
    let a = scale_grid(scales)?;
    ordered("bmin", bmin, "bmax", bmax)?;
    positive("tol", tol)?;
    if npos < 2 {
        return Err(CliError::Argument(format!("--npos must be at least 2, got {npos}")));
    }
    let sg = scalogram(&p, &a, &lin_space(bmin, bmax, npos), tol)?;
    let mut csv = Csv::new(&["a", "b", "re_w", "im_w", "abs_w"]);
    for (i, &a) in sg.scales().iter().enumerate() {
        for (&b, w) in sg.positions().iter().zip(sg.row(i)) {
            csv.row(vec![num(a), num(b), num(w.re), num(w.im), num(w.norm())]);
        }
    }
    let plot = sg.positions().iter().zip(sg.row(0)).map(|(&b, w)| (b, w.norm())).collect();
    Ok(Report {
        csv: csv.render(),
        plot: Some(plot),
    })
}

fn exponent(exps: Exponents, scales: &Scales, tol: f64) -> CliResult<Report> {
    let p = params(exps)?;
    scale_grid(scales)?;
    let fit = estimate_uniform_exponent(&p, scales.amin, scales.amax, scales.nscales, tol)?;
    let mut csv = Csv::new(&["a", "abs_w", "log_a", "log_abs_w"]);
    let mut plot = Vec::with_capacity(fit.scales.len());
    for (&a, &w) in fit.scales.iter().zip(&fit.moduli) {
        csv.row(vec![num(a), num(w), num(a.ln()), num(w.ln())]);
        plot.push((a.ln(), w.ln()));
    }
    let regime = fit.theoretical.regime.to_string();
    csv.footer(fit_footer(&fit.fit, fit.theoretical.value, ("regime", &regime)));
    Ok(Report {
        csv: csv.render(),
        plot: Some(plot),
    })
}

fn envelopes(exps: Exponents, scales: &Scales) -> CliResult<Report> {
    let p = params(exps)?;
    let grid = scale_grid(scales)?;
    let mut csv = Csv::new(&["a", "lower", "abs_w", "upper"]);
    let mut plot = Vec::with_capacity(grid.len());
    let mut violations = 0usize;
    for a in grid {
        let e = envelope(&p, a)?;
        let tol = 1e-15 * a * PI * (-a * PI).exp();
        let w = cwt_analytic(&p, a, 0.0, tol.max(f64::MIN_POSITIVE))?.norm();
        if e.lower > w * (1.0 + 1e-12) || w > e.upper * (1.0 + 1e-12) {
            violations += 1;
        }
        csv.row(vec![num(a), num(e.lower), num(w), num(e.upper)]);
        plot.push((a.ln(), w.ln()));
    }
    csv.footer(json!({ "violations": violations }).to_string());
    Ok(Report {
        csv: csv.render(),
        plot: Some(plot),
    })
}

fn fluct(alpha: f64, betas: &[f64], tol: f64) -> CliResult<Report> {
    positive("tol", tol)?;
    let quad = QuadSpec::new(tol, 50)?;
    let mut csv = Csv::new(&["beta", "l2_measured", "l2_theoretical", "abs_err"]);
    for &beta in betas {
        let p = SeriesParams::new(alpha, beta)?;
        let measured = l2_fluctuation(&p, &quad)?;
        let theory = zeta_minus_one(2.0 * alpha)?;
        csv.row(vec![num(beta), num(measured), num(theory), num((measured - theory).abs())]);
    }
    Ok(Report {
        csv: csv.render(),
        plot: None,
    })
}

fn mean(alpha: f64, betas: &[f64], lo: f64, hi: f64, tol: f64) -> CliResult<Report> {
    ordered("lo", lo, "hi", hi)?;
    positive("tol", tol)?;
    let mut csv = Csv::new(&["beta", "lo", "hi", "mean_r", "mean_s", "bound"]);
    for &beta in betas {
        let p = SeriesParams::new(alpha, beta)?;
        let m = interval_mean(&p, lo, hi, tol)?;
        csv.row(vec![num(beta), num(lo), num(hi), num(m.mean_r), num(m.mean_s), num(m.bound)]);
    }
    Ok(Report {
        csv: csv.render(),
        plot: None,
    })
}

fn reconstruct(
    exps: Exponents,
    xs: &[f64],
    eps: f64,
    r: f64,
    halfwidth: f64,
    tol: f64,
    true_tol: f64,
) -> CliResult<Report> {
    let p = params(exps)?;
    positive("tol", tol)?;
    positive("true-tol", true_tol)?;
    let rp = ReconParams::new(eps, r, halfwidth, QuadSpec::new(tol, 50)?)?;
    let mut csv = Csv::new(&["x", "f_true", "f_recon", "abs_err", "eps", "r"]);
    for &x in xs {
        let f = riemann_eval(&p, x, true_tol)?;
        let rec = reconstruct_approx(&p, x, &rp)?;
        csv.row(vec![num(x), num(f), num(rec.value), num((rec.value - f).abs()), num(eps), num(r)]);
    }
    Ok(Report {
        csv: csv.render(),
        plot: None,
    })
}

fn theta_check(scales: &Scales) -> CliResult<Report> {
    let grid = scale_grid(scales)?;
    let mut csv = Csv::new(&["a", "direct", "poisson", "rel_diff"]);
    let mut plot = Vec::with_capacity(grid.len());
    let mut max_rel: f64 = 0.0;
    for &a in &grid {
        let d = theta_w_at_one_direct(a)?;
        let q = theta_w_at_one_poisson(a)?;
        let rel = (d - q).norm() / d.norm();
        max_rel = max_rel.max(rel);
        csv.row(vec![num(a), num(d.im), num(q.im), num(rel)]);
        plot.push((a.ln(), q.norm().ln()));
    }
    let (la, lw): (Vec<f64>, Vec<f64>) = plot.iter().copied().unzip();
    let fit = fit_line(&la, &lw)?;
    let mut footer = json!({
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
    });
    footer["max_rel_diff"] = json!(max_rel);
    csv.footer(footer.to_string());
    Ok(Report {
        csv: csv.render(),
        plot: Some(plot),
    })
}

fn pointwise(exps: Exponents, x0: f64, exponent: f64, window: f64, grid: DecayGrid) -> CliResult<Report> {
    let p = params(exps)?;
    let r = pointwise_decay_check(&p, x0, exponent, window, grid)?;
    let mut csv = Csv::new(&["x0", "exponent", "min_constant", "local_slope", "r_squared", "growth", "n_points"]);
    csv.row(vec![
        num(x0),
        num(exponent),
        num(r.min_constant),
        num(r.local_slope.slope),
        num(r.local_slope.r_squared),
        r.growth.to_string(),
        r.n_points.to_string(),
    ]);
    Ok(Report {
        csv: csv.render(),
        plot: None,
    })
}

fn nonharmonic(preset: Preset, exps: Exponents, scales: &Scales, b: f64, tol: f64) -> CliResult<Report> {
    let p = params(exps)?;
    let grid = scale_grid(scales)?;
    positive("tol", tol)?;
    if !b.is_finite() {
        return Err(CliError::Argument(format!("--b must be finite, got {b}")));
    }
    let (spec, name) = match preset {
        Preset::Riemann => (NonharmonicSpec::riemann(&p), "riemann"),
        Preset::Perturbed => (NonharmonicSpec::perturbed(&p)?, "perturbed"),
    };
    let mut csv = Csv::new(&["a", "re_w", "im_w", "abs_w"]);
    let mut la = Vec::with_capacity(grid.len());
    let mut lw = Vec::with_capacity(grid.len());
    for &a in &grid {
        let w = cwt_nonharmonic(&spec, a, b, tol * a)?;
        csv.row(vec![num(a), num(w.re), num(w.im), num(w.norm())]);
        la.push(a.ln());
        lw.push(w.norm().ln());
    }
    let fit = fit_line(&la, &lw)?;
    csv.footer(fit_footer(&fit, theoretical_exponent(&p).value, ("preset", name)));
    Ok(Report {
        csv: csv.render(),
        plot: Some(la.into_iter().zip(lw).collect()),
    })
}
