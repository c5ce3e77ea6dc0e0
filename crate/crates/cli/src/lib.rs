//! Command-line front end: each subcommand runs one analysis and writes a CSV
//! table (to `--out` or stdout) and, for some, an SVG line plot (`--svg`).
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 no convergence, 4 out of
//! scope, 5 I/O failure, 6 specification violated, 7 consistency check failed.

mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use output::{emit_svg, render_svg, CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "genriemann", version, about = "Wavelet analysis of generalized Riemann series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Exponents {
    /// Decay exponent α > 1 of the coefficients.
    #[arg(long)]
    pub alpha: f64,
    /// Frequency exponent β > 0.
    #[arg(long)]
    pub beta: f64,
}

#[derive(Debug, Clone, Args)]
pub struct Scales {
    #[arg(long, default_value_t = 1e-6)]
    pub amin: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub amax: f64,
    #[arg(long, default_value_t = 32)]
    pub nscales: usize,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Sink {
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Plot {
    #[command(flatten)]
    pub sink: Sink,
    /// Also write an SVG line plot here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// a_n = n^-α, λ_n = πn^β.
    Riemann,
    /// a_n = n^-α, λ_n = πn^β + 1.
    Perturbed,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample R_{α,β} and sin(πx) on a uniform grid (`x,r,s`).
    Eval {
        #[command(flatten)]
        exps: Exponents,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 4001)]
        points: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[command(flatten)]
        plot: Plot,
    },
    /// Scalogram of R_{α,β} (`a,b,re_w,im_w,abs_w`); the plot shows |W| at the smallest scale.
    Cwt {
        #[command(flatten)]
        exps: Exponents,
        #[command(flatten)]
        scales: Scales,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        bmin: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        bmax: f64,
        #[arg(long, default_value_t = 41)]
        npos: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        plot: Plot,
    },
    /// Log-log slope of |W(a,0)| with a JSON footer.
    Exponent {
        #[command(flatten)]
        exps: Exponents,
        #[command(flatten)]
        scales: Scales,
        /// Tolerance relative to aπe^{-aπ}.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        plot: Plot,
    },
    /// Lower and upper bounds for |W(a,0)| (`a,lower,abs_w,upper`).
    Envelope {
        #[command(flatten)]
        exps: Exponents,
        #[command(flatten)]
        scales: Scales,
        #[command(flatten)]
        plot: Plot,
    },
    /// Mean square deviation from sin(πx) over one period, for integer β.
    Fluct {
        #[arg(long)]
        alpha: f64,
        /// One or more β, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        beta: Vec<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        sink: Sink,
    },
    /// Means of R_{α,β} and sin(πx) over an interval.
    Mean {
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        beta: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        lo: f64,
        #[arg(long, allow_negative_numbers = true)]
        hi: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        sink: Sink,
    },
    /// Truncated wavelet inversion of R_{α,β} at the given points.
    Reconstruct {
        #[command(flatten)]
        exps: Exponents,
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.7,1.2", allow_negative_numbers = true)]
        x: Vec<f64>,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 1e3)]
        r: f64,
        /// Position-integral half-width in units of the scale.
        #[arg(long, default_value_t = 1e3)]
        halfwidth: f64,
        /// Target accuracy of the double integral.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        /// Accuracy of the reference values f_true.
        #[arg(long, default_value_t = 1e-7)]
        true_tol: f64,
        #[command(flatten)]
        sink: Sink,
    },
    /// W R_{2,2}(a,1) by direct summation and by its Poisson dual.
    ThetaCheck {
        #[arg(long, default_value_t = 1e-5)]
        amin: f64,
        #[arg(long, default_value_t = 1e-2)]
        amax: f64,
        #[arg(long, default_value_t = 32)]
        nscales: usize,
        #[command(flatten)]
        plot: Plot,
    },
    /// Pointwise decay bound for W(a,b) around x0.
    Pointwise {
        #[command(flatten)]
        exps: Exponents,
        #[arg(long, allow_negative_numbers = true)]
        x0: f64,
        #[arg(long)]
        exponent: f64,
        #[arg(long, default_value_t = 1e-2)]
        window: f64,
        #[arg(long, default_value_t = 24)]
        nscales: usize,
        #[arg(long, default_value_t = 41)]
        npos: usize,
        #[arg(long, default_value_t = 4.0)]
        decades: f64,
        #[command(flatten)]
        sink: Sink,
    },
    /// Transform of a preset nonharmonic series at one position, with a slope footer.
    Nonharmonic {
        #[arg(long, value_enum)]
        preset: Preset,
        #[command(flatten)]
        exps: Exponents,
        #[command(flatten)]
        scales: Scales,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        b: f64,
        /// Tolerance relative to the scale a.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        plot: Plot,
    },
}

/// Output of one command before it is written anywhere.
#[derive(Debug, Clone)]
pub struct Report {
    pub csv: String,
    pub plot: Option<Vec<(f64, f64)>>,
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                2
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> CliResult<()> {
    let (sink, svg) = match &command {
        Command::Eval { plot, .. }
        | Command::Cwt { plot, .. }
        | Command::Exponent { plot, .. }
        | Command::Envelope { plot, .. }
        | Command::ThetaCheck { plot, .. }
        | Command::Nonharmonic { plot, .. } => (plot.sink.clone(), plot.svg.clone()),
        Command::Fluct { sink, .. }
        | Command::Mean { sink, .. }
        | Command::Reconstruct { sink, .. }
        | Command::Pointwise { sink, .. } => (sink.clone(), None),
    };
    let report = commands::dispatch(command)?;
    match &sink.out {
        Some(path) => output::write_file(path, &report.csv)?,
        None => stdout.write_all(report.csv.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })?,
    }
    if let Some(path) = svg {
        let series = report
            .plot
            .ok_or_else(|| CliError::Argument("this command has nothing to plot".into()))?;
        emit_svg(&series, &path)?;
    }
    Ok(())
}
