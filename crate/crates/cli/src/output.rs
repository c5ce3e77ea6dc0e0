//! CSV formatting, SVG line plots and the error type shared by the commands.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] genriemann::Error),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 argument, 3 convergence, 4 scope, 5 I/O, 6 specification, 7 consistency.
    pub fn exit_code(&self) -> i32 {
        use genriemann::Error as E;
        match self {
            CliError::Argument(_) => 2,
            CliError::Io { .. } => 5,
            CliError::Lib(e) => match e {
                E::Domain(_) | E::Argument(_) => 2,
                E::Convergence { .. } => 3,
                E::Scope(_) => 4,
                E::Specification(_) => 6,
                E::Consistency(_) => 7,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// A CSV document: header, rows and optional `# `-prefixed footer lines.
#[derive(Debug, Clone, Default)]
pub struct Csv {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    footer: Vec<String>,
}

impl Csv {
    pub fn new(header: &[&'static str]) -> Self {
        Csv {
            header: header.to_vec(),
            ..Default::default()
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn footer(&mut self, line: String) {
        self.footer.push(line);
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        for f in &self.footer {
            s.push_str("# ");
            s.push_str(f);
            s.push('\n');
        }
        s
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 50.0;

fn range(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// A standalone SVG 1.1 document with axes and one polyline through `series`.
pub fn render_svg(series: &[(f64, f64)]) -> CliResult<String> {
    if series.len() < 2 {
        return Err(CliError::Argument(format!("a plot needs at least 2 points, got {}", series.len())));
    }
    if series.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(CliError::Argument("cannot plot non-finite values".into()));
    }
    let (x0, x1) = range(series.iter().map(|p| p.0));
    let (y0, y1) = range(series.iter().map(|p| p.1));
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(s, r#"<line x1="{l}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{l}" y1="{b}" x2="{l}" y2="{t}" stroke="black"/>"#);
    let label = |v: f64| format!("{v:.4e}");
    let _ = writeln!(s, r#"<text x="{l}" y="{}" font-size="12">{}</text>"#, b + 20.0, label(x0));
    let _ = writeln!(s, r#"<text x="{r}" y="{}" font-size="12" text-anchor="end">{}</text>"#, b + 20.0, label(x1));
    let _ = writeln!(s, r#"<text x="{}" y="{b}" font-size="12" text-anchor="end">{}</text>"#, l - 4.0, label(y0));
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12" text-anchor="end">{}</text>"#, l - 4.0, t + 4.0, label(y1));
    s.push_str(r#"<polyline fill="none" stroke="steelblue" stroke-width="1" points=""#);
    for (k, &(x, y)) in series.iter().enumerate() {
        if k > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{:.3},{:.3}", px(x), py(y));
    }
    s.push_str("\"/>\n</svg>\n");
    Ok(s)
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn emit_svg(series: &[(f64, f64)], path: &Path) -> CliResult<()> {
    write_file(path, &render_svg(series)?)
}
