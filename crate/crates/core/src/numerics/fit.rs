use crate::error::{Error, Result};

/// Ordinary least-squares fit `y ≈ slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination, clamped to `[0, 1]`.
    pub r_squared: f64,
    pub n_points: usize,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() {
        return Err(Error::argument(format!(
            "fit_line: {} abscissae but {} ordinates",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::argument("fit_line needs at least two points"));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::argument("fit_line: non-finite sample"));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::argument("fit_line: all abscissae are equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let ss_res: f64 = xs
            .iter()
            .zip(ys)
            .map(|(&x, &y)| {
                let r = y - (slope * x + intercept);
                r * r
            })
            .sum();
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(LineFit { slope, intercept, r_squared, n_points: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_points() {
        let f = fit_line(&[0.0, 1.0], &[0.0, 1.0]).unwrap();
        assert_eq!((f.slope, f.intercept, f.r_squared, f.n_points), (1.0, 0.0, 1.0, 2));
    }

    #[test]
    fn constant_data_has_zero_slope() {
        let f = fit_line(&[1.0, 2.0, 5.0], &[3.0, 3.0, 3.0]).unwrap();
        assert_eq!(f.slope, 0.0);
        assert_eq!(f.r_squared, 1.0);
    }

    #[test]
    fn exact_line() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64 * 0.7 - 2.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 3.0).collect();
        let f = fit_line(&xs, &ys).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!((f.intercept - 3.0).abs() < 1e-12);
        assert_eq!(f.n_points, 10);
    }

    #[test]
    fn argument_errors() {
        assert!(fit_line(&[1.0], &[1.0]).is_err());
        assert!(fit_line(&[1.0, 1.0], &[0.0, 2.0]).is_err());
        assert!(fit_line(&[1.0, 2.0], &[0.0]).is_err());
    }

    proptest! {
        #[test]
        fn r_squared_in_unit_interval(ys in prop::collection::vec(-1e3f64..1e3, 3..40)) {
            let xs: Vec<f64> = (0..ys.len()).map(|i| i as f64).collect();
            let f = fit_line(&xs, &ys).unwrap();
            prop_assert!((0.0..=1.0).contains(&f.r_squared));
            prop_assert_eq!(f.n_points, ys.len());
        }
    }
}
