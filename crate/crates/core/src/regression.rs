//! Simple OLS with the usual inference battery.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegressionError {
    #[error("x and y lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("x has zero variance")]
    DegenerateX,
    #[error("degrees of freedom must be at least 1, got {0}")]
    InvalidDf(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegressionFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    /// Standard error of the estimate, `sqrt(SSE / (n - 2))`.
    pub residual_se: f64,
    pub f_stat: f64,
    pub t_slope: f64,
    /// Two-tailed p-value of the slope.
    pub p_slope: f64,
    pub df: u32,
    pub n: usize,
}

impl RegressionFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

pub fn fit_ols(x: &[f64], y: &[f64]) -> Result<RegressionFit, RegressionError> {
    if x.len() != y.len() {
        return Err(RegressionError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(RegressionError::TooFewPoints(n));
    }
    let nf = n as f64;
    let x_mean = x.iter().sum::<f64>() / nf;
    let y_mean = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - x_mean;
        let dy = yi - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(RegressionError::DegenerateX);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let r = yi - (intercept + slope * xi);
            r * r
        })
        .sum();
    let df = (n - 2) as u32;
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    let adj_r_squared = 1.0 - (1.0 - r_squared) * (nf - 1.0) / (nf - 2.0);
    let residual_se = (sse / df as f64).sqrt();
    let slope_se = residual_se / sxx.sqrt();
    let t_slope = if slope_se == 0.0 {
        if slope == 0.0 {
            0.0
        } else {
            slope.signum() * f64::INFINITY
        }
    } else {
        slope / slope_se
    };
    // explained over unexplained variance, one regressor
    let ssr = slope * sxy;
    let f_stat = if sse == 0.0 {
        if ssr == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        ssr / (sse / df as f64)
    };
    let p_slope = student_t_sf(t_slope, df)?;
    Ok(RegressionFit {
        slope,
        intercept,
        r_squared,
        adj_r_squared,
        residual_se,
        f_stat,
        t_slope,
        p_slope,
        df,
        n,
    })
}

/// Two-tailed `P(|T| >= |t|)` for Student's t with `df` degrees of freedom,
/// computed as `I_{df/(df+t²)}(df/2, 1/2)`.
pub fn student_t_sf(t: f64, df: u32) -> Result<f64, RegressionError> {
    if df == 0 {
        return Err(RegressionError::InvalidDf(df));
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    let v = df as f64;
    let x = v / (v + t * t);
    Ok(regularized_incomplete_beta(x, 0.5 * v, 0.5))
}

/// Significance stars by the usual `p < .05 / .01 / .001` legend.
pub fn significance_stars(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

/// Trendline endpoints at `x_min` and `x_max`.
pub fn trendline_points(fit: &RegressionFit, x_min: f64, x_max: f64) -> [(f64, f64); 2] {
    [(x_min, fit.predict(x_min)), (x_max, fit.predict(x_max))]
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized incomplete beta `I_x(a, b)` by Lentz's continued fraction.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    // The fraction converges fast for x below the mean; use symmetry above it.
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(x, a, b) / a
    } else {
        1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b
    }
}

fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const MAX_ITER: usize = 500;
    const EPS: f64 = 1e-15;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_line() {
        let fit = fit_ols(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap();
        assert_abs_diff_eq!(fit.slope, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(fit.intercept, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(fit.r_squared, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(fit.residual_se, 0.0, epsilon = 1e-14);
        assert_eq!(fit.df, 1);
    }

    #[test]
    fn fit_errors() {
        assert_eq!(
            fit_ols(&[1.0, 2.0], &[1.0, 2.0]),
            Err(RegressionError::TooFewPoints(2))
        );
        assert_eq!(
            fit_ols(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(RegressionError::DegenerateX)
        );
        assert_eq!(
            fit_ols(&[1.0, 2.0, 3.0], &[1.0, 2.0]),
            Err(RegressionError::LengthMismatch(3, 2))
        );
    }

    #[test]
    fn fit_identities() {
        let x = [1.0, 2.0, 4.0, 5.0, 7.0, 8.5];
        let y = [1.1, 1.9, 4.2, 4.8, 7.5, 8.0];
        let fit = fit_ols(&x, &y).unwrap();
        assert!(((fit.f_stat - fit.t_slope * fit.t_slope) / fit.f_stat).abs() <= 1e-9);
        let n = x.len() as f64;
        assert_abs_diff_eq!(
            fit.adj_r_squared,
            1.0 - (1.0 - fit.r_squared) * (n - 1.0) / (n - 2.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn t_tail_reference_values() {
        assert_eq!(student_t_sf(0.0, 7).unwrap(), 1.0);
        let p = student_t_sf(2.469, 14).unwrap();
        assert!((0.026..=0.028).contains(&p), "{p}");
        let p = student_t_sf(-2.381, 10).unwrap();
        assert_abs_diff_eq!(p, 0.039, epsilon = 5e-4);
        // df = 1 is Cauchy: 1 - 2 atan(t) / pi
        let p = student_t_sf(2.0, 1).unwrap();
        assert_abs_diff_eq!(p, 1.0 - 2.0 * 2f64.atan() / std::f64::consts::PI, epsilon = 1e-13);
        assert_eq!(student_t_sf(1.0, 0), Err(RegressionError::InvalidDf(0)));
    }

    #[test]
    fn ln_gamma_known_values() {
        assert_abs_diff_eq!(ln_gamma(1.0), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ln_gamma(0.5), std::f64::consts::PI.sqrt().ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(ln_gamma(10.0), 362_880f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn stars() {
        assert_eq!(significance_stars(0.027), "*");
        assert_eq!(significance_stars(0.010), "*");
        assert_eq!(significance_stars(0.0099), "**");
        assert_eq!(significance_stars(0.0005), "***");
        assert_eq!(significance_stars(0.05), "");
    }

    #[test]
    fn trendline() {
        let mut fit = fit_ols(&[0.0, 1.0, 2.0], &[0.0, 2.0, 4.0]).unwrap();
        let pts = trendline_points(&fit, 0.0, 1.0);
        assert_abs_diff_eq!(pts[1].1, 2.0, epsilon = 1e-14);
        assert_eq!(pts[0].0, 0.0);
        fit.slope = 0.0;
        fit.intercept = 5.0;
        assert_eq!(trendline_points(&fit, -1.0, 1.0), [(-1.0, 5.0), (1.0, 5.0)]);
    }
}
