//! Epsilon sweeps of the L2 solvers and log-log slope fits of the
//! coefficient errors.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::{abs, narrow, Wide};
use crate::l2::{error_bound_with_m, solve, ApproxResult, Method, BOUND_GRID};
use crate::moment::alpha_table;
use crate::poly::{
    exact_wide, sample_remainder_bound, taylor_coefficients_wide, taylor_truncation, FunctionSpec,
    Polynomial,
};
use crate::scalar::{Mode, Scalar};

pub const MIN_FIT_POINTS: usize = 5;

/// One epsilon of a sweep. A failed solve keeps `epsilon` and `method`, has
/// empty coefficient lists and carries the diagnostic in `status`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub epsilon: Scalar,
    pub coefficients: Vec<Scalar>,
    pub taylor: Vec<Scalar>,
    /// `|a_{i,eps} - f^(i)(x0)/i!|`.
    pub coef_errors: Vec<Scalar>,
    /// Coefficient error bounds with sampled `M`.
    pub bounds: Vec<f64>,
    pub residual_l2: Option<f64>,
    pub method: Method,
    pub status: Option<String>,
}

impl SweepRecord {
    pub fn failed(&self) -> bool {
        self.status.is_some()
    }
}

/// Taylor coefficients at `x0`: exact in rational mode, double-double in
/// floating mode.
pub struct TaylorReference {
    exact: Polynomial,
    wide: Vec<Wide>,
}

impl TaylorReference {
    pub fn new(f: &FunctionSpec, x0: &Scalar, k: usize) -> Result<Self> {
        let exact = taylor_truncation(f, x0, k)?;
        let wide = match x0.mode() {
            Mode::Float => taylor_coefficients_wide(f, x0.to_f64(), k),
            Mode::Rational => exact.coeffs().iter().map(exact_wide).collect(),
        };
        Ok(TaylorReference { exact, wide })
    }

    pub fn coefficients(&self) -> Vec<Scalar> {
        match self.exact.mode() {
            Mode::Rational => self.exact.coeffs().to_vec(),
            Mode::Float => self
                .wide
                .iter()
                .map(|&t| Scalar::Float(narrow(t)))
                .collect(),
        }
    }

    /// `|a_i - tau_i|`, formed before rounding in floating mode.
    pub fn errors(&self, r: &ApproxResult) -> Result<Vec<Scalar>> {
        match self.exact.mode() {
            Mode::Rational => r
                .poly
                .coeffs()
                .iter()
                .zip(self.exact.coeffs())
                .map(|(a, t)| a.sub(t).map(|d| d.abs()))
                .collect(),
            Mode::Float => Ok(r
                .coeffs_wide()
                .iter()
                .zip(&self.wide)
                .map(|(&a, &t)| Scalar::Float(narrow(abs(a - t))))
                .collect()),
        }
    }
}

/// `steps` log-spaced values from `eps_max` down to `eps_min`.
pub fn log_grid(eps_max: f64, eps_min: f64, steps: usize) -> Vec<f64> {
    let (hi, lo) = (eps_max.log10(), eps_min.log10());
    (0..steps)
        .map(|j| match j {
            0 => eps_max,
            _ if j == steps - 1 => eps_min,
            _ => 10f64.powf(hi + (lo - hi) * j as f64 / (steps - 1) as f64),
        })
        .collect()
}

/// Runs the solver at every grid epsilon, in parallel, and returns records
/// in descending epsilon.
///
/// Rational `x0` needs a polynomial `f`; grid values are then converted to
/// rationals exactly.
pub fn sweep(
    f: &FunctionSpec,
    x0: &Scalar,
    k: usize,
    eps_max: f64,
    eps_min: f64,
    steps: usize,
    method: Method,
) -> Result<Vec<SweepRecord>> {
    let (a, b) = f.domain();
    let x0f = x0.to_f64();
    if !(eps_min > 0.0 && eps_min <= eps_max) {
        return Err(Error::invalid(format!(
            "need 0 < eps_min <= eps_max, got {eps_min} and {eps_max}"
        )));
    }
    if eps_max > (x0f - a).min(b - x0f) {
        return Err(Error::invalid(format!(
            "eps_max = {eps_max} leaves the domain [{a}, {b}] around x0 = {x0f}"
        )));
    }
    if steps < MIN_FIT_POINTS {
        return Err(Error::invalid(format!(
            "need at least {MIN_FIT_POINTS} steps, got {steps}"
        )));
    }
    let taylor = TaylorReference::new(f, x0, k)?;
    let alpha = alpha_table(k)?;
    let grid = log_grid(eps_max, eps_min, steps);
    grid.par_iter()
        .map(|&eps| {
            let eps_s = Scalar::from_f64(x0.mode(), eps)?;
            let record = match solve(f, x0, &eps_s, k, method) {
                Ok(r) => {
                    let coef_errors = taylor.errors(&r)?;
                    let m = sample_remainder_bound(f, x0f, k, eps, BOUND_GRID)?;
                    let bounds = (0..=k)
                        .map(|i| error_bound_with_m(&alpha, k, i, eps, m))
                        .collect();
                    SweepRecord {
                        epsilon: eps_s,
                        coefficients: r.poly.coeffs().to_vec(),
                        taylor: taylor.coefficients(),
                        coef_errors,
                        bounds,
                        residual_l2: Some(r.residual_l2),
                        method,
                        status: None,
                    }
                }
                Err(e) => SweepRecord {
                    epsilon: eps_s,
                    coefficients: Vec::new(),
                    taylor: Vec::new(),
                    coef_errors: Vec::new(),
                    bounds: Vec::new(),
                    residual_l2: None,
                    method,
                    status: Some(e.to_string()),
                },
            };
            Ok(record)
        })
        .collect()
}

/// Least-squares line through `(ln eps, ln err_i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub i: usize,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub eps_range: (f64, f64),
    pub points: usize,
    /// Records left out because the error was exactly zero.
    pub zeros_excluded: usize,
}

/// Ordinary least squares `y = slope x + intercept` with `r^2`.
pub fn ols(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).min(1.0)
    };
    (slope, my - slope * mx, r2)
}

/// One fit per coefficient index. Failed records and zero errors are
/// skipped; an index with fewer than five usable points is refused.
pub fn fit_slopes(records: &[SweepRecord]) -> Vec<Result<SlopeFit>> {
    let ok: Vec<&SweepRecord> = records.iter().filter(|r| !r.failed()).collect();
    let n = ok.iter().map(|r| r.coef_errors.len()).max().unwrap_or(0);
    (0..n)
        .map(|i| {
            let mut x = Vec::new();
            let mut y = Vec::new();
            let mut zeros = 0;
            for r in &ok {
                let err = r.coef_errors[i].to_f64();
                if err == 0.0 {
                    zeros += 1;
                } else {
                    x.push(r.epsilon.to_f64().ln());
                    y.push(err.ln());
                }
            }
            if x.len() < MIN_FIT_POINTS {
                return Err(Error::FitRefused {
                    index: i,
                    usable: x.len(),
                });
            }
            let (slope, intercept, r_squared) = ols(&x, &y);
            let lo = x.iter().cloned().fold(f64::INFINITY, f64::min).exp();
            let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max).exp();
            Ok(SlopeFit {
                i,
                slope,
                intercept,
                r_squared,
                eps_range: (lo, hi),
                points: x.len(),
                zeros_excluded: zeros,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::registry_lookup;

    fn synthetic(power: i32) -> Vec<SweepRecord> {
        log_grid(1e-1, 1e-3, 10)
            .into_iter()
            .map(|e| SweepRecord {
                epsilon: Scalar::Float(e),
                coefficients: vec![Scalar::Float(0.0)],
                taylor: vec![Scalar::Float(0.0)],
                coef_errors: vec![Scalar::Float(e.powi(power))],
                bounds: vec![0.0],
                residual_l2: Some(0.0),
                method: Method::NormalEquations,
                status: None,
            })
            .collect()
    }

    #[test]
    fn exact_power_law_fits() {
        let fit = fit_slopes(&synthetic(3)).remove(0).unwrap();
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.points, 10);
    }

    #[test]
    fn too_few_points_are_refused() {
        let mut records = synthetic(2);
        records.truncate(4);
        assert!(matches!(
            fit_slopes(&records)[0],
            Err(Error::FitRefused {
                index: 0,
                usable: 4
            })
        ));
    }

    #[test]
    fn grid_is_descending_with_exact_ends() {
        let g = log_grid(1e-1, 1e-3, 10);
        assert_eq!((g[0], g[9]), (1e-1, 1e-3));
        assert!(g.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn cos_has_exact_odd_coefficients() {
        let f = registry_lookup("cos").unwrap();
        let recs = sweep(
            &f,
            &Scalar::Float(0.0),
            2,
            1e-1,
            1e-3,
            10,
            Method::NormalEquations,
        )
        .unwrap();
        assert!(recs.iter().all(|r| r.coef_errors[1].to_f64() == 0.0));
    }

    #[test]
    fn sweep_validates() {
        let f = registry_lookup("exp").unwrap();
        let x0 = Scalar::Float(0.0);
        assert!(sweep(&f, &x0, 2, 1.5, 1e-3, 10, Method::NormalEquations).is_err());
        assert!(sweep(&f, &x0, 2, 1e-1, 0.0, 10, Method::NormalEquations).is_err());
        assert!(sweep(&f, &x0, 2, 1e-1, 1e-3, 4, Method::NormalEquations).is_err());
    }
}
