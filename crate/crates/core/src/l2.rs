//! Best L2 approximation on `[x0 - eps, x0 + eps]` in the basis `(x - x0)^i`.
//!
//! Both solvers work in `t = (x - x0) / eps`. The normal equations become
//! `2 Ã y = W̃` with `W̃_j = ∫_{-1}^{1} f(x0 + eps t) t^j dt` and
//! `a_i = y_i / eps^i`; the projection route expands
//! `sum_j (2j+1)/2 <f, P_j> P_j(t)` into monomials. Floating mode carries
//! double-double internally and rounds to `f64` at the end; rational mode
//! (polynomial `f` only) is exact.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::{narrow, wide, Wide};
use crate::moment::{normalized_exact, InverseStructure};
use crate::poly::{exact_wide, sample_remainder_bound, FunctionSpec, Polynomial};
use crate::quadrature::{
    default_nodes, integrate_moment_exact, integrate_once, integrate_refined,
    integrate_refined_with_floor, monomials, sampler, scaled_legendre_moments, scaled_moments,
    MAX_NODES,
};
use crate::scalar::{rational_to_f64, Mode, Scalar};

pub const FLOAT_DEGREE_CAP: usize = 12;
/// Grid used for the empirical remainder bound `M`.
pub const BOUND_GRID: usize = 201;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    NormalEquations,
    LegendreProjection,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::NormalEquations => "normal_equations",
            Method::LegendreProjection => "legendre_projection",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normal" | "normal_equations" => Ok(Method::NormalEquations),
            "legendre" | "legendre_projection" => Ok(Method::LegendreProjection),
            _ => Err(Error::invalid(format!(
                "unknown method '{s}'; expected normal or legendre"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ApproxResult {
    pub poly: Polynomial,
    pub epsilon: Scalar,
    pub method: Method,
    pub residual_l2: f64,
    /// `∫ (f - p)^2` exactly, rational mode only.
    pub residual_sq_exact: Option<BigRational>,
    /// Smallest `L D L^T` pivot of `2 Ã`, normal equations only.
    pub pivot_min: Option<f64>,
    wide: Vec<Wide>,
}

impl ApproxResult {
    /// Coefficients before rounding to `f64`.
    pub fn coeffs_wide(&self) -> &[Wide] {
        &self.wide
    }

    pub fn degree(&self) -> usize {
        self.wide.len() - 1
    }
}

struct Checked {
    x0: f64,
    eps: f64,
}

fn validate(f: &FunctionSpec, x0: &Scalar, eps: &Scalar, k: usize) -> Result<Checked> {
    if x0.mode() != eps.mode() {
        return Err(Error::ModeMismatch {
            left: x0.mode(),
            right: eps.mode(),
        });
    }
    if !eps.is_positive() {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    if k > f.smoothness() {
        return Err(Error::InsufficientSmoothness {
            k,
            n: f.smoothness(),
        });
    }
    match x0.mode() {
        Mode::Float if k > FLOAT_DEGREE_CAP => {
            return Err(Error::DegreeCap {
                k,
                cap: FLOAT_DEGREE_CAP,
            })
        }
        Mode::Rational if f.exact().map(Polynomial::mode) != Some(Mode::Rational) => {
            return Err(Error::invalid(format!(
                "rational mode needs a polynomial with rational coefficients, not {}",
                f.name()
            )))
        }
        _ => {}
    }
    let (x0f, epsf) = (x0.to_f64(), eps.to_f64());
    f.check_interval(x0f, epsf)?;
    Ok(Checked { x0: x0f, eps: epsf })
}

pub fn solve(
    f: &FunctionSpec,
    x0: &Scalar,
    eps: &Scalar,
    k: usize,
    method: Method,
) -> Result<ApproxResult> {
    match method {
        Method::NormalEquations => solve_normal(f, x0, eps, k),
        Method::LegendreProjection => solve_legendre(f, x0, eps, k),
    }
}

/// Normal equations `2 Ã y = W̃`, solved by `L D L^T`.
pub fn solve_normal(f: &FunctionSpec, x0: &Scalar, eps: &Scalar, k: usize) -> Result<ApproxResult> {
    let c = validate(f, x0, eps, k)?;
    if let (Scalar::Exact(x0q), Scalar::Exact(eq)) = (x0, eps) {
        let w = exact_scaled_moments(f, x0q, eq, k)?;
        let a2 = normalized_exact(k).map(|v| v * BigRational::from_integer(2.into()));
        let ldlt = a2.ldlt(&BigRational::zero())?;
        let pivot = ldlt.pivot_min().map(rational_to_f64);
        let y = ldlt.solve(&w);
        let mut r = exact_result(f, x0q, eq, unscale_exact(y, eq), Method::NormalEquations)?;
        r.pivot_min = pivot;
        return Ok(r);
    }
    let w = scaled_moments(f, c.x0, c.eps, k)?;
    let a2 = normalized_exact(k)
        .map(|v| exact_wide(&Scalar::Exact(v * BigRational::from_integer(2.into()))));
    let threshold = (k + 1) as f64 * f64::EPSILON * 2.0;
    let conditioning = |pivot_min: f64| Error::Conditioning {
        k,
        eps: c.eps,
        pivot_min,
    };
    let ldlt = a2.ldlt(&wide(0.0)).map_err(|_| conditioning(0.0))?;
    let pivot_min = ldlt.pivot_min().map_or(0.0, |p| narrow(*p));
    if !(pivot_min > threshold) {
        return Err(conditioning(pivot_min));
    }
    let y = ldlt.solve(&w);
    let mut r = float_result(
        f,
        c.x0,
        c.eps,
        unscale_wide(y, c.eps),
        Method::NormalEquations,
    )?;
    r.pivot_min = Some(pivot_min);
    Ok(r)
}

/// Projection onto Legendre polynomials, expanded into the shifted monomials.
pub fn solve_legendre(
    f: &FunctionSpec,
    x0: &Scalar,
    eps: &Scalar,
    k: usize,
) -> Result<ApproxResult> {
    let c = validate(f, x0, eps, k)?;
    let table = legendre_coefficients(k);
    if let (Scalar::Exact(x0q), Scalar::Exact(eq)) = (x0, eps) {
        let w = exact_scaled_moments(f, x0q, eq, k)?;
        let mut y = vec![BigRational::zero(); k + 1];
        for (j, row) in table.iter().enumerate() {
            let inner: BigRational = row.iter().zip(&w).map(|(c, w)| c * w).sum();
            let b = inner * BigRational::new((2 * j + 1).into(), 2.into());
            for (i, c) in row.iter().enumerate() {
                y[i] += &b * c;
            }
        }
        return exact_result(f, x0q, eq, unscale_exact(y, eq), Method::LegendreProjection);
    }
    let moments = scaled_legendre_moments(f, c.x0, c.eps, k)?;
    let mut y = vec![wide(0.0); k + 1];
    for (j, row) in table.iter().enumerate() {
        let b = moments[j] * (2 * j + 1) as f64 / 2.0;
        for (i, coef) in row.iter().enumerate() {
            y[i] += b * exact_wide(&Scalar::Exact(coef.clone()));
        }
    }
    float_result(
        f,
        c.x0,
        c.eps,
        unscale_wide(y, c.eps),
        Method::LegendreProjection,
    )
}

/// Monomial coefficients of `P_0, ..., P_k`: row `j` holds `P_j`.
pub fn legendre_coefficients(k: usize) -> Vec<Vec<BigRational>> {
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let mut row = vec![BigRational::zero(); k + 1];
        match n {
            0 => row[0] = BigRational::one(),
            1 => row[1] = BigRational::one(),
            _ => {
                // n P_n = (2n - 1) t P_{n-1} - (n - 1) P_{n-2}
                let a = BigRational::new((2 * n - 1).into(), n.into());
                let b = BigRational::new((n - 1).into(), n.into());
                for i in 0..=k {
                    let mut v = -&b * &rows[n - 2][i];
                    if i > 0 {
                        v += &a * &rows[n - 1][i - 1];
                    }
                    row[i] = v;
                }
            }
        }
        rows.push(row);
    }
    rows
}

fn exact_scaled_moments(
    f: &FunctionSpec,
    x0: &BigRational,
    eps: &BigRational,
    k: usize,
) -> Result<Vec<BigRational>> {
    let p = f.exact().expect("validated");
    (0..=k)
        .map(|j| Ok(integrate_moment_exact(p, x0, eps, j)? / Pow::pow(eps, (j + 1) as u32)))
        .collect()
}

fn unscale_exact(y: Vec<BigRational>, eps: &BigRational) -> Vec<BigRational> {
    y.into_iter()
        .enumerate()
        .map(|(i, v)| v / Pow::pow(eps, i as u32))
        .collect()
}

fn unscale_wide(y: Vec<Wide>, eps: f64) -> Vec<Wide> {
    let mut scale = wide(1.0);
    y.into_iter()
        .map(|v| {
            let a = v / scale;
            scale *= eps;
            a
        })
        .collect()
}

fn exact_result(
    f: &FunctionSpec,
    x0: &BigRational,
    eps: &BigRational,
    coeffs: Vec<BigRational>,
    method: Method,
) -> Result<ApproxResult> {
    let poly = Polynomial::from_rationals(x0.clone(), coeffs)?;
    let sq = l2_error_squared_exact(f.exact().expect("validated"), &poly, x0, eps)?;
    let wide_coeffs = poly.coeffs().iter().map(exact_wide).collect();
    Ok(ApproxResult {
        residual_l2: rational_to_f64(&sq).sqrt(),
        residual_sq_exact: Some(sq),
        poly,
        epsilon: Scalar::Exact(eps.clone()),
        method,
        pivot_min: None,
        wide: wide_coeffs,
    })
}

fn float_result(
    f: &FunctionSpec,
    x0: f64,
    eps: f64,
    coeffs: Vec<Wide>,
    method: Method,
) -> Result<ApproxResult> {
    let poly = Polynomial::from_f64(x0, &coeffs.iter().map(|&c| narrow(c)).collect::<Vec<_>>())?;
    let residual_l2 = l2_error_with(f, x0, eps, coeffs.len() - 1, |t| {
        horner_wide(&coeffs, t * eps)
    })?;
    Ok(ApproxResult {
        poly,
        epsilon: Scalar::Float(eps),
        method,
        residual_l2,
        residual_sq_exact: None,
        pivot_min: None,
        wide: coeffs,
    })
}

fn horner_wide(coeffs: &[Wide], h: Wide) -> Wide {
    coeffs.iter().rev().fold(wide(0.0), |acc, &c| acc * h + c)
}

/// `(∫ (f - q)^2)^{1/2}` where `q(t)` is given in the scaled variable.
/// Relative accuracy assumed for double-double samples of `f` and `p`.
const SAMPLE_NOISE: f64 = 1e-29;

fn l2_error_with(
    f: &FunctionSpec,
    x0: f64,
    eps: f64,
    degree: usize,
    q: impl Fn(Wide) -> Wide,
) -> Result<f64> {
    f.check_interval(x0, eps)?;
    let fs = sampler(f, x0, eps);
    let g = |t: Wide| -> Result<Wide> {
        let r = fs(t)? - q(t);
        Ok(r * r)
    };
    // r = f - p carries absolute noise d ~ u (|f| + |p|), so r^2 is only
    // known to about 2 |r| d + d^2.
    let noise = |t: Wide| -> Result<Wide> {
        let (fv, qv) = (fs(t)?, q(t));
        let d = SAMPLE_NOISE * (narrow(fv).abs() + narrow(qv).abs());
        Ok(wide(2.0 * narrow(fv - qv).abs() * d + d * d))
    };
    let m = default_nodes(2 * degree);
    let floor = 10.0 * narrow(integrate_once(noise, m.min(MAX_NODES))?);
    let v = integrate_refined_with_floor(g, 1, monomials, m, &[floor])?;
    Ok((narrow(v[0]) * eps).max(0.0).sqrt())
}

/// `(∫_{x0-eps}^{x0+eps} (f - p)^2 dx)^{1/2}` by quadrature in double-double.
pub fn l2_error(f: &FunctionSpec, p: &Polynomial, x0: f64, eps: f64) -> Result<f64> {
    l2_error_with(f, x0, eps, p.degree_bound(), |t| {
        p.eval_wide(wide(x0) + t * eps)
    })
}

/// Exact `∫ (f - p)^2` for polynomial `f` with rational coefficients.
pub fn l2_error_squared_exact(
    f: &Polynomial,
    p: &Polynomial,
    x0: &BigRational,
    eps: &BigRational,
) -> Result<BigRational> {
    let center = Scalar::Exact(x0.clone());
    let r = f.recenter(&center)?.sub(&p.recenter(&center)?)?;
    integrate_moment_exact(&r.mul(&r)?, x0, eps, 0)
}

/// `W = ∫ f(x) (x - x0)^j dx` for `j = 0..=k`, rounded to `f64`.
pub fn assemble_w(f: &FunctionSpec, x0: f64, eps: f64, k: usize) -> Result<Vec<f64>> {
    let w = scaled_moments(f, x0, eps, k)?;
    let mut scale = wide(eps);
    Ok(w.into_iter()
        .map(|v| {
            let out = narrow(v * scale);
            scale *= eps;
            out
        })
        .collect())
}

/// `J^{1/2}` from `J = ∫ f^2 - 2 W^T X + X^T A X`, evaluated in the scaled
/// variable. Used to cross-check `residual_l2`.
pub fn objective_identity(
    f: &FunctionSpec,
    x0: f64,
    eps: f64,
    result: &ApproxResult,
) -> Result<f64> {
    let k = result.degree();
    let w = scaled_moments(f, x0, eps, k)?;
    let fs = sampler(f, x0, eps);
    let f2 = integrate_refined(|t| fs(t).map(|v| v * v), 1, monomials, default_nodes(k))?[0];
    let mut pow = wide(1.0);
    let y: Vec<Wide> = result
        .coeffs_wide()
        .iter()
        .map(|&a| {
            let v = a * pow;
            pow *= eps;
            v
        })
        .collect();
    let tilde = normalized_exact(k).map(|v| exact_wide(&Scalar::Exact(v.clone())));
    let ay = tilde.mul_vec(&y);
    let cross: Wide = w.iter().zip(&y).fold(wide(0.0), |s, (&w, &y)| s + w * y);
    let quad: Wide = y.iter().zip(&ay).fold(wide(0.0), |s, (&y, &a)| s + y * a);
    let j = (f2 - cross * 2.0 + quad * 2.0) * eps;
    Ok(narrow(j).max(0.0).sqrt())
}

/// Adds uniform noise in `[-noise, noise)` to every coefficient, `trials`
/// times (seeded), and reports whether each perturbed polynomial has a
/// strictly larger L2 error than the solution.
pub fn perturbation_check(
    f: &FunctionSpec,
    result: &ApproxResult,
    trials: usize,
    noise: f64,
    seed: u64,
) -> Result<bool> {
    let x0 = result.poly.center().to_f64();
    let eps = result.epsilon.to_f64();
    let k = result.degree();
    let eval = |c: &[Wide], t: Wide| {
        let mut pow = wide(1.0);
        c.iter().fold(wide(0.0), |acc, &a| {
            let v = acc + a * pow;
            pow *= t * eps;
            v
        })
    };
    let base = l2_error_with(f, x0, eps, k, |t| eval(result.coeffs_wide(), t))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let c: Vec<Wide> = result
            .coeffs_wide()
            .iter()
            .map(|&a| a + noise * rng.gen_range(-1.0..1.0))
            .collect();
        if l2_error_with(f, x0, eps, k, |t| eval(&c, t))? <= base {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `sum_s |alpha_{(i+1)s}| 2M / (s+k+1) eps^(k+1-i)` for a given `M`.
pub fn error_bound_with_m(alpha: &InverseStructure, k: usize, i: usize, eps: f64, m: f64) -> f64 {
    assert!(i <= k && alpha.k == k);
    let sum: f64 = (1..=k + 1)
        .map(|s| alpha.alpha_f64(i + 1, s).abs() * 2.0 * m / (s + k + 1) as f64)
        .sum();
    sum * eps.powi((k + 1 - i) as i32)
}

/// The coefficient error bound with `M` sampled on a 201-point grid.
pub fn error_bound(
    f: &FunctionSpec,
    x0: f64,
    eps: f64,
    k: usize,
    i: usize,
    alpha: &InverseStructure,
) -> Result<f64> {
    if i > k {
        return Err(Error::invalid(format!(
            "coefficient index {i} exceeds degree {k}"
        )));
    }
    let m = sample_remainder_bound(f, x0, k, eps, BOUND_GRID)?;
    Ok(error_bound_with_m(alpha, k, i, eps, m))
}
