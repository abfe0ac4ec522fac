//! Polynomials in the shifted basis `(x - x0)^i`, test functions, Taylor
//! truncations and the remainder ratio `G_k`.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::extended::{narrow, wide, Wide};
use crate::scalar::{Mode, Scalar};

/// Polynomial `sum_i c_i (x - center)^i` with degree bound `coeffs.len() - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    center: Scalar,
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(center: Scalar, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("polynomial needs at least one coefficient"));
        }
        let mode = center.mode();
        if let Some(c) = coeffs.iter().find(|c| c.mode() != mode) {
            return Err(Error::ModeMismatch {
                left: mode,
                right: c.mode(),
            });
        }
        if !center.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("polynomial coefficients must be finite"));
        }
        Ok(Polynomial { center, coeffs })
    }

    pub fn from_f64(center: f64, coeffs: &[f64]) -> Result<Self> {
        Self::new(
            Scalar::from_f64(Mode::Float, center)?,
            coeffs.iter().map(|&c| Scalar::Float(c)).collect(),
        )
    }

    pub fn from_rationals(center: BigRational, coeffs: Vec<BigRational>) -> Result<Self> {
        Self::new(
            Scalar::Exact(center),
            coeffs.into_iter().map(Scalar::Exact).collect(),
        )
    }

    pub fn zero(mode: Mode, center: Scalar, k: usize) -> Self {
        Polynomial {
            center,
            coeffs: vec![Scalar::zero(mode); k + 1],
        }
    }

    pub fn mode(&self) -> Mode {
        self.center.mode()
    }

    pub fn center(&self) -> &Scalar {
        &self.center
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(Scalar::to_f64).collect()
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Exact coefficients, when in rational mode.
    pub fn rational_coeffs(&self) -> Option<Vec<BigRational>> {
        self.coeffs
            .iter()
            .map(|c| c.as_rational().cloned())
            .collect()
    }

    /// Horner evaluation in the shifted variable, in `f64`.
    pub fn eval(&self, x: f64) -> f64 {
        let h = x - self.center.to_f64();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * h + c.to_f64())
    }

    pub fn eval_wide(&self, x: Wide) -> Wide {
        let h = x - exact_wide(&self.center);
        self.coeffs
            .iter()
            .rev()
            .fold(wide(0.0), |acc, c| acc * h + exact_wide(c))
    }

    /// Horner evaluation in the polynomial's own mode.
    pub fn eval_scalar(&self, x: &Scalar) -> Result<Scalar> {
        let h = x.sub(&self.center)?;
        let mut acc = Scalar::zero(self.mode());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&h)?.add(c)?;
        }
        Ok(acc)
    }

    /// Re-expands around `new_center` (Taylor shift). Exact in rational mode.
    pub fn recenter(&self, new_center: &Scalar) -> Result<Polynomial> {
        let h = new_center.sub(&self.center)?;
        // repeated synthetic division by (y + h)
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = c[j + 1].mul(&h)?;
                c[j] = c[j].add(&t)?;
            }
        }
        Polynomial::new(new_center.clone(), c)
    }

    /// Coefficients in the absolute basis `x^i`, for display only.
    pub fn to_absolute(&self) -> Result<Vec<Scalar>> {
        Ok(self.recenter(&Scalar::zero(self.mode()))?.coeffs)
    }

    /// Keeps degrees `0..=k`, padding with zeros.
    pub fn truncated(&self, k: usize) -> Polynomial {
        let mut coeffs: Vec<Scalar> = self.coeffs.iter().take(k + 1).cloned().collect();
        coeffs.resize(k + 1, Scalar::zero(self.mode()));
        Polynomial {
            center: self.center.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, rhs: &Polynomial) -> Result<Polynomial> {
        let rhs = self.same_center(rhs)?;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Scalar::zero(self.mode());
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs
                    .get(i)
                    .unwrap_or(&zero)
                    .sub(rhs.coeffs.get(i).unwrap_or(&zero))
            })
            .collect::<Result<Vec<_>>>()?;
        Polynomial::new(self.center.clone(), coeffs)
    }

    pub fn mul(&self, rhs: &Polynomial) -> Result<Polynomial> {
        let rhs = self.same_center(rhs)?;
        let mut coeffs = vec![Scalar::zero(self.mode()); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b)?)?;
            }
        }
        Polynomial::new(self.center.clone(), coeffs)
    }

    fn same_center(&self, rhs: &Polynomial) -> Result<Polynomial> {
        if rhs.center == self.center {
            Ok(rhs.clone())
        } else {
            rhs.recenter(&self.center)
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*(x - {})", self.center)?,
                _ => write!(f, "{c}*(x - {})^{i}", self.center)?,
            }
        }
        Ok(())
    }
}

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type DerivFn = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;
pub type WideFn = Arc<dyn Fn(Wide) -> Wide + Send + Sync>;
pub type WideDerivFn = Arc<dyn Fn(usize, Wide) -> Wide + Send + Sync>;

/// A test function on a closed interval, with optional derivative oracles.
///
/// Without a derivative oracle, derivatives at a point are estimated by
/// central differences with one Richardson step. The optional wide
/// evaluators give double-double values for residuals below `f64` noise.
#[derive(Clone)]
pub struct FunctionSpec {
    name: String,
    eval: RealFn,
    deriv: Option<DerivFn>,
    eval_wide: Option<WideFn>,
    deriv_wide: Option<WideDerivFn>,
    smoothness: usize,
    domain: (f64, f64),
    exact: Option<Polynomial>,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name)
            .field("smoothness", &self.smoothness)
            .field("domain", &self.domain)
            .field("derivative_oracle", &self.deriv.is_some())
            .field("wide", &self.eval_wide.is_some())
            .field("exact", &self.exact)
            .finish()
    }
}

impl FunctionSpec {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        smoothness: usize,
        domain: (f64, f64),
    ) -> Result<Self> {
        let (a, b) = domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid(format!("bad domain [{a}, {b}]")));
        }
        Ok(FunctionSpec {
            name: name.into(),
            eval: Arc::new(eval),
            deriv: None,
            eval_wide: None,
            deriv_wide: None,
            smoothness,
            domain,
            exact: None,
        })
    }

    pub fn with_derivative(
        mut self,
        d: impl Fn(usize, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.deriv = Some(Arc::new(d));
        self
    }

    pub fn with_wide(mut self, f: impl Fn(Wide) -> Wide + Send + Sync + 'static) -> Self {
        self.eval_wide = Some(Arc::new(f));
        self
    }

    pub fn with_wide_derivative(
        mut self,
        d: impl Fn(usize, Wide) -> Wide + Send + Sync + 'static,
    ) -> Self {
        self.deriv_wide = Some(Arc::new(d));
        self
    }

    /// A polynomial test function. Rational coefficients enable the exact
    /// solver paths.
    pub fn polynomial(name: impl Into<String>, p: Polynomial, domain: (f64, f64)) -> Result<Self> {
        let (pe, pw, pd) = (p.clone(), p.clone(), p.clone());
        let spec = FunctionSpec::new(name, move |x| pe.eval(x), usize::MAX / 2, domain)?
            .with_wide(move |x| pw.eval_wide(x))
            .with_derivative(move |i, x| polynomial_derivative(&pd, i, x));
        Ok(FunctionSpec {
            exact: Some(p),
            ..spec
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn smoothness(&self) -> usize {
        self.smoothness
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn exact(&self) -> Option<&Polynomial> {
        self.exact.as_ref()
    }

    pub fn has_derivative_oracle(&self) -> bool {
        self.deriv.is_some()
    }

    pub fn has_wide(&self) -> bool {
        self.eval_wide.is_some()
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn eval_checked(&self, x: f64) -> Result<f64> {
        let value = self.eval(x);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFiniteSample { x, value })
        }
    }

    /// Double-double value; falls back to the `f64` evaluator.
    pub fn eval_wide(&self, x: Wide) -> Wide {
        match &self.eval_wide {
            Some(f) => f(x),
            None => wide(self.eval(narrow(x))),
        }
    }

    /// `f^(i)(x)` from the oracle, or by central differences.
    pub fn derivative(&self, i: usize, x: f64) -> f64 {
        if i == 0 {
            return self.eval(x);
        }
        match &self.deriv {
            Some(d) => d(i, x),
            None => finite_difference(|t| self.eval(t), i, x),
        }
    }

    fn derivative_wide(&self, i: usize, x: Wide) -> Wide {
        match &self.deriv_wide {
            Some(d) => d(i, x),
            None if i == 0 => self.eval_wide(x),
            None => wide(self.derivative(i, narrow(x))),
        }
    }

    /// Whether `[x0 - eps, x0 + eps]` lies inside the domain.
    pub fn contains_interval(&self, x0: f64, eps: f64) -> bool {
        let (a, b) = self.domain;
        eps > 0.0 && x0 - eps >= a && x0 + eps <= b
    }

    pub(crate) fn check_interval(&self, x0: f64, eps: f64) -> Result<()> {
        if !(eps > 0.0) {
            return Err(Error::invalid(format!("eps must be positive, got {eps}")));
        }
        if !self.contains_interval(x0, eps) {
            let (a, b) = self.domain;
            return Err(Error::invalid(format!(
                "[{}, {}] is not inside the domain [{a}, {b}] of {}",
                x0 - eps,
                x0 + eps,
                self.name
            )));
        }
        Ok(())
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.smoothness {
            return Err(Error::InsufficientSmoothness {
                k,
                n: self.smoothness,
            });
        }
        Ok(())
    }
}

fn polynomial_derivative(p: &Polynomial, i: usize, x: f64) -> f64 {
    if i > p.degree_bound() {
        return 0.0;
    }
    let at = match p.mode() {
        Mode::Rational => Scalar::from_f64(Mode::Rational, x),
        Mode::Float => Ok(Scalar::Float(x)),
    };
    let shifted = at.and_then(|c| p.recenter(&c)).expect("finite point");
    let fact: f64 = (1..=i).map(|j| j as f64).product();
    shifted.coeffs()[i].to_f64() * fact
}

/// Central difference of order `i` with step `h = eps_mach^(1/(i+2)) max(1, |x|)`,
/// extrapolated once from `h` and `h/2`.
pub fn finite_difference(f: impl Fn(f64) -> f64, i: usize, x: f64) -> f64 {
    let h = f64::EPSILON.powf(1.0 / (i as f64 + 2.0)) * x.abs().max(1.0);
    let coarse = central_difference(&f, i, x, h);
    let fine = central_difference(&f, i, x, h / 2.0);
    (4.0 * fine - coarse) / 3.0
}

fn central_difference(f: &impl Fn(f64) -> f64, i: usize, x: f64, h: f64) -> f64 {
    // sum_j (-1)^j C(i, j) f(x + (i/2 - j) h) / h^i
    let mut binom = 1.0;
    let mut plus = 0.0;
    let mut minus = 0.0;
    for j in 0..=i {
        let offset = (i as f64 / 2.0 - j as f64) * h;
        let term = binom * f(x + offset);
        if j % 2 == 0 {
            plus += term;
        } else {
            minus += term;
        }
        binom = binom * (i - j) as f64 / (j + 1) as f64;
    }
    (plus - minus) / h.powi(i as i32)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|j| j as f64).product()
}

/// `S_{k,x0}`: coefficients `f^(i)(x0) / i!` for `i = 0..=k`.
///
/// Rational `x0` requires a polynomial `f` with exact coefficients.
pub fn taylor_truncation(f: &FunctionSpec, x0: &Scalar, k: usize) -> Result<Polynomial> {
    f.check_degree(k)?;
    let (a, b) = f.domain;
    let x = x0.to_f64();
    if !(a < x && x < b) {
        return Err(Error::invalid(format!("x0 = {x} is not inside ({a}, {b})")));
    }
    if let Some(p) = &f.exact {
        return match (p.mode(), x0.mode()) {
            (Mode::Rational, Mode::Float) => {
                let exact = p.recenter(&Scalar::from_f64(Mode::Rational, x)?)?;
                Polynomial::from_f64(x, &exact.truncated(k).coeffs_f64())
            }
            (Mode::Float, Mode::Rational) => Err(Error::ModeMismatch {
                left: Mode::Float,
                right: Mode::Rational,
            }),
            _ => Ok(p.recenter(x0)?.truncated(k)),
        };
    }
    if x0.mode() == Mode::Rational {
        return Err(Error::invalid(format!(
            "rational mode needs a polynomial function, not {}",
            f.name
        )));
    }
    let coeffs: Vec<f64> = (0..=k).map(|i| f.derivative(i, x) / factorial(i)).collect();
    Polynomial::from_f64(x, &coeffs)
}

/// Taylor coefficients in double-double, from the wide derivative oracle
/// when there is one.
pub fn taylor_coefficients_wide(f: &FunctionSpec, x0: f64, k: usize) -> Vec<Wide> {
    if let Some(p) = &f.exact {
        if let Ok(c) = Scalar::from_f64(p.mode(), x0) {
            if let Ok(shifted) = p.recenter(&c) {
                return (0..=k)
                    .map(|i| shifted.coeffs().get(i).map_or(wide(0.0), exact_wide))
                    .collect();
            }
        }
    }
    let mut fact = wide(1.0);
    (0..=k)
        .map(|i| {
            if i > 0 {
                fact *= i as f64;
            }
            f.derivative_wide(i, wide(x0)) / fact
        })
        .collect()
}

pub fn exact_wide(c: &Scalar) -> Wide {
    match c {
        Scalar::Float(x) => wide(*x),
        Scalar::Exact(q) => {
            let hi = crate::scalar::rational_to_f64(q);
            let rest = q - BigRational::from_float(hi).unwrap_or_else(BigRational::zero);
            wide(hi) + crate::scalar::rational_to_f64(&rest)
        }
    }
}

/// `G_k(x) = R_k(x) / (x - x0)^(k+1)` with `G_k(x0) = f^(k+1)(x0) / (k+1)!`.
///
/// For polynomials `G_k` is evaluated from the exact tail coefficients; for
/// functions with a wide evaluator the remainder is formed in double-double.
pub fn remainder_ratio(f: &FunctionSpec, x0: f64, k: usize, x: f64) -> Result<f64> {
    f.check_degree(k)?;
    if let Some(p) = &f.exact {
        let shifted = p.recenter(&Scalar::from_f64(p.mode(), x0)?)?;
        let tail = shifted.coeffs().iter().skip(k + 1);
        let h = x - x0;
        return Ok(tail.rev().fold(0.0, |acc, c| acc * h + c.to_f64()));
    }
    if x == x0 {
        return Ok(f.derivative(k + 1, x0) / factorial(k + 1));
    }
    if f.has_wide() {
        let taylor = taylor_coefficients_wide(f, x0, k);
        let h = wide(x) - wide(x0);
        let s = taylor.iter().rev().fold(wide(0.0), |acc, &c| acc * h + c);
        let r = f.eval_wide(wide(x)) - s;
        return Ok(narrow(r / h.powi(k as i32 + 1)));
    }
    let taylor = taylor_truncation(f, &Scalar::Float(x0), k)?;
    Ok((f.eval(x) - taylor.eval(x)) / (x - x0).powi(k as i32 + 1))
}

/// Empirical `M = max |G_k|` over a uniform grid of `grid_size` points on
/// `[x0 - eps, x0 + eps]`. `grid_size` must be odd (so `x0` is a node) and at
/// least 3.
pub fn sample_remainder_bound(
    f: &FunctionSpec,
    x0: f64,
    k: usize,
    eps: f64,
    grid_size: usize,
) -> Result<f64> {
    if grid_size < 3 || grid_size.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "grid size must be odd and at least 3, got {grid_size}"
        )));
    }
    f.check_interval(x0, eps)?;
    let half = (grid_size - 1) as f64 / 2.0;
    let mut m: f64 = 0.0;
    for j in 0..grid_size {
        let t = (j as f64 - half) / half;
        let g = remainder_ratio(f, x0, k, x0 + eps * t)?;
        if !g.is_finite() {
            return Err(Error::NonFiniteSample {
                x: x0 + eps * t,
                value: g,
            });
        }
        m = m.max(g.abs());
    }
    Ok(m)
}
