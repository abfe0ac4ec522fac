//! Gauss-Legendre integration of `f(x) (x - x0)^j` over `[x0 - eps, x0 + eps]`.
//!
//! Everything is integrated in `t = (x - x0) / eps` on `[-1, 1]`. Nodes come
//! in mirrored pairs `±t` and each pair is summed as one even or odd
//! combination, so moments that vanish by parity come out as exact zeros.

use num_rational::BigRational;
use num_traits::{Pow, Zero};

use crate::error::{Error, Result};
use crate::extended::{narrow, wide, Wide};
use crate::poly::{FunctionSpec, Polynomial};
use crate::scalar::Scalar;

pub const MAX_NODES: usize = 64;
const MAX_PANELS: usize = 64;
const SETTLE_TOL: f64 = 1e-12;

/// Nodes and weights on `[-1, 1]`, nodes increasing and symmetric about 0.
/// Both are held in double-double.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<Wide>,
    weights: Vec<Wide>,
    /// Node count of each panel.
    order: usize,
    panels: usize,
}

impl QuadratureRule {
    pub fn nodes(&self) -> Vec<f64> {
        self.nodes.iter().map(|&t| narrow(t)).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.weights.iter().map(|&w| narrow(w)).collect()
    }

    pub fn nodes_wide(&self) -> &[Wide] {
        &self.nodes
    }

    pub fn weights_wide(&self) -> &[Wide] {
        &self.weights
    }

    /// Nodes per panel.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Polynomials up to this degree are integrated exactly.
    pub fn exactness_degree(&self) -> usize {
        2 * self.order - 1
    }

    /// `(t, w)` with `t >= 0`; for `t > 0` the weight stands for both `±t`.
    fn half(&self) -> impl Iterator<Item = (Wide, Wide)> + '_ {
        let n = self.nodes.len();
        (n / 2..n).map(|i| (self.nodes[i], self.weights[i]))
    }

    fn mirrored(
        right: Vec<(Wide, Wide)>,
        center: Option<Wide>,
        order: usize,
        panels: usize,
    ) -> Self {
        let mut nodes: Vec<Wide> = right.iter().rev().map(|&(t, _)| -t).collect();
        let mut weights: Vec<Wide> = right.iter().rev().map(|&(_, w)| w).collect();
        if let Some(w) = center {
            nodes.push(wide(0.0));
            weights.push(w);
        }
        nodes.extend(right.iter().map(|&(t, _)| t));
        weights.extend(right.iter().map(|&(_, w)| w));
        QuadratureRule {
            nodes,
            weights,
            order,
            panels,
        }
    }

    /// Composite rule: `panels` copies of the `m`-point rule on equal
    /// subintervals of `[-1, 1]`. Built from the right half and mirrored.
    pub fn composite(m: usize, panels: usize) -> Result<Self> {
        if panels == 0 || (panels > 1 && panels % 2 == 1) {
            return Err(Error::invalid(format!(
                "panel count must be 1 or even, got {panels}"
            )));
        }
        let base = gauss_legendre_rule(m)?;
        if panels == 1 {
            return Ok(base);
        }
        let h = wide(1.0) / panels as f64;
        let mut right = Vec::with_capacity(panels * m / 2);
        for p in 0..panels / 2 {
            let mid = h * (2 * p + 1) as f64;
            for (&t, &w) in base.nodes.iter().zip(&base.weights) {
                right.push((mid + h * t, h * w));
            }
        }
        Ok(Self::mirrored(right, None, m, panels))
    }
}

/// `P_m(x)` and `P_m'(x)` by the three-term recurrence.
fn legendre_with_derivative(m: usize, x: Wide) -> (Wide, Wide) {
    if m == 0 {
        return (wide(1.0), wide(0.0));
    }
    let (mut p0, mut p1) = (wide(1.0), x);
    for n in 2..=m {
        let p2 = (x * p1 * (2 * n - 1) as f64 - p0 * (n - 1) as f64) / n as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = (x * p1 - p0) * m as f64 / (x * x - 1.0);
    (p1, dp)
}

/// The `m`-point Gauss-Legendre rule, `1 <= m <= 64`, by Newton iteration
/// from Chebyshev-like initial guesses: in `f64` until the step is below
/// `1e-15`, then two steps in double-double.
pub fn gauss_legendre_rule(m: usize) -> Result<QuadratureRule> {
    if !(1..=MAX_NODES).contains(&m) {
        return Err(Error::invalid(format!(
            "node count must be in 1..={MAX_NODES}, got {m}"
        )));
    }
    let mut right = Vec::with_capacity(m / 2);
    for i in (1..=m / 2).rev() {
        let mut x = (std::f64::consts::PI * (4 * i - 1) as f64 / (4 * m + 2) as f64).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(m, wide(x));
            let dx = narrow(p / dp);
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let mut x = wide(x);
        for _ in 0..2 {
            let (p, dp) = legendre_with_derivative(m, x);
            x -= p / dp;
        }
        let (_, dp) = legendre_with_derivative(m, x);
        right.push((x, wide(2.0) / ((wide(1.0) - x * x) * dp * dp)));
    }
    let center = (m % 2 == 1).then(|| {
        let (_, dp) = legendre_with_derivative(m, wide(0.0));
        wide(2.0) / (dp * dp)
    });
    Ok(QuadratureRule::mirrored(right, center, m, 1))
}

/// `∫_{-1}^{1} g(t) φ_j(t) dt` for `j < n` with one rule, plus
/// `∫ |g φ_j|` as a scale. `basis(t, out)` fills `φ_j(t)`, and `φ_j` must
/// have parity `(-1)^j`.
fn integrate_with(
    rule: &QuadratureRule,
    g: &impl Fn(Wide) -> Result<Wide>,
    n: usize,
    basis: &impl Fn(Wide, &mut [Wide]),
) -> Result<(Vec<Wide>, Vec<f64>)> {
    let mut values = vec![wide(0.0); n];
    let mut scales = vec![0.0; n];
    let mut phi = vec![wide(0.0); n];
    for (t, w) in rule.half() {
        basis(t, &mut phi);
        if t.hi() == 0.0 {
            let gp = g(t)?;
            for j in 0..n {
                let v = w * gp * phi[j];
                values[j] += v;
                scales[j] += narrow(v).abs();
            }
            continue;
        }
        let (gp, gm) = (g(t)?, g(-t)?);
        let (even, odd) = (gp + gm, gp - gm);
        let mag = narrow(w) * (narrow(gp).abs() + narrow(gm).abs());
        for j in 0..n {
            let part = if j % 2 == 0 { even } else { odd };
            values[j] += w * part * phi[j];
            scales[j] += mag * narrow(phi[j]).abs();
        }
    }
    Ok((values, scales))
}

/// The node sequence tried by [`integrate_refined`]: `m0`, `2 m0`, then
/// composite 64-point rules on 2, 4, ... panels.
fn refinement_levels(m0: usize) -> impl Iterator<Item = (usize, usize)> {
    let m0 = m0.min(MAX_NODES);
    let first = [(m0, 1), ((2 * m0).min(MAX_NODES), 1)];
    let panels = std::iter::successors(Some(2usize), |p| Some(p * 2))
        .take_while(|&p| p <= MAX_PANELS)
        .map(|p| (MAX_NODES, p));
    first.into_iter().chain(panels)
}

/// Default starting node count for degree `k`.
pub fn default_nodes(k: usize) -> usize {
    (k + 8).max(16)
}

/// Like [`integrate_with`], refining until two successive rules agree to
/// `1e-12` of `∫ |g φ_j|` for every `j`.
pub fn integrate_refined(
    g: impl Fn(Wide) -> Result<Wide>,
    n: usize,
    basis: impl Fn(Wide, &mut [Wide]),
    m0: usize,
) -> Result<Vec<Wide>> {
    integrate_refined_with_floor(g, n, basis, m0, &[])
}

/// [`integrate_refined`] that also accepts a change of at most `floor[j]`
/// in absolute terms. Used when the integrand is itself rounding noise, such
/// as the squared residual of an almost exact fit.
pub fn integrate_refined_with_floor(
    g: impl Fn(Wide) -> Result<Wide>,
    n: usize,
    basis: impl Fn(Wide, &mut [Wide]),
    m0: usize,
    floor: &[f64],
) -> Result<Vec<Wide>> {
    let mut previous: Option<Vec<Wide>> = None;
    let mut last = (0, f64::INFINITY);
    for (m, panels) in refinement_levels(m0) {
        let rule = QuadratureRule::composite(m, panels)?;
        let (values, scales) = integrate_with(&rule, &g, n, &basis)?;
        if let Some(prev) = &previous {
            let mut settled = true;
            let mut change: f64 = 0.0;
            for j in 0..n {
                let d = narrow(values[j] - prev[j]).abs();
                let allowed = SETTLE_TOL * scales[j] + floor.get(j).copied().unwrap_or(0.0);
                settled &= d <= allowed;
                if scales[j] > 0.0 {
                    change = change.max(d / scales[j]);
                }
            }
            if settled {
                return Ok(values);
            }
            last = (rule.len(), change);
        }
        previous = Some(values);
    }
    Err(Error::QuadratureNotConverged {
        nodes: last.0,
        change: last.1,
    })
}

/// One pass of the `m`-point rule, no refinement.
pub fn integrate_once(g: impl Fn(Wide) -> Result<Wide>, m: usize) -> Result<Wide> {
    let rule = gauss_legendre_rule(m)?;
    Ok(integrate_with(&rule, &g, 1, &monomials)?.0[0])
}

pub fn monomials(t: Wide, out: &mut [Wide]) {
    let mut p = wide(1.0);
    for o in out.iter_mut() {
        *o = p;
        p *= t;
    }
}

/// Legendre polynomials `P_0(t), ..., P_{n-1}(t)`.
pub fn legendre_basis(t: Wide, out: &mut [Wide]) {
    for j in 0..out.len() {
        out[j] = match j {
            0 => wide(1.0),
            1 => t,
            _ => (t * out[j - 1] * (2 * j - 1) as f64 - out[j - 2] * (j - 1) as f64) / j as f64,
        };
    }
}

/// `t -> f(x0 + eps t)` in double-double, rejecting non-finite samples.
pub(crate) fn sampler(f: &FunctionSpec, x0: f64, eps: f64) -> impl Fn(Wide) -> Result<Wide> + '_ {
    move |t| {
        let x = wide(x0) + t * eps;
        let v = f.eval_wide(x);
        if v.hi().is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteSample {
                x: narrow(x),
                value: v.hi(),
            })
        }
    }
}

/// `∫_{x0-eps}^{x0+eps} f(x) (x - x0)^j dx` with a single `m`-point rule,
/// evaluated as `eps^(j+1) ∫_{-1}^{1} f(x0 + eps t) t^j dt`.
pub fn integrate_moment(f: &FunctionSpec, x0: f64, eps: f64, j: usize, m: usize) -> Result<f64> {
    f.check_interval(x0, eps)?;
    let rule = gauss_legendre_rule(m)?;
    let (values, _) = integrate_with(&rule, &sampler(f, x0, eps), j + 1, &monomials)?;
    Ok(narrow(values[j] * wide(eps).powi(j as i32 + 1)))
}

/// `∫_{-1}^{1} f(x0 + eps t) t^j dt` for `j = 0..=k`, with refinement.
pub fn scaled_moments(f: &FunctionSpec, x0: f64, eps: f64, k: usize) -> Result<Vec<Wide>> {
    f.check_interval(x0, eps)?;
    integrate_refined(sampler(f, x0, eps), k + 1, monomials, default_nodes(k))
}

/// `∫_{-1}^{1} f(x0 + eps t) P_j(t) dt` for `j = 0..=k`, with refinement.
pub fn scaled_legendre_moments(f: &FunctionSpec, x0: f64, eps: f64, k: usize) -> Result<Vec<Wide>> {
    f.check_interval(x0, eps)?;
    integrate_refined(sampler(f, x0, eps), k + 1, legendre_basis, default_nodes(k))
}

/// Exact `∫_{x0-eps}^{x0+eps} p(x) (x - x0)^j dx` by antidifferentiation in
/// the shifted variable.
pub fn integrate_moment_exact(
    p: &Polynomial,
    x0: &BigRational,
    eps: &BigRational,
    j: usize,
) -> Result<BigRational> {
    let shifted = p.recenter(&Scalar::Exact(x0.clone()))?;
    let coeffs = shifted
        .rational_coeffs()
        .ok_or_else(|| Error::invalid("exact integration needs rational coefficients"))?;
    let mut total = BigRational::zero();
    for (i, c) in coeffs.iter().enumerate() {
        let n = i + j + 1;
        if n % 2 == 1 && !c.is_zero() {
            total += c * BigRational::from_integer(2.into()) * Pow::pow(eps, n as u32)
                / BigRational::from_integer(n.into());
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use std::f64::consts::E;

    fn exp_spec() -> FunctionSpec {
        FunctionSpec::new("exp", f64::exp, usize::MAX, (-5.0, 5.0)).unwrap()
    }

    #[test]
    fn low_order_rules() {
        let r = gauss_legendre_rule(1).unwrap();
        assert_eq!((r.nodes(), r.weights()), (vec![0.0], vec![2.0]));
        let r = gauss_legendre_rule(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r.nodes()[1] - s).abs() < 2e-16 && r.nodes()[0] == -r.nodes()[1]);
        assert!(r.weights().iter().all(|w| (w - 1.0).abs() < 1e-15));
        assert!(gauss_legendre_rule(0).is_err() && gauss_legendre_rule(65).is_err());
    }

    #[test]
    fn rules_are_symmetric_and_sum_to_two() {
        for m in 1..=64 {
            let r = gauss_legendre_rule(m).unwrap();
            let sum: f64 = r.weights().iter().sum();
            assert!((sum - 2.0).abs() < 1e-14, "m = {m}: {sum}");
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!((0..m).all(|i| r.nodes()[i] == -r.nodes()[m - 1 - i]));
        }
        let c = QuadratureRule::composite(8, 4).unwrap();
        assert_eq!(c.len(), 32);
        assert!(c.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!((c.weights().iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn exactness_degree() {
        let r = gauss_legendre_rule(5).unwrap();
        let odd: f64 = r
            .nodes()
            .iter()
            .zip(r.weights())
            .map(|(t, w)| w * t.powi(9))
            .sum();
        assert!(odd.abs() < 1e-15);
        let even: f64 = r
            .nodes()
            .iter()
            .zip(r.weights())
            .map(|(t, w)| w * t.powi(8))
            .sum();
        assert!((even - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn moment_examples() {
        let one = FunctionSpec::new("one", |_| 1.0, usize::MAX, (-1.0, 1.0)).unwrap();
        assert!((integrate_moment(&one, 0.0, 0.25, 0, 4).unwrap() - 0.5).abs() < 4e-16);
        let x = FunctionSpec::new("x", |x| x, usize::MAX, (-1.0, 1.0)).unwrap();
        let e = 0.7;
        assert!(
            (integrate_moment(&x, 0.0, e, 1, 4).unwrap() - 2.0 * e * e * e / 3.0).abs() < 1e-16
        );
        let v = integrate_moment(&exp_spec(), 0.0, 1.0, 0, 16).unwrap();
        assert!((v - (E - 1.0 / E)).abs() < 1e-15);
    }

    #[test]
    fn parity_zeros_are_exact() {
        let cos = FunctionSpec::new("cos", f64::cos, usize::MAX, (-1.0, 1.0)).unwrap();
        let w = scaled_moments(&cos, 0.0, 0.8, 6).unwrap();
        assert!(w.iter().skip(1).step_by(2).all(|v| v.hi() == 0.0));
    }

    #[test]
    fn exact_moments() {
        let c = Polynomial::from_rationals(rat(0, 1), vec![rat(5, 3)]).unwrap();
        assert_eq!(
            integrate_moment_exact(&c, &rat(0, 1), &rat(1, 4), 0).unwrap(),
            rat(5, 6)
        );
        let x0 = rat(1, 3);
        let lin = Polynomial::from_rationals(x0.clone(), vec![rat(0, 1), rat(1, 1)]).unwrap();
        assert!(integrate_moment_exact(&lin, &x0, &rat(1, 2), 0)
            .unwrap()
            .is_zero());
        let sq =
            Polynomial::from_rationals(x0.clone(), vec![rat(0, 1), rat(0, 1), rat(1, 1)]).unwrap();
        assert_eq!(
            integrate_moment_exact(&sq, &x0, &rat(1, 2), 2).unwrap(),
            rat(1, 80)
        );
    }

    #[test]
    fn runge_needs_panels_but_settles() {
        let runge = FunctionSpec::new(
            "runge",
            |x| 1.0 / (1.0 + 25.0 * x * x),
            usize::MAX,
            (-1.0, 1.0),
        )
        .unwrap();
        let w = scaled_moments(&runge, 0.0, 1.0, 0).unwrap();
        // ∫ 1/(1+25x^2) = (2/5) atan 5
        assert!((narrow(w[0]) - 0.4 * 5f64.atan()).abs() < 1e-14);
    }
}
