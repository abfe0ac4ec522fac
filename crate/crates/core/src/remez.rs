//! Best uniform approximation on `[x0 - eps, x0 + eps]` by single-point
//! Remez exchange, in the scaled variable `t = (x - x0) / eps` and in
//! double-double throughout.

use crate::error::{Error, Result};
use crate::extended::{abs, narrow, wide, Wide};
use crate::linalg::Matrix;
use crate::poly::{exact_wide, FunctionSpec, Polynomial};
use crate::scalar::{Mode, Scalar};

pub const MAX_ITERATIONS: usize = 50;
pub const DENSE_GRID: usize = 4096;
const LEVEL_TOL: f64 = 1e-12;
/// Relative tolerance for the equioscillation check.
pub const EQUIOSCILLATION_TOL: f64 = 1e-8;

/// Levelled error `|h|` and true maximum error of one exchange iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RemezStep {
    pub levelled: f64,
    pub max_error: f64,
}

#[derive(Clone, Debug)]
pub struct RemezResult {
    pub poly: Polynomial,
    pub max_error: f64,
    /// `k + 2` increasing points of the final reference.
    pub alternation_points: Vec<f64>,
    pub iterations: usize,
    pub history: Vec<RemezStep>,
    coeffs: Vec<Wide>,
    x0: f64,
    eps: f64,
}

impl RemezResult {
    /// Coefficients in `(x - x0)^i` before rounding.
    pub fn coeffs_wide(&self) -> &[Wide] {
        &self.coeffs
    }

    /// `f(x) - p(x)` in double-double.
    pub fn residual(&self, f: &FunctionSpec, x: f64) -> f64 {
        let h = wide(x) - self.x0;
        let p = self
            .coeffs
            .iter()
            .rev()
            .fold(wide(0.0), |acc, &c| acc * h + c);
        narrow(f.eval_wide(wide(x)) - p)
    }

    /// Residual signs alternate across the alternation points and every
    /// `|residual|` is within `1e-8` of `max_error` (relative).
    pub fn equioscillates(&self, f: &FunctionSpec) -> bool {
        if self.max_error == 0.0 {
            return true;
        }
        let r: Vec<f64> = self
            .alternation_points
            .iter()
            .map(|&x| self.residual(f, x))
            .collect();
        let alternating = r.windows(2).all(|w| w[0] * w[1] < 0.0);
        let level = r
            .iter()
            .all(|v| (v.abs() - self.max_error).abs() <= EQUIOSCILLATION_TOL * self.max_error);
        alternating && level
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.x0 - self.eps, self.x0 + self.eps)
    }
}

fn horner(c: &[Wide], t: Wide) -> Wide {
    c.iter().rev().fold(wide(0.0), |acc, &v| acc * t + v)
}

/// Maximises `|e|` on `[a, b]` by Brent's parabolic/golden search.
fn refine_max(e: &impl Fn(f64) -> Wide, a: f64, b: f64) -> f64 {
    const GOLD: f64 = 0.381_966_011_250_105_1;
    let obj = |t: f64| -narrow(abs(e(t)));
    let (mut a, mut b) = (a, b);
    let mut x = a + GOLD * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = obj(x);
    let (mut fw, mut fv) = (fx, fx);
    let (mut d, mut step): (f64, f64) = (0.0, 0.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let tol = 1e-15 * x.abs() + 1e-15;
        if (x - m).abs() <= 2.0 * tol - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if step.abs() > tol {
            let r = (x - w) * (fx - fv);
            let q0 = (x - v) * (fx - fw);
            let mut p = (x - v) * q0 - (x - w) * r;
            let mut q = 2.0 * (q0 - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * step).abs() && p > q * (a - x) && p < q * (b - x) {
                step = d;
                d = p / q;
                let u = x + d;
                if u - a < 2.0 * tol || b - u < 2.0 * tol {
                    d = if x < m { tol } else { -tol };
                }
                golden = false;
            }
        }
        if golden {
            step = if x < m { b - x } else { a - x };
            d = GOLD * step;
        }
        let u = if d.abs() >= tol {
            x + d
        } else {
            x + tol.copysign(d)
        };
        let fu = obj(u);
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            (v, fv, w, fw, x, fx) = (w, fw, x, fx, u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                (v, fv, w, fw) = (w, fw, u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    x
}

/// Location in `[-1, 1]` and signed value of the largest `|e|`: a dense
/// grid scan, then a local search around the best grid point.
fn global_max(e: impl Fn(f64) -> Wide) -> (f64, Wide) {
    let n = DENSE_GRID;
    let grid = |j: usize| -1.0 + 2.0 * j as f64 / (n - 1) as f64;
    let (mut best_j, mut best) = (0, wide(0.0));
    for j in 0..n {
        let v = e(grid(j));
        if abs(v) > abs(best) {
            best_j = j;
            best = v;
        }
    }
    let lo = grid(best_j.saturating_sub(1));
    let hi = grid((best_j + 1).min(n - 1));
    let t = refine_max(&e, lo, hi);
    let refined = e(t);
    if abs(refined) > abs(best) {
        (t, refined)
    } else {
        (grid(best_j), best)
    }
}

/// `max |f - p|` on `[x0 - eps, x0 + eps]` over 4096 points, refined
/// around the largest sample.
pub fn linf_error(f: &FunctionSpec, p: &Polynomial, x0: f64, eps: f64) -> Result<f64> {
    f.check_interval(x0, eps)?;
    let e = |t: f64| {
        let x = wide(x0) + wide(t) * eps;
        f.eval_wide(x) - p.eval_wide(x)
    };
    let (t, v) = global_max(e);
    let value = narrow(abs(v));
    if !value.is_finite() {
        return Err(Error::NonFiniteSample {
            x: x0 + eps * t,
            value,
        });
    }
    Ok(value)
}

/// Solves `sum_j c_j t_i^j + (-1)^i h = g(t_i)` for the reference `t`.
fn levelled_fit(t: &[f64], g: &[Wide]) -> Result<(Vec<Wide>, Wide)> {
    let n = t.len();
    let m = Matrix::from_fn(n, n, |i, j| {
        if j + 1 < n {
            wide(t[i]).powi(j as i32)
        } else if i % 2 == 0 {
            wide(1.0)
        } else {
            wide(-1.0)
        }
    });
    let mut sol = m.solve(g)?;
    let h = sol.pop().expect("nonempty");
    Ok((sol, h))
}

/// Single-point exchange: put `t_new` into the reference so that residual
/// signs still alternate.
fn exchange(reference: &mut Vec<f64>, signs: &mut Vec<f64>, t_new: f64, s_new: f64) {
    let n = reference.len();
    if reference.contains(&t_new) {
        return;
    }
    if t_new < reference[0] {
        if signs[0] == s_new {
            reference[0] = t_new;
        } else {
            reference.insert(0, t_new);
            signs.insert(0, s_new);
            reference.pop();
            signs.pop();
        }
    } else if t_new > reference[n - 1] {
        if signs[n - 1] == s_new {
            reference[n - 1] = t_new;
        } else {
            reference.push(t_new);
            signs.push(s_new);
            reference.remove(0);
            signs.remove(0);
        }
    } else {
        let i = reference.iter().rposition(|&r| r < t_new).expect("inside");
        let j = if signs[i] == s_new { i } else { i + 1 };
        reference[j] = t_new;
    }
}

/// Minimax polynomial of degree `<= k` for `f` on `[x0 - eps, x0 + eps]`.
///
/// Starts from the Chebyshev extreme points `-cos(pi i / (k+1))` and stops
/// when the maximum error and the levelled error agree to `1e-12`
/// (relative). After 50 iterations the last iterate is returned inside
/// [`Error::RemezNotConverged`].
pub fn solve_remez(f: &FunctionSpec, x0: f64, eps: f64, k: usize) -> Result<RemezResult> {
    f.check_interval(x0, eps)?;
    if k > f.smoothness() {
        return Err(Error::InsufficientSmoothness {
            k,
            n: f.smoothness(),
        });
    }
    if k > crate::l2::FLOAT_DEGREE_CAP {
        return Err(Error::DegreeCap {
            k,
            cap: crate::l2::FLOAT_DEGREE_CAP,
        });
    }
    let n = k + 2;
    let mut reference: Vec<f64> = (0..n)
        .map(|i| -(std::f64::consts::PI * i as f64 / (k + 1) as f64).cos())
        .collect();
    reference[0] = -1.0;
    reference[n - 1] = 1.0;

    if let Some(p) = f.exact() {
        if p.degree_bound() <= k || p.coeffs()[k + 1..].iter().all(Scalar::is_zero) {
            let shifted = p.recenter(&Scalar::from_f64(p.mode(), x0)?)?.truncated(k);
            let coeffs: Vec<Wide> = shifted.coeffs().iter().map(exact_wide).collect();
            return Ok(finish(x0, eps, coeffs, 0.0, &reference, 0, Vec::new()));
        }
    }

    let g = |t: f64| f.eval_wide(wide(x0) + wide(t) * eps);
    let mut signs: Vec<f64> = (0..n)
        .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    let mut history = Vec::new();
    let mut last = None;
    for it in 1..=MAX_ITERATIONS {
        let gv: Vec<Wide> = reference.iter().map(|&t| g(t)).collect();
        if let Some(bad) = gv.iter().position(|v| !v.hi().is_finite()) {
            return Err(Error::NonFiniteSample {
                x: x0 + eps * reference[bad],
                value: gv[bad].hi(),
            });
        }
        let (c, h) = levelled_fit(&reference, &gv)?;
        let e = |t: f64| g(t) - horner(&c, wide(t));
        let (t_max, e_max) = global_max(e);
        let max_error = narrow(abs(e_max));
        let levelled = narrow(abs(h));
        history.push(RemezStep {
            levelled,
            max_error,
        });
        let scaled = unscale(&c, eps);
        if max_error == 0.0 || max_error - levelled <= LEVEL_TOL * max_error {
            return Ok(finish(x0, eps, scaled, max_error, &reference, it, history));
        }
        last = Some((scaled, max_error));
        // signs of the residual on the current reference follow h
        let hs = if h.hi() >= 0.0 { 1.0 } else { -1.0 };
        for (i, s) in signs.iter_mut().enumerate() {
            *s = if i % 2 == 0 { hs } else { -hs };
        }
        let s_new = if e_max.hi() >= 0.0 { 1.0 } else { -1.0 };
        exchange(&mut reference, &mut signs, t_max, s_new);
    }
    let (coeffs, max_error) = last.expect("at least one iteration");
    Err(Error::RemezNotConverged(Box::new(finish(
        x0,
        eps,
        coeffs,
        max_error,
        &reference,
        MAX_ITERATIONS,
        history,
    ))))
}

fn unscale(c: &[Wide], eps: f64) -> Vec<Wide> {
    let mut scale = wide(1.0);
    c.iter()
        .map(|&v| {
            let a = v / scale;
            scale *= eps;
            a
        })
        .collect()
}

fn finish(
    x0: f64,
    eps: f64,
    coeffs: Vec<Wide>,
    max_error: f64,
    reference: &[f64],
    iterations: usize,
    history: Vec<RemezStep>,
) -> RemezResult {
    let view: Vec<f64> = coeffs.iter().map(|&c| narrow(c)).collect();
    let poly = Polynomial::new(
        Scalar::Float(x0),
        view.into_iter().map(Scalar::Float).collect(),
    )
    .expect("finite coefficients");
    debug_assert_eq!(poly.mode(), Mode::Float);
    RemezResult {
        poly,
        max_error,
        alternation_points: reference.iter().map(|&t| x0 + eps * t).collect(),
        iterations,
        history,
        coeffs,
        x0,
        eps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, FRAC_PI_2};

    fn exp_spec() -> FunctionSpec {
        FunctionSpec::new("exp", f64::exp, usize::MAX, (-1.0, 1.0))
            .unwrap()
            .with_wide(crate::extended::exp)
    }

    #[test]
    fn constant_for_exp_is_the_midrange() {
        let f = exp_spec();
        let r = solve_remez(&f, 0.0, 1.0, 0).unwrap();
        assert!((r.poly.coeffs_f64()[0] - (E + 1.0 / E) / 2.0).abs() < 1e-15);
        assert!((r.max_error - (E - 1.0 / E) / 2.0).abs() < 1e-15);
        assert_eq!(r.alternation_points, vec![-1.0, 1.0]);
    }

    #[test]
    fn polynomial_is_reproduced() {
        let p = Polynomial::from_f64(0.0, &[1.0, 1.0]).unwrap();
        let f = FunctionSpec::polynomial("p", p, (-1.0, 1.0)).unwrap();
        let r = solve_remez(&f, 0.2, 0.5, 1).unwrap();
        assert_eq!(r.max_error, 0.0);
        assert_eq!(r.poly.coeffs_f64(), vec![1.2, 1.0]);
    }

    #[test]
    fn linf_examples() {
        let f = exp_spec();
        let one = Polynomial::from_f64(0.0, &[1.0]).unwrap();
        assert!((linf_error(&f, &one, 0.0, 1.0).unwrap() - (E - 1.0)).abs() < 1e-15);
        let sin = FunctionSpec::new("sin", f64::sin, usize::MAX, (-2.0, 2.0))
            .unwrap()
            .with_wide(crate::extended::sin);
        let zero = Polynomial::from_f64(0.0, &[0.0]).unwrap();
        assert!((linf_error(&sin, &zero, 0.0, FRAC_PI_2).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn beats_taylor_and_equioscillates() {
        let f = exp_spec();
        let r = solve_remez(&f, 0.0, 0.5, 1).unwrap();
        let taylor = Polynomial::from_f64(0.0, &[1.0, 1.0]).unwrap();
        assert!(r.max_error < linf_error(&f, &taylor, 0.0, 0.5).unwrap());
        assert!(r.equioscillates(&f));
        for k in 0..=6 {
            let r = solve_remez(&f, 0.0, 0.1, k).unwrap();
            assert!(r.equioscillates(&f), "k = {k}");
            assert_eq!(r.alternation_points.len(), k + 2);
        }
    }

    #[test]
    fn levelled_error_brackets_the_optimum() {
        let f = exp_spec();
        let r = solve_remez(&f, 0.0, 1.0, 3).unwrap();
        for s in &r.history {
            assert!(s.levelled <= r.max_error * (1.0 + 1e-12));
            assert!(r.max_error <= s.max_error * (1.0 + 1e-12));
        }
    }
}
