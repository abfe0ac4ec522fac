//! Named test functions.
//!
//! All registry functions carry closed-form derivative oracles in both
//! `f64` and double-double. For `log1p`, `atan` and `runge` the derivatives
//! come from partial fractions over a complex pole:
//! `atan^(n)(x) = (-1)^(n-1) (n-1)! Im (x - i)^(-n)` and
//! `runge^(n)(x) = 5^n (-1)^n n! Im (5x - i)^(-(n+1))`.

use crate::error::{Error, Result};
use crate::extended::{self, narrow, wide, Wide};
use crate::poly::{FunctionSpec, Polynomial};
use crate::scalar::parse_rational;

pub const NAMES: &[&str] = &[
    "exp",
    "sin",
    "cos",
    "log1p",
    "atan",
    "runge",
    "poly:<c0,c1,...>",
];

const SMOOTH: usize = usize::MAX / 2;
const UNIT: (f64, f64) = (-1.0, 1.0);

#[derive(Clone, Copy)]
struct Complex {
    re: Wide,
    im: Wide,
}

impl Complex {
    fn mul(self, o: Complex) -> Complex {
        Complex {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn recip(self) -> Complex {
        let d = self.re * self.re + self.im * self.im;
        Complex {
            re: self.re / d,
            im: -self.im / d,
        }
    }

    fn powi(self, n: usize) -> Complex {
        let mut out = Complex {
            re: wide(1.0),
            im: wide(0.0),
        };
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }
}

fn factorial(n: usize) -> Wide {
    (1..=n).fold(wide(1.0), |acc, j| acc * j as f64)
}

fn sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `Im (x - i)^(-m)`.
fn pole_power(x: Wide, m: usize) -> Wide {
    Complex {
        re: x,
        im: wide(-1.0),
    }
    .recip()
    .powi(m)
    .im
}

fn exp_deriv(_: usize, x: Wide) -> Wide {
    extended::exp(x)
}

fn sin_deriv(i: usize, x: Wide) -> Wide {
    let (s, c) = extended::sin_cos(x);
    [s, c, -s, -c][i % 4]
}

fn cos_deriv(i: usize, x: Wide) -> Wide {
    let (s, c) = extended::sin_cos(x);
    [c, -s, -c, s][i % 4]
}

fn log1p_deriv(i: usize, x: Wide) -> Wide {
    if i == 0 {
        return extended::ln_1p(x);
    }
    factorial(i - 1) * sign(i - 1) / (x + 1.0).powi(i as i32)
}

fn atan_deriv(i: usize, x: Wide) -> Wide {
    if i == 0 {
        return extended::atan(x);
    }
    factorial(i - 1) * sign(i - 1) * pole_power(x, i)
}

fn runge_wide(x: Wide) -> Wide {
    wide(1.0) / (x * x * 25.0 + 1.0)
}

fn runge_deriv(i: usize, x: Wide) -> Wide {
    if i == 0 {
        return runge_wide(x);
    }
    factorial(i) * sign(i) * wide(5.0).powi(i as i32) * pole_power(x * 5.0, i + 1)
}

fn analytic(
    name: &str,
    eval: fn(f64) -> f64,
    eval_wide: fn(Wide) -> Wide,
    deriv: fn(usize, Wide) -> Wide,
    domain: (f64, f64),
) -> Result<FunctionSpec> {
    Ok(FunctionSpec::new(name, eval, SMOOTH, domain)?
        .with_wide(eval_wide)
        .with_derivative(move |i, x| narrow(deriv(i, wide(x))))
        .with_wide_derivative(deriv))
}

/// Looks up a registry function by name.
pub fn registry_lookup(name: &str) -> Result<FunctionSpec> {
    match name {
        "exp" => analytic("exp", f64::exp, extended::exp, exp_deriv, UNIT),
        "sin" => analytic("sin", f64::sin, extended::sin, sin_deriv, UNIT),
        "cos" => analytic("cos", f64::cos, extended::cos, cos_deriv, UNIT),
        "log1p" => analytic(
            "log1p",
            f64::ln_1p,
            extended::ln_1p,
            log1p_deriv,
            (-0.9, 1.0),
        ),
        "atan" => analytic("atan", f64::atan, extended::atan, atan_deriv, UNIT),
        "runge" => analytic(
            "runge",
            |x| 1.0 / (1.0 + 25.0 * x * x),
            runge_wide,
            runge_deriv,
            UNIT,
        ),
        _ => match name.strip_prefix("poly:") {
            Some(list) => {
                let coeffs = list
                    .split(',')
                    .map(parse_rational)
                    .collect::<Result<Vec<_>>>()?;
                let p = Polynomial::from_rationals(
                    num_rational::BigRational::from_integer(0.into()),
                    coeffs,
                )?;
                FunctionSpec::polynomial(name, p, UNIT)
            }
            None => Err(Error::UnknownFunction {
                name: name.to_string(),
                known: NAMES.join(", "),
            }),
        },
    }
}

/// The registry functions without parameters, plus one sample polynomial.
pub fn sample_functions() -> Vec<FunctionSpec> {
    [
        "exp",
        "sin",
        "cos",
        "log1p",
        "atan",
        "runge",
        "poly:1,-1/2,0,3",
    ]
    .iter()
    .map(|n| registry_lookup(n).expect("registry entry"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::finite_difference;
    use crate::scalar::rat;

    #[test]
    fn lookup_examples() {
        let f = registry_lookup("exp").unwrap();
        assert_eq!(f.derivative(3, 0.4), 0.4f64.exp());
        let p = registry_lookup("poly:1,0,3").unwrap();
        assert_eq!(
            p.exact().unwrap().rational_coeffs().unwrap(),
            vec![rat(1, 1), rat(0, 1), rat(3, 1)]
        );
        assert_eq!(p.eval(0.5), 1.75);
        match registry_lookup("nope") {
            Err(Error::UnknownFunction { known, .. }) => assert!(known.contains("runge")),
            other => panic!("{other:?}"),
        }
        assert_eq!(registry_lookup("log1p").unwrap().domain(), (-0.9, 1.0));
    }

    #[test]
    fn closed_form_derivatives_match_differences() {
        for name in ["sin", "cos", "log1p", "atan", "runge"] {
            let f = registry_lookup(name).unwrap();
            for &x in &[-0.3, 0.0, 0.45] {
                for i in 1..=2 {
                    let fd = finite_difference(|t| f.eval(t), i, x);
                    let exact = f.derivative(i, x);
                    assert!(
                        (fd - exact).abs() <= 1e-6 * exact.abs().max(1.0),
                        "{name} f^({i})({x})"
                    );
                }
            }
        }
    }

    #[test]
    fn runge_and_atan_series_at_zero() {
        // 1/(1+25x^2) = 1 - 25x^2 + 625x^4 - ...
        let r = registry_lookup("runge").unwrap();
        assert_eq!(r.derivative(2, 0.0) / 2.0, -25.0);
        assert!((r.derivative(4, 0.0) / 24.0 - 625.0).abs() < 1e-10);
        assert_eq!(r.derivative(3, 0.0), 0.0);
        // atan x = x - x^3/3 + x^5/5
        let a = registry_lookup("atan").unwrap();
        assert!((a.derivative(1, 0.0) - 1.0).abs() < 1e-15);
        assert!((a.derivative(3, 0.0) / 6.0 + 1.0 / 3.0).abs() < 1e-15);
        assert!((a.derivative(5, 0.0) / 120.0 - 0.2).abs() < 1e-15);
        let l = registry_lookup("log1p").unwrap();
        assert!((l.derivative(3, 0.0) - 2.0).abs() < 1e-15);
    }
}
