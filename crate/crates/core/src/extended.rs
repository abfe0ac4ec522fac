//! Double-double ("wide") evaluation used where `f64` residuals are below the
//! noise floor: minimax errors near `1e-11` and remainder ratios close to `x0`.
//!
//! Arithmetic comes from `twofloat`. Its elementary functions are only good to
//! between `1e-21` and `1e-18`, so the ones the registry needs are evaluated
//! here by reduced Taylor series (`exp`, `sin`, `cos`) and Newton steps
//! (`ln_1p`, `atan`).

use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use twofloat::consts::{FRAC_PI_2 as TF_FRAC_PI_2, LN_2 as TF_LN_2};
use twofloat::TwoFloat;

/// Double-double number. Addition and multiplication delegate to
/// `twofloat`; division is done here because `twofloat`'s double-double
/// quotient is only good to about `3e-17`.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct Wide(TwoFloat);

const LN_2: Wide = Wide(TF_LN_2);
const FRAC_PI_2: Wide = Wide(TF_FRAC_PI_2);

impl Wide {
    pub fn hi(&self) -> f64 {
        self.0.hi()
    }

    pub fn lo(&self) -> f64 {
        self.0.lo()
    }

    pub fn powi(self, n: i32) -> Wide {
        let mut result = wide(1.0);
        let mut base = self;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result *= base;
            }
            base *= base;
            e >>= 1;
        }
        if n < 0 {
            wide(1.0) / result
        } else {
            result
        }
    }
}

impl From<f64> for Wide {
    fn from(x: f64) -> Self {
        Wide(TwoFloat::from(x))
    }
}

fn quotient(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    // long division with three f64 quotient digits
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::from(q1) + q2 + q3
}

macro_rules! binary {
    ($tr:ident, $m:ident, $atr:ident, $am:ident, $op:tt) => {
        impl $tr<Wide> for Wide {
            type Output = Wide;
            fn $m(self, rhs: Wide) -> Wide {
                Wide(self.0 $op rhs.0)
            }
        }
        impl $tr<f64> for Wide {
            type Output = Wide;
            fn $m(self, rhs: f64) -> Wide {
                Wide(self.0 $op rhs)
            }
        }
        impl $tr<Wide> for f64 {
            type Output = Wide;
            fn $m(self, rhs: Wide) -> Wide {
                Wide(TwoFloat::from(self) $op rhs.0)
            }
        }
        impl $atr<Wide> for Wide {
            fn $am(&mut self, rhs: Wide) {
                *self = *self $op rhs;
            }
        }
        impl $atr<f64> for Wide {
            fn $am(&mut self, rhs: f64) {
                *self = *self $op rhs;
            }
        }
    };
}

binary!(Add, add, AddAssign, add_assign, +);
binary!(Sub, sub, SubAssign, sub_assign, -);
binary!(Mul, mul, MulAssign, mul_assign, *);

impl Div<Wide> for Wide {
    type Output = Wide;
    fn div(self, rhs: Wide) -> Wide {
        Wide(quotient(self.0, rhs.0))
    }
}

impl Div<f64> for Wide {
    type Output = Wide;
    fn div(self, rhs: f64) -> Wide {
        Wide(quotient(self.0, TwoFloat::from(rhs)))
    }
}

impl Div<Wide> for f64 {
    type Output = Wide;
    fn div(self, rhs: Wide) -> Wide {
        Wide(quotient(TwoFloat::from(self), rhs.0))
    }
}

impl DivAssign<Wide> for Wide {
    fn div_assign(&mut self, rhs: Wide) {
        *self = *self / rhs;
    }
}

impl DivAssign<f64> for Wide {
    fn div_assign(&mut self, rhs: f64) {
        *self = *self / rhs;
    }
}

impl Neg for Wide {
    type Output = Wide;
    fn neg(self) -> Wide {
        Wide(-self.0)
    }
}

pub fn wide(x: f64) -> Wide {
    Wide::from(x)
}

/// Rounds to the nearest `f64`.
pub fn narrow(x: Wide) -> f64 {
    x.hi() + x.lo()
}

pub fn exp(x: Wide) -> Wide {
    if x.hi() == 0.0 {
        return wide(1.0);
    }
    let k = (x.hi() / std::f64::consts::LN_2).round();
    let r = (x - LN_2 * k) / 1024.0;
    // |r| < 3.4e-4, so 12 terms are far below double-double rounding
    let mut term = r;
    let mut sum = r;
    for n in 2..=12 {
        term = term * r / n as f64;
        sum += term;
    }
    // expm1(2r) = expm1(r) * (expm1(r) + 2)
    for _ in 0..10 {
        sum = sum * (sum + 2.0);
    }
    (sum + 1.0) * 2f64.powi(k as i32)
}

pub fn ln_1p(x: Wide) -> Wide {
    let mut y = wide(narrow(x).ln_1p());
    let one_plus = x + 1.0;
    for _ in 0..2 {
        y += one_plus * exp(-y) - 1.0;
    }
    y
}

/// `sin` and `cos` of `r` with `|r| <= pi/4`.
fn sin_cos_reduced(r: Wide) -> (Wide, Wide) {
    let r2 = r * r;
    let mut s_term = r;
    let mut c_term = wide(1.0);
    let mut s = s_term;
    let mut c = c_term;
    for n in 1..=15 {
        s_term = -s_term * r2 / ((2 * n) as f64 * (2 * n + 1) as f64);
        c_term = -c_term * r2 / ((2 * n - 1) as f64 * (2 * n) as f64);
        s += s_term;
        c += c_term;
    }
    (s, c)
}

pub fn sin_cos(x: Wide) -> (Wide, Wide) {
    let q = (x.hi() / std::f64::consts::FRAC_PI_2).round();
    let (s, c) = sin_cos_reduced(x - FRAC_PI_2 * q);
    match (q as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

pub fn sin(x: Wide) -> Wide {
    sin_cos(x).0
}

pub fn cos(x: Wide) -> Wide {
    sin_cos(x).1
}

pub fn atan(x: Wide) -> Wide {
    let mut y = wide(narrow(x).atan());
    for _ in 0..2 {
        let (s, c) = sin_cos(y);
        y -= c * (s - x * c);
    }
    y
}

pub fn abs(x: Wide) -> Wide {
    if x.hi() < 0.0 {
        -x
    } else {
        x
    }
}
