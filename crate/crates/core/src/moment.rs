//! The Gram matrix of the shifted monomials on `[x0 - eps, x0 + eps]`.
//!
//! `A_{k+1}` has entries `a_rs = (eps^n - (-eps)^n) / n` with `n = r + s - 1`
//! (1-based), so it is zero whenever `r + s` is odd. Its `eps`-free form
//! `Ã_{k+1}` has entries `(1 - (-1)^n) / (2n)`, and
//! `det A = 2^(k+1) eps^((k+1)^2) det Ã`. Permuting even indices ahead of odd
//! ones splits `Ã` into two Cauchy blocks `D(3, u-1)` and `D(1, v-1)`, where
//! `D(i, t)` is the `(t+1) x (t+1)` matrix with entries `1 / (i + 2(p+q-2))`.
//!
//! All indices in this module's public interface are 1-based.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{det_bareiss, Field, Matrix};
use crate::scalar::{Mode, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Entries {
    Exact(Matrix<BigRational>),
    Float(Matrix<f64>),
}

/// `A_{k+1}` for a given `eps`, or its normalisation `Ã_{k+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentMatrix {
    epsilon: Scalar,
    normalized: bool,
    entries: Entries,
}

fn moment_entry<T: Field>(n: usize, eps_pow: impl Fn(usize) -> T) -> T {
    if n.is_multiple_of(2) {
        T::zero()
    } else {
        T::from_ratio(2, n as i64) * eps_pow(n)
    }
}

fn normalized_entry<T: Field>(n: usize) -> T {
    if n.is_multiple_of(2) {
        T::zero()
    } else {
        T::from_ratio(1, n as i64)
    }
}

/// Builds `A_{k+1}` in the mode of `eps`.
pub fn build_moment(k: usize, eps: &Scalar) -> Result<MomentMatrix> {
    if !eps.is_positive() || !eps.is_finite() {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    let n = k + 1;
    let entries = match eps {
        Scalar::Exact(e) => Entries::Exact(Matrix::from_fn(n, n, |r, c| {
            moment_entry(r + c + 1, |p| Pow::pow(e, p))
        })),
        Scalar::Float(e) => Entries::Float(Matrix::from_fn(n, n, |r, c| {
            moment_entry(r + c + 1, |p| e.powi(p as i32))
        })),
    };
    Ok(MomentMatrix {
        epsilon: eps.clone(),
        normalized: false,
        entries,
    })
}

/// `Ã_{k+1}` as an exact matrix.
pub fn normalized_exact(k: usize) -> Matrix<BigRational> {
    Matrix::from_fn(k + 1, k + 1, |r, c| normalized_entry(r + c + 1))
}

/// `Ã_{k+1}` in `f64`.
pub fn normalized_float(k: usize) -> Matrix<f64> {
    Matrix::from_fn(k + 1, k + 1, |r, c| normalized_entry(r + c + 1))
}

impl MomentMatrix {
    pub fn order(&self) -> usize {
        match &self.entries {
            Entries::Exact(m) => m.rows(),
            Entries::Float(m) => m.rows(),
        }
    }

    pub fn mode(&self) -> Mode {
        self.epsilon.mode()
    }

    pub fn epsilon(&self) -> &Scalar {
        &self.epsilon
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Entry at 1-based position `(r, s)`.
    pub fn entry(&self, r: usize, s: usize) -> Scalar {
        assert!(r >= 1 && s >= 1 && r <= self.order() && s <= self.order());
        match &self.entries {
            Entries::Exact(m) => Scalar::Exact(m.get(r - 1, s - 1).clone()),
            Entries::Float(m) => Scalar::Float(*m.get(r - 1, s - 1)),
        }
    }

    pub fn exact(&self) -> Option<&Matrix<BigRational>> {
        match &self.entries {
            Entries::Exact(m) => Some(m),
            Entries::Float(_) => None,
        }
    }

    pub fn float(&self) -> Option<&Matrix<f64>> {
        match &self.entries {
            Entries::Float(m) => Some(m),
            Entries::Exact(_) => None,
        }
    }

    /// `Ã`: the `eps = 1` matrix halved. Idempotent.
    pub fn normalize(&self) -> MomentMatrix {
        let k = self.order() - 1;
        let (epsilon, entries) = match self.mode() {
            Mode::Rational => (
                Scalar::one(Mode::Rational),
                Entries::Exact(normalized_exact(k)),
            ),
            Mode::Float => (
                Scalar::one(Mode::Float),
                Entries::Float(normalized_float(k)),
            ),
        };
        MomentMatrix {
            epsilon,
            normalized: true,
            entries,
        }
    }

    /// Determinant by Gaussian elimination directly on the entries.
    pub fn det_direct(&self) -> Scalar {
        match &self.entries {
            Entries::Exact(m) => Scalar::Exact(m.det()),
            Entries::Float(m) => Scalar::Float(m.det()),
        }
    }

    /// Leading principal minors, orders `1..=k+1`.
    pub fn leading_minors(&self) -> Vec<Scalar> {
        match &self.entries {
            Entries::Exact(m) => m.leading_minors().into_iter().map(Scalar::Exact).collect(),
            Entries::Float(m) => m.leading_minors().into_iter().map(Scalar::Float).collect(),
        }
    }

    /// Rational mode: all leading principal minors positive. Floating mode:
    /// after scaling to a unit diagonal, `L D L^T` succeeds with every pivot
    /// above `order * eps_mach * max|a|`.
    pub fn is_positive_definite(&self) -> bool {
        match &self.entries {
            Entries::Exact(m) => m.leading_minors().iter().all(Signed::is_positive),
            Entries::Float(m) => {
                let n = m.rows();
                let d: Vec<f64> = (0..n).map(|r| m.get(r, r).sqrt()).collect();
                if d.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                    return false;
                }
                let m = Matrix::from_fn(n, n, |r, c| m.get(r, c) / (d[r] * d[c]));
                let max = (0..n)
                    .flat_map(|r| (0..n).map(move |c| (r, c)))
                    .map(|(r, c)| f64::abs(*m.get(r, c)))
                    .fold(0.0, f64::max);
                m.ldlt(&(n as f64 * f64::EPSILON * max)).is_ok()
            }
        }
    }
}

/// `2^(k+1) eps^((k+1)^2) det Ã_{k+1}`, with `det Ã` by fraction-free
/// elimination.
pub fn det_via_factorization(k: usize, eps: &Scalar) -> Result<Scalar> {
    if !eps.is_positive() {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    let det_tilde = det_bareiss(&normalized_exact(k));
    let n = k + 1;
    let scale = BigRational::from_integer(BigInt::from(2).pow(n as u32)) * det_tilde;
    Ok(match eps {
        Scalar::Exact(e) => Scalar::Exact(scale * Pow::pow(e, (n * n) as u32)),
        Scalar::Float(e) => Scalar::Float(scale.to_f64() * e.powi((n * n) as i32)),
    })
}

/// Sizes of the two diagonal blocks and the index order that produces them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockShape {
    pub u: usize,
    pub v: usize,
    /// `permutation[p-1]` is the original index placed at position `p`:
    /// `(2, 4, ..., 2u, 1, 3, ..., 2v-1)`.
    pub permutation: Vec<usize>,
}

impl BlockShape {
    pub fn for_degree(k: usize) -> Self {
        let (u, v) = if k.is_multiple_of(2) {
            (k / 2, k / 2 + 1)
        } else {
            (k.div_ceil(2), k.div_ceil(2))
        };
        let permutation = (1..=u)
            .map(|j| 2 * j)
            .chain((1..=v).map(|j| 2 * j - 1))
            .collect();
        BlockShape { u, v, permutation }
    }

    pub fn is_bijection(&self) -> bool {
        let n = self.u + self.v;
        let mut seen = vec![false; n];
        self.permutation.len() == n
            && self
                .permutation
                .iter()
                .all(|&p| (1..=n).contains(&p) && !std::mem::replace(&mut seen[p - 1], true))
    }
}

/// A square matrix seen through a symmetric row/column permutation, without
/// copying. Indices are 1-based.
pub struct Permuted<'a, T> {
    base: &'a Matrix<T>,
    perm: &'a [usize],
}

impl<'a, T: Field> Permuted<'a, T> {
    pub fn new(base: &'a Matrix<T>, perm: &'a [usize]) -> Self {
        assert_eq!(base.rows(), perm.len());
        Permuted { base, perm }
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        self.base.get(self.perm[r - 1] - 1, self.perm[c - 1] - 1)
    }

    /// The block with 1-based row and column ranges starting at `r0`, `c0`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix<T> {
        Matrix::from_fn(rows, cols, |r, c| self.get(r0 + r, c0 + c).clone())
    }
}

#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub shape: BlockShape,
    pub b: Matrix<BigRational>,
    pub c: Matrix<BigRational>,
    /// Whether the permuted off-diagonal blocks are identically zero.
    pub off_diagonal_zero: bool,
}

/// Permutes `Ã_{k+1}` into `diag(B_u, C_v)`.
pub fn block_decompose(k: usize) -> BlockDecomposition {
    let shape = BlockShape::for_degree(k);
    let tilde = normalized_exact(k);
    let view = Permuted::new(&tilde, &shape.permutation);
    let (u, v) = (shape.u, shape.v);
    let b = view.block(1, 1, u, u);
    let c = view.block(u + 1, u + 1, v, v);
    let upper = view.block(1, u + 1, u, v);
    let lower = view.block(u + 1, 1, v, u);
    let zero = |m: &Matrix<BigRational>| m.to_rows().iter().flatten().all(Zero::is_zero);
    let off_diagonal_zero = zero(&upper) && zero(&lower);
    BlockDecomposition {
        shape,
        b,
        c,
        off_diagonal_zero,
    }
}

/// Parameters of the Cauchy matrix `D(i, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CauchySpec {
    pub i: u32,
    pub t: u32,
}

impl CauchySpec {
    pub fn new(i: u32, t: u32) -> Result<Self> {
        if i == 0 {
            return Err(Error::invalid("Cauchy parameter i must be at least 1"));
        }
        Ok(CauchySpec { i, t })
    }

    pub fn size(&self) -> usize {
        self.t as usize + 1
    }

    /// Entries `1 / (i + 2(p + q - 2))`, 1-based.
    pub fn matrix(&self) -> Matrix<BigRational> {
        let i = self.i as i64;
        Matrix::from_fn(self.size(), self.size(), |p, q| {
            BigRational::new(1.into(), (i + 2 * (p + q) as i64).into())
        })
    }
}

/// Cauchy product formula with `a_p = i + 2(p-1)` and `b_q = 2(q-1)`.
pub fn cauchy_det_closed_form(spec: CauchySpec) -> BigRational {
    let n = spec.size() as i64;
    let a = |p: i64| BigInt::from(spec.i as i64 + 2 * (p - 1));
    let b = |q: i64| BigInt::from(2 * (q - 1));
    let mut num = BigInt::one();
    for p in 1..=n {
        for q in p + 1..=n {
            num *= (a(p) - a(q)) * (b(p) - b(q));
        }
    }
    let mut den = BigInt::one();
    for p in 1..=n {
        for q in 1..=n {
            den *= a(p) + b(q);
        }
    }
    BigRational::new(num, den)
}

/// `det D(i, t)` by the scaling-and-elimination reduction
/// `D(i, t) -> D(i + 4, t - 1)`, carried out on the matrix entries.
///
/// Each round scales row `p` by `i + 2p` (making the first column all ones),
/// scales columns `q >= 1` by `i + 2q`, subtracts the first row from the
/// others, drops the first row and column, and divides row `p` by `4p` and
/// column `q` by `q`. The accumulated scale factors turn the final `1 x 1`
/// determinant back into `det D(i, t)`.
pub fn cauchy_det_elimination(spec: CauchySpec) -> BigRational {
    let mut m = spec.matrix();
    let mut i = BigRational::from_integer(spec.i.into());
    // det D(i, t) = factor * det(current m)
    let mut factor = <BigRational as One>::one();
    let int = |n: usize| BigRational::from_integer(n.into());
    while m.rows() > 1 {
        let n = m.rows();
        let two = int(2);
        let row_scale: Vec<BigRational> = (0..n).map(|p| &i + &two * int(p)).collect();
        for (p, s) in row_scale.iter().enumerate() {
            for q in 0..n {
                m.set(p, q, m.get(p, q) * s);
            }
            factor /= s;
        }
        for (q, s) in row_scale.iter().enumerate().skip(1) {
            for p in 0..n {
                m.set(p, q, m.get(p, q) * s);
            }
            factor /= s;
        }
        for p in 1..n {
            for q in 0..n {
                let v = m.get(p, q) - m.get(0, q);
                m.set(p, q, v);
            }
        }
        debug_assert!((1..n).all(|p| Zero::is_zero(m.get(p, 0))) && One::is_one(m.get(0, 0)));
        let mut minor = Matrix::from_fn(n - 1, n - 1, |p, q| m.get(p + 1, q + 1).clone());
        for p in 0..n - 1 {
            let s = int(4 * (p + 1));
            for q in 0..n - 1 {
                minor.set(p, q, minor.get(p, q) / &s);
            }
            factor *= s;
        }
        for q in 0..n - 1 {
            let s = int(q + 1);
            for p in 0..n - 1 {
                minor.set(p, q, minor.get(p, q) / &s);
            }
            factor *= s;
        }
        m = minor;
        i += int(4);
    }
    factor * m.get(0, 0)
}

/// Certified `alpha_rs` table for a degree.
#[derive(Clone, Debug)]
pub struct InverseStructure {
    pub k: usize,
    /// `alpha[r-1][s-1] = (A^{-1})_{rs} eps^(r+s-1)`.
    pub alpha: Vec<Vec<Scalar>>,
    /// `alpha_rs == 0` wherever `r + s` is odd.
    pub parity_zero: bool,
    /// The scaled entries agree across every `eps` in the list.
    pub cross_eps_agree: bool,
}

impl InverseStructure {
    pub fn alpha(&self, r: usize, s: usize) -> &Scalar {
        &self.alpha[r - 1][s - 1]
    }

    pub fn alpha_f64(&self, r: usize, s: usize) -> f64 {
        self.alpha(r, s).to_f64()
    }
}

/// Inverts `A_{k+1}` for every `eps` and checks that
/// `(A^{-1})_{rs} eps^(r+s-1)` does not depend on `eps`.
///
/// Rational inputs are compared exactly; floating inputs to `1e-8` of the
/// largest `|alpha|`. A disagreement is reported as
/// [`Error::InverseMismatch`].
pub fn inverse_structure(k: usize, eps_list: &[Scalar]) -> Result<InverseStructure> {
    let first = eps_list
        .first()
        .ok_or_else(|| Error::invalid("need at least two eps values"))?;
    let mode = first.mode();
    if let Some(e) = eps_list.iter().find(|e| e.mode() != mode) {
        return Err(Error::ModeMismatch {
            left: mode,
            right: e.mode(),
        });
    }
    let distinct = eps_list
        .iter()
        .enumerate()
        .any(|(j, e)| eps_list[..j].iter().any(|d| d != e))
        || eps_list.iter().skip(1).any(|e| e != first);
    if eps_list.len() < 2 || !distinct {
        return Err(Error::invalid("need at least two distinct eps values"));
    }
    let n = k + 1;
    let mut tables: Vec<Vec<Vec<Scalar>>> = Vec::with_capacity(eps_list.len());
    for eps in eps_list {
        let a = build_moment(k, eps)?;
        let table = match (&a.entries, eps) {
            (Entries::Exact(m), Scalar::Exact(e)) => {
                let inv = m.inverse()?;
                (0..n)
                    .map(|r| {
                        (0..n)
                            .map(|s| Scalar::Exact(inv.get(r, s) * Pow::pow(e, (r + s + 1) as u32)))
                            .collect()
                    })
                    .collect()
            }
            (Entries::Float(m), Scalar::Float(e)) => {
                let inv = m.inverse()?;
                (0..n)
                    .map(|r| {
                        (0..n)
                            .map(|s| Scalar::Float(inv.get(r, s) * e.powi((r + s + 1) as i32)))
                            .collect()
                    })
                    .collect()
            }
            _ => unreachable!("entries follow the mode of eps"),
        };
        tables.push(table);
    }
    let reference = &tables[0];
    let scale = reference
        .iter()
        .flatten()
        .map(|a| a.to_f64().abs())
        .fold(0.0, f64::max);
    for table in &tables[1..] {
        for r in 0..n {
            for s in 0..n {
                let same = match mode {
                    Mode::Rational => table[r][s] == reference[r][s],
                    Mode::Float => {
                        (table[r][s].to_f64() - reference[r][s].to_f64()).abs() <= 1e-8 * scale
                    }
                };
                if !same {
                    return Err(Error::InverseMismatch { r: r + 1, s: s + 1 });
                }
            }
        }
    }
    let parity_zero = (0..n).all(|r| (0..n).all(|s| (r + s) % 2 == 0 || reference[r][s].is_zero()));
    Ok(InverseStructure {
        k,
        alpha: tables.swap_remove(0),
        parity_zero,
        cross_eps_agree: true,
    })
}

/// The exact `alpha` table for degree `k`, certified on `eps = 1/2, 1, 3`.
pub fn alpha_table(k: usize) -> Result<InverseStructure> {
    let eps: Vec<Scalar> = [(1, 2), (1, 1), (3, 1)]
        .iter()
        .map(|&(p, q)| Scalar::from_ratio(Mode::Rational, p, q))
        .collect();
    inverse_structure(k, &eps)
}
