//! Best local polynomial approximation on shrinking symmetric intervals.
//!
//! For a smooth `f` and a centre `x0`, the best degree-`k` approximation of `f`
//! on `[x0 - eps, x0 + eps]` (in L2 or in the uniform norm) has coefficients in
//! the basis `(x - x0)^i` that tend to the Taylor coefficients `f^(i)(x0)/i!` as
//! `eps -> 0`, with error `O(eps^(k+1-i))` in the L2 case.
//!
//! The crate is organised around that statement:
//!
//! * [`poly`] holds polynomials in the shifted basis, test functions, Taylor
//!   truncations and the remainder ratio `G_k`.
//! * [`moment`] builds the Gram (moment) matrix of the shifted monomials and
//!   checks its determinant factorisation, block structure, Cauchy blocks and
//!   inverse structure in exact rational arithmetic.
//! * [`quadrature`] integrates `f(x) (x - x0)^j` over the interval.
//! * [`l2`] solves for the best L2 approximation two independent ways and
//!   evaluates the a-priori coefficient error bound.
//! * [`remez`] computes the best uniform approximation by Remez exchange.
//! * [`lab`] runs epsilon sweeps, fits convergence slopes and compares a Taylor
//!   truncation against a challenger polynomial.
//! * [`cli`] is the command-line front end and its serialisation.

pub mod cli;
pub mod error;
pub mod extended;
pub mod l2;
pub mod lab;
pub mod linalg;
pub mod moment;
pub mod poly;
pub mod quadrature;
pub mod remez;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Mode, Scalar};
