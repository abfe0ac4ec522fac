//! Experiment harness: the function registry, epsilon sweeps with slope
//! fits, and Taylor-versus-challenger duels.

mod duel;
mod registry;
mod sweep;

pub use duel::{duel, DuelReport, DuelRow, Norm, SAME_TOL};
pub use registry::{registry_lookup, sample_functions, NAMES};
pub use sweep::{
    fit_slopes, log_grid, ols, sweep, SlopeFit, SweepRecord, TaylorReference, MIN_FIT_POINTS,
};
