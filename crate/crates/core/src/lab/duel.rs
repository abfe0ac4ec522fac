//! Taylor truncation against a fixed challenger polynomial over shrinking
//! intervals.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::l2::l2_error;
use crate::poly::{taylor_truncation, FunctionSpec, Polynomial};
use crate::remez::linf_error;
use crate::scalar::Scalar;

/// Challengers closer than this to the Taylor coefficients are rejected.
pub const SAME_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L2,
    Linf,
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        })
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l2" => Ok(Norm::L2),
            "linf" | "inf" => Ok(Norm::Linf),
            _ => Err(Error::invalid(format!(
                "unknown norm '{s}'; expected l2 or linf"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DuelRow {
    pub epsilon: f64,
    pub err_taylor: f64,
    pub err_challenger: f64,
}

impl DuelRow {
    /// Ties go to the challenger: the Taylor truncation wins only when
    /// strictly better.
    pub fn taylor_wins(&self) -> bool {
        self.err_taylor < self.err_challenger
    }

    pub fn winner(&self) -> &'static str {
        if self.taylor_wins() {
            "taylor"
        } else {
            "challenger"
        }
    }
}

#[derive(Clone, Debug)]
pub struct DuelReport {
    pub challenger: Polynomial,
    pub taylor: Polynomial,
    pub norm: Norm,
    /// Descending in epsilon.
    pub grid: Vec<DuelRow>,
    /// Largest tested epsilon at or below which the Taylor truncation wins
    /// at every tested epsilon; `None` if it loses at the smallest one.
    pub threshold: Option<f64>,
}

/// Compares `S_{k,x0}` with `challenger` on `[x0 - eps, x0 + eps]` for every
/// `eps` in the grid.
pub fn duel(
    f: &FunctionSpec,
    x0: f64,
    k: usize,
    challenger: &Polynomial,
    eps_grid: &[f64],
    norm: Norm,
) -> Result<DuelReport> {
    if eps_grid.is_empty() {
        return Err(Error::invalid("empty eps grid"));
    }
    let center = Scalar::from_f64(challenger.mode(), x0)?;
    let challenger = challenger.recenter(&center)?;
    if challenger.coeffs().iter().skip(k + 1).any(|c| !c.is_zero()) {
        return Err(Error::invalid(format!("challenger has degree above {k}")));
    }
    let challenger = challenger.truncated(k);
    let taylor = taylor_truncation(f, &Scalar::Float(x0), k)?;
    let same = challenger
        .coeffs_f64()
        .iter()
        .zip(taylor.coeffs_f64())
        .all(|(c, t)| (c - t).abs() <= SAME_TOL * t.abs().max(1.0));
    if same {
        return Err(Error::invalid(
            "challenger equals the Taylor truncation; nothing to compare",
        ));
    }
    let mut eps: Vec<f64> = eps_grid.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    eps.dedup();
    let measure = |p: &Polynomial, e: f64| match norm {
        Norm::L2 => l2_error(f, p, x0, e),
        Norm::Linf => linf_error(f, p, x0, e),
    };
    let grid = eps
        .iter()
        .map(|&e| {
            Ok(DuelRow {
                epsilon: e,
                err_taylor: measure(&taylor, e)?,
                err_challenger: measure(&challenger, e)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let threshold = grid
        .iter()
        .rev()
        .take_while(|r| r.taylor_wins())
        .last()
        .map(|r| r.epsilon);
    Ok(DuelReport {
        challenger,
        taylor,
        norm,
        grid,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::{log_grid, registry_lookup};
    use std::f64::consts::E;

    #[test]
    fn best_constant_wins_at_one() {
        let f = registry_lookup("exp").unwrap();
        let p = Polynomial::from_f64(0.0, &[(E - 1.0 / E) / 2.0]).unwrap();
        let mut grid = log_grid(1.0, 1e-3, 13);
        grid.reverse();
        let r = duel(&f, 0.0, 0, &p, &grid, Norm::L2).unwrap();
        assert_eq!(r.grid[0].epsilon, 1.0);
        assert_eq!(r.grid[0].winner(), "challenger");
        let t = r.threshold.unwrap();
        assert!((1e-3..1.0).contains(&t));
        assert!(r
            .grid
            .iter()
            .filter(|row| row.epsilon <= t)
            .all(DuelRow::taylor_wins));
    }

    #[test]
    fn rejects_the_taylor_truncation() {
        let f = registry_lookup("exp").unwrap();
        let p = Polynomial::from_f64(0.0, &[1.0, 1.0]).unwrap();
        assert!(duel(&f, 0.0, 1, &p, &[0.1], Norm::L2).is_err());
        let p = Polynomial::from_f64(0.0, &[1.0, 1.0, 0.3]).unwrap();
        assert!(duel(&f, 0.0, 1, &p, &[0.1], Norm::L2).is_err());
    }

    #[test]
    fn polynomial_taylor_always_wins() {
        let f = registry_lookup("poly:1,2").unwrap();
        let p = Polynomial::from_f64(0.0, &[1.0, 2.1]).unwrap();
        for norm in [Norm::L2, Norm::Linf] {
            let r = duel(&f, 0.0, 1, &p, &[1.0, 0.5, 0.1, 0.01], norm).unwrap();
            assert!(r
                .grid
                .iter()
                .all(|row| row.err_taylor == 0.0 && row.taylor_wins()));
            assert_eq!(r.threshold, Some(1.0));
        }
    }
}
