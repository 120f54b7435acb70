//! Minimization of the Bell operator over the measurement angle.
//!
//! A 1024-point grid on `[0, pi]` locates the basin, golden-section search
//! refines it. Ties on the grid go to the smallest angle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eigen::min_eigenvalue;
use super::operator::{bell_operator_sym, BellExpression, MeasurementSettings};
use crate::error::{Error, Result};

pub const THETA_GRID_POINTS: usize = 1024;
const GOLDEN_TOL: f64 = 1e-10;
const GOLDEN_BUDGET: usize = 200;

/// What is minimized over the angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Objective {
    /// Smallest eigenvalue on the symmetric subspace, the best any
    /// permutation-invariant state can do.
    MinEigenvalue,
    /// Expectation in the Dicke state with `k` excitations.
    DickeExpectation { k: u32 },
}

impl Objective {
    pub fn evaluate(&self, expr: &BellExpression, theta: f64) -> Result<f64> {
        let op = bell_operator_sym(expr, &MeasurementSettings::new(theta)?)?;
        match *self {
            Objective::MinEigenvalue => min_eigenvalue(&op),
            Objective::DickeExpectation { k } => {
                if k > expr.n {
                    return Err(Error::Precondition(format!("excitation {k} exceeds n = {}", expr.n)));
                }
                Ok(op.dicke_expectation(k as usize))
            }
        }
    }
}

/// Outcome of the angle search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub n: u32,
    pub theta_star: f64,
    pub lambda_min: f64,
    pub beta_c: f64,
    pub effective_violation: f64,
    pub violated: bool,
    pub objective: Objective,
}

impl ViolationReport {
    pub fn status(&self) -> &'static str {
        if self.violated {
            "violation"
        } else {
            "no violation at these settings"
        }
    }
}

fn golden_section(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..GOLDEN_BUDGET {
        if b - a <= GOLDEN_TOL {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

/// Evaluates `objective` on the uniform angle grid, in parallel.
pub fn theta_scan(expr: &BellExpression, objective: Objective, points: usize) -> Result<Vec<(f64, f64)>> {
    if points < 2 {
        return Err(Error::Precondition("angle scan needs at least two points".into()));
    }
    let step = std::f64::consts::PI / (points - 1) as f64;
    (0..points)
        .into_par_iter()
        .map(|i| {
            let theta = if i + 1 == points { std::f64::consts::PI } else { i as f64 * step };
            Ok((theta, objective.evaluate(expr, theta)?))
        })
        .collect()
}

/// Minimizes `objective` over `theta in [0, pi]`.
pub fn optimize_theta(expr: &BellExpression, objective: Objective) -> Result<ViolationReport> {
    let grid = theta_scan(expr, objective, THETA_GRID_POINTS)?;
    let mut best = 0;
    for (i, &(_, v)) in grid.iter().enumerate() {
        if v < grid[best].1 {
            best = i;
        }
    }
    let lo = grid[best.saturating_sub(1)].0;
    let hi = grid[(best + 1).min(grid.len() - 1)].0;
    let (mut theta, mut value) = grid[best];
    let (t, v) = golden_section(|t| objective.evaluate(expr, t), lo, hi)?;
    if v < value {
        theta = t;
        value = v;
    }
    let violated = value < 0.0;
    Ok(ViolationReport {
        n: expr.n,
        theta_star: theta,
        lambda_min: value,
        beta_c: expr.beta_c,
        effective_violation: value / expr.beta_c,
        violated,
        objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BellInequality, Coefficients};

    fn ineq6(n: u32) -> BellExpression {
        BellExpression::from(&BellInequality::new(n, Coefficients::new(-2, 0, 1, -1, 1), 2 * i64::from(n)).unwrap())
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (t, v) = golden_section(|x| Ok((x - 1.3).powi(2) - 2.0), 0.0, 3.0).unwrap();
        assert!((t - 1.3).abs() < 1e-6);
        assert!((v + 2.0).abs() < 1e-12);
    }

    #[test]
    fn chsh_min_eigenvalue() {
        let chsh = BellExpression::from(&BellInequality::new(2, Coefficients::new(0, 0, 1, 1, -1), 2).unwrap());
        let r = optimize_theta(&chsh, Objective::MinEigenvalue).unwrap();
        assert!((r.lambda_min - (2.0 - 2.0 * 2f64.sqrt())).abs() < 1e-9, "{r:?}");
        assert!((r.theta_star - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
    }

    #[test]
    fn dicke_six_state_objective() {
        let r = optimize_theta(&BellExpression::dicke(6).unwrap(), Objective::DickeExpectation { k: 3 }).unwrap();
        assert!((r.lambda_min + 0.75).abs() < 1e-9);
        assert!((r.theta_star - 0.75f64.acos()).abs() < 1e-6);
        assert!(r.violated);
    }

    #[test]
    fn ineq6_violated_at_ten() {
        let r = optimize_theta(&ineq6(10), Objective::MinEigenvalue).unwrap();
        assert!(r.lambda_min < 0.0);
        assert!((r.effective_violation - r.lambda_min / 20.0).abs() < 1e-15);
    }

    #[test]
    fn objective_rejects_bad_excitation() {
        assert!(Objective::DickeExpectation { k: 9 }.evaluate(&ineq6(4), 0.3).is_err());
    }

    #[test]
    fn no_violation_is_reported_as_status() {
        // A positive multiple of the identity is never violated.
        let e = BellExpression { n: 3, alpha: 0.0, beta: 0.0, gamma: 0.0, delta: 0.0, epsilon: 0.0, beta_c: 1.0 };
        let r = optimize_theta(&e, Objective::MinEigenvalue).unwrap();
        assert!(!r.violated);
        assert_eq!(r.theta_star, 0.0);
        assert_eq!(r.status(), "no violation at these settings");
    }
}
