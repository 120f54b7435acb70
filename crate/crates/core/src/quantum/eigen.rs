//! Smallest eigenvalue of a banded symmetric operator.
//!
//! Bisection on the shift `sigma`: `A - sigma I` is positive definite iff its
//! banded `LDL^T` factorization has only positive pivots, which costs `O(n)`
//! for half-bandwidth 2. The bracket starts at the Gershgorin lower bound and
//! the smallest diagonal entry.

use nalgebra::{DMatrix, SymmetricEigen};

use super::operator::SymmetricOperator;
use crate::error::{Error, Result};

/// Iteration budget for the bisection. From a bracket of width `2^60` down to
/// the stopping width this needs well under 200 halvings.
pub const BISECTION_BUDGET: usize = 400;

/// True when `op - sigma I` has a strictly positive `LDL^T` factorization.
fn shifted_is_positive_definite(op: &SymmetricOperator, sigma: f64) -> bool {
    let (a0, a1, a2) = (op.diag(), op.sub1(), op.sub2());
    let d = a0.len();
    // a = L[k, k-1], b = L[k, k-2], b_next = L[k+1, k-1].
    let (mut dm1, mut dm2) = (0.0f64, 0.0f64);
    let (mut a, mut b, mut b_next) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..d {
        let dk = a0[k] - sigma - a * a * dm1 - b * b * dm2;
        // Written so that a NaN pivot also counts as failure.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(dk > 0.0) {
            return false;
        }
        let new_a = if k + 1 < d { (a1[k] - b_next * a * dm1) / dk } else { 0.0 };
        let new_b = if k + 2 < d { a2[k] / dk } else { 0.0 };
        a = new_a;
        b = b_next;
        b_next = new_b;
        dm2 = dm1;
        dm1 = dk;
    }
    true
}

/// Smallest eigenvalue to relative accuracy well below `1e-9`.
pub fn min_eigenvalue(op: &SymmetricOperator) -> Result<f64> {
    let d = op.dim();
    let scale = op.norm_inf().max(f64::MIN_POSITIVE);
    let mut hi = op.diag().iter().copied().fold(f64::INFINITY, f64::min);
    let gershgorin = (0..d)
        .map(|k| {
            let off: f64 =
                (k.saturating_sub(2)..=(k + 2).min(d - 1)).filter(|&l| l != k).map(|l| op.get(k, l).abs()).sum();
            op.diag()[k] - off
        })
        .fold(f64::INFINITY, f64::min);
    let mut lo = gershgorin - 1e-12 * scale - f64::MIN_POSITIVE;
    let mut widen = 0;
    while !shifted_is_positive_definite(op, lo) {
        // Rounding in the factorization can reject a bound that is exact in
        // theory; back off geometrically.
        lo -= 1e-9 * scale * 2f64.powi(widen);
        widen += 1;
        if widen > 60 {
            return Err(Error::NonConvergence { iterations: widen as usize });
        }
    }
    if hi < lo {
        hi = lo;
    }
    for _ in 0..BISECTION_BUDGET {
        let tol = 1e-14 * scale.max(lo.abs().max(hi.abs()));
        if hi - lo <= tol {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if shifted_is_positive_definite(op, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence { iterations: BISECTION_BUDGET })
}

/// Smallest eigenvalue of a dense symmetric matrix via full diagonalization.
pub fn min_eigenvalue_dense(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// All eigenvalues of a dense symmetric matrix, ascending.
pub fn spectrum_dense(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}
