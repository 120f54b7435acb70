//! Ground states of the isotropic Lipkin-Meshkov-Glick Hamiltonian
//!
//! ```text
//! H = -(lambda/N) sum_{i<j} (x_i x_j + y_i y_j) - h sum_i z_i
//! ```
//!
//! In this module the Dicke index `k` counts spins with `sigma_z = +1`, the
//! direction the field favours. With `S_z = k - N/2` and
//! `sum_{i<j} (x x + y y) = 2 (S^2 - S_z^2) - N`, the Hamiltonian is diagonal
//! in the symmetric sector.

use nalgebra::{DMatrix, SymmetricEigen};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::operator::FULL_SPACE_LIMIT;
use crate::error::{Error, Result};

const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LmgParams {
    lambda: f64,
    h: f64,
    n: u32,
}

impl LmgParams {
    pub fn new(lambda: f64, h: f64, n: u32) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Precondition(format!("lambda must be positive, got {lambda}")));
        }
        if !(h.is_finite() && h >= 0.0) {
            return Err(Error::Precondition(format!("h must be non-negative, got {h}")));
        }
        if n == 0 {
            return Err(Error::Precondition("n must be at least 1".into()));
        }
        Ok(LmgParams { lambda, h, n })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `h <= lambda / n`.
    pub fn weak_field(&self) -> bool {
        self.h <= self.lambda / f64::from(self.n)
    }

    /// The Dicke index of the weak-field ground state: `n/2` for even `n`,
    /// `ceil(n/2)` for odd `n`. `None` outside the weak-field regime.
    pub fn expected_ground_k(&self) -> Option<u32> {
        self.weak_field().then(|| Integer::div_ceil(&self.n, &2))
    }
}

/// Symmetric-sector Hamiltonian as a dense `(n+1) x (n+1)` matrix.
pub fn lmg_hamiltonian_sym(params: &LmgParams) -> DMatrix<f64> {
    let nf = f64::from(params.n);
    let j = nf / 2.0;
    let d = params.n as usize + 1;
    DMatrix::from_fn(d, d, |k, l| {
        if k != l {
            return 0.0;
        }
        let m = k as f64 - j;
        let flip_flop = 2.0 * (j * (j + 1.0) - m * m) - nf;
        -params.lambda / nf * flip_flop - 2.0 * params.h * m
    })
}

/// Full `2^n` Hamiltonian. Bit `i` of a basis index is qubit `i`, with
/// bit value 0 meaning `sigma_z = +1`.
pub fn lmg_hamiltonian_full(params: &LmgParams) -> Result<DMatrix<f64>> {
    let n = params.n;
    if n > FULL_SPACE_LIMIT {
        return Err(Error::TooLarge { what: "full-space LMG Hamiltonian", n, limit: FULL_SPACE_LIMIT });
    }
    let sites = n as usize;
    let dim = 1usize << sites;
    let coupling = params.lambda / f64::from(n);
    let mut h = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let down = s.count_ones() as f64;
        h[(s, s)] -= params.h * ((sites as f64 - down) - down);
        // x x + y y swaps two antiparallel spins with amplitude 2.
        for i in 0..sites {
            for k in i + 1..sites {
                if ((s >> i) & 1) != ((s >> k) & 1) {
                    let t = s ^ (1 << i) ^ (1 << k);
                    h[(t, s)] -= 2.0 * coupling;
                }
            }
        }
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LmgGroundState {
    pub n: u32,
    pub energy: f64,
    pub degeneracy: usize,
    /// One ground vector in the Dicke basis (index = number of up spins).
    pub state: Vec<f64>,
    /// Dicke indices carrying weight in the ground eigenspace.
    pub span: Vec<u32>,
    pub dominant_k: u32,
    pub weak_field: bool,
    pub expected_k: Option<u32>,
    /// Weight of the expected Dicke state in the ground eigenspace.
    pub fidelity: Option<f64>,
}

/// Diagonalizes the symmetric-sector Hamiltonian.
pub fn lmg_ground_state(params: &LmgParams) -> Result<LmgGroundState> {
    let eig = SymmetricEigen::new(lmg_hamiltonian_sym(params));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energy = eig.eigenvalues[order[0]];
    let tol = DEGENERACY_TOL * energy.abs().max(1.0);
    let ground: Vec<usize> = order.iter().copied().take_while(|&i| eig.eigenvalues[i] - energy <= tol).collect();

    let d = params.n as usize + 1;
    let weight: Vec<f64> = (0..d).map(|k| ground.iter().map(|&g| eig.eigenvectors[(k, g)].powi(2)).sum()).collect();
    let span = (0..d).filter(|&k| weight[k] > 1e-12).map(|k| k as u32).collect();
    let mut state: Vec<f64> = eig.eigenvectors.column(ground[0]).iter().copied().collect();
    // Fix the overall sign so the largest component is positive.
    let dominant = (0..d).fold(0, |b, k| if state[k].abs() > state[b].abs() { k } else { b });
    if state[dominant] < 0.0 {
        state.iter_mut().for_each(|x| *x = -*x);
    }
    let expected_k = params.expected_ground_k();
    Ok(LmgGroundState {
        n: params.n,
        energy,
        degeneracy: ground.len(),
        state,
        span,
        dominant_k: dominant as u32,
        weak_field: params.weak_field(),
        expected_k,
        fidelity: expected_k.map(|k| weight[k as usize]),
    })
}

/// Ground energy and degeneracy over the whole `2^n` space, for `n <= 10`.
pub fn lmg_ground_full(params: &LmgParams) -> Result<(f64, usize)> {
    let eig = SymmetricEigen::new(lmg_hamiltonian_full(params)?);
    let e0 = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = DEGENERACY_TOL * e0.abs().max(1.0);
    Ok((e0, eig.eigenvalues.iter().filter(|&&e| e - e0 <= tol).count()))
}
