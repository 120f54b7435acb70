//! Dicke states, their two-qubit marginals and the reduced Bell operator.

use nalgebra::{Matrix2, Matrix4};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::operator::{bell_operator_sym, BellExpression, MeasurementSettings};
use crate::error::{Error, Result};

/// `|D_n^k>`: the symmetric state with `k` qubits in `|1>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DickeState {
    pub n: u32,
    pub k: u32,
}

impl DickeState {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n == 0 || k > n {
            return Err(Error::Precondition(format!("Dicke state needs 0 <= k <= n, n >= 1; got n = {n}, k = {k}")));
        }
        Ok(DickeState { n, k })
    }

    /// Amplitudes in the Dicke basis: the unit vector `e_k`.
    pub fn amplitudes(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.n as usize + 1];
        v[self.k as usize] = 1.0;
        v
    }

    /// `<S_z^2>` with `S_z = n/2 - k`.
    pub fn sz2_mean(&self) -> f64 {
        let m = f64::from(self.n) / 2.0 - f64::from(self.k);
        m * m
    }

    /// The two-qubit marginal, basis `|00>, |01>, |10>, |11>`.
    pub fn reduced_two_qubit(&self) -> Result<Matrix4<f64>> {
        reduced_two_qubit(self.n, self.k)
    }
}

fn ceil_half(n: u32) -> u32 {
    Integer::div_ceil(&n, &2)
}

/// Analytic Dicke-state violation of the Dicke-class inequality.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DickeViolation {
    pub n: u32,
    pub k: u32,
    pub theta_min: f64,
    pub value: f64,
    pub beta_c: f64,
    pub effective: f64,
}

/// `4 floor(n/2) s [(ceil(n/2) + 1) s - 1]` with `s = sin^2(theta/2)`.
pub fn dicke_expectation_closed_form(n: u32, theta: f64) -> f64 {
    let s = (theta / 2.0).sin().powi(2);
    4.0 * f64::from(n / 2) * s * ((f64::from(ceil_half(n)) + 1.0) * s - 1.0)
}

/// Optimal angle and value for `|D_n^{ceil(n/2)}>`, checked against the
/// symmetric-subspace operator on a few angles.
pub fn dicke_violation_analytic(n: u32) -> Result<DickeViolation> {
    if n < 2 {
        return Err(Error::Precondition(format!("Dicke violation needs n >= 2, got {n}")));
    }
    let c = f64::from(ceil_half(n));
    let theta_min = (c / (c + 1.0)).acos();
    let value = -f64::from(n / 2) / (c + 1.0);
    let expr = BellExpression::dicke(n)?;
    let k = ceil_half(n) as usize;
    for theta in [0.0, theta_min, 1.0, 2.0, std::f64::consts::PI] {
        let op = bell_operator_sym(&expr, &MeasurementSettings::new(theta)?)?;
        let got = op.dicke_expectation(k);
        let want = dicke_expectation_closed_form(n, theta);
        if (got - want).abs() > 1e-9 * want.abs().max(1.0) {
            return Err(Error::Consistency(format!(
                "Dicke expectation at n = {n}, theta = {theta}: operator gives {got}, closed form {want}"
            )));
        }
    }
    Ok(DickeViolation { n, k: k as u32, theta_min, value, beta_c: expr.beta_c, effective: value / expr.beta_c })
}

/// Two-qubit marginal of `|D_n^k>`:
/// `[p, 0, 0, 0; 0, q, q, 0; 0, q, q, 0; 0, 0, 0, r] / (n(n-1))` with
/// `p = (n-k)(n-k-1)`, `q = k(n-k)`, `r = k(k-1)`.
pub fn reduced_two_qubit(n: u32, k: u32) -> Result<Matrix4<f64>> {
    if n < 2 || k > n {
        return Err(Error::Precondition(format!("two-qubit marginal needs n >= 2, k <= n; got n = {n}, k = {k}")));
    }
    let (nf, kf) = (f64::from(n), f64::from(k));
    let norm = nf * (nf - 1.0);
    let p = (nf - kf) * (nf - kf - 1.0) / norm;
    let q = kf * (nf - kf) / norm;
    let r = kf * (kf - 1.0) / norm;
    #[rustfmt::skip]
    let m = Matrix4::new(
        p,   0.0, 0.0, 0.0,
        0.0, q,   q,   0.0,
        0.0, q,   q,   0.0,
        0.0, 0.0, 0.0, r,
    );
    Ok(m)
}

/// Marginal of `|D_n^{ceil(n/2)}>`.
pub fn dicke_reduced_two_qubit(n: u32) -> Result<Matrix4<f64>> {
    reduced_two_qubit(n, ceil_half(n))
}

/// Two-qubit operator whose expectation in any two-qubit marginal of a
/// symmetric state equals the Bell operator's expectation in that state.
pub fn reduced_bell_operator(expr: &BellExpression, settings: &MeasurementSettings) -> Result<Matrix4<f64>> {
    if expr.n < 2 {
        return Err(Error::Precondition(format!("reduced Bell operator needs n >= 2, got {}", expr.n)));
    }
    let (m0, m1) = settings.local_observables();
    let m0 = Matrix2::new(m0[0][0], m0[0][1], m0[1][0], m0[1][1]);
    let m1 = Matrix2::new(m1[0][0], m1[0][1], m1[1][0], m1[1][1]);
    let id = Matrix2::<f64>::identity();
    let nf = f64::from(expr.n);
    let one = |m: &Matrix2<f64>| -> Matrix4<f64> { m.kronecker(&id) + id.kronecker(m) };
    let pairs = m0.kronecker(&m0) * expr.gamma
        + m1.kronecker(&m1) * expr.epsilon
        + (m0.kronecker(&m1) + m1.kronecker(&m0)) * expr.delta;
    Ok(Matrix4::identity() * expr.beta_c
        + one(&m0) * (nf / 2.0 * expr.alpha)
        + one(&m1) * (nf / 2.0 * expr.beta)
        + pairs * (nf * (nf - 1.0) / 2.0))
}

/// Pairwise correlators from collective moments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairwiseCorrelators {
    pub czz: f64,
    pub czx: f64,
    /// False when either correlator lies outside `[-1, 1]`; values are
    /// reported unclamped.
    pub in_physical_range: bool,
}

/// `czz = (4 <S_z^2> - n) / (n(n-1))` and `czx = 2 <{S_z, S_x}> / (n(n-1))`.
pub fn collective_to_pairwise(sz2_mean: f64, anticomm_zx_mean: f64, n: u32) -> Result<PairwiseCorrelators> {
    if n < 2 {
        return Err(Error::Precondition(format!("pairwise correlators need n >= 2, got {n}")));
    }
    let nf = f64::from(n);
    let pairs = nf * (nf - 1.0);
    let czz = (4.0 * sz2_mean - nf) / pairs;
    let czx = 2.0 * anticomm_zx_mean / pairs;
    let tol = 1e-12;
    let in_physical_range = czz.abs() <= 1.0 + tol && czx.abs() <= 1.0 + tol;
    Ok(PairwiseCorrelators { czz, czx, in_physical_range })
}
