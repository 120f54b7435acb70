//! Bell operators for identical xz-plane measurements on every site.
//!
//! In the symmetric subspace the operator is a polynomial of degree two in
//! the collective spin components, so in the Dicke basis it is a real
//! symmetric band matrix with half-bandwidth 2. The restriction uses
//!
//! ```text
//! sum_i (u.sigma)_i           = 2 u.S
//! sum_{i != j} (u.sigma)_i (w.sigma)_j = 2 [(u.S)(w.S) + (w.S)(u.S)] - N (u.w)
//! ```
//!
//! [`bell_operator_full`] builds the same operator on all `2^n` states site by
//! site and serves as the independent check of that identity.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequalities::dicke_family_rational;
use crate::model::BellInequality;

/// Largest `n` for which the full `2^n`-dimensional operator is built.
pub const FULL_SPACE_LIMIT: u32 = 10;

/// Measurement angle `theta`: `M0 = sigma_z`, `M1 = cos(theta) sigma_z + sin(theta) sigma_x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSettings {
    theta: f64,
}

impl MeasurementSettings {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::ThetaOutOfRange(theta));
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Bloch direction of `M1` as `(x, y, z)`.
    pub fn m1_direction(&self) -> [f64; 3] {
        [self.theta.sin(), 0.0, self.theta.cos()]
    }

    /// `(M0, M1)` as real 2x2 matrices in the basis `|0>, |1>` with
    /// `sigma_z |0> = |0>`.
    pub fn local_observables(&self) -> ([[f64; 2]; 2], [[f64; 2]; 2]) {
        let (s, c) = self.theta.sin_cos();
        ([[1.0, 0.0], [0.0, -1.0]], [[c, s], [s, -c]])
    }
}

/// Real-valued Bell expression `alpha S0 + beta S1 + (gamma/2) S00 +
/// delta S01 + (epsilon/2) S11 + beta_c` used on the quantum side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellExpression {
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub beta_c: f64,
}

impl From<&BellInequality> for BellExpression {
    fn from(ineq: &BellInequality) -> Self {
        let c = ineq.coefficients();
        BellExpression {
            n: ineq.n(),
            alpha: c.alpha as f64,
            beta: c.beta as f64,
            gamma: c.gamma as f64,
            delta: c.delta as f64,
            epsilon: c.epsilon as f64,
            beta_c: ineq.beta_c() as f64,
        }
    }
}

impl BellExpression {
    /// The Dicke-class expression with `beta_c(n) = n(n-1) ceil((n+2)/2) / 2`,
    /// without the integer rescaling applied to the canonical form.
    pub fn dicke(n: u32) -> Result<Self> {
        let (c, bound) = dicke_family_rational(n)?;
        let f = |r: num_rational::Ratio<i128>| *r.numer() as f64 / *r.denom() as f64;
        Ok(BellExpression {
            n,
            alpha: f(c[0]),
            beta: f(c[1]),
            gamma: f(c[2]),
            delta: f(c[3]),
            epsilon: f(c[4]),
            beta_c: f(bound),
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        BellExpression {
            n: self.n,
            alpha: self.alpha * factor,
            beta: self.beta * factor,
            gamma: self.gamma * factor,
            delta: self.delta * factor,
            epsilon: self.epsilon * factor,
            beta_c: self.beta_c * factor,
        }
    }

    fn check(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Precondition(format!("Bell operator needs n >= 2, got {}", self.n)));
        }
        Ok(())
    }
}

/// Real symmetric `(n+1) x (n+1)` matrix with half-bandwidth 2 in the Dicke
/// basis `|D_n^k>`, `k` the number of qubits in `|1>`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricOperator {
    n: u32,
    diag: Vec<f64>,
    sub1: Vec<f64>,
    sub2: Vec<f64>,
}

impl SymmetricOperator {
    pub fn zeros(n: u32) -> Self {
        let d = n as usize + 1;
        SymmetricOperator {
            n,
            diag: vec![0.0; d],
            sub1: vec![0.0; d.saturating_sub(1)],
            sub2: vec![0.0; d.saturating_sub(2)],
        }
    }

    pub fn identity(n: u32) -> Self {
        let mut m = Self::zeros(n);
        m.diag.iter_mut().for_each(|x| *x = 1.0);
        m
    }

    /// Builds from bands; `sub1[k]` is entry `(k+1, k)` and `sub2[k]` entry `(k+2, k)`.
    pub fn from_bands(n: u32, diag: Vec<f64>, sub1: Vec<f64>, sub2: Vec<f64>) -> Result<Self> {
        let d = n as usize + 1;
        if diag.len() != d || sub1.len() != d.saturating_sub(1) || sub2.len() != d.saturating_sub(2) {
            return Err(Error::Precondition("band lengths do not match dimension n + 1".into()));
        }
        Ok(SymmetricOperator { n, diag, sub1, sub2 })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn half_bandwidth(&self) -> usize {
        2
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sub1(&self) -> &[f64] {
        &self.sub1
    }

    pub fn sub2(&self) -> &[f64] {
        &self.sub2
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        let (hi, lo) = if k >= l { (k, l) } else { (l, k) };
        match hi - lo {
            0 => self.diag[lo],
            1 => self.sub1[lo],
            2 => self.sub2[lo],
            _ => 0.0,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |k, l| self.get(k, l))
    }

    /// `<D^k| op |D^k>`.
    pub fn dicke_expectation(&self, k: usize) -> f64 {
        self.diag[k]
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|k| {
                let lo = k.saturating_sub(2);
                let hi = (k + 2).min(d - 1);
                (lo..=hi).map(|l| self.get(k, l) * x[l]).sum()
            })
            .collect()
    }

    /// Largest absolute row sum, a bound on the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        let d = self.dim();
        (0..d)
            .map(|k| {
                let lo = k.saturating_sub(2);
                let hi = (k + 2).min(d - 1);
                (lo..=hi).map(|l| self.get(k, l).abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    fn add_scaled(&mut self, other: &SymmetricOperator, f: f64) {
        let zip = |a: &mut [f64], b: &[f64]| a.iter_mut().zip(b).for_each(|(x, y)| *x += f * y);
        zip(&mut self.diag, &other.diag);
        zip(&mut self.sub1, &other.sub1);
        zip(&mut self.sub2, &other.sub2);
    }

    fn shift(&mut self, f: f64) {
        self.diag.iter_mut().for_each(|x| *x += f);
    }
}

/// Collective spin pieces needed for quadratic forms in `S_z`, `S_x`.
struct SpinParts {
    z: SymmetricOperator,
    x: SymmetricOperator,
    zz: SymmetricOperator,
    zx_anti: SymmetricOperator,
    xx: SymmetricOperator,
}

impl SpinParts {
    fn new(n: u32) -> Self {
        let d = n as usize + 1;
        let nf = f64::from(n);
        let zv: Vec<f64> = (0..d).map(|k| nf / 2.0 - k as f64).collect();
        // <k+1| S_x |k> = sqrt((k+1)(n-k)) / 2.
        let xv: Vec<f64> = (0..d - 1).map(|k| 0.5 * (((k + 1) * (d - 1 - k)) as f64).sqrt()).collect();

        let mut z = SymmetricOperator::zeros(n);
        z.diag.copy_from_slice(&zv);
        let mut x = SymmetricOperator::zeros(n);
        x.sub1.copy_from_slice(&xv);

        let mut zz = SymmetricOperator::zeros(n);
        zz.diag.iter_mut().zip(&zv).for_each(|(o, z)| *o = z * z);

        let mut zx_anti = SymmetricOperator::zeros(n);
        for k in 0..d - 1 {
            zx_anti.sub1[k] = (zv[k] + zv[k + 1]) * xv[k];
        }

        let mut xx = SymmetricOperator::zeros(n);
        for k in 0..d {
            let below = if k > 0 { xv[k - 1] * xv[k - 1] } else { 0.0 };
            let above = if k < d - 1 { xv[k] * xv[k] } else { 0.0 };
            xx.diag[k] = below + above;
        }
        for k in 0..d.saturating_sub(2) {
            xx.sub2[k] = xv[k] * xv[k + 1];
        }
        SpinParts { z, x, zz, zx_anti, xx }
    }
}

/// Bell operator (including `+ beta_c`) restricted to the symmetric subspace.
pub fn bell_operator_sym(expr: &BellExpression, settings: &MeasurementSettings) -> Result<SymmetricOperator> {
    expr.check()?;
    let n = expr.n;
    let nf = f64::from(n);
    let (s, c) = settings.theta().sin_cos();
    let p = SpinParts::new(n);
    let mut out = SymmetricOperator::zeros(n);

    // One-body: 2 S_z and 2 (c S_z + s S_x).
    out.add_scaled(&p.z, 2.0 * expr.alpha + 2.0 * expr.beta * c);
    out.add_scaled(&p.x, 2.0 * expr.beta * s);

    // Two-body, from the collective identity with u = z, w = (s, 0, c):
    //   P00 = 4 Sz^2 - N
    //   P01 = 4c Sz^2 + 2s {Sz, Sx} - N c
    //   P11 = 4 (c^2 Sz^2 + cs {Sz, Sx} + s^2 Sx^2) - N
    let (g, dl, e) = (expr.gamma / 2.0, expr.delta, expr.epsilon / 2.0);
    out.add_scaled(&p.zz, 4.0 * g + 4.0 * c * dl + 4.0 * c * c * e);
    out.add_scaled(&p.zx_anti, 2.0 * s * dl + 4.0 * c * s * e);
    out.add_scaled(&p.xx, 4.0 * s * s * e);
    out.shift(-nf * (g + c * dl + e) + expr.beta_c);
    Ok(out)
}

/// Applies a single-site operator at `site` to basis state `state`,
/// returning up to two `(state, amplitude)` terms.
fn apply_local(op: &[[f64; 2]; 2], site: usize, state: usize) -> [(usize, f64); 2] {
    let bit = (state >> site) & 1;
    let cleared = state & !(1 << site);
    [(cleared, op[0][bit]), (cleared | (1 << site), op[1][bit])]
}

/// Bell operator on the full `2^n`-dimensional space, built from explicit
/// tensor products of the local observables. Bit `i` of a basis index is
/// the state of qubit `i`.
pub fn bell_operator_full(expr: &BellExpression, settings: &MeasurementSettings) -> Result<DMatrix<f64>> {
    expr.check()?;
    let n = expr.n;
    if n > FULL_SPACE_LIMIT {
        return Err(Error::TooLarge { what: "full-space Bell operator", n, limit: FULL_SPACE_LIMIT });
    }
    let sites = n as usize;
    let dim = 1usize << sites;
    let (m0, m1) = settings.local_observables();
    let ones = [(&m0, expr.alpha), (&m1, expr.beta)];
    let twos = [(&m0, &m0, expr.gamma / 2.0), (&m0, &m1, expr.delta), (&m1, &m1, expr.epsilon / 2.0)];
    let mut out = DMatrix::<f64>::zeros(dim, dim);
    for col in 0..dim {
        out[(col, col)] += expr.beta_c;
        for i in 0..sites {
            for &(m, w) in &ones {
                for (row, amp) in apply_local(m, i, col) {
                    out[(row, col)] += w * amp;
                }
            }
            for j in 0..sites {
                if i == j {
                    continue;
                }
                for &(mi, mj, w) in &twos {
                    for (mid, a1) in apply_local(mj, j, col) {
                        if a1 == 0.0 {
                            continue;
                        }
                        for (row, a2) in apply_local(mi, i, mid) {
                            out[(row, col)] += w * a1 * a2;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `|D_n^k>` as a `2^n` amplitude vector.
pub fn dicke_state_full(n: u32, k: u32) -> Result<DVector<f64>> {
    if n > FULL_SPACE_LIMIT + 4 {
        return Err(Error::TooLarge { what: "full-space Dicke state", n, limit: FULL_SPACE_LIMIT + 4 });
    }
    if k > n {
        return Err(Error::Precondition(format!("excitation {k} exceeds n = {n}")));
    }
    let dim = 1usize << n;
    let count = (0..dim).filter(|s| s.count_ones() == k).count() as f64;
    let amp = count.sqrt().recip();
    Ok(DVector::from_fn(dim, |s, _| if s.count_ones() == k { amp } else { 0.0 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Coefficients;
    use std::f64::consts::PI;

    fn ineq6(n: u32) -> BellExpression {
        let i = BellInequality::new(n, Coefficients::new(-2, 0, 1, -1, 1), 2 * i64::from(n)).unwrap();
        BellExpression::from(&i)
    }

    #[test]
    fn theta_range_is_enforced() {
        assert!(MeasurementSettings::new(-0.1).is_err());
        assert!(MeasurementSettings::new(3.2).is_err());
        assert!(MeasurementSettings::new(PI).is_ok());
    }

    #[test]
    fn theta_zero_is_diagonal() {
        let op = bell_operator_sym(&ineq6(6), &MeasurementSettings::new(0.0).unwrap()).unwrap();
        assert!(op.sub1().iter().chain(op.sub2()).all(|&x| x.abs() < 1e-12));
        assert!(op.diag().iter().all(|&x| x >= -1e-9));
    }

    #[test]
    fn compression_of_full_operator_matches() {
        for n in 2..=6u32 {
            for &theta in &[0.0, 0.4, PI / 2.0, 2.2, PI] {
                let expr = ineq6(n);
                let s = MeasurementSettings::new(theta).unwrap();
                let sym = bell_operator_sym(&expr, &s).unwrap();
                let full = bell_operator_full(&expr, &s).unwrap();
                let states: Vec<_> = (0..=n).map(|k| dicke_state_full(n, k).unwrap()).collect();
                for k in 0..=n as usize {
                    for l in 0..=n as usize {
                        let v = (states[k].transpose() * &full * &states[l])[(0, 0)];
                        assert!((v - sym.get(k, l)).abs() < 1e-9, "n={n} theta={theta} ({k},{l})");
                    }
                }
            }
        }
    }

    #[test]
    fn full_operator_is_symmetric() {
        let m =
            bell_operator_full(&BellExpression::dicke(3).unwrap(), &MeasurementSettings::new(1.1).unwrap()).unwrap();
        assert!((&m - m.transpose()).abs().max() < 1e-12);
    }

    #[test]
    fn full_operator_refuses_large_n() {
        let e = ineq6(11);
        assert!(matches!(bell_operator_full(&e, &MeasurementSettings::new(1.0).unwrap()), Err(Error::TooLarge { .. })));
        let mut e1 = ineq6(2);
        e1.n = 1;
        assert!(bell_operator_full(&e1, &MeasurementSettings::new(1.0).unwrap()).is_err());
    }

    #[test]
    fn dicke_six_value_at_optimal_angle() {
        let theta = (0.75f64).acos();
        let op =
            bell_operator_sym(&BellExpression::dicke(6).unwrap(), &MeasurementSettings::new(theta).unwrap()).unwrap();
        assert!((op.dicke_expectation(3) + 0.75).abs() < 1e-10);
    }
}
