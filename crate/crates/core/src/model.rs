//! Shared domain types and the map from strategy counts to correlators.

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::json::exact_i64;

/// Number of parties applying each of the four deterministic local strategies
/// `{+1,+1}`, `{+1,-1}`, `{-1,+1}` and `{-1,-1}` (outcomes of measurement 0
/// and measurement 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StrategyCounts {
    a: u32,
    b: u32,
    c: u32,
    d: u32,
    n: u32,
}

impl StrategyCounts {
    pub fn new(a: u32, b: u32, c: u32, d: u32, n: u32) -> Result<Self> {
        let sum = u64::from(a) + u64::from(b) + u64::from(c) + u64::from(d);
        if n == 0 || sum != u64::from(n) {
            return Err(Error::InvalidCounts { a: a.into(), b: b.into(), c: c.into(), d: d.into(), n: n.into() });
        }
        Ok(Self { a, b, c, d, n })
    }

    /// Counts from signed integers, rejecting negative entries.
    pub fn from_signed(a: i64, b: i64, c: i64, d: i64, n: i64) -> Result<Self> {
        let conv = |x: i64| u32::try_from(x).ok();
        match (conv(a), conv(b), conv(c), conv(d), conv(n)) {
            (Some(a), Some(b), Some(c), Some(d), Some(n)) => Self::new(a, b, c, d, n),
            _ => Err(Error::Precondition(format!(
                "strategy counts ({a}, {b}, {c}, {d}) with n = {n} must be non-negative"
            ))),
        }
    }

    pub fn a(&self) -> u32 {
        self.a
    }
    pub fn b(&self) -> u32 {
        self.b
    }
    pub fn c(&self) -> u32 {
        self.c
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn as_array(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// True when at least one strategy is unused, i.e. the tuple lies on the
    /// boundary of the lattice tetrahedron.
    pub fn on_boundary(&self) -> bool {
        self.a == 0 || self.b == 0 || self.c == 0 || self.d == 0
    }
}

impl fmt::Display for StrategyCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// Symmetrized one- and two-body correlators `(S0, S1, S00, S01, S11)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymmetricVector {
    pub n: u32,
    pub s0: i64,
    pub s1: i64,
    pub s00: i64,
    pub s01: i64,
    pub s11: i64,
}

impl SymmetricVector {
    pub fn coordinates(&self) -> [i64; 5] {
        [self.s0, self.s1, self.s00, self.s01, self.s11]
    }

    /// Checks the range constraints every classical correlator vector obeys.
    pub fn within_classical_ranges(&self) -> bool {
        let n = i64::from(self.n);
        let pairs = n * (n - 1);
        (-n..=n).contains(&self.s0)
            && (-n..=n).contains(&self.s1)
            && (-n..=pairs).contains(&self.s00)
            && (-n..=pairs).contains(&self.s11)
            && self.s01.abs() <= pairs
    }
}

/// Maps strategy counts to their symmetrized correlator vector.
pub fn phi(counts: &StrategyCounts) -> SymmetricVector {
    let (a, b, c, d) = (i64::from(counts.a), i64::from(counts.b), i64::from(counts.c), i64::from(counts.d));
    let n = i64::from(counts.n);
    let s0 = a + b - c - d;
    let s1 = a - b + c - d;
    SymmetricVector { n: counts.n, s0, s1, s00: s0 * s0 - n, s01: s0 * s1 - (a - b - c + d), s11: s1 * s1 - n }
}

/// Coefficients of `alpha S0 + beta S1 + (gamma/2) S00 + delta S01 + (epsilon/2) S11`.
///
/// `gamma` and `epsilon` are stored undivided.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coefficients {
    #[serde(with = "exact_i64")]
    pub alpha: i64,
    #[serde(with = "exact_i64")]
    pub beta: i64,
    #[serde(with = "exact_i64")]
    pub gamma: i64,
    #[serde(with = "exact_i64")]
    pub delta: i64,
    #[serde(with = "exact_i64")]
    pub epsilon: i64,
}

impl Coefficients {
    pub const fn new(alpha: i64, beta: i64, gamma: i64, delta: i64, epsilon: i64) -> Self {
        Self { alpha, beta, gamma, delta, epsilon }
    }

    pub fn as_array(&self) -> [i64; 5] {
        [self.alpha, self.beta, self.gamma, self.delta, self.epsilon]
    }

    pub fn is_zero(&self) -> bool {
        self.as_array().iter().all(|&c| c == 0)
    }

    /// Twice the Bell expression, which is always an integer.
    pub fn evaluate_twice(&self, v: &SymmetricVector) -> Result<i128> {
        let terms = [
            (2 * i128::from(self.alpha), v.s0),
            (2 * i128::from(self.beta), v.s1),
            (i128::from(self.gamma), v.s00),
            (2 * i128::from(self.delta), v.s01),
            (i128::from(self.epsilon), v.s11),
        ];
        terms.iter().try_fold(0i128, |acc, &(c, s)| {
            c.checked_mul(i128::from(s))
                .and_then(|t| acc.checked_add(t))
                .ok_or(Error::Overflow("Bell expression evaluation"))
        })
    }

    /// The Bell expression as an exact rational.
    pub fn evaluate(&self, v: &SymmetricVector) -> Result<Ratio<i128>> {
        Ok(Ratio::new(self.evaluate_twice(v)?, 2))
    }

    fn scaled(&self, k: i64) -> Result<Self> {
        let m = |x: i64| x.checked_mul(k).ok_or(Error::Overflow("coefficient scaling"));
        Ok(Self::new(m(self.alpha)?, m(self.beta)?, m(self.gamma)?, m(self.delta)?, m(self.epsilon)?))
    }
}

/// A symmetric two-body Bell inequality `I + beta_c >= 0` in canonical form:
/// integer coefficients and bound with no common divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInequality", into = "RawInequality")]
pub struct BellInequality {
    n: u32,
    coefficients: Coefficients,
    beta_c: i64,
}

impl BellInequality {
    /// Builds the canonical representative: every entry is divided by the gcd
    /// of the six numbers.
    pub fn new(n: u32, coefficients: Coefficients, beta_c: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("n must be at least 1".into()));
        }
        if beta_c < 0 {
            return Err(Error::Precondition(format!("classical bound must be non-negative, got {beta_c}")));
        }
        if coefficients.as_array().contains(&i64::MIN) {
            return Err(Error::Overflow("inequality normalization"));
        }
        let g = coefficients.as_array().iter().fold(beta_c, |g, &c| g.gcd(&c));
        let (coefficients, beta_c) = if g > 1 {
            let div = |x: i64| x / g;
            (
                Coefficients::new(
                    div(coefficients.alpha),
                    div(coefficients.beta),
                    div(coefficients.gamma),
                    div(coefficients.delta),
                    div(coefficients.epsilon),
                ),
                beta_c / g,
            )
        } else {
            (coefficients, beta_c)
        };
        Ok(Self { n, coefficients, beta_c })
    }

    /// Canonical inequality from coefficients and a possibly half-integer
    /// bound. A denominator in the bound is cleared by rescaling everything.
    pub fn with_rational_bound(n: u32, coefficients: Coefficients, beta_c: Ratio<i128>) -> Result<Self> {
        let denom = i64::try_from(*beta_c.denom()).map_err(|_| Error::Overflow("bound"))?;
        let scaled = coefficients.scaled(denom)?;
        let numer = i64::try_from(*beta_c.numer()).map_err(|_| Error::Overflow("bound"))?;
        Self::new(n, scaled, numer)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn beta_c(&self) -> i64 {
        self.beta_c
    }

    fn check_parties(&self, v: &SymmetricVector) -> Result<()> {
        if v.n != self.n {
            return Err(Error::PartyMismatch { expected: self.n, found: v.n });
        }
        Ok(())
    }

    /// Value of the Bell expression `I` at `v` (without the bound).
    pub fn evaluate(&self, v: &SymmetricVector) -> Result<Ratio<i128>> {
        self.check_parties(v)?;
        self.coefficients.evaluate(v)
    }

    /// `2 (I(v) + beta_c)`; non-negative for every local vector iff the
    /// inequality is valid.
    pub fn slack_twice(&self, v: &SymmetricVector) -> Result<i128> {
        self.check_parties(v)?;
        Ok(self.coefficients.evaluate_twice(v)? + 2 * i128::from(self.beta_c))
    }

    fn sort_key(&self) -> (u32, [i64; 5], i64) {
        (self.n, self.coefficients.as_array(), self.beta_c)
    }
}

impl PartialOrd for BellInequality {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BellInequality {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for BellInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coefficients;
        write!(
            f,
            "{}*S0 + {}*S1 + ({}/2)*S00 + {}*S01 + ({}/2)*S11 + {} >= 0",
            c.alpha, c.beta, c.gamma, c.delta, c.epsilon, self.beta_c
        )
    }
}

/// Flat wire form `{n, alpha, beta, gamma, delta, epsilon, beta_c}`.
#[derive(Serialize, Deserialize)]
struct RawInequality {
    n: u32,
    #[serde(flatten)]
    coefficients: Coefficients,
    #[serde(with = "exact_i64")]
    beta_c: i64,
}

impl TryFrom<RawInequality> for BellInequality {
    type Error = Error;

    fn try_from(raw: RawInequality) -> Result<Self> {
        BellInequality::new(raw.n, raw.coefficients, raw.beta_c)
    }
}

impl From<BellInequality> for RawInequality {
    fn from(ineq: BellInequality) -> Self {
        RawInequality { n: ineq.n, coefficients: ineq.coefficients, beta_c: ineq.beta_c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(a: u32, b: u32, c: u32, d: u32) -> StrategyCounts {
        StrategyCounts::new(a, b, c, d, a + b + c + d).unwrap()
    }

    /// Symmetrizes an explicit list of per-party outcome pairs by summing over
    /// ordered pairs of distinct parties.
    fn symmetrize(parties: &[(i64, i64)]) -> [i64; 5] {
        let mut s = [0i64; 5];
        for (i, &(x, y)) in parties.iter().enumerate() {
            s[0] += x;
            s[1] += y;
            for (j, &(xj, yj)) in parties.iter().enumerate() {
                if i != j {
                    s[2] += x * xj;
                    s[3] += x * yj;
                    s[4] += y * yj;
                }
            }
        }
        s
    }

    fn explicit_parties(c: &StrategyCounts) -> Vec<(i64, i64)> {
        let mut parties = Vec::new();
        parties.extend(std::iter::repeat_n((1, 1), c.a() as usize));
        parties.extend(std::iter::repeat_n((1, -1), c.b() as usize));
        parties.extend(std::iter::repeat_n((-1, 1), c.c() as usize));
        parties.extend(std::iter::repeat_n((-1, -1), c.d() as usize));
        parties
    }

    #[test]
    fn phi_all_plus_is_maximal() {
        let v = phi(&counts(4, 0, 0, 0));
        assert_eq!(v.coordinates(), [4, 4, 12, 12, 12]);
    }

    #[test]
    fn phi_matches_hand_values() {
        assert_eq!(phi(&counts(0, 2, 0, 2)).coordinates(), [0, -4, -4, 0, 12]);
        assert_eq!(phi(&counts(2, 0, 2, 0)).coordinates(), [0, 4, -4, 0, 12]);
    }

    #[test]
    fn phi_matches_explicit_symmetrization_for_small_n() {
        for n in 1..=6u32 {
            for a in 0..=n {
                for b in 0..=n - a {
                    for c in 0..=n - a - b {
                        let p = counts(a, b, c, n - a - b - c);
                        assert_eq!(phi(&p).coordinates(), symmetrize(&explicit_parties(&p)), "{p}");
                    }
                }
            }
        }
    }

    #[test]
    fn phi_of_every_party_assignment_matches_its_counts() {
        // Every one of the 4^n assignments, not just sorted representatives.
        for n in 1..=5u32 {
            for code in 0..4u32.pow(n) {
                let mut parties = Vec::new();
                let mut cnt = [0u32; 4];
                let mut x = code;
                for _ in 0..n {
                    let s = x % 4;
                    x /= 4;
                    cnt[s as usize] += 1;
                    parties.push(match s {
                        0 => (1, 1),
                        1 => (1, -1),
                        2 => (-1, 1),
                        _ => (-1, -1),
                    });
                }
                let p = counts(cnt[0], cnt[1], cnt[2], cnt[3]);
                assert_eq!(phi(&p).coordinates(), symmetrize(&parties));
            }
        }
    }

    #[test]
    fn counts_must_sum_to_n() {
        assert!(StrategyCounts::new(1, 1, 1, 1, 5).is_err());
        assert!(StrategyCounts::new(0, 0, 0, 0, 0).is_err());
        assert!(StrategyCounts::from_signed(-1, 2, 1, 2, 4).is_err());
        assert!(StrategyCounts::from_signed(1, 1, 1, 1, 4).is_ok());
    }

    #[test]
    fn boundary_membership() {
        assert!(counts(0, 1, 2, 3).on_boundary());
        assert!(!counts(1, 1, 1, 1).on_boundary());
    }

    #[test]
    fn evaluate_ineq_six_at_all_plus() {
        let ineq = BellInequality::new(4, Coefficients::new(-2, 0, 1, -1, 1), 8).unwrap();
        let v = phi(&counts(4, 0, 0, 0));
        assert_eq!(ineq.evaluate(&v).unwrap(), Ratio::from_integer(-8));
        assert_eq!(ineq.slack_twice(&v).unwrap(), 0);
    }

    #[test]
    fn evaluate_zero_coefficients() {
        let ineq = BellInequality::new(3, Coefficients::default(), 0).unwrap();
        let v = phi(&counts(1, 0, 2, 0));
        assert_eq!(ineq.evaluate(&v).unwrap(), Ratio::from_integer(0));
    }

    #[test]
    fn evaluate_half_integer() {
        let c = Coefficients::new(0, 0, 1, 0, 0);
        // n = 3: s00 = s0^2 - 3 is even; n = 2, s0 = 0 gives s00 = -2.
        let v = phi(&counts(1, 0, 0, 0));
        assert_eq!(c.evaluate(&v).unwrap(), Ratio::from_integer(0));
        let v = phi(&counts(1, 1, 0, 1));
        assert_eq!(v.s00, -2);
        assert_eq!(c.evaluate(&v).unwrap(), Ratio::from_integer(-1));
        let c = Coefficients::new(0, 0, 1, 0, 1);
        let v = phi(&counts(1, 1, 1, 1));
        // s0 = s1 = 0, s00 = s11 = -4.
        assert_eq!(c.evaluate(&v).unwrap(), Ratio::from_integer(-4));
        let c = Coefficients::new(0, 0, 1, 0, 0);
        let v = SymmetricVector { n: 3, s0: 0, s1: 0, s00: -3, s01: 0, s11: 0 };
        assert_eq!(c.evaluate(&v).unwrap(), Ratio::new(-3, 2));
    }

    #[test]
    fn evaluate_rejects_mismatched_parties() {
        let ineq = BellInequality::new(5, Coefficients::new(1, 0, 0, 0, 0), 5).unwrap();
        let v = phi(&counts(4, 0, 0, 0));
        assert_eq!(ineq.evaluate(&v), Err(Error::PartyMismatch { expected: 5, found: 4 }));
    }

    #[test]
    fn canonical_form_divides_gcd() {
        let ineq = BellInequality::new(5, Coefficients::new(-4, 0, 2, -2, 2), 20).unwrap();
        assert_eq!(ineq.coefficients().as_array(), [-2, 0, 1, -1, 1]);
        assert_eq!(ineq.beta_c(), 10);
        assert!(BellInequality::new(5, Coefficients::default(), -1).is_err());
    }

    #[test]
    fn rational_bound_is_cleared() {
        let ineq = BellInequality::with_rational_bound(3, Coefficients::new(0, 0, 1, 0, 0), Ratio::new(3, 2)).unwrap();
        assert_eq!(ineq.coefficients().as_array(), [0, 0, 2, 0, 0]);
        assert_eq!(ineq.beta_c(), 3);
    }

    #[test]
    fn json_wire_format() {
        let ineq = BellInequality::new(5, Coefficients::new(-2, 0, 1, -1, 1), 10).unwrap();
        let s = serde_json::to_string(&ineq).unwrap();
        assert_eq!(s, r#"{"n":5,"alpha":-2,"beta":0,"gamma":1,"delta":-1,"epsilon":1,"beta_c":10}"#);
        let back: BellInequality = serde_json::from_str(&s).unwrap();
        assert_eq!(back, ineq);
        let v = phi(&counts(2, 0, 2, 0));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"n":4,"s0":0,"s1":4,"s00":-4,"s01":0,"s11":12}"#);
    }

    proptest::proptest! {
        #[test]
        fn evaluate_is_linear(
            c in proptest::array::uniform5(-50i64..50),
            a1 in 0u32..6, b1 in 0u32..6, c1 in 0u32..6,
            a2 in 0u32..6, b2 in 0u32..6, c2 in 0u32..6,
        ) {
            let n = 16;
            let p = counts(a1, b1, c1, n - a1 - b1 - c1);
            let q = counts(a2, b2, c2, n - a2 - b2 - c2);
            let (u, w) = (phi(&p), phi(&q));
            let sum = SymmetricVector {
                n,
                s0: u.s0 + w.s0,
                s1: u.s1 + w.s1,
                s00: u.s00 + w.s00,
                s01: u.s01 + w.s01,
                s11: u.s11 + w.s11,
            };
            let coeffs = Coefficients::new(c[0], c[1], c[2], c[3], c[4]);
            proptest::prop_assert_eq!(
                coeffs.evaluate(&sum).unwrap(),
                coeffs.evaluate(&u).unwrap() + coeffs.evaluate(&w).unwrap()
            );
        }

        #[test]
        fn json_roundtrip_preserves_large_integers(
            c in proptest::array::uniform5(i64::MIN..=i64::MAX),
            bound in 0i64..=i64::MAX,
        ) {
            let coeffs = Coefficients::new(c[0], c[1], c[2], c[3], c[4]);
            if let Ok(ineq) = BellInequality::new(7, coeffs, bound) {
                let s = serde_json::to_string(&ineq).unwrap();
                let back: BellInequality = serde_json::from_str(&s).unwrap();
                proptest::prop_assert_eq!(back, ineq);
            }
        }
    }
}
