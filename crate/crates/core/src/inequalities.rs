//! Classical bounds and the analytic inequality families.
//!
//! Two routes compute a classical bound:
//!
//! * [`classical_bound_exact`] scans the `2(n^2+1)` boundary tuples of the
//!   strategy tetrahedron;
//! * [`classical_bound_bruteforce`] scans all `4^n` deterministic strategy
//!   assignments party by party.
//!
//! The three-parameter class is built by [`class_b_build`] and recognised
//! inside a facet list by [`classify_facets_as_class_b`]. The Dicke class,
//! violated by half-filled Dicke states, is built by [`dicke_build`].

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{phi, BellInequality, Coefficients, StrategyCounts, SymmetricVector};
use crate::polytope::{enumerate_boundary_counts, FacetList};

/// Upper limit on `n` for the `4^n` brute-force scan.
pub const BRUTEFORCE_BOUND_LIMIT: u32 = 14;

/// Exact classical bound with every minimizing boundary tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub n: u32,
    pub beta_c: Ratio<i128>,
    pub minimizers: Vec<StrategyCounts>,
}

impl BoundReport {
    /// The canonical inequality carrying this bound.
    pub fn inequality(&self, coefficients: Coefficients) -> Result<BellInequality> {
        BellInequality::with_rational_bound(self.n, coefficients, self.beta_c)
    }
}

/// `beta_C = -min I` over the boundary of the strategy tetrahedron.
pub fn classical_bound_exact(coefficients: &Coefficients, n: u32) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::Precondition(format!("classical bound needs n >= 2, got {n}")));
    }
    let mut best: Option<i128> = None;
    let mut minimizers = Vec::new();
    for p in enumerate_boundary_counts(n)? {
        let value = coefficients.evaluate_twice(&phi(&p))?;
        match best {
            Some(b) if value > b => {}
            Some(b) if value == b => minimizers.push(p),
            _ => {
                best = Some(value);
                minimizers.clear();
                minimizers.push(p);
            }
        }
    }
    let min_twice = best.expect("boundary is never empty");
    Ok(BoundReport { n, beta_c: Ratio::new(-min_twice, 2), minimizers })
}

/// `beta_C` by exhaustive search over all `4^n` assignments of a
/// deterministic strategy to each party.
pub fn classical_bound_bruteforce(coefficients: &Coefficients, n: u32) -> Result<Ratio<i128>> {
    if n < 2 {
        return Err(Error::Precondition(format!("classical bound needs n >= 2, got {n}")));
    }
    if n > BRUTEFORCE_BOUND_LIMIT {
        return Err(Error::TooLarge { what: "brute-force classical bound", n, limit: BRUTEFORCE_BOUND_LIMIT });
    }
    let [alpha, beta, gamma, delta, epsilon] = coefficients.as_array().map(i128::from);
    let parties = n as usize;
    let mut x = vec![0i128; parties];
    let mut y = vec![0i128; parties];
    let mut best = i128::MAX;
    for code in 0u64..(1u64 << (2 * n)) {
        for i in 0..parties {
            let s = (code >> (2 * i)) & 3;
            x[i] = if s & 1 == 0 { 1 } else { -1 };
            y[i] = if s & 2 == 0 { 1 } else { -1 };
        }
        let s0: i128 = x.iter().sum();
        let s1: i128 = y.iter().sum();
        // Sums over ordered pairs i != j, party by party.
        let (mut s00, mut s01, mut s11) = (0i128, 0i128, 0i128);
        for i in 0..parties {
            s00 += x[i] * (s0 - x[i]);
            s01 += x[i] * (s1 - y[i]);
            s11 += y[i] * (s1 - y[i]);
        }
        let twice = 2 * alpha * s0 + 2 * beta * s1 + gamma * s00 + 2 * delta * s01 + epsilon * s11;
        best = best.min(twice);
    }
    Ok(Ratio::new(-best, 2))
}

/// Result of checking a user-supplied bound against the exact one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundCheck {
    Exact,
    /// Valid but not attained.
    Loose {
        exact: Ratio<i128>,
    },
    /// Smaller than the exact bound: some local strategy violates it.
    Invalid {
        exact: Ratio<i128>,
    },
}

/// Compares a claimed bound with the exact classical bound.
pub fn check_user_bound(coefficients: &Coefficients, n: u32, claimed: Ratio<i128>) -> Result<BoundCheck> {
    let exact = classical_bound_exact(coefficients, n)?.beta_c;
    Ok(match claimed.cmp(&exact) {
        std::cmp::Ordering::Equal => BoundCheck::Exact,
        std::cmp::Ordering::Greater => BoundCheck::Loose { exact },
        std::cmp::Ordering::Less => BoundCheck::Invalid { exact },
    })
}

/// Sign parameter, serialised as `1` / `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be 1 or -1, got {other}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value() as i8
    }
}

/// Parameters of the three-parameter class: `gamma = x^2`, `epsilon = y^2`,
/// `delta = sigma x y`, `beta = mu y`, `alpha = x (sigma mu +/- (x + y))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassBParams {
    pub x: u32,
    pub y: u32,
    pub sigma: Sign,
    pub mu: i64,
    pub branch: Sign,
}

impl ClassBParams {
    pub fn coprime(&self) -> bool {
        self.x.gcd(&self.y) == 1
    }

    /// The parity rule: `mu` has parity opposite to `y^2` for odd `n` and to
    /// `x^2` for even `n`.
    pub fn check_parity(&self, n: u32) -> Result<()> {
        let (reference, name) = if n % 2 == 1 { (self.y, "epsilon = y^2") } else { (self.x, "gamma = x^2") };
        if (self.mu - i64::from(reference)).rem_euclid(2) == 0 {
            return Err(Error::Parity(format!(
                "mu = {} must have parity opposite to {name} = {} for {} n = {n}",
                self.mu,
                u64::from(reference).pow(2),
                if n % 2 == 1 { "odd" } else { "even" }
            )));
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.x == 0 || self.y == 0 {
            return Err(Error::Precondition("x and y must be positive".into()));
        }
        Ok(())
    }

    /// Raw (unnormalised) coefficients.
    pub fn coefficients(&self) -> Result<Coefficients> {
        self.validate()?;
        let (x, y) = (i64::from(self.x), i64::from(self.y));
        let (sigma, pm) = (self.sigma.value(), self.branch.value());
        let of = || Error::Overflow("class parameters");
        let alpha = sigma
            .checked_mul(self.mu)
            .and_then(|sm| x.checked_add(y).and_then(|s| s.checked_mul(pm)).and_then(|t| sm.checked_add(t)))
            .and_then(|t| t.checked_mul(x))
            .ok_or_else(of)?;
        let beta = self.mu.checked_mul(y).ok_or_else(of)?;
        Ok(Coefficients::new(alpha, beta, x * x, sigma * x * y, y * y))
    }

    /// `beta_C = ((n (x+y)^2 + (sigma mu +/- x)^2) - 1) / 2`.
    pub fn analytic_bound(&self, n: u32) -> Ratio<i128> {
        let (x, y) = (i128::from(self.x), i128::from(self.y));
        let shifted = i128::from(self.sigma.value()) * i128::from(self.mu) + i128::from(self.branch.value()) * x;
        Ratio::new(i128::from(n) * (x + y) * (x + y) + shifted * shifted - 1, 2)
    }

    /// The boundary count `r` entering the validity core: `b`, `a`, `c` or `d`
    /// for `(+, sigma=+1)`, `(+, -1)`, `(-, +1)`, `(-, -1)`.
    pub fn core_count(&self, p: &StrategyCounts) -> u32 {
        match (self.branch, self.sigma) {
            (Sign::Plus, Sign::Plus) => p.b(),
            (Sign::Plus, Sign::Minus) => p.a(),
            (Sign::Minus, Sign::Plus) => p.c(),
            (Sign::Minus, Sign::Minus) => p.d(),
        }
    }

    /// Left-hand side of `(x S0 + sigma y S1 + sigma mu +/- x)^2 + 8 x y r >= 1`.
    pub fn core_value(&self, p: &StrategyCounts) -> i128 {
        let v = phi(p);
        let (x, y) = (i128::from(self.x), i128::from(self.y));
        let sigma = i128::from(self.sigma.value());
        let t = x * i128::from(v.s0)
            + sigma * y * i128::from(v.s1)
            + sigma * i128::from(self.mu)
            + i128::from(self.branch.value()) * x;
        t * t + 8 * x * y * i128::from(self.core_count(p))
    }
}

/// Whether the validity core holds at every boundary tuple for `n` parties.
pub fn class_b_core_holds(params: &ClassBParams, n: u32) -> Result<bool> {
    Ok(enumerate_boundary_counts(n)?.iter().all(|p| params.core_value(p) >= 1))
}

/// Builds a class member and asserts its analytic bound against the exact
/// boundary minimisation.
pub fn class_b_build(params: &ClassBParams, n: u32) -> Result<BellInequality> {
    if n < 2 {
        return Err(Error::Precondition(format!("n must be at least 2, got {n}")));
    }
    params.check_parity(n)?;
    let coefficients = params.coefficients()?;
    let analytic = params.analytic_bound(n);
    let exact = classical_bound_exact(&coefficients, n)?.beta_c;
    if analytic != exact {
        return Err(Error::Consistency(format!(
            "class bound {analytic} differs from exact bound {exact} for {params:?}, n = {n}"
        )));
    }
    BellInequality::with_rational_bound(n, coefficients, analytic)
}

/// Recovers class parameters from a canonical inequality, if it is (a
/// positive multiple of) a class member with admissible parity.
///
/// The squares `gamma = x^2`, `epsilon = y^2` and `|delta| = x y` fix the
/// ratio `x : y = p : q` and a common factor `u`; the bound then fixes the
/// overall scale `t` through `t^2 (n (p+q)^2 + m^2 - 2 beta_c / u) = 1`.
pub fn invert_class_b(ineq: &BellInequality) -> Option<ClassBParams> {
    let n = ineq.n();
    let c = ineq.coefficients();
    let (alpha, beta, gamma, delta, epsilon) =
        (i128::from(c.alpha), i128::from(c.beta), i128::from(c.gamma), i128::from(c.delta), i128::from(c.epsilon));
    if gamma <= 0 || epsilon <= 0 || delta == 0 || delta * delta != gamma * epsilon {
        return None;
    }
    let sigma = if delta > 0 { Sign::Plus } else { Sign::Minus };
    let g = gamma.gcd(&delta.abs());
    let (p, q) = (gamma / g, delta.abs() / g);
    if gamma % (p * p) != 0 {
        return None;
    }
    let u = gamma / (p * p);
    if epsilon != q * q * u || delta.abs() != p * q * u {
        return None;
    }
    let s = i128::from(sigma.value());
    let branch = [Sign::Plus, Sign::Minus]
        .into_iter()
        .find(|b| p * (s * beta + i128::from(b.value()) * u * q * (p + q)) == alpha * q)?;
    // m = sigma mu / t +/- p, with mu / t = beta / (u q).
    let m = Ratio::new(s * beta, u * q) + Ratio::from_integer(i128::from(branch.value()) * p);
    let r =
        Ratio::from_integer(i128::from(n) * (p + q) * (p + q)) + m * m - Ratio::new(2 * i128::from(ineq.beta_c()), u);
    if r <= Ratio::from_integer(0) {
        return None;
    }
    let t_squared = r.recip();
    if !t_squared.is_integer() {
        return None;
    }
    let t2 = t_squared.to_integer();
    let t = integer_sqrt(t2)?;
    let mu = Ratio::new(t * beta, u * q);
    if !mu.is_integer() {
        return None;
    }
    let params = ClassBParams {
        x: u32::try_from(t * p).ok()?,
        y: u32::try_from(t * q).ok()?,
        sigma,
        mu: i64::try_from(mu.to_integer()).ok()?,
        branch,
    };
    params.check_parity(n).ok()?;
    let rebuilt = BellInequality::with_rational_bound(n, params.coefficients().ok()?, params.analytic_bound(n)).ok()?;
    (rebuilt == *ineq).then_some(params)
}

fn integer_sqrt(v: i128) -> Option<i128> {
    if v < 0 {
        return None;
    }
    let r = (v as f64).sqrt().round() as i128;
    (r.saturating_sub(1)..=r + 1).find(|&s| s >= 0 && s * s == v)
}

/// Facets of a list that belong to the three-parameter class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassBMatch {
    pub count: usize,
    pub matched: Vec<(BellInequality, ClassBParams)>,
}

/// Counts the facets that are members of the three-parameter class. Each
/// facet is counted once; both signs of `sigma` and both branches are
/// admitted.
pub fn classify_facets_as_class_b(facets: &FacetList) -> ClassBMatch {
    let matched: Vec<_> = facets.facets.iter().filter_map(|f| invert_class_b(f).map(|p| (*f, p))).collect();
    ClassBMatch { count: matched.len(), matched }
}

/// Dicke-class coefficients and bound as written for the quantum problem,
/// `(alpha, beta, gamma, delta, epsilon, beta_c)`, possibly half-integers
/// for odd `n`.
pub fn dicke_family_rational(n: u32) -> Result<([Ratio<i128>; 5], Ratio<i128>)> {
    if n < 2 {
        return Err(Error::Precondition(format!("Dicke inequality needs n >= 2, got {n}")));
    }
    let nn = i128::from(n);
    let r = Ratio::from_integer;
    let alpha = if n.is_multiple_of(2) { r(0) } else { Ratio::new(nn * (nn - 1), 2) };
    let beta = alpha / r(nn);
    let coefficients = [alpha, beta, Ratio::new(nn * (nn - 1), 2), Ratio::new(nn, 2), r(-1)];
    Ok((coefficients, r(dicke_bound_formula(n)?)))
}

/// `beta_C(n) = n (n-1) ceil((n+2)/2) / 2`.
pub fn dicke_bound_formula(n: u32) -> Result<i128> {
    if n < 2 {
        return Err(Error::Precondition(format!("Dicke inequality needs n >= 2, got {n}")));
    }
    let nn = i128::from(n);
    Ok(nn * (nn - 1) * Integer::div_ceil(&(nn + 2), &2) / 2)
}

/// Factor by which the canonical integer Dicke inequality exceeds the
/// rational form of [`dicke_family_rational`]: 2 for odd `n`, 1 for even.
pub fn dicke_scale(n: u32) -> i64 {
    if n % 2 == 1 {
        2
    } else {
        1
    }
}

/// The Dicke-class inequality in canonical integer form.
pub fn dicke_build(n: u32) -> Result<BellInequality> {
    let (coeffs, bound) = dicke_family_rational(n)?;
    let k = Ratio::from_integer(i128::from(dicke_scale(n)));
    let to_i64 = |x: Ratio<i128>| -> Result<i64> {
        let s = x * k;
        if !s.is_integer() {
            return Err(Error::Consistency(format!("Dicke coefficient {x} not integral after scaling")));
        }
        i64::try_from(s.to_integer()).map_err(|_| Error::Overflow("Dicke coefficients"))
    };
    let coefficients = Coefficients::new(
        to_i64(coeffs[0])?,
        to_i64(coeffs[1])?,
        to_i64(coeffs[2])?,
        to_i64(coeffs[3])?,
        to_i64(coeffs[4])?,
    );
    let exact = classical_bound_exact(&coefficients, n)?.beta_c;
    if exact != bound * k {
        return Err(Error::Consistency(format!(
            "Dicke bound formula {} differs from exact bound {} at n = {n}",
            bound * k,
            exact
        )));
    }
    BellInequality::with_rational_bound(n, coefficients, exact)
}

/// The five boundary tuples at which the Dicke inequality is saturated.
pub fn dicke_saturating_counts(n: u32) -> Result<Vec<StrategyCounts>> {
    if n < 2 {
        return Err(Error::Precondition(format!("Dicke inequality needs n >= 2, got {n}")));
    }
    let tuples: Vec<[u32; 4]> = if n.is_multiple_of(2) {
        let h = n / 2;
        vec![[0, h, 0, h], [0, h + 1, 0, h - 1], [h - 1, 0, h + 1, 0], [h, 0, h, 0], [h, 0, 0, h]]
    } else {
        let (lo, hi) = ((n - 1) / 2, n.div_ceil(2));
        vec![[0, hi, 0, lo], [0, lo, 0, hi], [lo, 0, hi, 0], [(n - 3) / 2, 0, (n + 3) / 2, 0], [lo, 0, 0, hi]]
    };
    let mut out =
        tuples.into_iter().map(|[a, b, c, d]| StrategyCounts::new(a, b, c, d, n)).collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// Symmetric vectors of a list of counts.
pub fn images(counts: &[StrategyCounts]) -> Vec<SymmetricVector> {
    counts.iter().map(phi).collect()
}
