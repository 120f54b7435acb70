//! C ABI over `symbell`.
//!
//! Every fallible function returns a [`SymbellStatus`]; on failure the
//! message is available from [`symbell_last_error`] on the same thread.
//! Facet lists are opaque handles released with [`symbell_facets_free`].
//! Panics never cross the boundary: they are reported as
//! `SYMBELL_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use symbell::inequalities::classical_bound_exact;
use symbell::polytope::{self, FacetList};
use symbell::quantum::{dicke_violation_analytic, optimize_theta, BellExpression, Objective};
use symbell::{BellInequality, Coefficients, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbellStatus {
    Ok = 0,
    NullPointer = 1,
    Precondition = 2,
    TooLarge = 3,
    Parity = 4,
    OutOfRange = 5,
    Overflow = 6,
    Consistency = 7,
    NonConvergence = 8,
    Internal = 9,
}

/// Coefficients of `alpha S0 + beta S1 + gamma/2 S00 + delta S01 + epsilon/2 S11`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SymbellCoefficients {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    pub delta: i64,
    pub epsilon: i64,
}

/// `coefficients . S + beta_c >= 0` for `n` parties.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SymbellInequality {
    pub n: u32,
    pub coefficients: SymbellCoefficients,
    pub beta_c: i64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SymbellViolation {
    pub n: u32,
    pub theta_star: f64,
    pub lambda_min: f64,
    pub beta_c: f64,
    pub effective_violation: f64,
    pub violated: bool,
}

/// Opaque facet list.
pub struct SymbellFacetList {
    inner: FacetList,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SymbellStatus {
    match e {
        Error::Precondition(_) | Error::InvalidCounts { .. } | Error::PartyMismatch { .. } => {
            SymbellStatus::Precondition
        }
        Error::TooLarge { .. } => SymbellStatus::TooLarge,
        Error::Parity(_) => SymbellStatus::Parity,
        Error::ThetaOutOfRange(_) => SymbellStatus::OutOfRange,
        Error::Overflow(_) => SymbellStatus::Overflow,
        Error::DegenerateHull { .. } | Error::Consistency(_) => SymbellStatus::Consistency,
        Error::NonConvergence { .. } => SymbellStatus::NonConvergence,
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> SymbellStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SymbellStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            SymbellStatus::Internal
        }
    }
}

fn null_error(what: &str) -> SymbellStatus {
    set_error(format!("null pointer passed for {what}"));
    SymbellStatus::NullPointer
}

fn to_coefficients(c: &SymbellCoefficients) -> Coefficients {
    Coefficients::new(c.alpha, c.beta, c.gamma, c.delta, c.epsilon)
}

fn to_c(ineq: &BellInequality) -> SymbellInequality {
    let c = ineq.coefficients();
    SymbellInequality {
        n: ineq.n(),
        coefficients: SymbellCoefficients {
            alpha: c.alpha,
            beta: c.beta,
            gamma: c.gamma,
            delta: c.delta,
            epsilon: c.epsilon,
        },
        beta_c: ineq.beta_c(),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn symbell_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => panic!("version string has no interior NUL"),
    };
    VERSION.as_ptr()
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn symbell_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Enumerates all facets for `n` parties into a new list stored in `*out`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn symbell_facets_compute(n: u32, out: *mut *mut SymbellFacetList) -> SymbellStatus {
    if out.is_null() {
        return null_error("out");
    }
    guard(|| {
        let inner = polytope::facets(n)?;
        // SAFETY: checked non-null above; caller guarantees validity.
        unsafe { *out = Box::into_raw(Box::new(SymbellFacetList { inner })) };
        Ok(())
    })
}

/// Number of facets in `list` (0 for NULL).
///
/// # Safety
/// `list` must be NULL or a live handle from [`symbell_facets_compute`].
#[no_mangle]
pub unsafe extern "C" fn symbell_facets_count(list: *const SymbellFacetList) -> usize {
    // SAFETY: caller guarantees `list` is NULL or live.
    unsafe { list.as_ref() }.map_or(0, |l| l.inner.len())
}

/// Copies facet `index` of `list` into `*out`.
///
/// # Safety
/// `list` must be a live handle and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn symbell_facets_get(
    list: *const SymbellFacetList,
    index: usize,
    out: *mut SymbellInequality,
) -> SymbellStatus {
    // SAFETY: caller guarantees `list` is NULL or live.
    let Some(l) = (unsafe { list.as_ref() }) else { return null_error("list") };
    if out.is_null() {
        return null_error("out");
    }
    guard(|| {
        let f = l.inner.facets.get(index).ok_or_else(|| {
            Error::Precondition(format!("facet index {index} out of range for {} facets", l.inner.len()))
        })?;
        // SAFETY: checked non-null above.
        unsafe { *out = to_c(f) };
        Ok(())
    })
}

/// Releases a facet list. NULL is ignored.
///
/// # Safety
/// `list` must be NULL or a handle from [`symbell_facets_compute`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn symbell_facets_free(list: *mut SymbellFacetList) {
    if !list.is_null() {
        // SAFETY: produced by Box::into_raw in symbell_facets_compute.
        drop(unsafe { Box::from_raw(list) });
    }
}

/// Exact classical bound `*num / *den` (`den` is 1 or 2).
///
/// # Safety
/// All pointers must be valid; `coefficients` readable, `num` and `den` writable.
#[no_mangle]
pub unsafe extern "C" fn symbell_classical_bound(
    coefficients: *const SymbellCoefficients,
    n: u32,
    num: *mut i64,
    den: *mut i64,
) -> SymbellStatus {
    // SAFETY: caller guarantees validity.
    let Some(c) = (unsafe { coefficients.as_ref() }) else { return null_error("coefficients") };
    if num.is_null() || den.is_null() {
        return null_error("num/den");
    }
    guard(|| {
        let r = classical_bound_exact(&to_coefficients(c), n)?.beta_c;
        let conv = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow("classical bound"));
        let (p, q) = (conv(*r.numer())?, conv(*r.denom())?);
        // SAFETY: checked non-null above.
        unsafe {
            *num = p;
            *den = q;
        }
        Ok(())
    })
}

/// Minimizes the smallest eigenvalue of the Bell operator over the angle.
///
/// # Safety
/// `inequality` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn symbell_optimize_theta(
    inequality: *const SymbellInequality,
    out: *mut SymbellViolation,
) -> SymbellStatus {
    // SAFETY: caller guarantees validity.
    let Some(i) = (unsafe { inequality.as_ref() }) else { return null_error("inequality") };
    if out.is_null() {
        return null_error("out");
    }
    guard(|| {
        let ineq = BellInequality::new(i.n, to_coefficients(&i.coefficients), i.beta_c)?;
        let r = optimize_theta(&BellExpression::from(&ineq), Objective::MinEigenvalue)?;
        let v = SymbellViolation {
            n: r.n,
            theta_star: r.theta_star,
            lambda_min: r.lambda_min,
            beta_c: r.beta_c,
            effective_violation: r.effective_violation,
            violated: r.violated,
        };
        // SAFETY: checked non-null above.
        unsafe { *out = v };
        Ok(())
    })
}

/// Analytic violation of the Dicke-class inequality by `|D_n^{ceil(n/2)}>`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symbell_dicke_violation(n: u32, out: *mut SymbellViolation) -> SymbellStatus {
    if out.is_null() {
        return null_error("out");
    }
    guard(|| {
        let d = dicke_violation_analytic(n)?;
        let v = SymbellViolation {
            n,
            theta_star: d.theta_min,
            lambda_min: d.value,
            beta_c: d.beta_c,
            effective_violation: d.effective,
            violated: d.value < 0.0,
        };
        // SAFETY: checked non-null above.
        unsafe { *out = v };
        Ok(())
    })
}
