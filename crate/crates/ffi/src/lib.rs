//! C ABI over `amou-ktheory`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `_free` function. Every fallible call returns an
//! [`AmouStatus`]; on failure the message is kept per thread and read with
//! [`amou_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use amou_ktheory::equivalence::{mvn_equivalent, sim1_equivalent, sim_k_equivalent};
use amou_ktheory::harness::{check_axioms, RunConfig};
use amou_ktheory::kgroup::{k0_group, k1_group, k_group};
use amou_ktheory::model::{abs_value, classify, order_unit_norm};
use amou_ktheory::{AlgebraSpec, Element, Error, Tolerances};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmouStatus {
    Ok = 0,
    NullArgument = 1,
    ParseError = 2,
    ShapeMismatch = 3,
    Unsupported = 4,
    /// An input failed the predicate an operation requires.
    DomainError = 5,
    Numerical = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmouGroup {
    K0 = 0,
    K1 = 1,
    K = 2,
}

pub const AMOU_SELFADJOINT: u32 = 1;
pub const AMOU_POSITIVE: u32 = 1 << 1;
pub const AMOU_ORDER_PROJECTION: u32 = 1 << 2;
pub const AMOU_PARTIAL_ISOMETRY: u32 = 1 << 3;
pub const AMOU_UNITARY: u32 = 1 << 4;
pub const AMOU_PARTIAL_UNITARY: u32 = 1 << 5;

/// A model algebra.
pub struct AmouAlgebra(AlgebraSpec);

/// A matrix element over a model algebra.
pub struct AmouElement(Element);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AmouStatus {
    match e {
        Error::SpecParse(_) | Error::InvalidAlgebra(_) => AmouStatus::ParseError,
        Error::ShapeMismatch(_) | Error::LevelMismatch(_) | Error::AlgebraMismatch => AmouStatus::ShapeMismatch,
        Error::Unsupported(_) => AmouStatus::Unsupported,
        e if e.is_numerical() => AmouStatus::Numerical,
        Error::NoConvergence { .. } => AmouStatus::Numerical,
        _ => AmouStatus::DomainError,
    }
}

/// Runs `f`, converting errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), (AmouStatus, String)>) -> AmouStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AmouStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            AmouStatus::Panic
        }
    }
}

fn lift<T>(r: amou_ktheory::Result<T>) -> Result<T, (AmouStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (AmouStatus, String) {
    (AmouStatus::NullArgument, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or point to a valid `T`.
unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (AmouStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `s` must be null or a valid nul-terminated string.
unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, (AmouStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (AmouStatus::ParseError, format!("{what} is not UTF-8")))
}

/// # Safety
/// `out` must be null or writable.
unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), (AmouStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no nul bytes").into_raw()
}

/// The message of the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn amou_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn amou_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `fd:d1,d2,...`, `circle:dim:grid` or an inline JSON algebra.
///
/// # Safety
/// `spec` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn amou_algebra_parse(spec: *const c_char, out: *mut *mut AmouAlgebra) -> AmouStatus {
    guard(|| {
        let alg = lift(AlgebraSpec::parse(text(spec, "spec")?))?;
        write(out, Box::into_raw(Box::new(AmouAlgebra(alg))), "out")
    })
}

/// # Safety
/// `alg` must be null or a handle from [`amou_algebra_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn amou_algebra_free(alg: *mut AmouAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Parses an element from its JSON form.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn amou_element_from_json(json: *const c_char, out: *mut *mut AmouElement) -> AmouStatus {
    guard(|| {
        let v = lift(Element::from_json(text(json, "json")?))?;
        write(out, Box::into_raw(Box::new(AmouElement(v))), "out")
    })
}

/// The unit at level `level`.
///
/// # Safety
/// `alg` must be a live algebra handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn amou_element_unit(alg: *const AmouAlgebra, level: usize, out: *mut *mut AmouElement) -> AmouStatus {
    guard(|| {
        let alg = deref(alg, "alg")?;
        write(out, Box::into_raw(Box::new(AmouElement(Element::unit(&alg.0, level)))), "out")
    })
}

/// # Safety
/// `v` must be null or an element handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn amou_element_free(v: *mut AmouElement) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Serializes an element; free the result with [`amou_string_free`].
///
/// # Safety
/// `v` must be a live element handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn amou_element_to_json(v: *const AmouElement, out: *mut *mut c_char) -> AmouStatus {
    guard(|| {
        let v = deref(v, "v")?;
        write(out, into_c_string(v.0.to_json()), "out")
    })
}

/// `|v|`.
///
/// # Safety
/// `v` must be a live element handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn amou_element_abs(v: *const AmouElement, out: *mut *mut AmouElement) -> AmouStatus {
    guard(|| {
        let a = lift(abs_value(&deref(v, "v")?.0))?;
        write(out, Box::into_raw(Box::new(AmouElement(a))), "out")
    })
}

/// The order-unit norm, bracketed to `tol_bisect`.
///
/// # Safety
/// `v` must be a live element handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn amou_element_norm(v: *const AmouElement, tol_bisect: f64, out: *mut f64) -> AmouStatus {
    guard(|| {
        let n = lift(order_unit_norm(&deref(v, "v")?.0, tol_bisect))?;
        write(out, n, "out")
    })
}

/// Membership bits (`AMOU_SELFADJOINT`, ...) of a square element at tolerance `tol`.
///
/// # Safety
/// `v` must be a live element handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn amou_element_classify(v: *const AmouElement, tol: f64, out: *mut u32) -> AmouStatus {
    guard(|| {
        let c = lift(classify(&deref(v, "v")?.0, tol))?;
        let bits = [
            (c.is_selfadjoint, AMOU_SELFADJOINT),
            (c.is_positive, AMOU_POSITIVE),
            (c.is_order_projection, AMOU_ORDER_PROJECTION),
            (c.is_partial_isometry, AMOU_PARTIAL_ISOMETRY),
            (c.is_unitary, AMOU_UNITARY),
            (c.is_partial_unitary, AMOU_PARTIAL_UNITARY),
        ]
        .iter()
        .filter(|(b, _)| *b)
        .fold(0, |acc, (_, f)| acc | f);
        write(out, bits, "out")
    })
}

type Relation = fn(&Element, &Element, &Tolerances) -> amou_ktheory::Result<bool>;

unsafe fn decide(a: *const AmouElement, b: *const AmouElement, out: *mut bool, rel: Relation) -> AmouStatus {
    guard(|| {
        let d = lift(rel(&deref(a, "a")?.0, &deref(b, "b")?.0, &Tolerances::default()))?;
        write(out, d, "out")
    })
}

/// Murray-von Neumann equivalence of two order projections.
///
/// # Safety
/// `p` and `q` must be live element handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn amou_mvn_equivalent(p: *const AmouElement, q: *const AmouElement, out: *mut bool) -> AmouStatus {
    decide(p, q, out, |p, q, tol| mvn_equivalent(p, q, tol).map(|(d, _)| d))
}

/// Stabilized homotopy of two unitaries.
///
/// # Safety
/// `u` and `v` must be live element handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn amou_sim1_equivalent(u: *const AmouElement, v: *const AmouElement, out: *mut bool) -> AmouStatus {
    decide(u, v, out, sim1_equivalent)
}

/// Stabilized homotopy of two partial unitaries.
///
/// # Safety
/// `u` and `v` must be live element handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn amou_simk_equivalent(u: *const AmouElement, v: *const AmouElement, out: *mut bool) -> AmouStatus {
    decide(u, v, out, sim_k_equivalent)
}

/// The ordered group as JSON; free the result with [`amou_string_free`].
///
/// # Safety
/// `alg` must be a live algebra handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn amou_kgroup_json(alg: *const AmouAlgebra, which: AmouGroup, out: *mut *mut c_char) -> AmouStatus {
    guard(|| {
        let alg = &deref(alg, "alg")?.0;
        let tol = Tolerances::default();
        let view = lift(match which {
            AmouGroup::K0 => k0_group(alg, &tol),
            AmouGroup::K1 => k1_group(alg, &tol),
            AmouGroup::K => k_group(alg, &tol),
        })?;
        write(out, into_c_string(view.to_json()), "out")
    })
}

/// Runs the property suites and returns the JSON report; `exit_code` receives
/// the command-line exit code the same run would produce.
///
/// # Safety
/// `alg` must be a live algebra handle; `out` and `exit_code` writable.
#[no_mangle]
pub unsafe extern "C" fn amou_check_axioms_json(
    alg: *const AmouAlgebra,
    seed: u64,
    trials: u64,
    out: *mut *mut c_char,
    exit_code: *mut i32,
) -> AmouStatus {
    guard(|| {
        let alg = &deref(alg, "alg")?.0;
        let cfg = RunConfig {
            seed,
            trials,
            ..RunConfig::default()
        };
        let report = lift(check_axioms(alg, &cfg))?;
        write(exit_code, report.exit_code() as i32, "exit_code")?;
        write(out, into_c_string(report.to_json()), "out")
    })
}
