//! C ABI over `rmtest`.
//!
//! Every fallible function returns an [`RmtStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can be
//! read with [`rmt_last_error`]. Strings returned by the library are owned by
//! the caller and released with [`rmt_string_free`]; handles are released with
//! their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rmtest::charfind::find_characterization;
use rmtest::cli::characterization_json;
use rmtest::gf::{make_field, Fe, Field};
use rmtest::harness::{run_experiment, ExperimentSpec};
use rmtest::poly::{distance_to_rm, SparsePolynomial};
use rmtest::tester::{default_sample_size, sample_points};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RmtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    FieldError = 3,
    ParseError = 4,
    NotFound = 5,
    RuntimeError = 6,
    Panic = 7,
}

/// A finite field `F_q`.
pub struct RmtField {
    inner: Field,
}

/// A sparse multivariate polynomial over some `F_q`.
pub struct RmtPolynomial {
    inner: SparsePolynomial,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: RmtStatus, msg: impl Into<String>) -> RmtStatus {
    set_error(msg);
    status
}

/// Runs `body`, turning panics into `RmtStatus::Panic`.
fn guard(body: impl FnOnce() -> RmtStatus) -> RmtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(RmtStatus::Panic, msg)
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, RmtStatus> {
    if s.is_null() {
        return Err(fail(RmtStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(RmtStatus::InvalidArgument, "string is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> RmtStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            RmtStatus::Ok
        }
        Err(_) => fail(RmtStatus::RuntimeError, "output contains a NUL byte"),
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(RmtStatus::NullPointer, concat!("null argument `", stringify!($p), "`"));
        })+
    };
}

/// Message of the last failure on this thread, or NULL. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn rmt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rmt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn rmt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmt_field_new(p: u32, ell: u32, out: *mut *mut RmtField) -> RmtStatus {
    guard(|| {
        non_null!(out);
        match make_field(p, ell) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(RmtField { inner }));
                RmtStatus::Ok
            }
            Err(e) => fail(RmtStatus::FieldError, e.to_string()),
        }
    })
}

/// # Safety
/// `field` must be NULL or a handle from `rmt_field_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rmt_field_free(field: *mut RmtField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// `q`, or 0 for a NULL handle.
///
/// # Safety
/// `field` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rmt_field_order(field: *const RmtField) -> u32 {
    field.as_ref().map_or(0, |f| f.inner.order())
}

/// # Safety
/// `field` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rmt_field_characteristic(field: *const RmtField) -> u32 {
    field.as_ref().map_or(0, |f| f.inner.characteristic())
}

unsafe fn binary_op(
    field: *const RmtField,
    a: u32,
    b: u32,
    out: *mut u32,
    op: impl FnOnce(&Field, Fe, Fe) -> Result<Fe, String>,
) -> RmtStatus {
    guard(|| {
        non_null!(field, out);
        let f = &(*field).inner;
        let (a, b) = match (f.check(Fe(a)), f.check(Fe(b))) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return fail(RmtStatus::InvalidArgument, e.to_string()),
        };
        match op(f, a, b) {
            Ok(v) => {
                *out = v.0;
                RmtStatus::Ok
            }
            Err(msg) => fail(RmtStatus::InvalidArgument, msg),
        }
    })
}

/// # Safety
/// `field` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmt_field_add(field: *const RmtField, a: u32, b: u32, out: *mut u32) -> RmtStatus {
    binary_op(field, a, b, out, |f, a, b| Ok(f.add(a, b)))
}

/// # Safety
/// `field` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmt_field_sub(field: *const RmtField, a: u32, b: u32, out: *mut u32) -> RmtStatus {
    binary_op(field, a, b, out, |f, a, b| Ok(f.sub(a, b)))
}

/// # Safety
/// `field` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmt_field_mul(field: *const RmtField, a: u32, b: u32, out: *mut u32) -> RmtStatus {
    binary_op(field, a, b, out, |f, a, b| Ok(f.mul(a, b)))
}

/// Fails with `InvalidArgument` for `a = 0`.
///
/// # Safety
/// `field` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmt_field_inv(field: *const RmtField, a: u32, out: *mut u32) -> RmtStatus {
    binary_op(field, a, 0, out, |f, a, _| f.try_inv(a).map_err(|e| e.to_string()))
}

/// `a^e` with `0^0 = 1`.
///
/// # Safety
/// `field` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmt_field_pow(field: *const RmtField, a: u32, e: u64, out: *mut u32) -> RmtStatus {
    binary_op(field, a, 0, out, |f, a, _| Ok(f.pow(a, e)))
}

/// Parses the text format `q=<q> n=<n>; <terms>`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmt_poly_parse(text: *const c_char, out: *mut *mut RmtPolynomial) -> RmtStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match SparsePolynomial::parse(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(RmtPolynomial { inner }));
                RmtStatus::Ok
            }
            Err(e) => fail(RmtStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `poly` must be NULL or a handle from `rmt_poly_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rmt_poly_free(poly: *mut RmtPolynomial) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Number of variables, or 0 for a NULL handle.
///
/// # Safety
/// `poly` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rmt_poly_arity(poly: *const RmtPolynomial) -> usize {
    poly.as_ref().map_or(0, |p| p.inner.n())
}

/// Total degree; -1 for the zero polynomial or a NULL handle.
///
/// # Safety
/// `poly` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rmt_poly_degree(poly: *const RmtPolynomial) -> i64 {
    poly.as_ref().map_or(-1, |p| p.inner.degree())
}

/// # Safety
/// `point` must hold `len` elements, `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmt_poly_evaluate(
    poly: *const RmtPolynomial,
    point: *const u32,
    len: usize,
    out: *mut u32,
) -> RmtStatus {
    guard(|| {
        non_null!(poly, out);
        if point.is_null() && len > 0 {
            return fail(RmtStatus::NullPointer, "null point");
        }
        let coords: Vec<Fe> = if len == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(point, len).iter().map(|&c| Fe(c)).collect()
        };
        match (*poly).inner.evaluate(&coords) {
            Ok(v) => {
                *out = v.0;
                RmtStatus::Ok
            }
            Err(e) => fail(RmtStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// The polynomial in text format; free with `rmt_string_free`.
///
/// # Safety
/// `poly` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmt_poly_to_string(poly: *const RmtPolynomial, out: *mut *mut c_char) -> RmtStatus {
    guard(|| {
        non_null!(poly, out);
        write_string(out, (*poly).inner.to_string())
    })
}

/// Exact distance from `poly` to the polynomials of degree at most `d`.
///
/// # Safety
/// `poly` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmt_distance(poly: *const RmtPolynomial, d: u64, out: *mut f64) -> RmtStatus {
    guard(|| {
        non_null!(poly, out);
        let table = match (*poly).inner.tabulate() {
            Ok(t) => t,
            Err(e) => return fail(RmtStatus::InvalidArgument, e.to_string()),
        };
        match distance_to_rm(&table, d) {
            Ok(dist) => {
                *out = dist.value();
                RmtStatus::Ok
            }
            Err(e) => fail(RmtStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Finds a characterization on `m` random points of `F_q^k` (`m = 0` picks the
/// default size) and writes it as JSON. `NotFound` when none exists.
///
/// # Safety
/// `field` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmt_characterize_json(
    field: *const RmtField,
    k: usize,
    d: u64,
    m: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> RmtStatus {
    guard(|| {
        non_null!(field, out);
        let f = &(*field).inner;
        if k == 0 {
            return fail(RmtStatus::InvalidArgument, "k must be positive");
        }
        let m = if m == 0 { default_sample_size(f, d, k) } else { m };
        if rmtest::poly::domain_size(f.order(), k).is_some_and(|size| m as u64 > size) {
            return fail(RmtStatus::InvalidArgument, format!("m = {m} exceeds q^k"));
        }
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let points = sample_points(f.order(), k, m, &mut rng);
        match find_characterization(f, k, &points, d, &mut rng) {
            Ok(Some(c)) => write_string(out, characterization_json(&c).to_string()),
            Ok(None) => fail(RmtStatus::NotFound, "no characterization on this point set"),
            Err(e) => fail(RmtStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Runs an experiment from its JSON spec and writes the JSON report.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rmt_run_experiment_json(spec_json: *const c_char, out: *mut *mut c_char) -> RmtStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(spec_json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let spec = match ExperimentSpec::from_json(text) {
            Ok(s) => s,
            Err(e) => return fail(RmtStatus::ParseError, e.to_string()),
        };
        match run_experiment(&spec) {
            Ok(report) => write_string(out, report.to_json()),
            Err(e) => fail(RmtStatus::RuntimeError, e.to_string()),
        }
    })
}
