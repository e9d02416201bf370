use std::ffi::{c_char, CStr, CString};
use std::ptr;

use rmtest_ffi::*;

fn take_string(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { rmt_string_free(s) };
    owned
}

fn last_error() -> String {
    let p = rmt_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

struct FieldHandle(*mut RmtField);

impl FieldHandle {
    fn new(p: u32, ell: u32) -> Self {
        let mut f = ptr::null_mut();
        assert_eq!(unsafe { rmt_field_new(p, ell, &mut f) }, RmtStatus::Ok);
        FieldHandle(f)
    }
}

impl Drop for FieldHandle {
    fn drop(&mut self) {
        unsafe { rmt_field_free(self.0) };
    }
}

struct PolyHandle(*mut RmtPolynomial);

impl PolyHandle {
    fn parse(text: &str) -> Self {
        let text = CString::new(text).unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(unsafe { rmt_poly_parse(text.as_ptr(), &mut p) }, RmtStatus::Ok);
        PolyHandle(p)
    }
}

impl Drop for PolyHandle {
    fn drop(&mut self) {
        unsafe { rmt_poly_free(self.0) };
    }
}

#[test]
fn field_arithmetic_in_gf4() {
    let f = FieldHandle::new(2, 2);
    assert_eq!(unsafe { rmt_field_order(f.0) }, 4);
    assert_eq!(unsafe { rmt_field_characteristic(f.0) }, 2);
    let mut out = 0u32;
    for a in 1..4 {
        assert_eq!(unsafe { rmt_field_inv(f.0, a, &mut out) }, RmtStatus::Ok);
        let inv = out;
        assert_eq!(unsafe { rmt_field_mul(f.0, a, inv, &mut out) }, RmtStatus::Ok);
        assert_eq!(out, 1);
        assert_eq!(unsafe { rmt_field_add(f.0, a, a, &mut out) }, RmtStatus::Ok);
        assert_eq!(out, 0);
        assert_eq!(unsafe { rmt_field_pow(f.0, a, 3, &mut out) }, RmtStatus::Ok);
        assert_eq!(out, 1);
    }
    assert_eq!(unsafe { rmt_field_sub(f.0, 3, 3, &mut out) }, RmtStatus::Ok);
    assert_eq!(out, 0);
}

#[test]
fn field_errors_are_reported() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { rmt_field_new(6, 1, &mut f) }, RmtStatus::FieldError);
    assert!(f.is_null());
    assert!(!last_error().is_empty());

    let f = FieldHandle::new(5, 1);
    let mut out = 0u32;
    assert_eq!(unsafe { rmt_field_inv(f.0, 0, &mut out) }, RmtStatus::InvalidArgument);
    assert_eq!(unsafe { rmt_field_add(f.0, 7, 1, &mut out) }, RmtStatus::InvalidArgument);
    assert_eq!(unsafe { rmt_field_add(f.0, 1, 1, ptr::null_mut()) }, RmtStatus::NullPointer);
    assert_eq!(unsafe { rmt_field_add(ptr::null(), 1, 1, &mut out) }, RmtStatus::NullPointer);
    assert_eq!(unsafe { rmt_field_order(ptr::null()) }, 0);
}

#[test]
fn polynomial_roundtrip_and_evaluation() {
    let p = PolyHandle::parse("q=3 n=2; 1*x1^2*x2 + 2*x2");
    assert_eq!(unsafe { rmt_poly_arity(p.0) }, 2);
    assert_eq!(unsafe { rmt_poly_degree(p.0) }, 3);

    // x1^2 x2 + 2 x2 at (2, 1): 4 + 2 = 6 = 0 mod 3; at (0, 1): 2.
    let mut out = 0u32;
    assert_eq!(unsafe { rmt_poly_evaluate(p.0, [2u32, 1].as_ptr(), 2, &mut out) }, RmtStatus::Ok);
    assert_eq!(out, 0);
    assert_eq!(unsafe { rmt_poly_evaluate(p.0, [0u32, 1].as_ptr(), 2, &mut out) }, RmtStatus::Ok);
    assert_eq!(out, 2);
    assert_eq!(unsafe { rmt_poly_evaluate(p.0, [0u32].as_ptr(), 1, &mut out) }, RmtStatus::InvalidArgument);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { rmt_poly_to_string(p.0, &mut s) }, RmtStatus::Ok);
    let text = take_string(s);
    let again = PolyHandle::parse(&text);
    for x in 0..3u32 {
        for y in 0..3u32 {
            let (mut a, mut b) = (0u32, 0u32);
            unsafe {
                rmt_poly_evaluate(p.0, [x, y].as_ptr(), 2, &mut a);
                rmt_poly_evaluate(again.0, [x, y].as_ptr(), 2, &mut b);
            }
            assert_eq!(a, b);
        }
    }
}

#[test]
fn parse_errors_set_last_error() {
    let text = CString::new("q=3 n=2; 1*x7").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { rmt_poly_parse(text.as_ptr(), &mut p) }, RmtStatus::ParseError);
    assert!(p.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { rmt_poly_parse(ptr::null(), &mut p) }, RmtStatus::NullPointer);
}

#[test]
fn distance_of_x1x2_from_linear_functions() {
    let p = PolyHandle::parse("q=2 n=2; 1*x1*x2");
    let mut d = -1.0;
    assert_eq!(unsafe { rmt_distance(p.0, 1, &mut d) }, RmtStatus::Ok);
    assert_eq!(d, 0.25);
    assert_eq!(unsafe { rmt_distance(p.0, 2, &mut d) }, RmtStatus::Ok);
    assert_eq!(d, 0.0);
}

#[test]
fn characterization_json_is_well_formed() {
    let f = FieldHandle::new(2, 1);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { rmt_characterize_json(f.0, 3, 1, 8, 7, &mut s) }, RmtStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(v["mode"], "prime");
    assert_eq!(v["d"], 1);
    let support = v["support"].as_array().unwrap();
    assert!(!support.is_empty());

    // Two points never carry a nonzero h orthogonal to all affine functions over F_2^3.
    assert_eq!(unsafe { rmt_characterize_json(f.0, 3, 1, 2, 7, &mut s) }, RmtStatus::NotFound);
    assert_eq!(unsafe { rmt_characterize_json(f.0, 3, 1, 9, 7, &mut s) }, RmtStatus::InvalidArgument);
    assert_eq!(unsafe { rmt_characterize_json(f.0, 0, 1, 4, 7, &mut s) }, RmtStatus::InvalidArgument);
}

#[test]
fn experiment_runs_from_json() {
    let spec = CString::new(
        r#"{"field":{"p":2},"n":3,"instance":{"kind":"monomial","exponents":[1,1,0]},
            "tester":{"kind":"random-points","d":1,"k":3,"m":8,"repetitions":5},
            "trials":4,"seed":11}"#,
    )
    .unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { rmt_run_experiment_json(spec.as_ptr(), &mut s) }, RmtStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(v["trials"], 4);

    let bad = CString::new("{").unwrap();
    assert_eq!(unsafe { rmt_run_experiment_json(bad.as_ptr(), &mut s) }, RmtStatus::ParseError);
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        rmt_field_free(ptr::null_mut());
        rmt_poly_free(ptr::null_mut());
        rmt_string_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(rmt_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
