use std::ffi::{c_char, CStr, CString};
use std::ptr;

use rackkit_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { rk_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(rk_last_error()) }.to_str().unwrap().to_owned()
}

fn example(name: &str) -> *mut RkRack {
    let name = CString::new(name).unwrap();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { rk_rack_example(name.as_ptr(), &mut r) }, RkStatus::Ok);
    r
}

#[test]
fn example_round_trips_through_json() {
    let r = example("nc5");
    assert_eq!(unsafe { rk_rack_dim(r) }, 5);
    let mut ok = 0;
    assert_eq!(unsafe { rk_rack_check(r, &mut ok) }, RkStatus::Ok);
    assert_eq!(ok, 1);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { rk_rack_to_json(r, &mut json) }, RkStatus::Ok);
    let text = CString::new(take_string(json)).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { rk_rack_from_json(text.as_ptr(), &mut back) }, RkStatus::Ok);
    assert_eq!(unsafe { rk_rack_dim(back) }, 5);

    let mut report = ptr::null_mut();
    assert_eq!(unsafe { rk_rack_check_json(back, &mut report) }, RkStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
    assert!(v.is_object());
    unsafe {
        rk_rack_free(back);
        rk_rack_free(r);
    }
}

#[test]
fn enveloping_series_of_trivial_example() {
    let r = example("trivial1");
    let mut u = ptr::null_mut();
    assert_eq!(unsafe { rk_enveloping_new(r, 3, 1, &mut u) }, RkStatus::Ok);
    let mut written = 0;
    let mut short = [0usize; 2];
    assert_eq!(
        unsafe { rk_enveloping_series(u, short.as_mut_ptr(), short.len(), &mut written) },
        RkStatus::ResourceBound
    );
    assert_eq!(written, 4);
    let mut buf = [0usize; 4];
    assert_eq!(unsafe { rk_enveloping_series(u, buf.as_mut_ptr(), buf.len(), &mut written) }, RkStatus::Ok);
    assert_eq!(buf, [1, 2, 3, 4]);
    assert_eq!(unsafe { rk_enveloping_stabilized(u) }, 1);
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { rk_enveloping_report_json(u, &mut report) }, RkStatus::Ok);
    assert!(serde_json::from_str::<serde_json::Value>(&take_string(report)).is_ok());
    unsafe {
        rk_enveloping_free(u);
        rk_rack_free(r);
    }
}

#[test]
fn complex_on_cocommutative_example() {
    let r = example("abelian1");
    let mut cx = ptr::null_mut();
    assert_eq!(unsafe { rk_complex_new(r, &mut cx) }, RkStatus::Ok);
    let mut b = usize::MAX;
    assert_eq!(unsafe { rk_complex_betti(cx, 1, &mut b) }, RkStatus::Ok);
    assert_ne!(b, usize::MAX);
    assert_eq!(unsafe { rk_complex_betti(cx, 0, &mut b) }, RkStatus::InvalidStructure);
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { rk_complex_report_json(cx, 2, &mut report) }, RkStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
    assert_eq!(v["betti"][0], b);
    unsafe {
        rk_complex_free(cx);
        rk_rack_free(r);
    }
}

#[test]
fn non_cocommutative_complex_is_rejected() {
    let r = example("nc5");
    let mut cx = ptr::null_mut();
    assert_eq!(unsafe { rk_complex_new(r, &mut cx) }, RkStatus::NotCocommutative);
    assert!(cx.is_null());
    assert!(last_error().contains("cocommutative"));
    unsafe { rk_rack_free(r) };
}

#[test]
fn errors_are_reported_with_codes() {
    let mut r = ptr::null_mut();
    let bad = CString::new("{\"basis\": [").unwrap();
    assert_eq!(unsafe { rk_rack_from_json(bad.as_ptr(), &mut r) }, RkStatus::Parse);
    assert!(!last_error().is_empty());

    let unknown = CString::new("no-such-example").unwrap();
    assert_eq!(unsafe { rk_rack_example(unknown.as_ptr(), &mut r) }, RkStatus::UnknownExample);
    assert!(r.is_null());

    assert_eq!(unsafe { rk_rack_example(ptr::null(), &mut r) }, RkStatus::NullPointer);
    let invalid = [0xffu8 as c_char, 0];
    assert_eq!(unsafe { rk_rack_example(invalid.as_ptr(), &mut r) }, RkStatus::InvalidUtf8);

    let mut ok = 0;
    assert_eq!(unsafe { rk_rack_check(ptr::null(), &mut ok) }, RkStatus::NullPointer);
    assert_eq!(unsafe { rk_rack_dim(ptr::null()) }, 0);
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        rk_rack_free(ptr::null_mut());
        rk_enveloping_free(ptr::null_mut());
        rk_complex_free(ptr::null_mut());
        rk_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/rackkit.h");
    for f in [
        "rk_last_error", "rk_string_free", "rk_rack_from_json", "rk_rack_example", "rk_rack_free",
        "rk_rack_dim", "rk_rack_check", "rk_rack_check_json", "rk_rack_to_json", "rk_enveloping_new",
        "rk_enveloping_free", "rk_enveloping_series", "rk_enveloping_stabilized",
        "rk_enveloping_report_json", "rk_complex_new", "rk_complex_free", "rk_complex_betti",
        "rk_complex_report_json",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
}
