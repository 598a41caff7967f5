//! C ABI over `rackkit`.
//!
//! Structures live behind opaque handles created by `rk_*_new`/`rk_*_from_*`
//! and released by the matching `rk_*_free`. Every fallible call returns an
//! `RkStatus`; on failure `rk_last_error` describes the cause. Strings handed
//! out by the library are released with `rk_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rackkit::cohomology::DeformationComplex;
use rackkit::enveloping::TruncatedEnveloping;
use rackkit::examples::example_scalar;
use rackkit::io::{canonical_json, parse_rack, serialize_rack};
use rackkit::rack::RackBialgebra;
use rackkit::{Error, Scalar};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidStructure = 4,
    NotCocommutative = 5,
    ResourceBound = 6,
    VerificationFailed = 7,
    UnknownExample = 8,
    Internal = 9,
}

/// A rack bialgebra over the rationals.
pub struct RkRack(RackBialgebra<Scalar>);

/// A truncated enveloping algebra.
pub struct RkEnveloping(TruncatedEnveloping);

/// The deformation complex of a cocommutative rack bialgebra.
pub struct RkComplex(DeformationComplex);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> RkStatus {
    match e {
        Error::Parse { .. } | Error::Json(_) | Error::Io(_) => RkStatus::Parse,
        Error::NotCocommutative(_) => RkStatus::NotCocommutative,
        Error::ResourceBound { .. } | Error::TruncationOverflow { .. } => RkStatus::ResourceBound,
        Error::AxiomViolation(_) | Error::ImageEscapes(_) | Error::NotVanishing(_) | Error::GeneratorActsNonzero(_) => {
            RkStatus::VerificationFailed
        }
        Error::UnknownExample(_) => RkStatus::UnknownExample,
        _ => RkStatus::InvalidStructure,
    }
}

/// Runs `f`, turning errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (RkStatus, String)>) -> RkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RkStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            RkStatus::Internal
        }
    }
}

fn lib<T>(r: rackkit::Result<T>) -> Result<T, (RkStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (RkStatus, String) {
    (RkStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, (RkStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    // SAFETY: caller passes a NUL-terminated string valid for the call.
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| (RkStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), (RkStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    // SAFETY: `out` is non-null and points to writable storage for a pointer.
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (RkStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    let c = CString::new(s).map_err(|_| (RkStatus::Internal, "string contains NUL".into()))?;
    // SAFETY: `out` is non-null and writable.
    unsafe { *out = c.into_raw() };
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, (RkStatus, String)> {
    // SAFETY: a non-null handle came from this library and is still alive.
    unsafe { p.as_ref() }.ok_or_else(null)
}

/// Message of the last failed call on this thread. Valid until the next call.
#[no_mangle]
pub extern "C" fn rk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rk_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: `s` was produced by `CString::into_raw` in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parses a JSON structure file with a rack section.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_rack_from_json(json: *const c_char, out: *mut *mut RkRack) -> RkStatus {
    guard(|| {
        let text = unsafe { read_str(json) }?;
        let r = lib(parse_rack::<Scalar>(text))?;
        unsafe { write_out(out, RkRack(r)) }
    })
}

/// Loads a built-in example by name.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_rack_example(name: *const c_char, out: *mut *mut RkRack) -> RkStatus {
    guard(|| {
        let name = unsafe { read_str(name) }?;
        let r = lib(example_scalar(name))?;
        unsafe { write_out(out, RkRack(r)) }
    })
}

/// # Safety
/// `rack` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rk_rack_free(rack: *mut RkRack) {
    if !rack.is_null() {
        // SAFETY: the handle was created by `Box::into_raw`.
        drop(unsafe { Box::from_raw(rack) });
    }
}

/// Dimension of the underlying coalgebra, or 0 for a null handle.
///
/// # Safety
/// `rack` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rk_rack_dim(rack: *const RkRack) -> usize {
    unsafe { rack.as_ref() }.map_or(0, |r| r.0.dim())
}

/// Checks the five axioms; `*all_hold` is 1 when they all pass.
///
/// # Safety
/// `rack` must be a live handle; `all_hold` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_rack_check(rack: *const RkRack, all_hold: *mut i32) -> RkStatus {
    guard(|| {
        let r = unsafe { borrow(rack) }?;
        if all_hold.is_null() {
            return Err(null());
        }
        let ok = r.0.check().all_hold();
        // SAFETY: checked non-null above.
        unsafe { *all_hold = ok as i32 };
        Ok(())
    })
}

/// The axiom report as canonical JSON.
///
/// # Safety
/// `rack` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_rack_check_json(rack: *const RkRack, out: *mut *mut c_char) -> RkStatus {
    guard(|| {
        let r = unsafe { borrow(rack) }?;
        let s = lib(canonical_json(&r.0.check()))?;
        unsafe { write_string(out, s) }
    })
}

/// The structure as a JSON structure file.
///
/// # Safety
/// `rack` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_rack_to_json(rack: *const RkRack, out: *mut *mut c_char) -> RkStatus {
    guard(|| {
        let r = unsafe { borrow(rack) }?;
        unsafe { write_string(out, serialize_rack(&r.0)) }
    })
}

/// Builds the enveloping algebra up to word length `degree`.
///
/// # Safety
/// `rack` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_enveloping_new(
    rack: *const RkRack,
    degree: usize,
    slack: usize,
    out: *mut *mut RkEnveloping,
) -> RkStatus {
    guard(|| {
        let r = unsafe { borrow(rack) }?;
        let u = lib(TruncatedEnveloping::build(&r.0, degree, slack))?;
        unsafe { write_out(out, RkEnveloping(u)) }
    })
}

/// # Safety
/// `env` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rk_enveloping_free(env: *mut RkEnveloping) {
    if !env.is_null() {
        // SAFETY: the handle was created by `Box::into_raw`.
        drop(unsafe { Box::from_raw(env) });
    }
}

/// Copies `dim F_k U` for `k = 0..=degree` into `buf`. `*written` receives
/// the full length even when `len` is too small, in which case nothing is
/// copied and the status is `ResourceBound`.
///
/// # Safety
/// `env` must be a live handle; `buf` must hold `len` entries; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_enveloping_series(
    env: *const RkEnveloping,
    buf: *mut usize,
    len: usize,
    written: *mut usize,
) -> RkStatus {
    guard(|| {
        let u = unsafe { borrow(env) }?;
        if written.is_null() {
            return Err(null());
        }
        let dims = u.0.hilbert_series();
        // SAFETY: checked non-null above.
        unsafe { *written = dims.len() };
        if len < dims.len() {
            return Err((RkStatus::ResourceBound, format!("buffer holds {len}, series has {}", dims.len())));
        }
        if buf.is_null() {
            return Err(null());
        }
        // SAFETY: `buf` holds at least `dims.len()` entries.
        unsafe { ptr::copy_nonoverlapping(dims.as_ptr(), buf, dims.len()) };
        Ok(())
    })
}

/// 1 when the dimension series did not change with one more slack.
///
/// # Safety
/// `env` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rk_enveloping_stabilized(env: *const RkEnveloping) -> i32 {
    unsafe { env.as_ref() }.is_some_and(|u| u.0.stabilized()) as i32
}

/// The enveloping report as canonical JSON.
///
/// # Safety
/// `env` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_enveloping_report_json(env: *const RkEnveloping, out: *mut *mut c_char) -> RkStatus {
    guard(|| {
        let u = unsafe { borrow(env) }?;
        let s = lib(canonical_json(&u.0.report()))?;
        unsafe { write_string(out, s) }
    })
}

/// The deformation complex; fails with `NotCocommutative` when it is undefined.
///
/// # Safety
/// `rack` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_complex_new(rack: *const RkRack, out: *mut *mut RkComplex) -> RkStatus {
    guard(|| {
        let r = unsafe { borrow(rack) }?;
        let cx = lib(DeformationComplex::new(r.0.clone()))?;
        unsafe { write_out(out, RkComplex(cx)) }
    })
}

/// # Safety
/// `cx` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rk_complex_free(cx: *mut RkComplex) {
    if !cx.is_null() {
        // SAFETY: the handle was created by `Box::into_raw`.
        drop(unsafe { Box::from_raw(cx) });
    }
}

/// `dim Hⁿ` of the deformation complex.
///
/// # Safety
/// `cx` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_complex_betti(cx: *const RkComplex, n: usize, out: *mut usize) -> RkStatus {
    guard(|| {
        let c = unsafe { borrow(cx) }?;
        if out.is_null() {
            return Err(null());
        }
        if n == 0 {
            return Err((RkStatus::InvalidStructure, "cochain degree starts at 1".into()));
        }
        let b = lib(c.0.betti(n))?;
        // SAFETY: checked non-null above.
        unsafe { *out = b };
        Ok(())
    })
}

/// Coderivation dims, ranks, `d∘d` and Betti numbers up to `max_n` as canonical JSON.
///
/// # Safety
/// `cx` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_complex_report_json(cx: *const RkComplex, max_n: usize, out: *mut *mut c_char) -> RkStatus {
    guard(|| {
        let c = unsafe { borrow(cx) }?;
        let rep = lib(c.0.report(max_n))?;
        let s = lib(canonical_json(&rep))?;
        unsafe { write_string(out, s) }
    })
}
