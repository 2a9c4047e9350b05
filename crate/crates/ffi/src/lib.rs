//! C ABI over the curved Koszul duality engine.
//!
//! Models and reports are opaque heap handles owned by the caller and released
//! with the matching `*_free` function. Every fallible call returns a
//! [`CkStatus`]; the message of the last failure on the calling thread is
//! available from [`ck_last_error`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use curved_koszul::facthom::{facthom_homology, FacthomError, FacthomReport, PDModel};
use curved_koszul::symplectic_poisson::{verify_koszulity, SymplecticAlgebraSpec};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed or inconsistent input.
    InvalidInput = 3,
    /// A check ran and found a violation.
    CheckFailed = 4,
    /// An internal invariant broke; the message describes it.
    Internal = 5,
}

/// A Poincaré duality model.
pub struct CkModel(PDModel);

/// Factorization homology of a model, with its certificate.
pub struct CkFacthomReport(FacthomReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: CkStatus, msg: impl Into<String>) -> CkStatus {
    set_error(msg);
    status
}

fn guarded(f: impl FnOnce() -> CkStatus) -> CkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(CkStatus::Internal, msg)
        }
    }
}

fn status_of(e: &FacthomError) -> CkStatus {
    match e {
        FacthomError::DifferentialSquareNonzero(_) | FacthomError::Unsupported(_) | FacthomError::Cobar(_) => CkStatus::CheckFailed,
        _ => CkStatus::InvalidInput,
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, CkStatus> {
    if s.is_null() {
        return Err(fail(CkStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|e| fail(CkStatus::InvalidUtf8, e.to_string()))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failure on this thread, or null. Free with `ck_string_free`.
#[no_mangle]
pub extern "C" fn ck_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer previously returned by this library.
#[no_mangle]
pub unsafe extern "C" fn ck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a model from its JSON description.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_model_from_json(json: *const c_char, out: *mut *mut CkModel) -> CkStatus {
    guarded(|| {
        if out.is_null() {
            return fail(CkStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match PDModel::from_json(text) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(CkModel(m)));
                CkStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// The standard model of the `m`-sphere, or null for `m < 1`.
#[no_mangle]
pub extern "C" fn ck_model_sphere(m: i64) -> *mut CkModel {
    if m < 1 {
        set_error("sphere dimension must be positive");
        return ptr::null_mut();
    }
    Box::into_raw(Box::new(CkModel(PDModel::sphere(m))))
}

/// Dimension of the modelled manifold.
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ck_model_dimension(model: *const CkModel) -> i64 {
    model.as_ref().map_or(-1, |m| m.0.dimension)
}

/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ck_model_free(model: *mut CkModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Factorization homology of `model` with coefficients in the symplectic
/// algebra on `d` pairs with bracket degree `n`, up to word length `max_length`.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_facthom(
    model: *const CkModel,
    n: i64,
    d: usize,
    max_length: usize,
    out: *mut *mut CkFacthomReport,
) -> CkStatus {
    guarded(|| {
        let Some(m) = model.as_ref() else { return fail(CkStatus::NullPointer, "null model") };
        if out.is_null() {
            return fail(CkStatus::NullPointer, "null output pointer");
        }
        match facthom_homology(&m.0, SymplecticAlgebraSpec::new(n, d), max_length) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(CkFacthomReport(r)));
                CkStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Total homology dimension within the truncation.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ck_report_total(report: *const CkFacthomReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.total)
}

/// Writes the certified Euler bound to `out`; false when nothing is certified.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_report_certified_euler(report: *const CkFacthomReport, out: *mut usize) -> bool {
    match (report.as_ref().and_then(|r| r.0.certified_euler), out.is_null()) {
        (Some(b), false) => {
            *out = b;
            true
        }
        _ => false,
    }
}

/// The report as JSON. Free with `ck_string_free`.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ck_report_to_json(report: *const CkFacthomReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => to_c_string(serde_json::to_string(&r.0).expect("report serializes")),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ck_report_free(report: *mut CkFacthomReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Compares the cobar resolution of the symplectic algebra with the algebra
/// itself up to `max_weight`; `passed` receives the verdict.
///
/// # Safety
/// `passed` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_verify_koszulity(n: i64, d: usize, max_weight: usize, passed: *mut bool) -> CkStatus {
    guarded(|| {
        if passed.is_null() {
            return fail(CkStatus::NullPointer, "null output pointer");
        }
        match verify_koszulity(SymplecticAlgebraSpec::new(n, d), max_weight) {
            Ok(r) => {
                *passed = r.passed();
                CkStatus::Ok
            }
            Err(e) => fail(CkStatus::CheckFailed, e.to_string()),
        }
    })
}
