use std::ffi::{CStr, CString};
use std::ptr;

use curved_koszul_ffi::*;

fn last_error() -> String {
    let p = ck_last_error();
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { ck_string_free(p) };
    s
}

#[test]
fn sphere_facthom_through_handles() {
    let model = ck_model_sphere(4);
    assert!(!model.is_null());
    assert_eq!(unsafe { ck_model_dimension(model) }, 4);
    let mut report = ptr::null_mut();
    let status = unsafe { ck_facthom(model, 2, 1, 6, &mut report) };
    assert_eq!(status, CkStatus::Ok);
    assert_eq!(unsafe { ck_report_total(report) }, 1);
    let mut bound = 0usize;
    assert!(unsafe { ck_report_certified_euler(report, &mut bound) });
    // Word length six, less the two odd letters.
    assert_eq!(bound, 4);
    let json = unsafe { ck_report_to_json(report) };
    let parsed: serde_json::Value = serde_json::from_str(&unsafe { CStr::from_ptr(json) }.to_string_lossy()).unwrap();
    assert_eq!(parsed["total"], 1);
    unsafe {
        ck_string_free(json);
        ck_report_free(report);
        ck_model_free(model);
    }
}

#[test]
fn model_json_roundtrip_and_errors() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../models/cp2.json")).unwrap();
    let json = CString::new(text).unwrap();
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { ck_model_from_json(json.as_ptr(), &mut model) }, CkStatus::Ok);
    assert_eq!(unsafe { ck_model_dimension(model) }, 4);
    unsafe { ck_model_free(model) };

    let bad = CString::new("{\"dimension\": 2").unwrap();
    let mut none = ptr::null_mut();
    assert_eq!(unsafe { ck_model_from_json(bad.as_ptr(), &mut none) }, CkStatus::InvalidInput);
    assert!(none.is_null());
    assert!(last_error().contains("malformed model"));

    assert_eq!(unsafe { ck_model_from_json(ptr::null(), &mut none) }, CkStatus::NullPointer);
    assert!(ck_model_sphere(0).is_null());
}

#[test]
fn ill_posed_grading_is_a_check_failure() {
    let model = ck_model_sphere(5);
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { ck_facthom(model, 2, 1, 4, &mut report) }, CkStatus::CheckFailed);
    assert!(report.is_null());
    assert!(last_error().contains("d² ≠ 0"));
    unsafe { ck_model_free(model) };
}

#[test]
fn koszulity_verdict() {
    let mut passed = false;
    assert_eq!(unsafe { ck_verify_koszulity(2, 1, 2, &mut passed) }, CkStatus::Ok);
    assert!(passed);
    assert_eq!(unsafe { ck_verify_koszulity(2, 1, 2, ptr::null_mut()) }, CkStatus::NullPointer);
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/curved_koszul.h")).unwrap();
    for f in [
        "ck_last_error",
        "ck_string_free",
        "ck_model_from_json",
        "ck_model_sphere",
        "ck_model_dimension",
        "ck_model_free",
        "ck_facthom",
        "ck_report_total",
        "ck_report_certified_euler",
        "ck_report_to_json",
        "ck_report_free",
        "ck_verify_koszulity",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from the header");
    }
    assert!(header.contains("typedef struct CkModel CkModel;"));
}
