use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use nodal_mirror_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(nm_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn verify_closed_genus_two_passes() {
    let mut r = ptr::null_mut();
    let c = nm_cutoffs_default();
    let s = unsafe { nm_verify(NmScenario::Closed, 2, 0, &c, &mut r) };
    assert_eq!(s, NmStatus::Pass);
    unsafe {
        assert!(nm_report_passed(r));
        assert_eq!(nm_report_check_count(r), 3);
        let json = CStr::from_ptr(nm_report_json(r)).to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(json).unwrap();
        assert_eq!(v["verdict"], "pass");
        nm_report_free(r);
    }
}

#[test]
fn invalid_genus_is_a_usage_error() {
    let mut r = ptr::null_mut();
    let s = unsafe { nm_verify(NmScenario::Closed, 1, 0, ptr::null(), &mut r) };
    assert_eq!(s, NmStatus::Usage);
    assert!(r.is_null());
    assert!(last_error().contains("genus"));
}

#[test]
fn zero_slack_is_a_cutoff() {
    let mut c = nm_cutoffs_default();
    c.slack = 0;
    let mut r = ptr::null_mut();
    let s = unsafe { nm_verify(NmScenario::Punctured, 2, 1, &c, &mut r) };
    assert_eq!(s, NmStatus::Cutoff);
    assert!(r.is_null());
}

#[test]
fn config_round_trip() {
    let src = CString::new(r#"{"command":"limit","scenario":{"kind":"closed","genus":3}}"#).unwrap();
    let mut cfg = ptr::null_mut();
    unsafe {
        assert_eq!(nm_config_parse(src.as_ptr(), &mut cfg), NmStatus::Pass);
        let mut r = ptr::null_mut();
        assert_eq!(nm_config_run(cfg, &mut r), NmStatus::Pass);
        assert_eq!(nm_report_check_count(r), 1);
        nm_report_free(r);
        nm_config_free(cfg);
    }
}

#[test]
fn malformed_config_reports_position() {
    let src = CString::new("{\"command\": \"verify\",\n \"genus\": 2}").unwrap();
    let mut cfg = ptr::null_mut();
    let s = unsafe { nm_config_parse(src.as_ptr(), &mut cfg) };
    assert_eq!(s, NmStatus::Usage);
    assert!(cfg.is_null());
    assert!(last_error().contains("line 2"), "{}", last_error());
}

#[test]
fn null_arguments_are_rejected() {
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { nm_config_parse(ptr::null(), &mut cfg) }, NmStatus::NullPointer);
    assert_eq!(unsafe { nm_config_run(ptr::null(), ptr::null_mut()) }, NmStatus::NullPointer);
    unsafe {
        assert!(!nm_report_passed(ptr::null()));
        assert!(nm_report_json(ptr::null()).is_null());
        nm_report_free(ptr::null_mut());
        nm_config_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/nodal_mirror.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["nm_verify", "nm_config_parse", "nm_config_run", "nm_report_json", "nm_report_free", "nm_last_error"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).status() else {
        return;
    };
    assert!(status.success());
}
