use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use diamond_ffi::*;

fn last_error() -> String {
    let p = diamond_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn adder_capacity_through_handles() {
    let mut r = ptr::null_mut();
    let st = unsafe { diamond_adder_bound(0.8, 0.8, DiamondAdderBound::Capacity, &mut r) };
    assert_eq!(st, DiamondStatus::Ok);
    let v = unsafe { diamond_report_value(r) };
    assert!((v - 1.570_950_594).abs() < 1e-6);
    let json = unsafe { diamond_report_json(r) };
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"value\""));
    unsafe {
        diamond_string_free(json);
        diamond_report_free(r);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut r = ptr::null_mut();
    let st = unsafe { diamond_gauss_bound(-1.0, 1.0, 0.5, 0.5, DiamondGaussBound::TimeSharing, &mut r) };
    assert_eq!(st, DiamondStatus::InvalidArgument);
    assert!(r.is_null());
    assert!(!last_error().is_empty());
    let st = unsafe { diamond_adder_bound(0.5, 0.5, DiamondAdderBound::Cutset, ptr::null_mut()) };
    assert_eq!(st, DiamondStatus::NullPointer);
    assert!(unsafe { diamond_report_value(ptr::null()) }.is_nan());
    let st = unsafe { diamond_dmc_bound(ptr::null(), 1.0, 1.0, DiamondDmcBound::Cutset, 1, &mut r) };
    assert_eq!(st, DiamondStatus::NullPointer);
}

#[test]
fn mac_handles() {
    let table = [1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0];
    let mut mac = ptr::null_mut();
    let st = unsafe { diamond_mac_new(2, 2, 2, table.as_ptr(), table.len(), &mut mac) };
    assert_eq!(st, DiamondStatus::Ok);
    let mut r = ptr::null_mut();
    // XOR output: the cut-set caps at one bit
    let st = unsafe { diamond_dmc_bound(mac, 2.0, 2.0, DiamondDmcBound::Cutset, 1, &mut r) };
    assert_eq!(st, DiamondStatus::Ok);
    assert!((unsafe { diamond_report_value(r) } - 1.0).abs() < 1e-4);
    unsafe {
        diamond_report_free(r);
        diamond_mac_free(mac);
    }
    let bad = [0.5, 0.6];
    let st = unsafe { diamond_mac_new(1, 1, 2, bad.as_ptr(), 2, &mut mac) };
    assert_eq!(st, DiamondStatus::InvalidArgument);
    let json = CString::new(r#"{"x1_size":1,"x2_size":1,"y_size":2,"p_y_given_x1x2":[[[0.5,0.5]]]}"#).unwrap();
    assert_eq!(unsafe { diamond_mac_from_json(json.as_ptr(), &mut mac) }, DiamondStatus::Ok);
    unsafe { diamond_mac_free(mac) };
    let adder = diamond_mac_binary_adder();
    unsafe { diamond_mac_free(adder) };
}

#[test]
fn verify_and_simulate() {
    let suite = CString::new("identities").unwrap();
    let mut passed = 0;
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { diamond_verify(suite.as_ptr(), &mut passed, &mut json) }, DiamondStatus::Ok);
    assert_eq!(passed, 1);
    unsafe { diamond_string_free(json) };
    let unknown = CString::new("nope").unwrap();
    assert_eq!(unsafe { diamond_verify(unknown.as_ptr(), &mut passed, ptr::null_mut()) }, DiamondStatus::InvalidArgument);

    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/sim_adder.json");
    let mut cfg: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    cfg["trials"] = 50.into();
    let text = CString::new(cfg.to_string()).unwrap();
    assert_eq!(unsafe { diamond_simulate(text.as_ptr(), &mut json) }, DiamondStatus::Ok);
    let out: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(json) }.to_str().unwrap()).unwrap();
    assert_eq!(out["trials"], 50);
    unsafe { diamond_string_free(json) };

    cfg["n"] = 4096.into();
    let text = CString::new(cfg.to_string()).unwrap();
    assert_eq!(unsafe { diamond_simulate(text.as_ptr(), &mut json) }, DiamondStatus::Budget);
}

#[test]
fn header_is_current_and_links_from_c() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(root.join("include/diamond.h")).unwrap();
    for name in ["diamond_last_error", "diamond_mac_new", "diamond_dmc_bound", "diamond_adder_bound", "diamond_gauss_bound", "diamond_simulate", "DIAMOND_STATUS_BUDGET"] {
        assert!(header.contains(name), "{name} missing from header");
    }
    // the static library sits next to the test binary's deps directory
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    let lib = lib_dir.join("libdiamond_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("diamond_smoke");
    let status = Command::new("cc")
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("1.570950"));
}
