use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use clusterweyl_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    cw_string_free(s);
    out
}

#[test]
fn build_mutate_roundtrip() {
    unsafe {
        let mut q = ptr::null_mut();
        assert_eq!(cw_quiver_build_qm(c("C").as_ptr(), 3, 3, &mut q), CwStatus::Ok);
        let mut n = 0;
        assert_eq!(cw_quiver_len(q, &mut n), CwStatus::Ok);
        assert_eq!(n, 9);
        let mut js = ptr::null_mut();
        assert_eq!(cw_quiver_to_json(q, &mut js), CwStatus::Ok);
        let json = take(js);
        let mut copy = ptr::null_mut();
        assert_eq!(cw_quiver_from_json(c(&json).as_ptr(), &mut copy), CwStatus::Ok);

        assert_eq!(cw_quiver_mutate(q, c("v:2:2").as_ptr()), CwStatus::Ok);
        let mut eq = true;
        cw_quiver_equal(q, copy, &mut eq);
        assert!(!eq);
        assert_eq!(cw_quiver_apply(q, c(r#"[{"mut":"v:2:2"}]"#).as_ptr()), CwStatus::Ok);
        cw_quiver_equal(q, copy, &mut eq);
        assert!(eq);
        cw_quiver_free(q);
        cw_quiver_free(copy);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut q = ptr::null_mut();
        assert_eq!(cw_quiver_build_qm(c("A").as_ptr(), 2, 1, &mut q), CwStatus::InvalidArgument);
        assert!(q.is_null());
        assert!(!cw_last_error().is_null());
        assert_eq!(cw_quiver_build_qm(ptr::null(), 2, 3, &mut q), CwStatus::NullPointer);
        assert_eq!(cw_quiver_build(c(r#"{"kind":"word","type":"A","n":2,"word":"121"}"#).as_ptr(), &mut q), CwStatus::Ok);
        assert_eq!(cw_quiver_mutate(q, c("v:1:1").as_ptr()), CwStatus::FrozenVertex);
        assert_eq!(cw_quiver_mutate(q, c("v:7:7").as_ptr()), CwStatus::UnknownVertex);
        let msg = CStr::from_ptr(cw_last_error()).to_str().unwrap();
        assert!(msg.contains("v:7:7"));
        cw_quiver_free(q);
        cw_quiver_free(ptr::null_mut());
        cw_string_free(ptr::null_mut());
    }
}

#[test]
fn verify_returns_certificate() {
    unsafe {
        let mut cert = ptr::null_mut();
        assert_eq!(cw_verify(c("braid").as_ptr(), c("B").as_ptr(), 2, 2, &mut cert), CwStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(cert)).unwrap();
        assert_eq!(v["verdict"], "pass");
        assert_eq!(cw_verify(c("nope").as_ptr(), c("B").as_ptr(), 2, 2, &mut cert), CwStatus::InvalidArgument);
    }
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/clusterweyl.h")).unwrap();
    for f in ["cw_quiver_build_qm", "cw_quiver_mutate", "cw_quiver_to_json", "cw_verify", "cw_string_free", "cw_quiver_free", "typedef struct CwQuiver CwQuiver"] {
        assert!(h.contains(f), "{f}");
    }
}

/// Compiles a C program against the header and static library when a C
/// compiler and the archive are available.
#[test]
fn c_program_links() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = std::env::var_os("CARGO_TARGET_DIR").map(PathBuf::from).unwrap_or_else(|| root.join("../../target"));
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    let lib = target.join(profile).join("libclusterweyl_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "clusterweyl.h"
int main(void) {
    CwQuiver *q = NULL;
    if (cw_quiver_build_qm("A", 2, 3, &q) != CW_STATUS_OK) return 1;
    if (cw_quiver_mutate(q, "v:1:1") != CW_STATUS_OK) return 2;
    if (cw_quiver_mutate(q, "nonsense") == CW_STATUS_OK) return 3;
    char *json = NULL;
    if (cw_quiver_to_json(q, &json) != CW_STATUS_OK) return 4;
    printf("%s\n", json);
    cw_string_free(json);
    cw_quiver_free(q);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).contains("v:1:1"));
}
