use std::ffi::{CStr, CString};
use std::ptr;

use sympflow_ffi::*;

fn last_error() -> String {
    let p = sf_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn diagonal_map_round_trip() {
    let entries = [2.0, 0.0, 0.0, 0.5];
    let mut map = ptr::null_mut();
    unsafe {
        assert_eq!(sf_map_from_rows(1, entries.as_ptr(), 4, 1e-12, &mut map), SfStatus::Ok);
        assert_eq!(sf_map_n(map), 1);
        let mut sv = [0.0; 2];
        assert_eq!(sf_map_singular_values(map, sv.as_mut_ptr(), 2), SfStatus::Ok);
        assert!((sv[0] - 2.0).abs() < 1e-12 && (sv[1] - 0.5).abs() < 1e-12);
        let mut e = [0.0; 4];
        assert_eq!(sf_map_polar_isometry(map, e.as_mut_ptr(), 4), SfStatus::Ok);
        for (x, y) in e.iter().zip([1.0, 0.0, 0.0, 1.0]) {
            assert!((x - y).abs() < 1e-12);
        }
        sf_map_free(map);
    }
    assert!(sf_last_error_message().is_null());
}

#[test]
fn random_map_adapted_basis() {
    let mut map = ptr::null_mut();
    unsafe {
        assert_eq!(sf_map_random(2, 7, 0.5, &mut map), SfStatus::Ok);
        let (mut a, mut at, mut s) = ([0.0; 16], [0.0; 16], [0.0; 4]);
        assert_eq!(sf_map_adapted_basis(map, a.as_mut_ptr(), at.as_mut_ptr(), 16, s.as_mut_ptr(), 4), SfStatus::Ok);
        assert!((s[0] * s[1] - 1.0).abs() < 1e-10 && (s[2] * s[3] - 1.0).abs() < 1e-10);
        // columns of A are orthonormal
        for i in 0..4 {
            for j in 0..4 {
                let d: f64 = (0..4).map(|r| a[r * 4 + i] * a[r * 4 + j]).sum();
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
        }
        assert_eq!(sf_map_singular_values(map, s.as_mut_ptr(), 3), SfStatus::BufferSize);
        sf_map_free(map);
    }
}

#[test]
fn errors_are_reported() {
    let entries = [2.0, 0.0, 0.0, 2.0];
    let mut map = ptr::null_mut();
    unsafe {
        assert_eq!(sf_map_from_rows(1, entries.as_ptr(), 4, 1e-12, &mut map), SfStatus::NotSymplectic);
        assert!(map.is_null());
        assert!(last_error().contains("not symplectic"));
        assert_eq!(sf_map_from_rows(1, ptr::null(), 4, 1e-12, &mut map), SfStatus::NullPointer);
        assert_eq!(sf_map_from_rows(1, entries.as_ptr(), 3, 1e-12, &mut map), SfStatus::InvalidArgument);
        let mut x = 0.0;
        assert_eq!(sf_eps_from_lambda(2, 0.5, &mut x), SfStatus::InvalidArgument);
        assert_eq!(sf_star_omega([1.0, 1.0].as_ptr(), 2, ptr::null_mut()), SfStatus::NullPointer);
        sf_map_free(ptr::null_mut());
        sf_flow_free(ptr::null_mut());
    }
}

#[test]
fn scalar_functions() {
    let mut x = 0.0;
    unsafe {
        assert_eq!(sf_star_omega([1.0; 4].as_ptr(), 4, &mut x), SfStatus::Ok);
        assert_eq!(x, 0.25);
        assert_eq!(sf_qform_min_eig_ratio([1.0, 1.0].as_ptr(), 2, &mut x), SfStatus::Ok);
        assert!((x - (3.0 - 5f64.sqrt())).abs() < 1e-9);
        assert_eq!(sf_eps_from_lambda(1, 3.0, &mut x), SfStatus::Ok);
        let mut back = 0.0;
        assert_eq!(sf_lambda_from_eps(1, x, &mut back), SfStatus::Ok);
        assert!((back - 3.0).abs() < 1e-10);
        let mut found = true;
        assert_eq!(sf_lambda0(1, 1e-3, 16.0, 9, &mut x, &mut found), SfStatus::Ok);
        assert!(!found && x.is_infinite());
        assert_eq!(sf_comparison_ode(4.0, 8.0, 0.5, 0.2, 0.01, 1.0, 0.0, &mut x), SfStatus::Ok);
        assert!((x - 1.0).abs() < 1e-12);
    }
}

#[test]
fn flow_handle() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("s.json").to_str().unwrap()).unwrap();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(sf_flow_init(32, SfProfile::SmoothTwist, 0.3, &mut s), SfStatus::Ok);
        let mut r0 = SfMonitorReport::default();
        assert_eq!(sf_flow_monitor(s, &mut r0), SfStatus::Ok);
        assert_eq!(sf_flow_advance(s, 0.1, 0.1), SfStatus::Ok);
        assert!((sf_flow_time(s) - 0.1).abs() < 1e-15);
        let mut r1 = SfMonitorReport::default();
        assert_eq!(sf_flow_monitor(s, &mut r1), SfStatus::Ok);
        assert!(r1.min_star_omega >= r0.min_star_omega - 1e-6);
        assert!(r1.total_area <= r0.total_area);
        assert_eq!(sf_flow_advance(s, 0.1, 1.0), SfStatus::InvalidArgument);
        assert_eq!(sf_flow_write_checkpoint(s, path.as_ptr()), SfStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(sf_flow_read_checkpoint(path.as_ptr(), &mut back), SfStatus::Ok);
        assert_eq!(sf_flow_time(back), sf_flow_time(s));
        sf_flow_free(back);
        sf_flow_free(s);
        let missing = CString::new("/nonexistent/x.json").unwrap();
        assert_eq!(sf_flow_read_checkpoint(missing.as_ptr(), &mut back), SfStatus::Io);
    }
}

/// Compiles and runs a small C program against the generated header and the
/// static library, when a C compiler is on the path.
#[test]
fn c_program_links_against_header() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if std::process::Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    let lib = lib_dir.join("libsympflow_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("t.c");
    std::fs::write(
        &src,
        r#"#include "sympflow.h"
#include <stdio.h>
int main(void) {
    double l[4] = {1.0, 1.0, 1.0, 1.0}, w = 0.0;
    if (sf_star_omega(l, 4, &w) != SF_STATUS_OK || w != 0.25) return 1;
    SfSymplecticMap *m = NULL;
    double bad[4] = {2.0, 0.0, 0.0, 2.0};
    if (sf_map_from_rows(1, bad, 4, 1e-12, &m) != SF_STATUS_NOT_SYMPLECTIC) return 2;
    if (sf_last_error_message() == NULL) return 3;
    if (sf_map_random(1, 3, 0.4, &m) != SF_STATUS_OK) return 4;
    double sv[2];
    if (sf_map_singular_values(m, sv, 2) != SF_STATUS_OK) return 5;
    sf_map_free(m);
    printf("%.12f\n", sv[0] * sv[1]);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("t");
    let status = std::process::Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = std::process::Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1.000000000000");
}
