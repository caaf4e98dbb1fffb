use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use zolo_ffi::*;

fn last_error() -> String {
    let p = zolo_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn preset(name: &str, degree: usize, steps: usize) -> *mut ZoloProblem {
    let name = CString::new(name).unwrap();
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(zolo_problem_from_preset(name.as_ptr(), &mut p), ZoloStatus::Ok);
        assert_eq!(zolo_problem_set_degree(p, degree), ZoloStatus::Ok);
        assert_eq!(zolo_problem_set_lawson(p, steps, 0.95), ZoloStatus::Ok);
    }
    p
}

#[test]
fn solve_and_query() {
    unsafe {
        let p = preset("fig1a", 6, 40);
        let (mut ne, mut nf) = (0, 0);
        assert_eq!(zolo_problem_sample_counts(p, &mut ne, &mut nf), ZoloStatus::Ok);
        assert_eq!((ne, nf), (200, 200));
        let mut s = ptr::null_mut();
        assert_eq!(zolo_solve(p, &mut s), ZoloStatus::Ok);
        let (mut tau, mut sigma) = (0.0, 0.0);
        assert_eq!(zolo_solution_tau(s, &mut tau), ZoloStatus::Ok);
        assert_eq!(zolo_solution_sigma(s, &mut sigma), ZoloStatus::Ok);
        let mut expect = 0.0;
        assert_eq!(zolo_tau_to_sigma(tau, &mut expect), ZoloStatus::Ok);
        assert_eq!(sigma, expect);

        // r_hat is near -1 on E, r_star is small there
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(zolo_solution_eval_sign(s, -1.5, 0.0, &mut re, &mut im), ZoloStatus::Ok);
        assert!((re + 1.0).abs() <= tau * 1.0001);
        assert_eq!(zolo_solution_eval_ratio(s, -1.5, 0.0, &mut re, &mut im), ZoloStatus::Ok);
        assert!(re.hypot(im) <= sigma * 1.0001);

        let mut len = 0;
        assert_eq!(zolo_solution_zeros(s, ptr::null_mut(), ptr::null_mut(), 0, &mut len), ZoloStatus::BufferTooSmall);
        assert!(len > 0 && len <= 6);
        let (mut zr, mut zi) = (vec![0.0; len], vec![0.0; len]);
        assert_eq!(zolo_solution_zeros(s, zr.as_mut_ptr(), zi.as_mut_ptr(), len, &mut len), ZoloStatus::Ok);
        assert!(zr.iter().all(|x| *x < 0.0), "zeros of r_star lie near E: {zr:?}");

        let mut json = ptr::null_mut();
        assert_eq!(zolo_solution_to_json(s, &mut json), ZoloStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_string();
        zolo_string_free(json);
        let doc = zolo::report::ResultDocument::from_json(&text).unwrap();
        assert_eq!(doc.tau, tau);

        zolo_solution_free(s);
        zolo_problem_free(p);
    }
}

#[test]
fn explicit_points_and_json_config() {
    unsafe {
        let e_re: Vec<f64> = (0..40).map(|k| -2.0 + k as f64 / 40.0).collect();
        let f_re: Vec<f64> = e_re.iter().map(|x| -x).collect();
        let zeros = vec![0.0; 40];
        let mut p = ptr::null_mut();
        let st =
            zolo_problem_from_points(e_re.as_ptr(), zeros.as_ptr(), 40, f_re.as_ptr(), zeros.as_ptr(), 40, 4, &mut p);
        assert_eq!(st, ZoloStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(zolo_solve(p, &mut s), ZoloStatus::Ok);
        let mut sigma = 0.0;
        assert_eq!(zolo_solution_sigma(s, &mut sigma), ZoloStatus::Ok);
        assert!(sigma > 0.0 && sigma < 1e-2);
        zolo_solution_free(s);
        zolo_problem_free(p);

        // overlapping sets are rejected
        let st =
            zolo_problem_from_points(e_re.as_ptr(), zeros.as_ptr(), 40, e_re.as_ptr(), zeros.as_ptr(), 40, 4, &mut p);
        assert_eq!(st, ZoloStatus::InvalidArgument);

        let cfg = CString::new(r#"{"preset": "fig2b", "degree": 3, "lawson_steps": 10}"#).unwrap();
        let mut q = ptr::null_mut();
        assert_eq!(zolo_problem_from_json(cfg.as_ptr(), &mut q), ZoloStatus::Ok);
        zolo_problem_free(q);
        let bad = CString::new(r#"{"preset": "fig2b", "bogus": 1}"#).unwrap();
        assert_eq!(zolo_problem_from_json(bad.as_ptr(), &mut q), ZoloStatus::Config);
        assert!(last_error().contains("bogus"));
    }
}

#[test]
fn degree_zero_has_no_ratio_solution() {
    unsafe {
        let p = preset("fig1a", 0, 10);
        let mut s = ptr::null_mut();
        assert_eq!(zolo_solve(p, &mut s), ZoloStatus::Ok);
        let mut tau = 0.0;
        assert_eq!(zolo_solution_tau(s, &mut tau), ZoloStatus::Ok);
        assert_eq!(tau, 1.0);
        let mut sigma = 0.0;
        assert_eq!(zolo_solution_sigma(s, &mut sigma), ZoloStatus::DegreeTooLow);
        let mut len = 0;
        assert_eq!(zolo_solution_poles(s, ptr::null_mut(), ptr::null_mut(), 0, &mut len), ZoloStatus::DegreeTooLow);
        zolo_solution_free(s);
        zolo_problem_free(p);
    }
}

#[test]
fn argument_errors() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(zolo_problem_from_preset(ptr::null(), &mut p), ZoloStatus::NullPointer);
        let name = CString::new("fig1a").unwrap();
        assert_eq!(zolo_problem_from_preset(name.as_ptr(), ptr::null_mut()), ZoloStatus::NullPointer);
        let invalid = [0xffu8, 0];
        assert_eq!(zolo_problem_from_preset(invalid.as_ptr().cast(), &mut p), ZoloStatus::InvalidArgument);
        assert_eq!(zolo_problem_set_degree(ptr::null_mut(), 3), ZoloStatus::NullPointer);
        assert_eq!(zolo_solve(ptr::null(), &mut ptr::null_mut()), ZoloStatus::NullPointer);
        let mut x = 0.0;
        assert_eq!(zolo_solution_tau(ptr::null(), &mut x), ZoloStatus::NullPointer);
        assert_eq!(zolo_tau_to_sigma(1.5, &mut x), ZoloStatus::InvalidArgument);
        assert!(last_error().contains("1.5"));
        assert_eq!(zolo_sigma_to_tau(0.25, &mut x), ZoloStatus::Ok);
        assert!(zolo_last_error_message().is_null());
        assert_eq!(x, 0.8);

        let q = preset("fig1a", 2, 1);
        assert_eq!(zolo_problem_set_lawson(q, 10, 0.0), ZoloStatus::InvalidArgument);
        zolo_problem_free(q);
        zolo_problem_free(ptr::null_mut());
        zolo_solution_free(ptr::null_mut());
        zolo_string_free(ptr::null_mut());
        assert_eq!(CStr::from_ptr(zolo_version()).to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}

fn include_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_is_valid_c_and_cpp() {
    let header = include_dir().join("zolo.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["zolo_solve", "zolo_solution_poles", "zolo_last_error_message", "ZOLO_STATUS_DEGREE_TOO_LOW"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let out = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
            .arg(&header)
            .output()
            .unwrap();
        assert!(out.status.success(), "{compiler}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn c_program_links_and_runs() {
    // test binaries live in <target>/<profile>/deps; the shared library one level up
    let lib_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    assert!(
        lib_dir.join("libzolo_ffi.so").exists() || lib_dir.join("libzolo_ffi.dylib").exists(),
        "no shared library in {lib_dir:?}"
    );
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/c/smoke.c");
    let out = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(include_dir())
        .arg("-L")
        .arg(&lib_dir)
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .args(["-lzolo_ffi", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "compile: {}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "run: {} {}", run.status, String::from_utf8_lossy(&run.stderr));
    let line = String::from_utf8(run.stdout).unwrap();
    assert!(line.starts_with("tau=") && line.contains("poles="), "{line}");
}
