use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use theta_shift_ffi::*;

fn last_error() -> String {
    let p = ts_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn characters_and_sums() {
    unsafe {
        let mut chi = ptr::null_mut();
        let spec = CString::new("kron:-4").unwrap();
        assert_eq!(ts_character_parse(spec.as_ptr(), &mut chi), TsStatus::Ok);
        assert!(ts_last_error_message().is_null());
        assert_eq!((ts_character_modulus(chi), ts_character_conductor(chi)), (4, 4));
        let mut v = TsComplex::default();
        assert_eq!(ts_character_value(chi, 3, &mut v), TsStatus::Ok);
        assert_eq!(v, TsComplex { re: -1.0, im: 0.0 });

        let (mut a, mut b, mut bound) = (TsComplex::default(), TsComplex::default(), 0.0);
        assert_eq!(ts_kloosterman(3, 11, 120, 1, chi, false, &mut a, &mut bound), TsStatus::Ok);
        assert_eq!(ts_kloosterman(3, 11, 120, 1, chi, true, &mut b, ptr::null_mut()), TsStatus::Ok);
        assert!((a.re - b.re).hypot(a.im - b.im) < 1e-9);
        assert!(a.re.hypot(a.im) <= bound);

        assert_eq!(ts_salie(3, 11, 120, chi, false, &mut a, ptr::null_mut()), TsStatus::Ok);
        assert_eq!(ts_salie(3, 11, 120, chi, true, &mut b, ptr::null_mut()), TsStatus::Ok);
        assert!((a.re - b.re).hypot(a.im - b.im) < 1e-9);
        assert_eq!(ts_salie(1, 1, 6, chi, false, &mut a, ptr::null_mut()), TsStatus::Domain);
        assert!(last_error().starts_with("domain error"));
        ts_character_free(chi);
        ts_character_free(ptr::null_mut());
    }
}

#[test]
fn null_and_utf8_errors() {
    unsafe {
        let mut chi = ptr::null_mut();
        assert_eq!(ts_character_parse(ptr::null(), &mut chi), TsStatus::NullPointer);
        assert!(last_error().contains("spec"));
        let bad = [0xffu8, 0];
        assert_eq!(ts_character_parse(bad.as_ptr().cast(), &mut chi), TsStatus::InvalidUtf8);
        let spec = CString::new("trivial").unwrap();
        assert_eq!(ts_character_parse(spec.as_ptr(), ptr::null_mut()), TsStatus::NullPointer);
        assert_eq!(ts_character_modulus(ptr::null()), 0);
        let mut z = TsComplex::default();
        assert_eq!(ts_kloosterman(1, 1, 4, 1, ptr::null(), false, &mut z, ptr::null_mut()), TsStatus::NullPointer);
    }
}

#[test]
fn special_functions() {
    unsafe {
        let mut j = TsComplex::default();
        let mut jm = TsComplex::default();
        assert_eq!(ts_bessel_j_imag_order(1.5, 3.0, &mut j), TsStatus::Ok);
        assert_eq!(ts_bessel_j_imag_order(-1.5, 3.0, &mut jm), TsStatus::Ok);
        assert!((j.re - jm.re).abs() < 1e-12 && (j.im + jm.im).abs() < 1e-12);

        let (mut w, mut degraded) = (0.0, true);
        assert_eq!(ts_whittaker_w(0.25, TsComplex { re: 0.0, im: 2.0 }, 3.0, &mut w, &mut degraded), TsStatus::Ok);
        assert!(w.is_finite() && !degraded);
        assert_eq!(
            ts_whittaker_w(0.25, TsComplex { re: 1.0, im: 2.0 }, 3.0, &mut w, ptr::null_mut()),
            TsStatus::Domain
        );

        let mut r = 0.0;
        assert_eq!(ts_theta_residual(1, 0, 4, 1, TsComplex { re: 0.1, im: 0.9 }, &mut r), TsStatus::Ok);
        assert!(r < 1e-8);
        assert_eq!(ts_remark_inner_product(6, &mut r), TsStatus::Domain);
    }
}

#[test]
fn forms_and_series() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    std::fs::write(&path, "level=7\nweight=3\nchar_kronecker=-7\na 1 1\na 2 -3\na 3 0\na 4 5\n").unwrap();
    unsafe {
        let mut f = ptr::null_mut();
        let p = CString::new(path.to_str().unwrap()).unwrap();
        assert_eq!(ts_form_load(p.as_ptr(), 0, &mut f), TsStatus::Ok);
        assert_eq!(ts_form_level(f), 28);
        let mut a = TsComplex::default();
        assert_eq!(ts_form_coefficient(f, 2, &mut a), TsStatus::Ok);
        assert_eq!(a.re, -3.0);
        assert_eq!(ts_form_coefficient(f, 5, &mut a), TsStatus::OutOfRange);
        let grid = [1.0, 2.0];
        let mut s = ptr::null_mut();
        assert_eq!(ts_shifted_sum(f, 1, grid.as_ptr(), 2, false, &mut s), TsStatus::Ok);
        let (mut x, mut v) = (0.0, 0.0);
        assert_eq!(ts_series_row(s, 1, &mut x, &mut v), TsStatus::Ok);
        // n = 0, ±1 with n² + 1 ≤ 4: A(1) + 2A(2).
        assert_eq!((x, v), (2.0, 1.0 + 2.0 * (-3.0 / 2.0)));
        let mut e = 0.0;
        assert_eq!(ts_series_fit(s, 0.0, &mut e), TsStatus::Domain);
        ts_series_free(s);
        let mut big = ptr::null_mut();
        assert_eq!(ts_shifted_sum(f, 1, [10.0].as_ptr(), 1, false, &mut big), TsStatus::OutOfRange);
        ts_form_free(f);

        let missing = CString::new(dir.path().join("none.txt").to_str().unwrap()).unwrap();
        assert_eq!(ts_form_load(missing.as_ptr(), 0, &mut f), TsStatus::Io);

        assert_eq!(ts_form_eta7(28, &mut f), TsStatus::Ok);
        let mut c = 0.0;
        assert_eq!(ts_residual_constant(f, 7, 1.0, &mut c), TsStatus::Ok);
        assert!(c > 0.0);
        assert_eq!(ts_residual_constant(f, 1, 1.0, &mut c), TsStatus::Ok);
        assert_eq!(c, 0.0);
        ts_form_free(f);
    }
}

#[test]
fn run_config() {
    let dir = tempfile::tempdir().unwrap();
    let toml = CString::new("command = \"verify-mult\"\ntrials = 6\nmax_c = 300\n").unwrap();
    let out = CString::new(dir.path().to_str().unwrap()).unwrap();
    unsafe {
        assert_eq!(ts_run_config(toml.as_ptr(), out.as_ptr()), TsStatus::Ok);
        let bad = CString::new("command = \"verify-mult\"\ntrials = \"x\"\n").unwrap();
        assert_eq!(ts_run_config(bad.as_ptr(), ptr::null()), TsStatus::Parse);
        let failing = CString::new("command = \"verify-theta\"\ntrials = 3\ntol = -1.0\n").unwrap();
        assert_eq!(ts_run_config(failing.as_ptr(), ptr::null()), TsStatus::CheckFailed);
        assert!(last_error().contains("FAIL verify-theta"));
    }
    assert!(dir.path().join("verify-mult_verify-mult.csv").exists());
}

#[test]
fn header_declares_every_export() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/theta_shift.h")).unwrap();
    let src = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    let names: Vec<&str> =
        src.lines().filter_map(|l| l.split("extern \"C\" fn ").nth(1)).map(|l| l.split('(').next().unwrap()).collect();
    assert!(names.len() > 20);
    for n in names {
        assert!(header.contains(&format!("{n}(")), "{n} missing from header");
    }
}

/// Compiles `tests/smoke.c` against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    let lib = lib_dir.join("libtheta_shift_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let bin = tmp.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("C smoke test passed"));
}
