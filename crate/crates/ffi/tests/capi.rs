use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use hdx_ffi::*;

fn complex(json: &str) -> *mut HdxComplex {
    let s = CString::new(json).unwrap();
    let mut x = ptr::null_mut();
    assert_eq!(unsafe { hdx_complex_from_json(s.as_ptr(), &mut x) }, HdxStatus::Ok);
    x
}

fn last_error() -> String {
    let p = hdx_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

const HOLLOW: &str = r#"{"vertices":["a","b","c"],"maximal_faces":[[0,1],[1,2],[0,2]]}"#;
const FILLED: &str = r#"{"vertices":["a","b","c"],"maximal_faces":[[0,1,2]]}"#;

#[test]
fn complex_round_trip_and_counts() {
    let x = complex(FILLED);
    unsafe {
        assert_eq!(hdx_complex_dim(x), 2);
        let mut n = 0usize;
        for (k, want) in [(-1, 1), (0, 3), (1, 3), (2, 1), (3, 0)] {
            assert_eq!(hdx_complex_face_count(x, k, &mut n), HdxStatus::Ok);
            assert_eq!(n, want);
        }
        let mut s = ptr::null_mut();
        assert_eq!(hdx_complex_to_json(x, &mut s), HdxStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        hdx_string_free(s);
        assert!(text.contains("maximal_faces"));
        let y = complex(&text);
        assert_eq!(hdx_complex_dim(y), 2);
        hdx_complex_free(y);
        hdx_complex_free(x);
    }
}

#[test]
fn build_named() {
    let spec = CString::new(r#"{"kind":"an-opposition","q":3,"dim":3,"flag":"full"}"#).unwrap();
    let mut x = ptr::null_mut();
    unsafe {
        assert_eq!(hdx_complex_build(spec.as_ptr(), &mut x), HdxStatus::Ok);
        let mut n = 0usize;
        hdx_complex_face_count(x, 0, &mut n);
        assert_eq!(n, 18);
        hdx_complex_face_count(x, 1, &mut n);
        assert_eq!(n, 27);
        hdx_complex_free(x);
    }
    let bad = CString::new(r#"{"kind":"nope"}"#).unwrap();
    assert_eq!(unsafe { hdx_complex_build(bad.as_ptr(), &mut x) }, HdxStatus::Malformed);
    assert!(last_error().contains("nope"));
}

#[test]
fn cones() {
    let x = complex(FILLED);
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(hdx_cone_solve(x, 1, 0, &mut c), HdxStatus::Ok);
        let mut ok = 0;
        assert_eq!(hdx_cone_verify(x, c, &mut ok), HdxStatus::Ok);
        assert_eq!(ok, 1);
        let mut count = 0usize;
        assert_eq!(hdx_cone_radii(c, ptr::null_mut(), 0, &mut count), HdxStatus::Ok);
        assert_eq!(count, 3);
        let mut r = vec![0u64; count];
        hdx_cone_radii(c, r.as_mut_ptr(), r.len(), &mut count);
        assert_eq!(r, [1, 1, 1]);
        let mut s = ptr::null_mut();
        assert_eq!(hdx_cone_to_json(c, &mut s), HdxStatus::Ok);
        let mut d = ptr::null_mut();
        assert_eq!(hdx_cone_from_json(s, &mut d), HdxStatus::Ok);
        hdx_string_free(s);
        assert_eq!(hdx_cone_verify(x, d, &mut ok), HdxStatus::Ok);
        assert_eq!(ok, 1);
        hdx_cone_free(d);
        hdx_cone_free(c);
    }
    let h = complex(HOLLOW);
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { hdx_cone_solve(h, 1, 0, &mut c) }, HdxStatus::NoCone);
    assert!(c.is_null());
    unsafe {
        hdx_complex_free(h);
        hdx_complex_free(x);
    }
}

#[test]
fn expansion_values() {
    let x = complex(FILLED);
    let (mut has, mut num, mut den) = (0, 0i64, 0i64);
    unsafe {
        assert_eq!(hdx_coboundary_constant(x, 0, 2, &mut has, &mut num, &mut den), HdxStatus::Ok);
        assert_eq!((has, num, den), (1, 2, 1));
        let (mut v, mut e) = (0.0, 0.0);
        assert_eq!(hdx_second_eigenvalue(x, &mut v, &mut e), HdxStatus::Ok);
        assert!((v + 0.5).abs() <= 1e-9);
        hdx_complex_free(x);
    }
}

#[test]
fn null_and_malformed_arguments() {
    let mut x = ptr::null_mut();
    assert_eq!(unsafe { hdx_complex_from_json(ptr::null(), &mut x) }, HdxStatus::NullArgument);
    assert!(last_error().contains("null"));
    let bad = CString::new("{").unwrap();
    assert_eq!(unsafe { hdx_complex_from_json(bad.as_ptr(), &mut x) }, HdxStatus::Malformed);
    let mut n = 0usize;
    assert_eq!(unsafe { hdx_complex_face_count(ptr::null(), 0, &mut n) }, HdxStatus::NullArgument);
    assert_eq!(unsafe { hdx_complex_dim(ptr::null()) }, -1);
    unsafe {
        hdx_complex_free(ptr::null_mut());
        hdx_cone_free(ptr::null_mut());
        hdx_string_free(ptr::null_mut());
    }
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/hdx.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["hdx_complex_from_json", "hdx_cone_verify", "hdx_last_error", "HdxStatus_NoCone"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = std::env::temp_dir().join(format!("hdx-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("probe.c");
    std::fs::write(&src, "#include \"hdx.h\"\nint main(void) { return hdx_complex_dim(0) == -1 ? 0 : 1; }\n").unwrap();
    match Command::new("cc").arg("-fsyntax-only").arg("-I").arg(header.parent().unwrap()).arg(&src).output() {
        Ok(out) => assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr)),
        Err(_) => eprintln!("no C compiler; header syntax check skipped"),
    }
}
