//! C interface to `hdx_core`.
//!
//! Complexes and cones are opaque handles, released with the matching
//! `*_free`. Every fallible call returns an [`HdxStatus`]; on failure
//! `hdx_last_error` holds a message for the calling thread. Strings handed
//! out by the library are released with `hdx_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hdx_core::caps::Caps;
use hdx_core::catalog::{self, BuildSpec};
use hdx_core::cones::{solve_cone_linear, ConeFunction, Verdict};
use hdx_core::expansion::{coboundary_constant, second_eigenvalue};
use hdx_core::io::{self, ComplexJson, ConeJson};
use hdx_core::simplicial::Complex;
use hdx_core::HdxError;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HdxStatus {
    Ok = 0,
    NullArgument = 1,
    Malformed = 2,
    Resource = 3,
    NoCone = 4,
    Io = 5,
    Panic = 6,
}

/// A finite simplicial complex.
pub struct HdxComplex {
    inner: Complex,
}

/// An integral cone function.
pub struct HdxCone {
    inner: ConeFunction,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &HdxError) -> HdxStatus {
    match e {
        HdxError::Malformed(_) | HdxError::Domain(_) | HdxError::Unsupported(_) => HdxStatus::Malformed,
        HdxError::Resource(_) | HdxError::Overflow(_) => HdxStatus::Resource,
        HdxError::NoCone(_) => HdxStatus::NoCone,
        HdxError::Io(_) => HdxStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), HdxStatus>) -> HdxStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HdxStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            HdxStatus::Panic
        }
    }
}

fn fail(e: HdxError) -> HdxStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

fn null(what: &str) -> HdxStatus {
    set_error(format!("{what} is null"));
    HdxStatus::NullArgument
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, HdxStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(HdxError::Malformed(format!("{what} is not UTF-8"))))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), HdxStatus> {
    let c = CString::new(s).map_err(|_| fail(HdxError::Malformed("string holds a NUL byte".into())))?;
    *out = c.into_raw();
    Ok(())
}

fn caps() -> Result<Caps, HdxStatus> {
    Caps::from_env().map_err(fail)
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn hdx_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hdx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"vertices":[...],"maximal_faces":[[...]]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_complex_from_json(json: *const c_char, out: *mut *mut HdxComplex) -> HdxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let j: ComplexJson = serde_json::from_str(text).map_err(|e| fail(e.into()))?;
        let inner = io::complex_from_json(&j).map_err(fail)?;
        *out = Box::into_raw(Box::new(HdxComplex { inner }));
        Ok(())
    })
}

/// Builds a named complex from a spec such as `{"kind":"an-opposition","q":3,"dim":3,"flag":"full"}`.
/// Caps come from the `HDX_CAPS` environment variable.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_complex_build(spec_json: *const c_char, out: *mut *mut HdxComplex) -> HdxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(spec_json, "spec_json")?;
        let spec: BuildSpec = serde_json::from_str(text).map_err(|e| fail(e.into()))?;
        let built = catalog::build(&spec, &caps()?).map_err(fail)?;
        *out = Box::into_raw(Box::new(HdxComplex { inner: built.complex }));
        Ok(())
    })
}

/// # Safety
/// `x` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hdx_complex_free(x: *mut HdxComplex) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Dimension of the complex; -1 for the void complex or a null handle.
///
/// # Safety
/// `x` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hdx_complex_dim(x: *const HdxComplex) -> i32 {
    x.as_ref().map_or(-1, |x| x.inner.dim())
}

/// Number of k-faces, for k ≥ -1 (the empty face counts once).
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_complex_face_count(x: *const HdxComplex, k: i32, out: *mut usize) -> HdxStatus {
    guard(|| {
        let x = x.as_ref().ok_or_else(|| null("complex"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let counts = x.inner.face_counts();
        let idx = usize::try_from(k + 1).map_err(|_| fail(HdxError::Domain(format!("degree {k} below -1"))))?;
        *out = counts.get(idx).copied().unwrap_or(0);
        Ok(())
    })
}

/// Serializes the complex; free the result with `hdx_string_free`.
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_complex_to_json(x: *const HdxComplex, out: *mut *mut c_char) -> HdxStatus {
    guard(|| {
        let x = x.as_ref().ok_or_else(|| null("complex"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let j = io::complex_to_json(&x.inner, None);
        write_string(out, serde_json::to_string(&j).map_err(|e| fail(e.into()))?)
    })
}

/// Second largest eigenvalue of the random walk on the 1-skeleton.
///
/// # Safety
/// `x` must be a live handle; `value` and `error_bound` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_second_eigenvalue(x: *const HdxComplex, value: *mut f64, error_bound: *mut f64) -> HdxStatus {
    guard(|| {
        let x = x.as_ref().ok_or_else(|| null("complex"))?;
        if value.is_null() || error_bound.is_null() {
            return Err(null("out"));
        }
        let e = second_eigenvalue(&x.inner).map_err(fail)?;
        *value = e.value;
        *error_bound = e.error_bound;
        Ok(())
    })
}

/// Exact coboundary expansion h^k over ℤ/m as `num/den`, by exhaustive
/// search. `*has_value` is 0 when the constant is undefined (no
/// non-coboundary cochains).
///
/// # Safety
/// `x` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_coboundary_constant(
    x: *const HdxComplex,
    k: i32,
    modulus: u64,
    has_value: *mut i32,
    num: *mut i64,
    den: *mut i64,
) -> HdxStatus {
    guard(|| {
        let x = x.as_ref().ok_or_else(|| null("complex"))?;
        if has_value.is_null() || num.is_null() || den.is_null() {
            return Err(null("out"));
        }
        let v = coboundary_constant(&x.inner, k, modulus, caps()?.brute_force_configs).map_err(fail)?;
        match v {
            Some(v) => {
                *has_value = 1;
                *num = *v.value.numer();
                *den = *v.value.denom();
            }
            None => {
                *has_value = 0;
                *num = 0;
                *den = 1;
            }
        }
        Ok(())
    })
}

/// Solves for an integral k-cone with the given apex (a vertex id).
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_cone_solve(x: *const HdxComplex, k: i32, apex: u32, out: *mut *mut HdxCone) -> HdxStatus {
    guard(|| {
        let x = x.as_ref().ok_or_else(|| null("complex"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = solve_cone_linear(&x.inner, k, apex, caps()?.linear_entries).map_err(fail)?;
        *out = Box::into_raw(Box::new(HdxCone { inner }));
        Ok(())
    })
}

/// Parses an integral cone table.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_cone_from_json(json: *const c_char, out: *mut *mut HdxCone) -> HdxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let j: ConeJson = serde_json::from_str(text).map_err(|e| fail(e.into()))?;
        let (inner, _) = io::cone_from_json(&j).map_err(fail)?;
        *out = Box::into_raw(Box::new(HdxCone { inner }));
        Ok(())
    })
}

/// # Safety
/// `c` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hdx_cone_free(c: *mut HdxCone) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Checks the cone equation on every face; `*ok` is 1 when it holds.
///
/// # Safety
/// Both handles must be live; `ok` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_cone_verify(x: *const HdxComplex, c: *const HdxCone, ok: *mut i32) -> HdxStatus {
    guard(|| {
        let x = x.as_ref().ok_or_else(|| null("complex"))?;
        let c = c.as_ref().ok_or_else(|| null("cone"))?;
        if ok.is_null() {
            return Err(null("ok"));
        }
        *ok = match c.inner.verify(&x.inner) {
            Verdict::Ok => 1,
            Verdict::Violation { simplex, detail } => {
                set_error(format!("cone equation fails at {simplex:?}: {detail}"));
                0
            }
        };
        Ok(())
    })
}

/// Writes up to `len` radii Rad_{-1}, Rad_0, ... into `radii` and the full
/// count into `*count`.
///
/// # Safety
/// `c` must be a live handle; `radii` must hold `len` entries (or be null
/// with `len` 0); `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_cone_radii(c: *const HdxCone, radii: *mut u64, len: usize, count: *mut usize) -> HdxStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("cone"))?;
        if count.is_null() || (radii.is_null() && len > 0) {
            return Err(null("out"));
        }
        let r = c.inner.radius_profile();
        *count = r.len();
        for (i, v) in r.iter().take(len).enumerate() {
            *radii.add(i) = *v as u64;
        }
        Ok(())
    })
}

/// Serializes the cone as an integral table; free with `hdx_string_free`.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_cone_to_json(c: *const HdxCone, out: *mut *mut c_char) -> HdxStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("cone"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let j = io::cone_to_json(&c.inner, &hdx_core::chains::CoefficientGroup::integers());
        write_string(out, serde_json::to_string(&j).map_err(|e| fail(e.into()))?)
    })
}
