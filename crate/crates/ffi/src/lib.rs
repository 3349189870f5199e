//! C ABI for hermitia.
//!
//! Every fallible function returns a [`HermitiaStatus`]; on failure the
//! message is available from [`hermitia_last_error_message`] on the same
//! thread. Handles are opaque and must be released with the matching
//! `_free` function. Indices are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hermitia::analysis::{chen_nie_membership, constancy_test};
use hermitia::curvature::{self, symmetrize, Which};
use hermitia::lie_hermitian::{self as lh, catalog, file};
use hermitia::models::hopf_flat_params;
use hermitia::{ConnectionParams, CurvatureTensor, Error, StructureConstants};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HermitiaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidParameter = 4,
    OutsideDomain = 5,
    InvalidStructure = 6,
    DimensionMismatch = 7,
    IndexOutOfRange = 8,
    UnknownCatalog = 9,
    ZeroVector = 10,
    NotUnitary = 11,
    InconsistentEquation = 12,
    BufferTooSmall = 13,
    Panic = 99,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HermitiaConnection {
    Chern = 0,
    Bismut = 1,
    LeviCivita = 2,
    /// D^r_s; the only kind that reads `r` and `s`.
    General = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HermitiaHscVerdict {
    pub constant: bool,
    pub c: f64,
    pub max_residual: f64,
}

/// Left-invariant Hermitian structure (opaque).
pub struct HermitiaAlgebra(StructureConstants);

/// Curvature tensor R_{i j̄ k l̄} (opaque).
pub struct HermitiaCurvature(CurvatureTensor);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

fn status_of(e: &Error) -> HermitiaStatus {
    match e {
        Error::DimensionMismatch { .. } => HermitiaStatus::DimensionMismatch,
        Error::OutsideDomain { .. } => HermitiaStatus::OutsideDomain,
        Error::ZeroVector => HermitiaStatus::ZeroVector,
        Error::NotUnitary { .. } => HermitiaStatus::NotUnitary,
        Error::InvalidParameter(_) => HermitiaStatus::InvalidParameter,
        Error::IndexOutOfRange { .. } => HermitiaStatus::IndexOutOfRange,
        Error::InvalidStructure { .. } => HermitiaStatus::InvalidStructure,
        Error::InconsistentEquation { .. } => HermitiaStatus::InconsistentEquation,
        Error::UnknownCatalog(_) => HermitiaStatus::UnknownCatalog,
        Error::Parse(_) => HermitiaStatus::Parse,
    }
}

fn fail(status: HermitiaStatus, msg: impl Into<String>) -> HermitiaStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), HermitiaStatus>) -> HermitiaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HermitiaStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(HermitiaStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: hermitia::Result<T>) -> Result<T, HermitiaStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, HermitiaStatus> {
    if p.is_null() {
        return Err(fail(HermitiaStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(HermitiaStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, HermitiaStatus> {
    p.as_ref().ok_or_else(|| fail(HermitiaStatus::NullPointer, "null handle"))
}

fn out_ptr<T>(p: *mut T) -> Result<(), HermitiaStatus> {
    if p.is_null() {
        Err(fail(HermitiaStatus::NullPointer, "null output pointer"))
    } else {
        Ok(())
    }
}

/// Message for the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hermitia_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hermitia_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an algebra file (JSON text).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hermitia_algebra_from_json(json: *const c_char, out: *mut *mut HermitiaAlgebra) -> HermitiaStatus {
    guard(|| {
        out_ptr(out)?;
        let sc = lift(file::parse(text(json)?))?;
        *out = Box::into_raw(Box::new(HermitiaAlgebra(sc)));
        Ok(())
    })
}

/// Catalog entry by name. `n` is only read by entries that take a dimension;
/// pass 0 for the default.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hermitia_algebra_catalog(name: *const c_char, n: usize, out: *mut *mut HermitiaAlgebra) -> HermitiaStatus {
    guard(|| {
        out_ptr(out)?;
        let sc = lift(catalog::catalog(text(name)?, (n > 0).then_some(n)))?;
        *out = Box::into_raw(Box::new(HermitiaAlgebra(sc)));
        Ok(())
    })
}

/// # Safety
/// `alg` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hermitia_algebra_free(alg: *mut HermitiaAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// # Safety
/// `alg` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hermitia_algebra_dim(alg: *const HermitiaAlgebra, out: *mut usize) -> HermitiaStatus {
    guard(|| {
        out_ptr(out)?;
        *out = deref(alg)?.0.n();
        Ok(())
    })
}

/// Jacobi check. Writes whether the structure is valid at `tol` and the
/// largest residual.
///
/// # Safety
/// `alg` must be a live handle; `ok` and `max_residual` writable pointers.
#[no_mangle]
pub unsafe extern "C" fn hermitia_algebra_validate(
    alg: *const HermitiaAlgebra,
    tol: f64,
    ok: *mut bool,
    max_residual: *mut f64,
) -> HermitiaStatus {
    guard(|| {
        out_ptr(ok)?;
        out_ptr(max_residual)?;
        let rep = lh::validate(&deref(alg)?.0, tol);
        *ok = rep.ok;
        *max_residual = rep.max_residual();
        Ok(())
    })
}

/// Curvature of the chosen connection. `r` and `s` are ignored unless
/// `kind` is `General`.
///
/// # Safety
/// `alg` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hermitia_curvature_new(
    alg: *const HermitiaAlgebra,
    kind: HermitiaConnection,
    r: f64,
    s: f64,
    out: *mut *mut HermitiaCurvature,
) -> HermitiaStatus {
    guard(|| {
        out_ptr(out)?;
        let sc = &deref(alg)?.0;
        let rt = match kind {
            HermitiaConnection::Chern => lift(curvature::curvature_from_structure(sc, Which::Chern))?,
            HermitiaConnection::Bismut => lift(curvature::curvature_from_structure(sc, Which::Bismut))?,
            HermitiaConnection::LeviCivita => lift(curvature::levicivita_curvature(sc))?.tensor,
            HermitiaConnection::General => {
                let params = lift(ConnectionParams::new(r, s))?;
                lift(curvature::curvature_d(sc, params))?
            }
        };
        *out = Box::into_raw(Box::new(HermitiaCurvature(rt)));
        Ok(())
    })
}

/// New handle holding the symmetrization R̂ of `curv`.
///
/// # Safety
/// `curv` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hermitia_curvature_symmetrize(curv: *const HermitiaCurvature, out: *mut *mut HermitiaCurvature) -> HermitiaStatus {
    guard(|| {
        out_ptr(out)?;
        let hat = symmetrize(&deref(curv)?.0);
        *out = Box::into_raw(Box::new(HermitiaCurvature(hat)));
        Ok(())
    })
}

/// # Safety
/// `curv` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hermitia_curvature_dim(curv: *const HermitiaCurvature, out: *mut usize) -> HermitiaStatus {
    guard(|| {
        out_ptr(out)?;
        *out = deref(curv)?.0.n();
        Ok(())
    })
}

/// Component R_{i j̄ k l̄}.
///
/// # Safety
/// `curv` must be a live handle; `re` and `im` writable pointers.
#[no_mangle]
pub unsafe extern "C" fn hermitia_curvature_get(
    curv: *const HermitiaCurvature,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    re: *mut f64,
    im: *mut f64,
) -> HermitiaStatus {
    guard(|| {
        out_ptr(re)?;
        out_ptr(im)?;
        let rt = &deref(curv)?.0;
        let n = rt.n();
        if let Some(&bad) = [i, j, k, l].iter().find(|&&x| x >= n) {
            let e = Error::IndexOutOfRange { index: bad, n };
            return Err(fail(status_of(&e), e.to_string()));
        }
        let z = rt.get(i, j, k, l);
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// Constant-HSC test on the symmetrization of `curv`.
///
/// # Safety
/// `curv` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hermitia_curvature_constancy(curv: *const HermitiaCurvature, tol: f64, out: *mut HermitiaHscVerdict) -> HermitiaStatus {
    guard(|| {
        out_ptr(out)?;
        let v = constancy_test(&symmetrize(&deref(curv)?.0), tol);
        *out = HermitiaHscVerdict {
            constant: v.constant,
            c: v.c,
            max_residual: v.max_residual,
        };
        Ok(())
    })
}

/// # Safety
/// `curv` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hermitia_curvature_free(curv: *mut HermitiaCurvature) {
    if !curv.is_null() {
        drop(Box::from_raw(curv));
    }
}

/// Whether (r, s) lies on the Chen–Nie curve.
#[no_mangle]
pub extern "C" fn hermitia_chen_nie_membership(r: f64, s: f64, tol: f64) -> bool {
    chen_nie_membership(r, s, tol)
}

/// Flat parameters of the standard Hopf manifold of dimension `n`, written as
/// interleaved (r, s) pairs. `count` receives the number of pairs; when it
/// exceeds `capacity` nothing is written and `BufferTooSmall` is returned.
///
/// # Safety
/// `out` must have room for `2 * capacity` doubles (may be null when
/// `capacity` is 0); `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hermitia_hopf_flat_params(n: usize, out: *mut f64, capacity: usize, count: *mut usize) -> HermitiaStatus {
    guard(|| {
        out_ptr(count)?;
        let pts = lift(hopf_flat_params(n))?;
        *count = pts.len();
        if pts.len() > capacity {
            return Err(fail(HermitiaStatus::BufferTooSmall, format!("need room for {} pairs", pts.len())));
        }
        if !pts.is_empty() {
            out_ptr(out)?;
        }
        for (idx, (r, s)) in pts.into_iter().enumerate() {
            *out.add(2 * idx) = r;
            *out.add(2 * idx + 1) = s;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn last_error() -> String {
        unsafe { CStr::from_ptr(hermitia_last_error_message()) }.to_string_lossy().into_owned()
    }

    #[test]
    fn status_codes_cover_errors() {
        assert_eq!(status_of(&Error::OutsideDomain { r: 2.0, s: 1.0 }), HermitiaStatus::OutsideDomain);
        assert_eq!(status_of(&Error::Parse("x".into())), HermitiaStatus::Parse);
    }

    #[test]
    fn null_inputs_are_rejected() {
        let mut alg = ptr::null_mut();
        let st = unsafe { hermitia_algebra_from_json(ptr::null(), &mut alg) };
        assert_eq!(st, HermitiaStatus::NullPointer);
        assert!(alg.is_null());
        assert_eq!(last_error(), "null string");
        let mut n = 0usize;
        assert_eq!(unsafe { hermitia_algebra_dim(ptr::null(), &mut n) }, HermitiaStatus::NullPointer);
    }

    #[test]
    fn version_is_terminated() {
        let v = unsafe { CStr::from_ptr(hermitia_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
