//! C ABI over the clusterweyl engine.
//!
//! Every function returns a [`CwStatus`]. On failure the message is kept in a
//! thread-local slot readable through [`cw_last_error`]. Strings handed out
//! by the library are released with [`cw_string_free`], quivers with
//! [`cw_quiver_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clap::ValueEnum;
use clusterweyl::constructions::build_qm;
use clusterweyl::interface::cli::{certify, CheckName, VerifyOptions};
use clusterweyl::interface::BuildSpec;
use clusterweyl::quiver::{QuiverError, VertexId, WeightedQuiver};
use clusterweyl::roots::{CartanData, CartanType};
use clusterweyl::seed::{MutationSequence, Seed, Tracking};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    FrozenVertex = 4,
    UnknownVertex = 5,
    Engine = 6,
    VerificationFailed = 7,
    Panic = 8,
}

/// Opaque quiver handle.
pub struct CwQuiver {
    inner: WeightedQuiver,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl ToString) {
    let c = CString::new(msg.to_string().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(CwStatus, String);

impl From<QuiverError> for Fail {
    fn from(e: QuiverError) -> Self {
        let code = match e {
            QuiverError::FrozenVertex(_) => CwStatus::FrozenVertex,
            QuiverError::UnknownVertex(_) => CwStatus::UnknownVertex,
            _ => CwStatus::Engine,
        };
        Fail(code, e.to_string())
    }
}

fn invalid(e: impl ToString) -> Fail {
    Fail(CwStatus::InvalidArgument, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<CwStatus, Fail>) -> CwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            CwStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(CwStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail(CwStatus::InvalidUtf8, e.to_string()))
}

unsafe fn quiver_ref<'a>(q: *const CwQuiver) -> Result<&'a CwQuiver, Fail> {
    q.as_ref().ok_or_else(|| Fail(CwStatus::NullPointer, "null quiver handle".into()))
}

unsafe fn out_quiver(out: *mut *mut CwQuiver, q: WeightedQuiver) -> Result<CwStatus, Fail> {
    if out.is_null() {
        return Err(Fail(CwStatus::NullPointer, "null output pointer".into()));
    }
    *out = Box::into_raw(Box::new(CwQuiver { inner: q }));
    Ok(CwStatus::Ok)
}

unsafe fn out_string(out: *mut *mut c_char, s: String) -> Result<CwStatus, Fail> {
    if out.is_null() {
        return Err(Fail(CwStatus::NullPointer, "null output pointer".into()));
    }
    *out = CString::new(s).map_err(invalid)?.into_raw();
    Ok(CwStatus::Ok)
}

/// Last error message on this thread, or null. Owned by the library and
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static.
#[no_mangle]
pub extern "C" fn cw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds `Q_m` for a Cartan type such as `"C"` with rank `n`.
///
/// # Safety
/// `cartan` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cw_quiver_build_qm(cartan: *const c_char, n: usize, m: usize, out: *mut *mut CwQuiver) -> CwStatus {
    guard(|| {
        let t: CartanType = text(cartan)?.parse().map_err(invalid)?;
        let cd = CartanData::of(t, n).map_err(invalid)?;
        if m < 2 {
            return Err(invalid(format!("m must be at least 2, got {m}")));
        }
        out_quiver(out, build_qm(&cd, None, m).map_err(invalid)?)
    })
}

/// Builds any named quiver from a JSON build spec, e.g.
/// `{"kind":"tilde","type":"B","n":3,"k":1}`.
///
/// # Safety
/// `spec_json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cw_quiver_build(spec_json: *const c_char, out: *mut *mut CwQuiver) -> CwStatus {
    guard(|| {
        let spec: BuildSpec = serde_json::from_str(text(spec_json)?).map_err(invalid)?;
        out_quiver(out, spec.build().map_err(invalid)?)
    })
}

/// Parses a quiver from its JSON form.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cw_quiver_from_json(json: *const c_char, out: *mut *mut CwQuiver) -> CwStatus {
    guard(|| out_quiver(out, WeightedQuiver::from_json_str(text(json)?).map_err(invalid)?))
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `q` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cw_quiver_free(q: *mut CwQuiver) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// Number of vertices, frozen included.
///
/// # Safety
/// `q` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cw_quiver_len(q: *const CwQuiver, out: *mut usize) -> CwStatus {
    guard(|| {
        let q = quiver_ref(q)?;
        let out = out.as_mut().ok_or_else(|| Fail(CwStatus::NullPointer, "null output pointer".into()))?;
        *out = q.inner.len();
        Ok(CwStatus::Ok)
    })
}

/// Mutates in place at a vertex label such as `"v:1:2"`. The handle is
/// unchanged on failure.
///
/// # Safety
/// `q` must be a live handle and `vertex` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cw_quiver_mutate(q: *mut CwQuiver, vertex: *const c_char) -> CwStatus {
    guard(|| {
        let v: VertexId = text(vertex)?.parse().map_err(invalid)?;
        let q = q.as_mut().ok_or_else(|| Fail(CwStatus::NullPointer, "null quiver handle".into()))?;
        q.inner = q.inner.mutate_at(&v)?;
        Ok(CwStatus::Ok)
    })
}

/// Applies a JSON step list (`[{"mut":"v:1:1"},{"perm":{...}}]`) in place.
///
/// # Safety
/// `q` must be a live handle and `seq_json` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cw_quiver_apply(q: *mut CwQuiver, seq_json: *const c_char) -> CwStatus {
    guard(|| {
        let seq = MutationSequence::from_json_str(text(seq_json)?).map_err(invalid)?;
        let q = q.as_mut().ok_or_else(|| Fail(CwStatus::NullPointer, "null quiver handle".into()))?;
        let s = Seed::new(&q.inner, Tracking::default()).apply(&seq).map_err(|e| Fail(CwStatus::Engine, e.to_string()))?;
        q.inner = s.quiver().clone();
        Ok(CwStatus::Ok)
    })
}

/// Labeled equality of two quivers.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cw_quiver_equal(a: *const CwQuiver, b: *const CwQuiver, out: *mut bool) -> CwStatus {
    guard(|| {
        let eq = quiver_ref(a)?.inner == quiver_ref(b)?.inner;
        let out = out.as_mut().ok_or_else(|| Fail(CwStatus::NullPointer, "null output pointer".into()))?;
        *out = eq;
        Ok(CwStatus::Ok)
    })
}

/// Normalized JSON; free with [`cw_string_free`].
///
/// # Safety
/// `q` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cw_quiver_to_json(q: *const CwQuiver, out: *mut *mut c_char) -> CwStatus {
    guard(|| out_string(out, quiver_ref(q)?.inner.to_json_string()))
}

/// Graphviz DOT; free with [`cw_string_free`].
///
/// # Safety
/// `q` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cw_quiver_to_dot(q: *const CwQuiver, out: *mut *mut c_char) -> CwStatus {
    guard(|| out_string(out, quiver_ref(q)?.inner.to_dot()))
}

/// Runs a check by its CLI name (`braid`, `quiver`, `green-dt`, …) on a
/// Cartan type and writes the certificate JSON. Returns
/// `VerificationFailed` with the certificate still written when the verdict
/// is fail.
///
/// # Safety
/// `check` and `cartan` must be nul-terminated strings; `cartan` may be null
/// for checks without a type. `cert_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cw_verify(check: *const c_char, cartan: *const c_char, n: usize, m: usize, cert_json: *mut *mut c_char) -> CwStatus {
    guard(|| {
        let name = CheckName::from_str(text(check)?, true).map_err(invalid)?;
        let cartan = if cartan.is_null() { None } else { Some(text(cartan)?.to_string()) };
        let opts = VerifyOptions { cartan, n: Some(n), m, ..Default::default() };
        let certs = certify(name, &opts).map_err(|e| invalid(e.message))?;
        let passed = certs.iter().all(|c| c.passed());
        let json = if certs.len() == 1 { certs[0].to_json_string() } else { serde_json::to_string_pretty(&certs).map_err(invalid)? };
        out_string(cert_json, json)?;
        if passed {
            Ok(CwStatus::Ok)
        } else {
            Err(Fail(CwStatus::VerificationFailed, "verdict is fail".into()))
        }
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
