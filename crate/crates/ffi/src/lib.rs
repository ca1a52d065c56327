//! C interface to the `quadmap` classifier.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free` function. Every fallible call returns a [`QmStatus`];
//! the message of the last failure on the calling thread is available from
//! [`qm_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quadmap::analyze::{preimage_count, PreimageCardinality};
use quadmap::cli::{cmd_classify, CliError, ErrorKind, MapSpec, Options};
use quadmap::{classify, ClassLabel, ClassificationResult, Error, QuadraticMap};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Verification = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// A quadratic map of the plane.
pub struct QmMap(QuadraticMap);

/// Label, witness pair and residual of a successful classification.
pub struct QmClassification(ClassificationResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: QmStatus, message: impl Into<String>) -> QmStatus {
    let text = CString::new(message.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
    status
}

fn status_of(e: &Error) -> QmStatus {
    match e {
        Error::Verification { .. } | Error::LongCaseResidual { .. } | Error::NoGuaranteedRoot { .. } => {
            QmStatus::Verification
        }
        Error::InvalidArgument(_) => QmStatus::InvalidArgument,
        _ => QmStatus::Domain,
    }
}

fn cli_status(e: &CliError) -> QmStatus {
    match e.kind {
        ErrorKind::Parse | ErrorKind::Io => QmStatus::InvalidArgument,
        ErrorKind::Domain => QmStatus::Domain,
        ErrorKind::Verification | ErrorKind::SelfTest => QmStatus::Verification,
    }
}

fn guard(f: impl FnOnce() -> QmStatus) -> QmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(QmStatus::Panic, "internal panic"))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, QmStatus> {
    if s.is_null() {
        return Err(fail(QmStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(QmStatus::InvalidArgument, "string is not UTF-8"))
}

/// Copies `s` with a terminating NUL into `buf`. With a null `buf` or a short
/// buffer only `*needed` (length including the NUL) is written.
unsafe fn copy_out(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> QmStatus {
    if !needed.is_null() {
        *needed = s.len() + 1;
    }
    if buf.is_null() || len < s.len() + 1 {
        // leaves the stored message alone so a size query can be followed by a read
        return QmStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
    *buf.add(s.len()) = 0;
    QmStatus::Ok
}

/// Number of class labels; valid label indices are `0..qm_label_count()`.
#[no_mangle]
pub extern "C" fn qm_label_count() -> u32 {
    ClassLabel::ALL.len() as u32
}

/// Static NUL-terminated name of label `index`, or null if out of range.
#[no_mangle]
pub extern "C" fn qm_label_name(index: u32) -> *const c_char {
    const NAMES: [&CStr; 18] = [
        c"E1", c"E2", c"H1", c"H2", c"H3", c"P1", c"P2", c"P3", c"DE1", c"DE2", c"DE3", c"DH1", c"DH2", c"DP1",
        c"DP2", c"DP3", c"DP4", c"DP5",
    ];
    NAMES.get(index as usize).map_or(ptr::null(), |n| n.as_ptr())
}

/// Builds a map from twelve coefficients
/// `a20,a11,a02,a10,a01,a00,b20,b11,b02,b10,b01,b00`.
///
/// # Safety
/// `coeffs` must point to 12 doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qm_map_new(coeffs: *const f64, out: *mut *mut QmMap) -> QmStatus {
    guard(|| {
        if coeffs.is_null() || out.is_null() {
            return fail(QmStatus::NullPointer, "null argument");
        }
        let mut c = [0.0; 12];
        c.copy_from_slice(std::slice::from_raw_parts(coeffs, 12));
        if c.iter().any(|v| !v.is_finite()) {
            return fail(QmStatus::InvalidArgument, "non-finite coefficient");
        }
        *out = Box::into_raw(Box::new(QmMap(QuadraticMap::new(c))));
        QmStatus::Ok
    })
}

/// Builds a map from a JSON map spec (keys `a20` .. `b00`).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qm_map_from_json(json: *const c_char, out: *mut *mut QmMap) -> QmStatus {
    guard(|| {
        if out.is_null() {
            return fail(QmStatus::NullPointer, "null argument");
        }
        let s = match text(json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match MapSpec::from_json(s).and_then(|spec| spec.to_map()) {
            Ok(q) => {
                *out = Box::into_raw(Box::new(QmMap(q)));
                QmStatus::Ok
            }
            Err(e) => fail(cli_status(&e), e.message),
        }
    })
}

/// Writes the twelve coefficients of `map` to `coeffs`.
///
/// # Safety
/// `map` must come from this library; `coeffs` must hold 12 doubles.
#[no_mangle]
pub unsafe extern "C" fn qm_map_coefficients(map: *const QmMap, coeffs: *mut f64) -> QmStatus {
    guard(|| {
        let (Some(m), false) = (map.as_ref(), coeffs.is_null()) else {
            return fail(QmStatus::NullPointer, "null argument");
        };
        std::slice::from_raw_parts_mut(coeffs, 12).copy_from_slice(&m.0.to_array());
        QmStatus::Ok
    })
}

/// # Safety
/// `map` must be null or come from `qm_map_new` / `qm_map_from_json`, and is
/// not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qm_map_free(map: *mut QmMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Classifies `map` up to affine equivalence.
///
/// # Safety
/// `map` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qm_classify(map: *const QmMap, out: *mut *mut QmClassification) -> QmStatus {
    guard(|| {
        let (Some(m), false) = (map.as_ref(), out.is_null()) else {
            return fail(QmStatus::NullPointer, "null argument");
        };
        match classify(&m.0) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(QmClassification(r)));
                QmStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Label index of a classification, for use with `qm_label_name`.
///
/// # Safety
/// `c` must come from `qm_classify`.
#[no_mangle]
pub unsafe extern "C" fn qm_classification_label(c: *const QmClassification, label: *mut u32) -> QmStatus {
    guard(|| {
        let (Some(c), false) = (c.as_ref(), label.is_null()) else {
            return fail(QmStatus::NullPointer, "null argument");
        };
        *label = ClassLabel::ALL.iter().position(|l| *l == c.0.label).unwrap_or(0) as u32;
        QmStatus::Ok
    })
}

/// Witness residual `|k∘Q∘h⁻¹ − N|`.
///
/// # Safety
/// `c` must come from `qm_classify`.
#[no_mangle]
pub unsafe extern "C" fn qm_classification_residual(c: *const QmClassification, residual: *mut f64) -> QmStatus {
    guard(|| {
        let (Some(c), false) = (c.as_ref(), residual.is_null()) else {
            return fail(QmStatus::NullPointer, "null argument");
        };
        *residual = c.0.residual;
        QmStatus::Ok
    })
}

/// Witness affine maps as `m11,m12,m21,m22,t1,t2` each.
///
/// # Safety
/// `c` must come from `qm_classify`; `h` and `k` must hold 6 doubles each.
#[no_mangle]
pub unsafe extern "C" fn qm_classification_witness(c: *const QmClassification, h: *mut f64, k: *mut f64) -> QmStatus {
    guard(|| {
        let (Some(c), false, false) = (c.as_ref(), h.is_null(), k.is_null()) else {
            return fail(QmStatus::NullPointer, "null argument");
        };
        std::slice::from_raw_parts_mut(h, 6).copy_from_slice(&c.0.witness.h.to_array());
        std::slice::from_raw_parts_mut(k, 6).copy_from_slice(&c.0.witness.k.to_array());
        QmStatus::Ok
    })
}

/// # Safety
/// `c` must be null or come from `qm_classify`, and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qm_classification_free(c: *mut QmClassification) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Number of preimages of `(x, y)`; `-1` when the preimage is a curve.
///
/// # Safety
/// `map` must come from this library and `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qm_preimage_count(map: *const QmMap, x: f64, y: f64, count: *mut i32) -> QmStatus {
    guard(|| {
        let (Some(m), false) = (map.as_ref(), count.is_null()) else {
            return fail(QmStatus::NullPointer, "null argument");
        };
        if !x.is_finite() || !y.is_finite() {
            return fail(QmStatus::InvalidArgument, "non-finite target");
        }
        *count = match preimage_count(&m.0, [x, y]) {
            PreimageCardinality::Finite(n) => n as i32,
            PreimageCardinality::Infinite(_) => -1,
        };
        QmStatus::Ok
    })
}

/// Full JSON report for `map`. The string is released with `qm_string_free`.
///
/// # Safety
/// `map` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qm_report_json(map: *const QmMap, seed: u64, out: *mut *mut c_char) -> QmStatus {
    guard(|| {
        let (Some(m), false) = (map.as_ref(), out.is_null()) else {
            return fail(QmStatus::NullPointer, "null argument");
        };
        let opts = Options { seed, ..Options::default() };
        match cmd_classify(&MapSpec::from_f64s(m.0.to_array()), &opts) {
            Ok(r) => {
                *out = CString::new(r.to_json()).unwrap_or_default().into_raw();
                QmStatus::Ok
            }
            Err(e) => fail(cli_status(&e), e.message),
        }
    })
}

/// # Safety
/// `s` must be null or come from `qm_report_json`.
#[no_mangle]
pub unsafe extern "C" fn qm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Copies the last error message of this thread into `buf`. `*needed`
/// receives the required size. Writes an empty string when there is none.
///
/// # Safety
/// `buf` must be null or hold `len` bytes; `needed` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qm_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> QmStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().as_ref().map(|m| m.to_string_lossy().into_owned()));
    copy_out(msg.as_deref().unwrap_or(""), buf, len, needed)
}
