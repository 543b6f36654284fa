//! C ABI for `qfe-core`.
//!
//! Conventions:
//!
//! * Every fallible function returns a [`QfeStatus`]; results go through
//!   out-pointers, which are written only on `QFE_STATUS_OK`.
//! * Handles (`QfeSpec`, `QfeStructure`) are opaque and owned by the caller,
//!   released with the matching `*_free`.
//! * Strings returned by the library are NUL-terminated UTF-8 and must be
//!   released with [`qfe_string_free`].
//! * After a failure, [`qfe_last_error_message`] describes it. The message is
//!   per thread and stays valid until the next call on that thread.
//! * Panics never cross the boundary; they surface as `QFE_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qfe::cyclotomic::cyclotomic;
use qfe::doc::{self, DocError, StructureDocument};
use qfe::expr::{format_expr, parse_rational_function, ExprError, MAX_DEGREE};
use qfe::structure::{decompose, DecomposeError};
use qfe::{SolutionSpec, StructureData};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfeStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An expression or rational literal did not parse.
    Parse = 3,
    /// A JSON document was malformed or failed validation.
    Schema = 4,
    /// The spec is not a solution (decomposition rejected it).
    NotASolution = 5,
    /// Decomposition needs at least two primes.
    TooFewPrimes = 6,
    /// Any other domain failure: non-commuting generators, zero input,
    /// arguments out of range.
    Domain = 7,
    /// The library panicked; this is a bug.
    Panic = 8,
}

/// Opaque solution spec.
pub struct QfeSpec(SolutionSpec);

/// Opaque structure data.
pub struct QfeStructure(StructureData);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(QfeStatus, String);

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        let status = match e {
            DocError::Expr { .. } | DocError::BadRational { .. } => QfeStatus::Parse,
            _ => QfeStatus::Schema,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

/// Runs `f`, converting errors and panics to a status and recording the message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QfeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            QfeStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {message}"));
            QfeStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(QfeStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(QfeStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    let c = CString::new(s).map_err(|e| Failure(QfeStatus::Domain, e.to_string()))?;
    out.write(c.into_raw());
    Ok(())
}

fn check_index(n: u64) -> Result<(), Failure> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Failure(
            QfeStatus::Domain,
            format!("index {n} outside 1..={MAX_DEGREE}"),
        ));
    }
    Ok(())
}

/// Parses a spec document into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfe_spec_from_json(json: *const c_char, out: *mut *mut QfeSpec) -> QfeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let spec = doc::read_spec(read_str(json)?)?;
        write_out(out, Box::into_raw(Box::new(QfeSpec(spec))))
    })
}

/// Releases a spec handle. Null is ignored.
///
/// # Safety
/// `spec` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qfe_spec_free(spec: *mut QfeSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Writes whether the generators satisfy the commutativity condition.
///
/// # Safety
/// `spec` must be a live handle; `holds` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfe_spec_check(spec: *const QfeSpec, holds: *mut bool) -> QfeStatus {
    guard(|| {
        let spec = handle(spec)?;
        write_out(holds, spec.0.check_commutativity().holds())
    })
}

/// Writes `f_n` as an expression string. Fails with `QFE_STATUS_DOMAIN` when
/// the generators do not commute.
///
/// # Safety
/// `spec` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfe_spec_synthesize(spec: *const QfeSpec, n: u64, out: *mut *mut c_char) -> QfeStatus {
    guard(|| {
        let spec = handle(spec)?;
        check_index(n)?;
        let f = spec
            .0
            .synthesize(n)
            .map_err(|e| Failure(QfeStatus::Domain, e.to_string()))?;
        write_string(out, format_expr(&f))
    })
}

/// Writes whether the functional equation holds at `(m, n)`.
///
/// # Safety
/// `spec` must be a live handle; `holds` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfe_spec_verify(spec: *const QfeSpec, m: u64, n: u64, holds: *mut bool) -> QfeStatus {
    guard(|| {
        let spec = handle(spec)?;
        check_index(m.checked_mul(n).unwrap_or(0))?;
        write_out(holds, spec.0.verify_fe(m, n))
    })
}

/// Decomposes a spec into a new structure handle.
///
/// # Safety
/// `spec` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfe_spec_decompose(spec: *const QfeSpec, out: *mut *mut QfeStructure) -> QfeStatus {
    guard(|| {
        let spec = handle(spec)?;
        if out.is_null() {
            return Err(null());
        }
        let sd = decompose(&spec.0).map_err(|e| match e {
            DecomposeError::TooFewPrimes(_) => Failure(QfeStatus::TooFewPrimes, e.to_string()),
            DecomposeError::NotASolution(_) => Failure(QfeStatus::NotASolution, e.to_string()),
        })?;
        write_out(out, Box::into_raw(Box::new(QfeStructure(sd))))
    })
}

/// Parses a structure document into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfe_structure_from_json(json: *const c_char, out: *mut *mut QfeStructure) -> QfeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let sd = doc::read_structure(read_str(json)?)?;
        write_out(out, Box::into_raw(Box::new(QfeStructure(sd))))
    })
}

/// Writes the structure as a JSON document.
///
/// # Safety
/// `structure` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfe_structure_to_json(structure: *const QfeStructure, out: *mut *mut c_char) -> QfeStatus {
    guard(|| {
        let sd = handle(structure)?;
        write_string(out, doc::to_json_string(&StructureDocument::from_structure(&sd.0)))
    })
}

/// Writes the closed-form `f_n` as an expression string.
///
/// # Safety
/// `structure` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfe_structure_closed_form(
    structure: *const QfeStructure,
    n: u64,
    out: *mut *mut c_char,
) -> QfeStatus {
    guard(|| {
        let sd = handle(structure)?;
        check_index(n)?;
        write_string(out, format_expr(&sd.0.closed_form(n)))
    })
}

/// Releases a structure handle. Null is ignored.
///
/// # Safety
/// `structure` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qfe_structure_free(structure: *mut QfeStructure) {
    if !structure.is_null() {
        drop(Box::from_raw(structure));
    }
}

/// Writes the cyclotomic polynomial `Phi_k`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfe_cyclotomic(k: u64, out: *mut *mut c_char) -> QfeStatus {
    guard(|| {
        check_index(k)?;
        write_string(out, cyclotomic(k).to_string())
    })
}

/// Writes the standard form `lambda q^e u/v` of an expression as JSON:
/// `{"lambda": "a/b", "e": int, "u": "<poly>", "v": "<poly>"}`.
///
/// # Safety
/// `expr` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfe_standard_form(expr: *const c_char, out: *mut *mut c_char) -> QfeStatus {
    guard(|| {
        let f = parse_rational_function(read_str(expr)?).map_err(|e| match e {
            ExprError::Parse(_) => Failure(QfeStatus::Parse, e.to_string()),
            ExprError::Eval(_) => Failure(QfeStatus::Domain, e.to_string()),
        })?;
        let sf = f
            .to_standard_form()
            .map_err(|e| Failure(QfeStatus::Domain, e.to_string()))?;
        let json = serde_json::json!({
            "lambda": sf.lambda.to_string(),
            "e": sf.e,
            "u": sf.u.to_string(),
            "v": sf.v.to_string(),
        });
        write_string(out, json.to_string())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qfe_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, empty after a success.
/// Owned by the library; valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn qfe_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qfe_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
