//! C interface to the `linsym` classifier.
//!
//! Systems and reports are opaque handles owned by the caller and released
//! with the matching `*_free` function. Every fallible call returns a
//! [`LinsymStatus`]; the message of the most recent failure on the calling
//! thread is available from [`linsym_last_error_message`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, size_t};
use linsym::classify::Label;
use linsym::reduction::commute_test;
use linsym::report::{parse_system_str, run_report, InputSystem, Report, RunConfig};
use linsym::Error;

/// Result of a fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinsymStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    MalformedInput = 3,
    Discriminant = 4,
    Algebra = 5,
    Internal = 6,
    Numeric = 7,
    Panic = 8,
}

impl From<&Error> for LinsymStatus {
    fn from(e: &Error) -> Self {
        match e.exit_code() {
            2 => LinsymStatus::MalformedInput,
            3 => LinsymStatus::Discriminant,
            4 => LinsymStatus::Algebra,
            6 => LinsymStatus::Numeric,
            _ => LinsymStatus::Internal,
        }
    }
}

/// Options for [`linsym_classify`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct LinsymConfig {
    /// Run the numeric flow check in addition to the exact one.
    pub verify: bool,
    /// Rescale x so that lambda = 1 in the J1 branch.
    pub normalize_lambda: bool,
    /// Pass threshold for numeric residuals.
    pub tol: f64,
    /// Seed for verification initial data.
    pub seed: u64,
}

/// A parsed system `y'' = A y' + B y + f`.
pub struct LinsymSystem {
    inner: InputSystem,
}

/// A classification report.
pub struct LinsymReport {
    inner: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guarded(f: impl FnOnce() -> LinsymStatus) -> LinsymStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("panic inside linsym");
            LinsymStatus::Panic
        }
    }
}

fn fail(e: Error) -> LinsymStatus {
    let status = LinsymStatus::from(&e);
    set_error(e.to_string());
    status
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn linsym_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Defaults: no numeric verification, tol = 1e-6, seed = 0.
#[no_mangle]
pub extern "C" fn linsym_config_default() -> LinsymConfig {
    let d = RunConfig::default();
    LinsymConfig { verify: d.verify, normalize_lambda: d.normalize_lambda, tol: d.tol, seed: d.seed }
}

/// Parses one system from JSON (`{"A": ..., "B": ..., "f": ..., "d": ...}`).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn linsym_system_from_json(json: *const c_char, out: *mut *mut LinsymSystem) -> LinsymStatus {
    guarded(|| {
        if json.is_null() || out.is_null() {
            set_error("null pointer argument");
            return LinsymStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            set_error("input is not valid UTF-8");
            return LinsymStatus::InvalidUtf8;
        };
        match parse_system_str(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(LinsymSystem { inner }));
                LinsymStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `system` must come from [`linsym_system_from_json`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn linsym_system_free(system: *mut LinsymSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Writes whether `A` and `B` commute to `out`.
///
/// # Safety
/// `system` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn linsym_commute_test(system: *const LinsymSystem, out: *mut bool) -> LinsymStatus {
    guarded(|| {
        let (Some(sys), false) = (system.as_ref(), out.is_null()) else {
            set_error("null pointer argument");
            return LinsymStatus::NullPointer;
        };
        *out = commute_test(&sys.inner.spec.a, &sys.inner.spec.b);
        LinsymStatus::Ok
    })
}

/// Runs the full classification. `config` may be NULL for defaults.
///
/// # Safety
/// `system` and `out` must be valid pointers; `config` valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn linsym_classify(
    system: *const LinsymSystem,
    config: *const LinsymConfig,
    out: *mut *mut LinsymReport,
) -> LinsymStatus {
    guarded(|| {
        let Some(sys) = system.as_ref() else {
            set_error("null system");
            return LinsymStatus::NullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return LinsymStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let c = config.as_ref().copied().unwrap_or_else(|| linsym_config_default());
        let cfg = RunConfig {
            verify: c.verify,
            normalize_lambda: c.normalize_lambda,
            tol: c.tol,
            seed: c.seed,
            ..Default::default()
        };
        match run_report(&sys.inner, &cfg) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(LinsymReport { inner }));
                LinsymStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `report` must come from [`linsym_classify`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn linsym_report_free(report: *mut LinsymReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Class label such as `"J1_ONE_EXTRA"`; a static string, NULL for a NULL
/// report.
///
/// # Safety
/// `report` must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn linsym_report_label(report: *const LinsymReport) -> *const c_char {
    let Some(r) = report.as_ref() else {
        return ptr::null();
    };
    let s: &'static CStr = match r.inner.label {
        Label::CommutingReducible => c"COMMUTING_REDUCIBLE",
        Label::J1NoExtension => c"J1_NO_EXTENSION",
        Label::J1OneExtra => c"J1_ONE_EXTRA",
        Label::J1TwoExtra => c"J1_TWO_EXTRA",
        Label::J2NoExtension => c"J2_NO_EXTENSION",
        Label::J3NoExtension => c"J3_NO_EXTENSION",
    };
    s.as_ptr()
}

/// Number of admitted generators listed, including `d_x` and
/// `y d_y + z d_z`; 0 for a NULL report.
///
/// # Safety
/// `report` must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn linsym_report_generator_count(report: *const LinsymReport) -> size_t {
    report.as_ref().map_or(0, |r| r.inner.generators.len())
}

/// Whether every requested verification passed.
///
/// # Safety
/// `report` must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn linsym_report_passed(report: *const LinsymReport) -> bool {
    report.as_ref().is_some_and(|r| r.inner.passed)
}

/// The report as a JSON string, to be released with [`linsym_string_free`].
///
/// # Safety
/// `report` must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn linsym_report_to_json(report: *const LinsymReport) -> *mut c_char {
    let Some(r) = report.as_ref() else {
        set_error("null report");
        return ptr::null_mut();
    };
    CString::new(r.inner.to_json()).map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn linsym_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
