//! C ABI over the verification engine.
//!
//! Every entry point returns an [`NmStatus`]. Results come back through
//! opaque handles that the caller releases with the matching `_free`
//! function. The message of the last failure on the calling thread is
//! available from [`nm_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nodal_mirror::cli::{Outcome, RunConfig};
use nodal_mirror::report::Report;
use nodal_mirror::verify::{check_closed_string, Case, Cutoffs};

/// Status codes. The first four match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NmStatus {
    Pass = 0,
    Fail = 1,
    Usage = 2,
    Cutoff = 3,
    NullPointer = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NmScenario {
    Closed = 0,
    Punctured = 1,
    MultiTwist = 2,
}

/// Finite cutoffs. A `max_stage` of 0 selects the default headroom.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NmCutoffs {
    pub max_weight: u32,
    pub slack: u32,
    pub truncation: u32,
    pub stability_truncation: u32,
    pub max_stage: u32,
}

impl From<NmCutoffs> for Cutoffs {
    fn from(c: NmCutoffs) -> Self {
        Cutoffs {
            max_weight: c.max_weight,
            slack: c.slack as usize,
            truncation: c.truncation,
            stability_truncation: c.stability_truncation,
            max_stage: (c.max_stage > 0).then_some(c.max_stage as usize),
        }
    }
}

/// Opaque run configuration.
pub struct NmConfig {
    inner: RunConfig,
}

/// Opaque report with its JSON rendering.
pub struct NmReport {
    report: Report,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> NmStatus) -> NmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            NmStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, NmStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(NmStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        NmStatus::Usage
    })
}

unsafe fn emit(outcome: Outcome, out: *mut *mut NmReport) -> NmStatus {
    match outcome {
        Outcome::Report(report) => {
            let json = CString::new(report.to_json()).unwrap_or_default();
            let status = if report.passed() { NmStatus::Pass } else { NmStatus::Fail };
            *out = Box::into_raw(Box::new(NmReport { report, json }));
            status
        }
        Outcome::Usage(msg) => {
            set_error(&msg);
            NmStatus::Usage
        }
        Outcome::Cutoff(e) => {
            set_error(&e.to_string());
            NmStatus::Cutoff
        }
        Outcome::Failed(e) => {
            set_error(&e.to_string());
            NmStatus::Fail
        }
    }
}

/// Default cutoffs.
#[no_mangle]
pub extern "C" fn nm_cutoffs_default() -> NmCutoffs {
    let c = Cutoffs::default();
    NmCutoffs {
        max_weight: c.max_weight,
        slack: c.slack as u32,
        truncation: c.truncation,
        stability_truncation: c.stability_truncation,
        max_stage: 0,
    }
}

/// Message of the last failure on this thread. Valid until the next call
/// on the same thread; never null.
#[no_mangle]
pub extern "C" fn nm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a JSON run configuration.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nm_config_parse(json: *const c_char, out: *mut *mut NmConfig) -> NmStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return NmStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let src = match read_str(json) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match RunConfig::parse_json(src) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(NmConfig { inner }));
                NmStatus::Pass
            }
            Err(msg) => {
                set_error(&msg);
                NmStatus::Usage
            }
        }
    })
}

/// Runs a configuration. On `Pass` or `Fail` with a report, `*out` holds it.
///
/// # Safety
/// `cfg` must come from [`nm_config_parse`] and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn nm_config_run(cfg: *const NmConfig, out: *mut *mut NmReport) -> NmStatus {
    guard(|| {
        if cfg.is_null() || out.is_null() {
            set_error("null argument");
            return NmStatus::NullPointer;
        }
        *out = ptr::null_mut();
        emit((*cfg).inner.run(), out)
    })
}

/// # Safety
/// `cfg` must come from [`nm_config_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn nm_config_free(cfg: *mut NmConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Runs the closed-string comparison for one scenario. `count` is the
/// number of punctures or twist circles and is ignored for `Closed`.
///
/// # Safety
/// `cutoffs` may be null for the defaults; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn nm_verify(
    scenario: NmScenario,
    genus: u32,
    count: u32,
    cutoffs: *const NmCutoffs,
    out: *mut *mut NmReport,
) -> NmStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return NmStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let c: Cutoffs = if cutoffs.is_null() { Cutoffs::default() } else { (*cutoffs).into() };
        let (genus, count) = (genus as usize, count as usize);
        let case = match scenario {
            NmScenario::Closed => Case::Closed { genus },
            NmScenario::Punctured => Case::Punctured { genus, k: count },
            NmScenario::MultiTwist => Case::MultiTwist { genus, circles: count },
        };
        let outcome = match check_closed_string(case, &c) {
            Ok(r) => Outcome::Report(r),
            Err(e) if e.is_cutoff() => Outcome::Cutoff(e),
            Err(e) => Outcome::Usage(e.to_string()),
        };
        emit(outcome, out)
    })
}

/// # Safety
/// `r` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn nm_report_passed(r: *const NmReport) -> bool {
    !r.is_null() && (*r).report.passed()
}

/// # Safety
/// `r` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn nm_report_check_count(r: *const NmReport) -> usize {
    if r.is_null() {
        0
    } else {
        (*r).report.checks.len()
    }
}

/// JSON rendering, owned by the report.
///
/// # Safety
/// `r` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn nm_report_json(r: *const NmReport) -> *const c_char {
    if r.is_null() {
        ptr::null()
    } else {
        (*r).json.as_ptr()
    }
}

/// # Safety
/// `r` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn nm_report_free(r: *mut NmReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
