//! C ABI for `ggfront`.
//!
//! A run is an opaque [`GgfRun`] handle built from config text, executed,
//! queried and freed. Every function returns a [`GgfStatus`]; on failure the
//! message is kept per thread and read with [`ggf_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ggfront::analysis::{exact_front, FrontLabel};
use ggfront::config::{parse_config, RunConfig};
use ggfront::experiments::{run, ExperimentResult};
use ggfront::Error;

/// Status codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GgfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Bad configuration or parameters.
    Validation = 3,
    /// The solver failed (zero pivot, non-finite state, CFL guard).
    Numerical = 4,
    Io = 5,
    /// The handle has no result yet; call `ggf_run_execute` first.
    NotRun = 6,
    /// The requested quantity was not computed for this run.
    Unavailable = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GgfFrontLabel {
    Sharp = 0,
    Smooth = 1,
    Indeterminate = 2,
}

impl From<FrontLabel> for GgfFrontLabel {
    fn from(l: FrontLabel) -> Self {
        match l {
            FrontLabel::Sharp => GgfFrontLabel::Sharp,
            FrontLabel::Smooth => GgfFrontLabel::Smooth,
            FrontLabel::Indeterminate => GgfFrontLabel::Indeterminate,
        }
    }
}

/// Opaque run handle.
pub struct GgfRun {
    config: RunConfig,
    result: Option<ExperimentResult>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn status_of(e: &Error) -> GgfStatus {
    if e.is_numerical() {
        GgfStatus::Numerical
    } else if matches!(e.root(), Error::Io { .. }) {
        GgfStatus::Io
    } else {
        GgfStatus::Validation
    }
}

fn fail(status: GgfStatus, message: &str) -> GgfStatus {
    set_error(message);
    status
}

/// Runs `f`, turning panics into [`GgfStatus::Panic`].
fn guard(f: impl FnOnce() -> GgfStatus) -> GgfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            fail(GgfStatus::Panic, &format!("panic: {msg}"))
        }
    }
}

fn result_of(handle: *const GgfRun) -> Result<&'static ExperimentResult, GgfStatus> {
    // SAFETY: callers pass a handle from `ggf_run_new` that is still live.
    let run = unsafe { handle.as_ref() }.ok_or_else(|| fail(GgfStatus::NullPointer, "null handle"))?;
    run.result
        .as_ref()
        .ok_or_else(|| fail(GgfStatus::NotRun, "run has not been executed"))
}

/// Message of the last failure on this thread; empty when none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ggf_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ggf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses `config` (`key = value` lines) into a new handle stored in `*out`.
///
/// # Safety
/// `config` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ggf_run_new(config: *const c_char, out: *mut *mut GgfRun) -> GgfStatus {
    guard(|| {
        if config.is_null() || out.is_null() {
            return fail(GgfStatus::NullPointer, "null argument");
        }
        // SAFETY: checked non-null; the caller guarantees NUL termination.
        let text = match unsafe { CStr::from_ptr(config) }.to_str() {
            Ok(t) => t,
            Err(_) => return fail(GgfStatus::InvalidUtf8, "config is not UTF-8"),
        };
        match parse_config(text) {
            Ok(config) => {
                let handle = Box::new(GgfRun { config, result: None });
                // SAFETY: checked non-null.
                unsafe { *out = Box::into_raw(handle) };
                GgfStatus::Ok
            }
            Err(e) => {
                // SAFETY: checked non-null.
                unsafe { *out = ptr::null_mut() };
                fail(status_of(&e), &format!("{}: {e}", e.kind()))
            }
        }
    })
}

/// Runs the configured experiment, replacing any previous result.
///
/// # Safety
/// `handle` must come from [`ggf_run_new`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn ggf_run_execute(handle: *mut GgfRun) -> GgfStatus {
    guard(|| {
        // SAFETY: the caller guarantees a live handle or null.
        let Some(h) = (unsafe { handle.as_mut() }) else {
            return fail(GgfStatus::NullPointer, "null handle");
        };
        h.result = None;
        match run(&h.config.spec) {
            Ok(r) => {
                h.result = Some(r);
                GgfStatus::Ok
            }
            Err(e) => fail(status_of(&e), &format!("{}: {e}", e.kind())),
        }
    })
}

/// Asymptotic front speed of the executed run.
///
/// # Safety
/// `handle` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ggf_run_speed(handle: *const GgfRun, out: *mut f64) -> GgfStatus {
    guard(|| {
        if out.is_null() {
            return fail(GgfStatus::NullPointer, "null output");
        }
        let r = match result_of(handle) {
            Ok(r) => r,
            Err(s) => return s,
        };
        match r.asymptotic_speed() {
            Some(s) => {
                // SAFETY: checked non-null.
                unsafe { *out = s };
                GgfStatus::Ok
            }
            None => fail(GgfStatus::Unavailable, "speed was not computed"),
        }
    })
}

/// Number of grid cells of the executed run.
///
/// # Safety
/// `handle` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ggf_run_n_cells(handle: *const GgfRun, out: *mut usize) -> GgfStatus {
    guard(|| {
        if out.is_null() {
            return fail(GgfStatus::NullPointer, "null output");
        }
        match result_of(handle) {
            Ok(r) => {
                // SAFETY: checked non-null.
                unsafe { *out = r.grid.n_cells() };
                GgfStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Copies the final tumour density into `buf`, which must hold at least
/// `n_cells` values.
///
/// # Safety
/// `handle` must be live; `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ggf_run_copy_v(handle: *const GgfRun, buf: *mut f64, len: usize) -> GgfStatus {
    guard(|| {
        if buf.is_null() {
            return fail(GgfStatus::NullPointer, "null buffer");
        }
        let r = match result_of(handle) {
            Ok(r) => r,
            Err(s) => return s,
        };
        let v = &r.final_state.v;
        if len < v.len() {
            return fail(
                GgfStatus::BufferTooSmall,
                &format!("buffer holds {len} values, {} needed", v.len()),
            );
        }
        // SAFETY: `buf` holds at least `v.len()` doubles and cannot alias `v`.
        unsafe { ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len()) };
        GgfStatus::Ok
    })
}

/// Front shape label of the executed run.
///
/// # Safety
/// `handle` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ggf_run_shape_label(handle: *const GgfRun, out: *mut GgfFrontLabel) -> GgfStatus {
    guard(|| {
        if out.is_null() {
            return fail(GgfStatus::NullPointer, "null output");
        }
        let r = match result_of(handle) {
            Ok(r) => r,
            Err(s) => return s,
        };
        match &r.shape {
            Some(shape) => {
                // SAFETY: checked non-null.
                unsafe { *out = shape.label.into() };
                GgfStatus::Ok
            }
            None => fail(GgfStatus::Unavailable, "shape was not classified"),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `handle` must come from [`ggf_run_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ggf_run_free(handle: *mut GgfRun) {
    if !handle.is_null() {
        // SAFETY: the handle was produced by `Box::into_raw`.
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Exact sharp front of the one-equation model at `(x, t)` for `d > 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ggf_exact_front(x: f64, t: f64, d: f64, out: *mut f64) -> GgfStatus {
    guard(|| {
        if out.is_null() {
            return fail(GgfStatus::NullPointer, "null output");
        }
        match exact_front(x, t, d) {
            Ok(v) => {
                // SAFETY: checked non-null.
                unsafe { *out = v };
                GgfStatus::Ok
            }
            Err(e) => fail(status_of(&e), &format!("{}: {e}", e.kind())),
        }
    })
}
