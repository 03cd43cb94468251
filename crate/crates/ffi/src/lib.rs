//! C ABI over the JSON front-end.
//!
//! A context holds the options; each call takes a command name and a JSON payload and hands back
//! a JSON report that the caller releases with [`at_string_free`]. Return values are the CLI exit
//! codes (0, 1, 2) or a negative [`AtStatus`] for misuse of the interface.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use arthurtype::cli::{run_json, Options};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtStatus {
    /// Definite answer.
    Ok = 0,
    /// The payload or options were rejected; the report says why.
    InputError = 1,
    /// The answer depends on an oracle or an uncertified rule.
    Partial = 2,
    NullPointer = -1,
    InvalidUtf8 = -2,
    Panic = -3,
    BadOptions = -4,
}

/// Opaque handle.
pub struct AtContext {
    options: String,
    last_error: Option<CString>,
}

impl AtContext {
    fn fail(&mut self, status: AtStatus, msg: &str) -> i32 {
        self.last_error = CString::new(msg.replace('\0', " ")).ok();
        status as i32
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, AtStatus> {
    if p.is_null() {
        return Err(AtStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| AtStatus::InvalidUtf8)
}

/// A new context with default options. Free it with [`at_context_free`].
#[no_mangle]
pub extern "C" fn at_context_new() -> *mut AtContext {
    Box::into_raw(Box::new(AtContext { options: String::new(), last_error: None }))
}

/// # Safety
/// `ctx` must come from [`at_context_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn at_context_free(ctx: *mut AtContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Options as a JSON object: `group`, `dim_bound`, `oracle`, `format`, `seed`.
///
/// # Safety
/// `ctx` must be a live context and `options` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn at_context_set_options(ctx: *mut AtContext, options: *const c_char) -> i32 {
    let Some(ctx) = ctx.as_mut() else { return AtStatus::NullPointer as i32 };
    let s = match text(options) {
        Ok(s) => s,
        Err(e) => return ctx.fail(e, "options must be a UTF-8 string"),
    };
    match arthurtype::cli::dto::parse::<Options>(s) {
        Ok(_) => {
            ctx.options = s.to_string();
            ctx.last_error = None;
            AtStatus::Ok as i32
        }
        Err(e) => ctx.fail(AtStatus::BadOptions, &e),
    }
}

/// Runs `command` on `payload`; the report is stored in `*out` even when the input is rejected.
///
/// # Safety
/// `ctx` must be a live context, `command` and `payload` NUL-terminated strings and `out` a valid
/// pointer. The string written to `*out` must be released with [`at_string_free`].
#[no_mangle]
pub unsafe extern "C" fn at_run(
    ctx: *mut AtContext,
    command: *const c_char,
    payload: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    let Some(ctx) = ctx.as_mut() else { return AtStatus::NullPointer as i32 };
    if out.is_null() {
        return ctx.fail(AtStatus::NullPointer, "out is null");
    }
    *out = ptr::null_mut();
    let (cmd, body) = match (text(command), text(payload)) {
        (Ok(c), Ok(p)) => (c, p),
        (Err(e), _) | (_, Err(e)) => return ctx.fail(e, "command and payload must be UTF-8 strings"),
    };
    let options = ctx.options.clone();
    let report = match catch_unwind(AssertUnwindSafe(|| run_json(cmd, body, &options))) {
        Ok(r) => r,
        Err(_) => return ctx.fail(AtStatus::Panic, "internal error"),
    };
    if report.code == AtStatus::InputError as i32 {
        ctx.last_error = CString::new(report.output.clone()).ok();
    } else {
        ctx.last_error = None;
    }
    match CString::new(report.output) {
        Ok(s) => {
            *out = s.into_raw();
            report.code
        }
        Err(_) => ctx.fail(AtStatus::Panic, "report contains NUL"),
    }
}

/// Message of the last failed call on `ctx`, or null. Valid until the next call on `ctx`.
///
/// # Safety
/// `ctx` must be a live context.
#[no_mangle]
pub unsafe extern "C" fn at_last_error(ctx: *const AtContext) -> *const c_char {
    match ctx.as_ref().and_then(|c| c.last_error.as_ref()) {
        Some(s) => s.as_ptr(),
        None => ptr::null(),
    }
}

/// # Safety
/// `s` must come from [`at_run`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn at_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn at_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
