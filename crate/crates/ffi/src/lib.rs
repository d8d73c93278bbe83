//! C ABI over the `eladapt` library.
//!
//! Knowledge bases cross the boundary as opaque `EladaptKb` handles.
//! Every fallible call returns an `EladaptStatus`; on failure the message
//! is available from `eladapt_last_error_message` on the same thread.
//! Strings returned through out-parameters are owned by the caller and
//! must be released with `eladapt_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use eladapt::adaptation::{adapt_report, default_k, AdaptationError, AdaptationSetting};
use eladapt::cli::adapt_json;
use eladapt::reasoner::Reasoner;
use eladapt::revision::BmwOptions;
use eladapt::syntax::{parse_assertion, parse_kb, print_kb, KnowledgeBase};

/// Result codes of the C API.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EladaptStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    TargetInconsistent = 4,
    SolutionInconsistent = 5,
    InvalidInput = 6,
    Panic = 7,
}

/// A parsed knowledge base.
pub struct EladaptKb {
    kb: KnowledgeBase,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: EladaptStatus, message: impl Into<String>) -> EladaptStatus {
    let text = CString::new(message.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
    status
}

fn guarded(body: impl FnOnce() -> EladaptStatus) -> EladaptStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|_| fail(EladaptStatus::Panic, "internal panic"))
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, EladaptStatus> {
    if p.is_null() {
        return Err(fail(EladaptStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(EladaptStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn handle<'a>(p: *const EladaptKb) -> Result<&'a KnowledgeBase, EladaptStatus> {
    p.as_ref().map(|h| &h.kb).ok_or_else(|| fail(EladaptStatus::NullArgument, "null knowledge base"))
}

fn give_string(s: String, out: *mut *mut c_char) -> EladaptStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            EladaptStatus::Ok
        }
        Err(_) => fail(EladaptStatus::InvalidInput, "output contains a NUL byte"),
    }
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Parses `text` in the knowledge-base text format into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eladapt_kb_parse(text: *const c_char, out: *mut *mut EladaptKb) -> EladaptStatus {
    guarded(|| {
        if out.is_null() {
            return fail(EladaptStatus::NullArgument, "null output pointer");
        }
        let src = try_ffi!(read_str(text));
        match parse_kb(src) {
            Ok(kb) => {
                *out = Box::into_raw(Box::new(EladaptKb { kb }));
                EladaptStatus::Ok
            }
            Err(e) => fail(EladaptStatus::ParseError, e.to_string()),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `kb` must come from `eladapt_kb_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn eladapt_kb_free(kb: *mut EladaptKb) {
    if !kb.is_null() {
        drop(Box::from_raw(kb));
    }
}

/// Prints a knowledge base in canonical text form.
///
/// # Safety
/// `kb` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eladapt_kb_print(kb: *const EladaptKb, out: *mut *mut c_char) -> EladaptStatus {
    guarded(|| {
        let kb = try_ffi!(handle(kb));
        if out.is_null() {
            return fail(EladaptStatus::NullArgument, "null output pointer");
        }
        give_string(print_kb(kb), out)
    })
}

/// Writes whether the knowledge base is consistent to `out`.
///
/// # Safety
/// `kb` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eladapt_is_consistent(kb: *const EladaptKb, out: *mut bool) -> EladaptStatus {
    guarded(|| {
        let kb = try_ffi!(handle(kb));
        if out.is_null() {
            return fail(EladaptStatus::NullArgument, "null output pointer");
        }
        *out = Reasoner::new(&kb.tbox).is_consistent(&kb.abox);
        EladaptStatus::Ok
    })
}

/// Writes whether the knowledge base entails `assertion`, e.g. `"C(a)"`.
///
/// # Safety
/// `kb` must be a live handle, `assertion` a NUL-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eladapt_entails(
    kb: *const EladaptKb,
    assertion: *const c_char,
    out: *mut bool,
) -> EladaptStatus {
    guarded(|| {
        let kb = try_ffi!(handle(kb));
        let q = try_ffi!(read_str(assertion));
        if out.is_null() {
            return fail(EladaptStatus::NullArgument, "null output pointer");
        }
        match parse_assertion(q) {
            Ok(a) => {
                *out = Reasoner::new(&kb.tbox).entails(&kb.abox, &a);
                EladaptStatus::Ok
            }
            Err(e) => fail(EladaptStatus::ParseError, e.to_string()),
        }
    })
}

/// Adapts `solution` to `target` under the TBox of `tbox` and writes the
/// ranked outcomes as JSON. A negative `k` selects the default bound.
///
/// # Safety
/// The three handles must be live and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eladapt_adapt(
    tbox: *const EladaptKb,
    solution: *const EladaptKb,
    target: *const EladaptKb,
    k: i64,
    out_json: *mut *mut c_char,
) -> EladaptStatus {
    guarded(|| {
        let (t, a, n) = (try_ffi!(handle(tbox)), try_ffi!(handle(solution)), try_ffi!(handle(target)));
        if out_json.is_null() {
            return fail(EladaptStatus::NullArgument, "null output pointer");
        }
        if !t.abox.is_empty() || !a.tbox.is_empty() || !n.tbox.is_empty() {
            return fail(EladaptStatus::InvalidInput, "expected a TBox-only and two ABox-only knowledge bases");
        }
        let setting = AdaptationSetting::new(t.tbox.clone(), a.abox.clone(), n.abox.clone());
        let k = usize::try_from(k).unwrap_or_else(|_| default_k(&setting));
        match adapt_report(&setting, k, BmwOptions::default()) {
            Ok(report) => give_string(adapt_json(&report, usize::MAX).to_string(), out_json),
            Err(e @ AdaptationError::TargetInconsistent) => fail(EladaptStatus::TargetInconsistent, e.to_string()),
            Err(e @ AdaptationError::SolutionInconsistent) => fail(EladaptStatus::SolutionInconsistent, e.to_string()),
            Err(e) => fail(EladaptStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn eladapt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn eladapt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
