//! C ABI over the proof toolkit: opaque handles, status codes, and a
//! thread-local last-error message. The generated header lives in
//! `include/bunched.h`.
//!
//! Conventions: every function taking pointers tolerates null and
//! reports `InvalidArgument`; strings returned as `char*` are owned by
//! the caller and released with [`bunched_string_free`]; handles are
//! released with their `_free` functions.

use bunched::calculus::{
    check_derivation, derivation_from_json, derivation_to_json, CalculusConfig, Derivation,
};
use bunched::search::prove_cf;
use bunched::syntax::{parse_formula, parse_sequent, Sequent};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fmt::Display;

/// Result of a C API call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum BunchedStatus {
    /// The call succeeded.
    Ok = 0,
    /// A search finished without finding a derivation.
    NotFound = 1,
    /// The kernel rejected a derivation.
    CheckFailed = 2,
    /// Text input failed to parse.
    ParseError = 3,
    /// A null pointer or otherwise unusable argument.
    InvalidArgument = 4,
}

/// Calculus configuration handle.
pub struct BunchedConfig {
    inner: CalculusConfig,
}

/// Sequent handle.
pub struct BunchedSequent {
    inner: Sequent,
}

/// Derivation handle.
pub struct BunchedDerivation {
    inner: Derivation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(err: impl Display) {
    let msg = CString::new(err.to_string().replace('\0', "?"))
        .unwrap_or_else(|_| CString::new("invalid error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

fn give_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

/// The message of the most recent failure on this thread, or null. The
/// returned string is owned by the caller.
#[no_mangle]
pub extern "C" fn bunched_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn bunched_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn bunched_version() -> *mut c_char {
    give_string(env!("CARGO_PKG_VERSION").to_string())
}

/// A fresh configuration: plain BI by default.
#[no_mangle]
pub extern "C" fn bunched_config_new(s4: bool, allow_cut: bool) -> *mut BunchedConfig {
    Box::into_raw(Box::new(BunchedConfig {
        inner: CalculusConfig {
            s4_enabled: s4,
            cut_allowed: allow_cut,
            ..CalculusConfig::default()
        },
    }))
}

/// Installs simple structural rules from their text form, one
/// `T1 & ... => T` per line.
///
/// # Safety
/// `config` must be a live handle from [`bunched_config_new`]; `rules`
/// must be a valid NUL-terminated string or null.
#[no_mangle]
pub unsafe extern "C" fn bunched_config_add_rules(
    config: *mut BunchedConfig,
    rules: *const c_char,
) -> BunchedStatus {
    clear_error();
    let Some(config) = config.as_mut() else {
        set_error("null config");
        return BunchedStatus::InvalidArgument;
    };
    let Some(text) = read_str(rules) else {
        set_error("rules text is null or not UTF-8");
        return BunchedStatus::InvalidArgument;
    };
    match bunched::bterm::RuleSet::parse(text) {
        Ok((ruleset, _warnings)) => {
            let mut rules = config.inner.struct_rules.rules.clone();
            rules.extend(ruleset.rules);
            config.inner.struct_rules = bunched::bterm::RuleSet::new(rules);
            BunchedStatus::Ok
        }
        Err(e) => {
            set_error(e);
            BunchedStatus::ParseError
        }
    }
}

/// # Safety
/// `config` must come from [`bunched_config_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn bunched_config_free(config: *mut BunchedConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Parses `text` as a sequent (`bunch |- formula`).
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bunched_sequent_parse(
    text: *const c_char,
    out: *mut *mut BunchedSequent,
) -> BunchedStatus {
    clear_error();
    if out.is_null() {
        set_error("null output pointer");
        return BunchedStatus::InvalidArgument;
    }
    let Some(text) = read_str(text) else {
        set_error("sequent text is null or not UTF-8");
        return BunchedStatus::InvalidArgument;
    };
    match parse_sequent(text) {
        Ok(sequent) => {
            *out = Box::into_raw(Box::new(BunchedSequent { inner: sequent }));
            BunchedStatus::Ok
        }
        Err(e) => {
            set_error(e);
            BunchedStatus::ParseError
        }
    }
}

/// Canonical text of a sequent; caller frees.
///
/// # Safety
/// `sequent` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bunched_sequent_to_string(sequent: *const BunchedSequent) -> *mut c_char {
    match sequent.as_ref() {
        Some(s) => give_string(s.inner.to_string()),
        None => std::ptr::null_mut(),
    }
}

/// # Safety
/// `sequent` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn bunched_sequent_free(sequent: *mut BunchedSequent) {
    if !sequent.is_null() {
        drop(Box::from_raw(sequent));
    }
}

/// Searches for a cut-free derivation of height at most `depth`.
/// `NotFound` is inconclusive, not a refutation.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bunched_prove(
    sequent: *const BunchedSequent,
    config: *const BunchedConfig,
    depth: usize,
    out: *mut *mut BunchedDerivation,
) -> BunchedStatus {
    clear_error();
    let (Some(sequent), Some(config)) = (sequent.as_ref(), config.as_ref()) else {
        set_error("null sequent or config");
        return BunchedStatus::InvalidArgument;
    };
    if out.is_null() {
        set_error("null output pointer");
        return BunchedStatus::InvalidArgument;
    }
    match prove_cf(&sequent.inner, &config.inner, depth) {
        Some(d) => {
            *out = Box::into_raw(Box::new(BunchedDerivation { inner: d }));
            BunchedStatus::Ok
        }
        None => {
            set_error(format!(
                "no cut-free derivation of `{}` within depth {depth}",
                sequent.inner
            ));
            BunchedStatus::NotFound
        }
    }
}

/// A checked cut-free derivation of `formula |- formula`.
///
/// # Safety
/// `formula` must be a valid NUL-terminated string; `config` live;
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bunched_identity_expansion(
    formula: *const c_char,
    config: *const BunchedConfig,
    out: *mut *mut BunchedDerivation,
) -> BunchedStatus {
    clear_error();
    let Some(config) = config.as_ref() else {
        set_error("null config");
        return BunchedStatus::InvalidArgument;
    };
    let Some(text) = read_str(formula) else {
        set_error("formula text is null or not UTF-8");
        return BunchedStatus::InvalidArgument;
    };
    if out.is_null() {
        set_error("null output pointer");
        return BunchedStatus::InvalidArgument;
    }
    let phi = match parse_formula(text) {
        Ok(f) => f,
        Err(e) => {
            set_error(e);
            return BunchedStatus::ParseError;
        }
    };
    match bunched::admissible::identity_expansion(&phi, &config.inner) {
        Ok(d) => {
            *out = Box::into_raw(Box::new(BunchedDerivation { inner: d }));
            BunchedStatus::Ok
        }
        Err(e) => {
            set_error(e);
            BunchedStatus::InvalidArgument
        }
    }
}

/// Loads a derivation from its JSON document form.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bunched_derivation_parse_json(
    json: *const c_char,
    out: *mut *mut BunchedDerivation,
) -> BunchedStatus {
    clear_error();
    let Some(text) = read_str(json) else {
        set_error("derivation JSON is null or not UTF-8");
        return BunchedStatus::InvalidArgument;
    };
    if out.is_null() {
        set_error("null output pointer");
        return BunchedStatus::InvalidArgument;
    }
    match derivation_from_json(text) {
        Ok(d) => {
            *out = Box::into_raw(Box::new(BunchedDerivation { inner: d }));
            BunchedStatus::Ok
        }
        Err(e) => {
            set_error(e);
            BunchedStatus::ParseError
        }
    }
}

/// JSON document form of a derivation; caller frees.
///
/// # Safety
/// `derivation` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bunched_derivation_to_json(
    derivation: *const BunchedDerivation,
) -> *mut c_char {
    match derivation.as_ref() {
        Some(d) => give_string(derivation_to_json(&d.inner)),
        None => std::ptr::null_mut(),
    }
}

/// Runs the kernel. `Ok` means accepted; `CheckFailed` carries the
/// first failure in the last-error message.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn bunched_derivation_check(
    derivation: *const BunchedDerivation,
    config: *const BunchedConfig,
) -> BunchedStatus {
    clear_error();
    let (Some(d), Some(config)) = (derivation.as_ref(), config.as_ref()) else {
        set_error("null derivation or config");
        return BunchedStatus::InvalidArgument;
    };
    match check_derivation(&d.inner, &config.inner) {
        Ok(()) => BunchedStatus::Ok,
        Err(e) => {
            set_error(e);
            BunchedStatus::CheckFailed
        }
    }
}

/// # Safety
/// `derivation` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bunched_derivation_height(derivation: *const BunchedDerivation) -> usize {
    derivation.as_ref().map_or(0, |d| d.inner.height())
}

/// # Safety
/// `derivation` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bunched_derivation_uses_cut(derivation: *const BunchedDerivation) -> bool {
    derivation.as_ref().is_some_and(|d| d.inner.uses_cut())
}

/// The conclusion sequent as a fresh handle.
///
/// # Safety
/// `derivation` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bunched_derivation_conclusion(
    derivation: *const BunchedDerivation,
    out: *mut *mut BunchedSequent,
) -> BunchedStatus {
    clear_error();
    let Some(d) = derivation.as_ref() else {
        set_error("null derivation");
        return BunchedStatus::InvalidArgument;
    };
    if out.is_null() {
        set_error("null output pointer");
        return BunchedStatus::InvalidArgument;
    }
    *out = Box::into_raw(Box::new(BunchedSequent {
        inner: d.inner.conclusion.clone(),
    }));
    BunchedStatus::Ok
}

/// # Safety
/// `derivation` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn bunched_derivation_free(derivation: *mut BunchedDerivation) {
    if !derivation.is_null() {
        drop(Box::from_raw(derivation));
    }
}
