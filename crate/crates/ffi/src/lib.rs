//! C interface for the solver core.
//!
//! Conventions:
//!
//! * equations are opaque handles created by [`exposk_parse`] or
//!   [`exposk_family`] and released with [`exposk_equation_free`];
//! * every fallible call returns an [`ExposkStatus`]; anything but OK
//!   leaves a message retrievable through [`exposk_last_error`];
//! * strings returned through out-parameters are NUL-terminated, owned by
//!   the caller, and must be released with [`exposk_string_free`];
//! * JSON out-parameters may be NULL when the caller only wants the
//!   scalar answer.
//!
//! The per-thread error message means the library is safe to use from
//! several threads as long as each handle stays on one thread at a time.

use exposk_core::congruence::{has_solution_mod, SolveError};
use exposk_core::equation::{family_equation, Equation, FamilyPattern, SignPattern};
use exposk_core::lemmas::classify;
use exposk_core::parser::{format_equation, parse_equation};
use exposk_core::search::{brute_force_solutions, SearchBound};
use exposk_core::witness::{
    search_modulus, WitnessError, WitnessOutcome, WitnessSearchConfig,
    DEFAULT_MAX_WITNESS_MODULUS, DEFAULT_PRIME_BOUND,
};
use exposk_core::DeciderConfig;
use serde_json::json;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fmt::Display;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExposkStatus {
    /// The call succeeded and all out-parameters are filled in.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// An argument was out of range or malformed (bad pattern, bad
    /// modulus, bad bound).
    InvalidArgument = 2,
    /// The equation text did not parse.
    ParseError = 3,
    /// A resource cap stopped the computation before a decision was made.
    ResourceExceeded = 4,
    /// The witness search exhausted its ladder without finding a modulus.
    NoWitness = 5,
}

/// Opaque equation handle.
pub struct ExposkEquation(Equation);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Display) {
    let text = message.to_string().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(text).expect("NULs stripped"));
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

/// Reads a required C string argument.
///
/// # Safety
/// `text` must be NULL or point to a NUL-terminated string.
unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, ExposkStatus> {
    if text.is_null() {
        set_error("required string argument is NULL");
        return Err(ExposkStatus::NullArgument);
    }
    CStr::from_ptr(text).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        ExposkStatus::InvalidArgument
    })
}

/// Writes an owned string through an out-parameter; NULL out is a no-op.
///
/// # Safety
/// `out` must be NULL or valid for a pointer write.
unsafe fn write_string(text: String, out: *mut *mut c_char) {
    if !out.is_null() {
        let c = CString::new(text.replace('\0', " ")).expect("NULs stripped");
        *out = c.into_raw();
    }
}

fn solve_status(e: SolveError) -> ExposkStatus {
    let status = match &e {
        SolveError::ResourceExceeded(_) => ExposkStatus::ResourceExceeded,
        _ => ExposkStatus::InvalidArgument,
    };
    set_error(e);
    status
}

/// Version of the linked library as a static string; do not free.
#[no_mangle]
pub extern "C" fn exposk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Schema tag stamped on every JSON document this library returns.
#[no_mangle]
pub extern "C" fn exposk_schema_version() -> u32 {
    exposk_core::SCHEMA_VERSION
}

/// Most recent error message on this thread as an owned string, or NULL
/// when the last call succeeded. Release with exposk_string_free.
#[no_mangle]
pub extern "C" fn exposk_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Releases a string returned by this library; NULL is a no-op.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn exposk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses equation text like "2^x - 3^y = 0" into a handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for a
/// pointer write.
#[no_mangle]
pub unsafe extern "C" fn exposk_parse(
    text: *const c_char,
    out: *mut *mut ExposkEquation,
) -> ExposkStatus {
    clear_error();
    if out.is_null() {
        set_error("out-parameter is NULL");
        return ExposkStatus::NullArgument;
    }
    let text = match read_str(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match parse_equation(text) {
        Ok(eq) => {
            *out = Box::into_raw(Box::new(ExposkEquation(eq)));
            ExposkStatus::Ok
        }
        Err(e) => {
            set_error(e);
            ExposkStatus::ParseError
        }
    }
}

/// Builds the family member n^x d1 (n+1)^y d2 (n+2)^z d3 (n+3)^w = 0 from
/// a base n >= 2 and a three-character sign pattern like "---".
///
/// # Safety
/// `pattern` must be a NUL-terminated string; `out` must be valid for a
/// pointer write.
#[no_mangle]
pub unsafe extern "C" fn exposk_family(
    n: u64,
    pattern: *const c_char,
    out: *mut *mut ExposkEquation,
) -> ExposkStatus {
    clear_error();
    if out.is_null() {
        set_error("out-parameter is NULL");
        return ExposkStatus::NullArgument;
    }
    let pattern = match read_str(pattern) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let delta: SignPattern = match pattern.parse() {
        Ok(d) => d,
        Err(e) => {
            set_error(e);
            return ExposkStatus::InvalidArgument;
        }
    };
    match FamilyPattern::new(n, delta) {
        Ok(fp) => {
            *out = Box::into_raw(Box::new(ExposkEquation(family_equation(fp))));
            ExposkStatus::Ok
        }
        Err(e) => {
            set_error(e);
            ExposkStatus::InvalidArgument
        }
    }
}

/// Releases an equation handle; NULL is a no-op.
///
/// # Safety
/// `eq` must be NULL or a handle from exposk_parse or exposk_family that
/// has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn exposk_equation_free(eq: *mut ExposkEquation) {
    if !eq.is_null() {
        drop(Box::from_raw(eq));
    }
}

/// Writes the canonical text of the equation.
///
/// # Safety
/// `eq` must be a live handle; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn exposk_format(
    eq: *const ExposkEquation,
    out: *mut *mut c_char,
) -> ExposkStatus {
    clear_error();
    if eq.is_null() || out.is_null() {
        set_error("equation handle or out-parameter is NULL");
        return ExposkStatus::NullArgument;
    }
    write_string(format_equation(&(*eq).0), out);
    ExposkStatus::Ok
}

/// Decides solvability modulo `modulus` (2 <= modulus <= 2^62). On OK,
/// `*solvable` holds the answer and `certificate_json`, when non-NULL,
/// receives the full certificate document.
///
/// # Safety
/// `eq` must be a live handle; `solvable` must be valid for a bool write;
/// `certificate_json` must be NULL or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn exposk_check_mod(
    eq: *const ExposkEquation,
    modulus: u64,
    solvable: *mut bool,
    certificate_json: *mut *mut c_char,
) -> ExposkStatus {
    clear_error();
    if eq.is_null() || solvable.is_null() {
        set_error("equation handle or solvable out-parameter is NULL");
        return ExposkStatus::NullArgument;
    }
    match has_solution_mod(&(*eq).0, modulus) {
        Ok(cert) => {
            *solvable = cert.status == exposk_core::congruence::Solvability::Solvable;
            write_string(
                serde_json::to_string(&cert).expect("certificate serializes"),
                certificate_json,
            );
            ExposkStatus::Ok
        }
        Err(e) => solve_status(e),
    }
}

/// Hunts for a modulus proving the equation has no integer solutions.
/// Pass 0 for `prime_bound` or `max_modulus` to use the defaults. On OK,
/// `*modulus` holds the witness and `certificate_json`, when non-NULL,
/// receives its unsolvability certificate. NoWitness means the ladder was
/// exhausted; the reason is available via exposk_last_error.
///
/// # Safety
/// `eq` must be a live handle; `modulus` must be valid for a u64 write;
/// `certificate_json` must be NULL or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn exposk_find_modulus(
    eq: *const ExposkEquation,
    prime_bound: u64,
    max_modulus: u64,
    modulus: *mut u64,
    certificate_json: *mut *mut c_char,
) -> ExposkStatus {
    clear_error();
    if eq.is_null() || modulus.is_null() {
        set_error("equation handle or modulus out-parameter is NULL");
        return ExposkStatus::NullArgument;
    }
    let config = WitnessSearchConfig {
        prime_bound: if prime_bound == 0 {
            DEFAULT_PRIME_BOUND
        } else {
            prime_bound
        },
        max_modulus: if max_modulus == 0 {
            DEFAULT_MAX_WITNESS_MODULUS
        } else {
            max_modulus
        },
        ..WitnessSearchConfig::default()
    };
    match search_modulus(&(*eq).0, &config, &DeciderConfig::default()) {
        Ok(WitnessOutcome::Found { certificate }) => {
            *modulus = certificate.modulus;
            write_string(
                serde_json::to_string(&certificate).expect("certificate serializes"),
                certificate_json,
            );
            ExposkStatus::Ok
        }
        Ok(WitnessOutcome::NotFound { reason, .. }) => {
            set_error(reason);
            ExposkStatus::NoWitness
        }
        Err(WitnessError::Solve(e)) => solve_status(e),
        Err(e) => {
            set_error(e);
            ExposkStatus::InvalidArgument
        }
    }
}

/// Enumerates every integer solution with all term magnitudes at most
/// `bound` (2 <= bound <= 10^18). Writes a JSON document with the
/// variable order and one exponent row per solution.
///
/// # Safety
/// `eq` must be a live handle; `solutions_json` must be valid for a
/// pointer write.
#[no_mangle]
pub unsafe extern "C" fn exposk_search(
    eq: *const ExposkEquation,
    bound: u64,
    solutions_json: *mut *mut c_char,
) -> ExposkStatus {
    clear_error();
    if eq.is_null() || solutions_json.is_null() {
        set_error("equation handle or out-parameter is NULL");
        return ExposkStatus::NullArgument;
    }
    let bound = match SearchBound::new(bound) {
        Ok(b) => b,
        Err(e) => {
            set_error(e);
            return ExposkStatus::InvalidArgument;
        }
    };
    let eq = &(*eq).0;
    match brute_force_solutions(eq, &bound) {
        Ok(solutions) => {
            let variables: Vec<&str> = eq.variables();
            let rows: Vec<Vec<u64>> = solutions
                .iter()
                .map(|s| variables.iter().map(|v| s[*v]).collect())
                .collect();
            let doc = json!({ "variables": variables, "solutions": rows });
            write_string(doc.to_string(), solutions_json);
            ExposkStatus::Ok
        }
        Err(e) => {
            set_error(e);
            ExposkStatus::InvalidArgument
        }
    }
}

/// Writes the proved verdict for the family member (n, pattern) as a JSON
/// document: solutions proved complete, no-solution proved, or not
/// covered.
///
/// # Safety
/// `pattern` must be a NUL-terminated string; `verdict_json` must be
/// valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn exposk_classify(
    n: u64,
    pattern: *const c_char,
    verdict_json: *mut *mut c_char,
) -> ExposkStatus {
    clear_error();
    if verdict_json.is_null() {
        set_error("out-parameter is NULL");
        return ExposkStatus::NullArgument;
    }
    let pattern = match read_str(pattern) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let delta: SignPattern = match pattern.parse() {
        Ok(d) => d,
        Err(e) => {
            set_error(e);
            return ExposkStatus::InvalidArgument;
        }
    };
    if n < 2 {
        set_error(format!("family base must satisfy n >= 2, got {n}"));
        return ExposkStatus::InvalidArgument;
    }
    let verdict = classify(delta, n);
    write_string(
        serde_json::to_string(&verdict).expect("verdict serializes"),
        verdict_json,
    );
    ExposkStatus::Ok
}
