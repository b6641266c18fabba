//! C ABI over `rpe-core`.
//!
//! Every entry point returns an [`RpeStatus`]. On failure,
//! [`rpe_last_error`] describes what went wrong on the calling thread.
//! Handles are opaque and released by their `_free` function; strings
//! returned through out parameters belong to the caller and are released
//! with [`rpe_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use num_bigint::BigInt;
use rpe_core::algebra::{FactorizationMultiset, PrimeIdeal};
use rpe_core::cli::{parse, run, RunOptions, Session};
use rpe_core::monomial::{Monomial, MonomialIdeal, MonomialModule, MonomialSubmodule};
use rpe_core::rpe::factorization;
use rpe_core::zmodule::{ZModule, ZSubmodule};
use rpe_core::Error;
use serde_json::json;

/// Status codes. The first four match the exit codes of the `rpe` binary.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RpeStatus {
    Ok = 0,
    ParseError = 1,
    TheoremViolation = 2,
    VerificationFailure = 3,
    InvalidArgument = 4,
    NullPointer = 5,
    Panic = 6,
}

/// A parsed session file.
pub struct RpeSession {
    session: Session,
}

/// A monomial ideal of a polynomial ring.
pub struct RpeMonomialIdeal {
    module: MonomialModule,
    ideal: MonomialSubmodule,
}

/// A submodule of a finitely generated abelian group `Z^n / L`.
pub struct RpeZSubmodule {
    module: ZModule,
    sub: ZSubmodule,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (RpeStatus, String);

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn failure(e: Error) -> Failure {
    let status = match e {
        Error::Parse { .. } => RpeStatus::ParseError,
        Error::Verification(_) | Error::StepCapExceeded(_) => RpeStatus::VerificationFailure,
        _ => RpeStatus::InvalidArgument,
    };
    (status, e.to_string())
}

fn null(what: &str) -> Failure {
    (RpeStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RpeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RpeStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RpeStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (RpeStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn read_slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| {
        (
            RpeStatus::InvalidArgument,
            "output contains a nul byte".to_string(),
        )
    })?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

fn factorization_json(f: &FactorizationMultiset) -> String {
    let entries: Vec<_> = f
        .iter()
        .map(|(p, k)| {
            let prime = match p {
                PrimeIdeal::Monomial(m) => json!(m.vars()),
                PrimeIdeal::Integer(q) => json!(q),
            };
            json!({ "prime": prime, "multiplicity": k })
        })
        .collect();
    json!({ "factorization": entries, "text": f.to_string() }).to_string()
}

/// Message of the last failed call on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rpe_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rpe_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses session text into a new handle stored in `*out`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rpe_session_parse(
    text: *const c_char,
    out: *mut *mut RpeSession,
) -> RpeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(text, "text")?;
        let session = parse(text).map_err(failure)?;
        write_handle(out, RpeSession { session });
        Ok(())
    })
}

/// Runs every command of a session. The rendered output (text, or one JSON
/// object per line) goes to `*out_output` and the exit code the `rpe`
/// binary would return goes to `*out_exit_code`. `base_dir` resolves
/// `verify` paths and may be null for the current directory.
///
/// # Safety
/// `session` must be a live handle; `base_dir` null or a nul-terminated
/// string; `out_output` and `out_exit_code` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn rpe_session_run(
    session: *const RpeSession,
    base_dir: *const c_char,
    json: bool,
    oracle: bool,
    out_output: *mut *mut c_char,
    out_exit_code: *mut i32,
) -> RpeStatus {
    guard(|| {
        let session = session.as_ref().ok_or_else(|| null("session"))?;
        if out_output.is_null() || out_exit_code.is_null() {
            return Err(null("output pointer"));
        }
        let mut opts = RunOptions {
            oracle,
            ..RunOptions::default()
        };
        if !base_dir.is_null() {
            opts.base_dir = PathBuf::from(read_str(base_dir, "base_dir")?);
        }
        let report = run(&session.session, &opts);
        let rendered = if json {
            report.json_lines()
        } else {
            report.text()
        };
        write_string(out_output, rendered)?;
        *out_exit_code = report.status().code();
        Ok(())
    })
}

/// # Safety
/// `session` must be null or a live handle from [`rpe_session_parse`].
#[no_mangle]
pub unsafe extern "C" fn rpe_session_free(session: *mut RpeSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Builds the monomial ideal generated by `ngens` monomials in `nvars`
/// variables; `exponents` holds `ngens * nvars` values, one row per
/// generator.
///
/// # Safety
/// `exponents` must point to `ngens * nvars` values (or be null when that
/// is zero) and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rpe_monomial_ideal_new(
    nvars: usize,
    exponents: *const u32,
    ngens: usize,
    out: *mut *mut RpeMonomialIdeal,
) -> RpeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let len = nvars
            .checked_mul(ngens)
            .ok_or((RpeStatus::InvalidArgument, "size overflow".to_string()))?;
        let data = read_slice(exponents, len, "exponents")?;
        let gens = if nvars == 0 {
            vec![Monomial::one(0); ngens]
        } else {
            data.chunks(nvars)
                .map(|row| Monomial::new(row.to_vec()))
                .collect()
        };
        let module = MonomialModule::new(nvars, 1).map_err(failure)?;
        let ideal =
            MonomialSubmodule::from_ideal(MonomialIdeal::new(nvars, gens).map_err(failure)?);
        write_handle(out, RpeMonomialIdeal { module, ideal });
        Ok(())
    })
}

/// Writes the factorization of `R/I` as JSON to `*out_json`: primes are
/// arrays of variable indices.
///
/// # Safety
/// `ideal` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rpe_monomial_ideal_factorization(
    ideal: *const RpeMonomialIdeal,
    out_json: *mut *mut c_char,
) -> RpeStatus {
    guard(|| {
        let h = ideal.as_ref().ok_or_else(|| null("ideal"))?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let f = factorization(&h.module, &h.ideal).map_err(failure)?;
        write_string(out_json, factorization_json(&f))
    })
}

/// # Safety
/// `ideal` must be null or a live handle from [`rpe_monomial_ideal_new`].
#[no_mangle]
pub unsafe extern "C" fn rpe_monomial_ideal_free(ideal: *mut RpeMonomialIdeal) {
    if !ideal.is_null() {
        drop(Box::from_raw(ideal));
    }
}

/// Builds the submodule generated by `ngenerators` vectors inside
/// `Z^rank / <relations>`. Both arrays are row-major with `rank` columns.
///
/// # Safety
/// Each array must hold `count * rank` values (or be null when that is
/// zero) and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rpe_zsubmodule_new(
    rank: usize,
    relations: *const i64,
    nrelations: usize,
    generators: *const i64,
    ngenerators: usize,
    out: *mut *mut RpeZSubmodule,
) -> RpeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if rank == 0 {
            return Err((RpeStatus::InvalidArgument, "rank must be positive".into()));
        }
        let rows = |p: *const i64, n: usize, what: &str| -> Result<Vec<Vec<BigInt>>, Failure> {
            let len = n
                .checked_mul(rank)
                .ok_or((RpeStatus::InvalidArgument, "size overflow".to_string()))?;
            Ok(read_slice(p, len, what)?
                .chunks(rank)
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect())
        };
        let module =
            ZModule::new(rank, rows(relations, nrelations, "relations")?).map_err(failure)?;
        let sub = module
            .submodule(rows(generators, ngenerators, "generators")?)
            .map_err(failure)?;
        write_handle(out, RpeZSubmodule { module, sub });
        Ok(())
    })
}

/// Writes the factorization of `M/N` as JSON to `*out_json`: primes are
/// integers, with `0` for the zero ideal.
///
/// # Safety
/// `sub` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rpe_zsubmodule_factorization(
    sub: *const RpeZSubmodule,
    out_json: *mut *mut c_char,
) -> RpeStatus {
    guard(|| {
        let h = sub.as_ref().ok_or_else(|| null("submodule"))?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let f = factorization(&h.module, &h.sub).map_err(failure)?;
        write_string(out_json, factorization_json(&f))
    })
}

/// # Safety
/// `sub` must be null or a live handle from [`rpe_zsubmodule_new`].
#[no_mangle]
pub unsafe extern "C" fn rpe_zsubmodule_free(sub: *mut RpeZSubmodule) {
    if !sub.is_null() {
        drop(Box::from_raw(sub));
    }
}
