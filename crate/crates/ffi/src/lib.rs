//! C ABI over the `large-sieve` crate.
//!
//! Objects are passed as opaque handles created by `*_new` and released by
//! the matching `*_free`. Every fallible call returns an [`LsStatus`]; on
//! failure [`ls_last_error_message`] describes the problem for the calling
//! thread. Strings returned through `char **` are owned by the library and
//! must be released with [`ls_string_free`].

use large_sieve::characters::{character_group, Character};
use large_sieve::cli::{self, Command, FileConfig, Flags, OutputFormat};
use large_sieve::euler_sums::{CoefficientVector, SumSpec};
use large_sieve::number_core::{sieve_primes, sum_reciprocal_primes, PrimeTable};
use large_sieve::sieve_inequality::verify_theorem;
use large_sieve::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LsStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Range = 3,
    Config = 4,
    Io = 5,
    InvalidUtf8 = 6,
    OutOfBounds = 7,
    Panic = 8,
}

/// Primes up to a limit with their logarithms and reciprocal prefix sums.
pub struct LsPrimeTable(PrimeTable);

/// The Dirichlet characters modulo `D` in their canonical order.
pub struct LsCharacterGroup(Vec<Character>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: LsStatus, msg: impl AsRef<str>) -> LsStatus {
    set_error(msg.as_ref());
    status
}

fn from_error(e: Error) -> LsStatus {
    let status = match &e {
        Error::Domain(_) => LsStatus::Domain,
        Error::Range(_) => LsStatus::Range,
        Error::Config(_) => LsStatus::Config,
        Error::Io(_) => LsStatus::Io,
    };
    fail(status, e.to_string())
}

fn guard<F: FnOnce() -> LsStatus>(f: F) -> LsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => {
            if status == LsStatus::Ok {
                set_error("");
            }
            status
        }
        Err(_) => fail(LsStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, LsStatus> {
    if p.is_null() {
        return Err(fail(LsStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(LsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn give_string(s: String, out: *mut *mut c_char) -> LsStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            LsStatus::Ok
        }
        Err(_) => fail(LsStatus::InvalidUtf8, "output contains a NUL byte"),
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ls_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn ls_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Sieves the primes up to `limit` (2 ≤ limit ≤ 10^8).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ls_prime_table_new(limit: u64, out: *mut *mut LsPrimeTable) -> LsStatus {
    guard(|| {
        if out.is_null() {
            return fail(LsStatus::NullPointer, "out is null");
        }
        match sieve_primes(limit) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(LsPrimeTable(t)));
                LsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `table` must come from [`ls_prime_table_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ls_prime_table_free(table: *mut LsPrimeTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Number of primes in the table.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_prime_table_len(table: *const LsPrimeTable, out: *mut usize) -> LsStatus {
    guard(|| {
        if table.is_null() || out.is_null() {
            return fail(LsStatus::NullPointer, "null argument");
        }
        *out = (*table).0.len();
        LsStatus::Ok
    })
}

/// The `index`-th prime (0-based).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_prime_table_get(table: *const LsPrimeTable, index: usize, out: *mut u64) -> LsStatus {
    guard(|| {
        if table.is_null() || out.is_null() {
            return fail(LsStatus::NullPointer, "null argument");
        }
        match (*table).0.primes().get(index) {
            Some(&p) => {
                *out = p;
                LsStatus::Ok
            }
            None => fail(LsStatus::OutOfBounds, format!("prime index {index} out of range")),
        }
    })
}

/// `Σ_{d<p≤x} 1/p`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_sum_reciprocal_primes(
    table: *const LsPrimeTable,
    d: u64,
    x: u64,
    out: *mut f64,
) -> LsStatus {
    guard(|| {
        if table.is_null() || out.is_null() {
            return fail(LsStatus::NullPointer, "null argument");
        }
        match sum_reciprocal_primes(d, x, &(*table).0) {
            Ok(v) => {
                *out = v;
                LsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// All characters modulo `d`, principal first.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ls_character_group_new(d: u64, out: *mut *mut LsCharacterGroup) -> LsStatus {
    guard(|| {
        if out.is_null() {
            return fail(LsStatus::NullPointer, "out is null");
        }
        match character_group(d) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(LsCharacterGroup(g)));
                LsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `group` must come from [`ls_character_group_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ls_character_group_free(group: *mut LsCharacterGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Number of characters, `φ(d)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_character_group_len(group: *const LsCharacterGroup, out: *mut usize) -> LsStatus {
    guard(|| {
        if group.is_null() || out.is_null() {
            return fail(LsStatus::NullPointer, "null argument");
        }
        *out = (*group).0.len();
        LsStatus::Ok
    })
}

/// `χ_index(n)` as a real and imaginary part.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_character_evaluate(
    group: *const LsCharacterGroup,
    index: usize,
    n: u64,
    re: *mut f64,
    im: *mut f64,
) -> LsStatus {
    guard(|| {
        if group.is_null() || re.is_null() || im.is_null() {
            return fail(LsStatus::NullPointer, "null argument");
        }
        let group = &*group;
        match group.0.get(index) {
            Some(chi) => {
                let v = chi.evaluate(n);
                *re = v.re;
                *im = v.im;
                LsStatus::Ok
            }
            None => fail(LsStatus::OutOfBounds, format!("character index {index} out of range")),
        }
    })
}

/// Checks the inequality for `a_p ≡ 1` and the non-principal characters mod
/// `d`, with constant `c`, and writes the JSON report to `out_json`.
/// `passed` receives 1 or 0.
///
/// # Safety
/// Pointers must be valid; `table` must cover `x`.
#[no_mangle]
pub unsafe extern "C" fn ls_verify_ones_json(
    table: *const LsPrimeTable,
    d: u64,
    x: u64,
    b_exponent: f64,
    c: f64,
    out_json: *mut *mut c_char,
    passed: *mut i32,
) -> LsStatus {
    guard(|| {
        if table.is_null() || out_json.is_null() || passed.is_null() {
            return fail(LsStatus::NullPointer, "null argument");
        }
        let table = &(*table).0;
        let run = || -> large_sieve::Result<_> {
            let spec = SumSpec::new(d, x, b_exponent)?;
            let chars: Vec<Character> = character_group(d)?.into_iter().filter(|c| !c.is_principal()).collect();
            let a = CoefficientVector::ones(table, d, x)?;
            verify_theorem(&a, &chars, &spec, c, table)
        };
        match run() {
            Ok(report) => {
                *passed = report.passed as i32;
                match serde_json::to_string(&report) {
                    Ok(s) => give_string(s, out_json),
                    Err(e) => fail(LsStatus::Config, e.to_string()),
                }
            }
            Err(e) => from_error(e),
        }
    })
}

/// Runs a command line subcommand (`"verify"`, `"lemma-scan"`, ...) with a
/// `key=value` configuration text and returns its JSON report.
/// `exit_code` receives the code the command line tool would exit with.
///
/// # Safety
/// Pointers must be valid; `config` may be null for defaults.
#[no_mangle]
pub unsafe extern "C" fn ls_run_command_json(
    command: *const c_char,
    config: *const c_char,
    out_json: *mut *mut c_char,
    exit_code: *mut i32,
) -> LsStatus {
    guard(|| {
        if out_json.is_null() || exit_code.is_null() {
            return fail(LsStatus::NullPointer, "null argument");
        }
        let name = match read_str(command, "command") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let text = if config.is_null() {
            ""
        } else {
            match read_str(config, "config") {
                Ok(s) => s,
                Err(s) => return s,
            }
        };
        let run = || -> large_sieve::Result<(bool, Vec<u8>)> {
            let command = Command::from_name(name)?;
            let file = FileConfig::parse(text)?;
            let cfg = Flags::default().resolve_with(command, &file)?;
            let outcome = cli::execute(command, &cfg)?;
            Ok((outcome.passed, cli::render(&outcome, OutputFormat::Json)?))
        };
        match run() {
            Ok((ok, bytes)) => {
                *exit_code = if ok { cli::EXIT_PASS } else { cli::EXIT_VIOLATION };
                give_string(String::from_utf8_lossy(&bytes).into_owned(), out_json)
            }
            Err(e) => {
                *exit_code = cli::EXIT_USAGE;
                *out_json = ptr::null_mut();
                from_error(e)
            }
        }
    })
}
