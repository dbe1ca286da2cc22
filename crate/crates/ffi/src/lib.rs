//! C ABI over `pavls`.
//!
//! Elections and run traces are opaque handles owned by the caller and
//! released with their `_free` function. Every fallible call returns a
//! [`PavlsStatus`]; the message of the most recent failure on the calling
//! thread is available from [`pavls_last_error`]. Strings returned through
//! out-parameters are freed with [`pavls_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pavls::constructions::warmup_election;
use pavls::election::{approx_f64, fraction_string, pav_score};
use pavls::io::{parse_native, serialize_native};
use pavls::search::{run, PivotRule, RunTrace};
use pavls::{Committee, Election, Epsilon};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PavlsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    OutOfRange = 5,
    Panic = 6,
}

/// Values of the `rule` argument of [`pavls_run`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PavlsRule {
    LexBetter = 0,
    Best = 1,
}

/// Opaque election handle.
pub struct PavlsElection(Election);

/// Opaque run-trace handle.
pub struct PavlsTrace(RunTrace);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(PavlsStatus, String);

impl From<pavls::Error> for Failure {
    fn from(e: pavls::Error) -> Self {
        let status = match e {
            pavls::Error::Parse { .. } => PavlsStatus::Parse,
            _ => PavlsStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PavlsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PavlsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PavlsStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(PavlsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn members<'a>(ptr: *const usize, len: usize) -> Result<&'a [usize], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null("members"));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(PavlsStatus::InvalidArgument, "string contains NUL".into()))
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pavls_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pavls_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an election in the native text format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pavls_election_parse_native(
    text: *const c_char,
    out: *mut *mut PavlsElection,
) -> PavlsStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure(PavlsStatus::InvalidUtf8, e.to_string()))?;
        let e = parse_native(text)?;
        *out = Box::into_raw(Box::new(PavlsElection(e)));
        Ok(())
    })
}

/// Builds the warm-up instance for committee size `k`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pavls_election_warmup(
    k: usize,
    out: *mut *mut PavlsElection,
) -> PavlsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let le = warmup_election(k)?;
        *out = Box::into_raw(Box::new(PavlsElection(le.election)));
        Ok(())
    })
}

/// # Safety
/// `e` must be NULL or a handle from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pavls_election_free(e: *mut PavlsElection) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Number of candidates, or 0 for NULL.
///
/// # Safety
/// `e` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pavls_election_candidate_count(e: *const PavlsElection) -> usize {
    e.as_ref().map_or(0, |e| e.0.candidate_count())
}

/// Committee size, or 0 for NULL.
///
/// # Safety
/// `e` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pavls_election_committee_size(e: *const PavlsElection) -> usize {
    e.as_ref().map_or(0, |e| e.0.committee_size())
}

/// Serialises the election in the native format into `*out`.
///
/// # Safety
/// `e` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pavls_election_serialize_native(
    e: *const PavlsElection,
    out: *mut *mut c_char,
) -> PavlsStatus {
    guard(|| {
        let e = deref(e, "election")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(serialize_native(&e.0))?;
        Ok(())
    })
}

/// PAV score of a committee. The exact value is written to `*fraction` as
/// `num/den` (freed with [`pavls_string_free`]); either out-parameter may
/// be NULL.
///
/// # Safety
/// `e` must be a live handle; `members` must point to `len` readable values.
#[no_mangle]
pub unsafe extern "C" fn pavls_score(
    e: *const PavlsElection,
    members: *const usize,
    len: usize,
    fraction: *mut *mut c_char,
    approx: *mut f64,
) -> PavlsStatus {
    guard(|| {
        let e = deref(e, "election")?;
        let w = Committee::new(&e.0, self::members(members, len)?.to_vec())?;
        let s = pav_score(&e.0, &w)?;
        if !approx.is_null() {
            *approx = approx_f64(&s);
        }
        if !fraction.is_null() {
            *fraction = into_c_string(fraction_string(&s))?;
        }
        Ok(())
    })
}

/// Runs local search with ε = 0⁺ from the given committee. `rule` is a
/// [`PavlsRule`] value; `step_cap` of 0 means unbounded.
///
/// # Safety
/// `e` must be a live handle; `start` must point to `len` readable values;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pavls_run(
    e: *const PavlsElection,
    start: *const usize,
    len: usize,
    rule: u32,
    step_cap: usize,
    out: *mut *mut PavlsTrace,
) -> PavlsStatus {
    guard(|| {
        let e = deref(e, "election")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let w = Committee::new(&e.0, members(start, len)?.to_vec())?;
        let m = e.0.candidate_count();
        let rule = match rule {
            r if r == PavlsRule::LexBetter as u32 => PivotRule::lex(m),
            r if r == PavlsRule::Best as u32 => PivotRule::best(m),
            r => {
                return Err(Failure(
                    PavlsStatus::InvalidArgument,
                    format!("unknown rule {r}"),
                ))
            }
        };
        let cap = (step_cap > 0).then_some(step_cap);
        let trace = run(&e.0, &w, &Epsilon::ZeroPlus, &rule, cap)?;
        *out = Box::into_raw(Box::new(PavlsTrace(trace)));
        Ok(())
    })
}

/// # Safety
/// `t` must be NULL or a handle from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pavls_trace_free(t: *mut PavlsTrace) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pavls_trace_swap_count(t: *const PavlsTrace) -> usize {
    t.as_ref().map_or(0, |t| t.0.executed_swaps.len())
}

/// Total Δ evaluations, including the final scan.
///
/// # Safety
/// `t` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pavls_trace_comparisons(t: *const PavlsTrace) -> u64 {
    t.as_ref().map_or(0, |t| t.0.comparisons)
}

/// Whether the run ended at a local optimum rather than the step cap.
///
/// # Safety
/// `t` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pavls_trace_terminated(t: *const PavlsTrace) -> bool {
    t.as_ref().is_some_and(|t| t.0.terminated)
}

/// Writes swap `index` as `(*out, *add)`.
///
/// # Safety
/// `t` must be a live handle; `out` and `add` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pavls_trace_swap(
    t: *const PavlsTrace,
    index: usize,
    out: *mut usize,
    add: *mut usize,
) -> PavlsStatus {
    guard(|| {
        let t = deref(t, "trace")?;
        if out.is_null() || add.is_null() {
            return Err(null("out"));
        }
        let s = t.0.executed_swaps.as_slice().get(index).ok_or_else(|| {
            Failure(
                PavlsStatus::OutOfRange,
                format!("swap {index} of {}", t.0.executed_swaps.len()),
            )
        })?;
        *out = s.out;
        *add = s.add;
        Ok(())
    })
}

/// Copies the final committee into `buf` when `cap` is large enough and
/// returns its size either way (0 for NULL).
///
/// # Safety
/// `t` must be NULL or a live handle; `buf` must have room for `cap` values.
#[no_mangle]
pub unsafe extern "C" fn pavls_trace_final_committee(
    t: *const PavlsTrace,
    buf: *mut usize,
    cap: usize,
) -> usize {
    let Some(t) = t.as_ref() else { return 0 };
    let w = t.0.final_committee.members();
    if !buf.is_null() && cap >= w.len() {
        ptr::copy_nonoverlapping(w.as_ptr(), buf, w.len());
    }
    w.len()
}
