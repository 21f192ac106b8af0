//! C ABI for `divisor-lab`.
//!
//! Sets cross the boundary as opaque handles created by `dl_*_new` and
//! released with the matching `dl_*_free`. Every fallible call returns a
//! [`DlStatus`] and writes its result through an out-pointer; on failure
//! `dl_last_error_message` describes what went wrong on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use divisor_lab::zero_sum::{mu_report, ZeroSumSet};
use divisor_lab::{
    census, construct_anti_pencil, construct_k_anti_pencil, construct_prime_set,
    count_divisors_mitm, divisor_report, is_anti_pencil, is_k_anti_pencil, is_prime_set, Error,
    IntSet,
};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidSet = 2,
    InvalidArgument = 3,
    Overflow = 4,
    Capacity = 5,
    BufferTooSmall = 6,
    Panic = 7,
    Internal = 8,
}

/// A finite set of distinct positive integers.
pub struct DlIntSet {
    inner: IntSet,
}

/// A set of distinct nonzero integers summing to zero.
pub struct DlZeroSumSet {
    inner: ZeroSumSet,
}

/// Separation census of a set.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DlCensus {
    pub barren: u64,
    pub neutral: u64,
    pub abundant: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> DlStatus {
    match e {
        Error::InvalidSet(_) => DlStatus::InvalidSet,
        Error::InvalidMask { .. } | Error::InvalidArgument(_) => DlStatus::InvalidArgument,
        Error::Overflow(_) => DlStatus::Overflow,
        Error::Capacity { .. } => DlStatus::Capacity,
        Error::BudgetExceeded(_) | Error::Io(_) | Error::Json(_) => DlStatus::Internal,
    }
}

fn guard<F>(f: F) -> DlStatus
where
    F: FnOnce() -> Result<(), DlStatus>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DlStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_last_error("panic inside divisor-lab".into());
            DlStatus::Panic
        }
    }
}

fn lib<T>(r: divisor_lab::Result<T>) -> Result<T, DlStatus> {
    r.map_err(|e| {
        let s = status_of(&e);
        set_last_error(e.to_string());
        s
    })
}

fn null(what: &str) -> DlStatus {
    set_last_error(format!("{what} is null"));
    DlStatus::NullPointer
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, DlStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), DlStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a, T>(data: *const T, len: usize) -> Result<&'a [T], DlStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null("element array"));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

fn boxed_set(inner: IntSet) -> *mut DlIntSet {
    Box::into_raw(Box::new(DlIntSet { inner }))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates a set from `len` positive integers in any order.
///
/// # Safety
/// `elements` must point to `len` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_int_set_new(
    elements: *const u64,
    len: usize,
    out: *mut *mut DlIntSet,
) -> DlStatus {
    guard(|| {
        let xs = slice(elements, len)?;
        let set = lib(IntSet::new(xs.to_vec()))?;
        write_out(out, boxed_set(set))
    })
}

/// Parses a set written as `1,2,3` or `{1,2,3}`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_int_set_parse(
    text: *const c_char,
    out: *mut *mut DlIntSet,
) -> DlStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| {
            set_last_error("text is not UTF-8".into());
            DlStatus::InvalidSet
        })?;
        let set: IntSet = lib(s.parse())?;
        write_out(out, boxed_set(set))
    })
}

/// Releases a set. Passing NULL is a no-op.
///
/// # Safety
/// `set` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dl_int_set_free(set: *mut DlIntSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of elements, or 0 for NULL.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dl_int_set_len(set: *const DlIntSet) -> usize {
    set.as_ref().map_or(0, |s| s.inner.len())
}

/// Sum of the elements.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dl_int_set_total(set: *const DlIntSet, out: *mut u64) -> DlStatus {
    guard(|| write_out(out, handle(set, "set")?.inner.total()))
}

/// Copies the elements in increasing order into `buf`. `written` receives
/// the element count; if `cap` is too small nothing is copied and
/// `DL_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `buf` must have room for `cap` values and `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_int_set_elements(
    set: *const DlIntSet,
    buf: *mut u64,
    cap: usize,
    written: *mut usize,
) -> DlStatus {
    guard(|| {
        let xs = handle(set, "set")?.inner.elements();
        write_out(written, xs.len())?;
        if cap < xs.len() {
            set_last_error(format!("buffer holds {cap} values, {} needed", xs.len()));
            return Err(DlStatus::BufferTooSmall);
        }
        if !xs.is_empty() {
            if buf.is_null() {
                return Err(null("buffer"));
            }
            ptr::copy_nonoverlapping(xs.as_ptr(), buf, xs.len());
        }
        Ok(())
    })
}

/// Number of divisors d(A).
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dl_divisor_count(set: *const DlIntSet, out: *mut u64) -> DlStatus {
    guard(|| {
        let r = lib(divisor_report(&handle(set, "set")?.inner))?;
        write_out(out, r.d)
    })
}

/// Number of k-element divisors d_k(A); 0 when k is 0 or exceeds the size.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dl_divisor_count_k(
    set: *const DlIntSet,
    k: usize,
    out: *mut u64,
) -> DlStatus {
    guard(|| {
        let r = lib(divisor_report(&handle(set, "set")?.inner))?;
        write_out(out, r.d_k(k))
    })
}

/// d(A) by meet-in-the-middle; handles larger sets than `dl_divisor_count`.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dl_divisor_count_mitm(set: *const DlIntSet, out: *mut u64) -> DlStatus {
    guard(|| {
        let c = lib(count_divisors_mitm(&handle(set, "set")?.inner))?;
        write_out(out, c.d)
    })
}

/// Separation census; `strong` restricts to equal-size halves (even sizes only).
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dl_census(
    set: *const DlIntSet,
    strong: bool,
    out: *mut DlCensus,
) -> DlStatus {
    guard(|| {
        let c = lib(census(&handle(set, "set")?.inner, strong))?;
        write_out(
            out,
            DlCensus {
                barren: c.barren,
                neutral: c.neutral,
                abundant: c.abundant,
            },
        )
    })
}

/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dl_is_anti_pencil(set: *const DlIntSet, out: *mut bool) -> DlStatus {
    guard(|| write_out(out, lib(is_anti_pencil(&handle(set, "set")?.inner))?))
}

/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dl_is_k_anti_pencil(
    set: *const DlIntSet,
    k: usize,
    out: *mut bool,
) -> DlStatus {
    guard(|| write_out(out, lib(is_k_anti_pencil(&handle(set, "set")?.inner, k))?))
}

/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dl_is_prime_set(set: *const DlIntSet, out: *mut bool) -> DlStatus {
    guard(|| write_out(out, lib(is_prime_set(&handle(set, "set")?.inner))?))
}

/// Extends `base` by one element to an anti-pencil. The result is a new
/// handle owned by the caller.
///
/// # Safety
/// `base` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dl_construct_anti_pencil(
    base: *const DlIntSet,
    out: *mut *mut DlIntSet,
) -> DlStatus {
    guard(|| {
        let a = lib(construct_anti_pencil(&handle(base, "base")?.inner))?;
        write_out(out, boxed_set(a))
    })
}

/// Extends `base` by one element to a k-anti-pencil.
///
/// # Safety
/// `base` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dl_construct_k_anti_pencil(
    base: *const DlIntSet,
    k: usize,
    out: *mut *mut DlIntSet,
) -> DlStatus {
    guard(|| {
        let a = lib(construct_k_anti_pencil(&handle(base, "base")?.inner, k))?;
        write_out(out, boxed_set(a))
    })
}

/// Extends `base` (which must not contain 1) by one element to a prime set.
///
/// # Safety
/// `base` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dl_construct_prime_set(
    base: *const DlIntSet,
    out: *mut *mut DlIntSet,
) -> DlStatus {
    guard(|| {
        let a = lib(construct_prime_set(&handle(base, "base")?.inner))?;
        write_out(out, boxed_set(a))
    })
}

/// Creates a zero-sum set from `len` distinct nonzero integers.
///
/// # Safety
/// `elements` must point to `len` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_zero_sum_set_new(
    elements: *const i64,
    len: usize,
    out: *mut *mut DlZeroSumSet,
) -> DlStatus {
    guard(|| {
        let xs = slice(elements, len)?;
        let inner = lib(ZeroSumSet::new(xs.to_vec()))?;
        write_out(out, Box::into_raw(Box::new(DlZeroSumSet { inner })))
    })
}

/// Releases a zero-sum set. Passing NULL is a no-op.
///
/// # Safety
/// `set` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dl_zero_sum_set_free(set: *mut DlZeroSumSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of subsets with nonnegative sum, the empty set included.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dl_mu(set: *const DlZeroSumSet, out: *mut u64) -> DlStatus {
    guard(|| {
        let r = lib(mu_report(&handle(set, "set")?.inner))?;
        write_out(out, r.mu)
    })
}

/// Number of k-subsets with nonnegative sum.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dl_mu_k(set: *const DlZeroSumSet, k: usize, out: *mut u64) -> DlStatus {
    guard(|| {
        let r = lib(mu_report(&handle(set, "set")?.inner))?;
        write_out(out, r.mu_k(k))
    })
}
