//! C ABI over `dickson_shds`.
//!
//! Fields and sets are opaque handles created by `*_new`/`*_build` and
//! released with the matching `*_free`. Every fallible entry point returns a
//! `ShdsStatus`; on failure a message is kept per thread and can be copied
//! out with `shds_last_error_message`. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dickson_shds::digits::{carry_lemma_audit, verify_goal41, verify_goal42, ScanMode};
use dickson_shds::family::{BuildMode, FamilySpec};
use dickson_shds::invariants::{minmax_triple, PairConvention};
use dickson_shds::sets::{difference_report, ElementSet, Verdict};
use dickson_shds::{make_field, Error, Felt, FieldCtx};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShdsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Precondition = 3,
    Capacity = 4,
    Parse = 5,
    Io = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Opaque GF(3^m) context.
pub struct ShdsField {
    ctx: FieldCtx,
}

/// Opaque subset of a field.
pub struct ShdsSet {
    set: ElementSet,
}

/// Kind of difference structure found by `shds_difference_report`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShdsVerdict {
    Neither = 0,
    DifferenceSet = 1,
    PartialDifferenceSet = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShdsDifferenceReport {
    pub v: u32,
    pub k: u32,
    pub verdict: ShdsVerdict,
    /// Valid unless the verdict is `SHDS_VERDICT_NEITHER`.
    pub lambda: u32,
    /// Valid for `SHDS_VERDICT_PARTIAL_DIFFERENCE_SET` only.
    pub mu: u32,
    pub skew: bool,
}

/// Summary of a digit-weight scan.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShdsScanResult {
    pub instances: u64,
    pub min: u32,
    pub holds: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

struct Failure(ShdsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Capacity { .. } => ShdsStatus::Capacity,
            Error::Precondition(_) | Error::FieldMismatch { .. } => ShdsStatus::Precondition,
            Error::Parse { .. } | Error::Json(_) => ShdsStatus::Parse,
            Error::Io(_) => ShdsStatus::Io,
            _ => ShdsStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: ShdsStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ShdsStatus {
    let (status, msg) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => (ShdsStatus::Ok, String::new()),
        Ok(Err(Failure(s, m))) => (s, m),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            (ShdsStatus::Panic, msg)
        }
    };
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
    status
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| fail(ShdsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| fail(ShdsStatus::NullPointer, format!("{what} is null")))
}

fn element(ctx: &FieldCtx, v: u32) -> Result<Felt, Failure> {
    Ok(ctx.check(Felt(v))?)
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length excluding the NUL.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn shds_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Builds GF(3^m). `modulus` lists `m + 1` coefficients, constant term first;
/// pass null to use the default modulus.
///
/// # Safety
/// `modulus` must be null or valid for `modulus_len` bytes; `out_field` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shds_field_new(
    m: u32,
    modulus: *const u8,
    modulus_len: usize,
    out_field: *mut *mut ShdsField,
) -> ShdsStatus {
    guard(|| {
        let slot = out(out_field, "out_field")?;
        let modulus = (!modulus.is_null()).then(|| std::slice::from_raw_parts(modulus, modulus_len));
        let ctx = make_field(m, modulus)?;
        *slot = Box::into_raw(Box::new(ShdsField { ctx }));
        Ok(())
    })
}

/// # Safety
/// `field` must be null or a handle from `shds_field_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn shds_field_free(field: *mut ShdsField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Field order `3^m`, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn shds_field_order(field: *const ShdsField) -> u32 {
    field.as_ref().map_or(0, |f| f.ctx.q())
}

/// Index of the generator used to resolve `g^k` parameters.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn shds_field_generator(field: *const ShdsField) -> u32 {
    field.as_ref().map_or(0, |f| f.ctx.generator().0)
}

/// # Safety
/// `field` must be a live handle and `out_value` writable.
#[no_mangle]
pub unsafe extern "C" fn shds_field_add(field: *const ShdsField, a: u32, b: u32, out_value: *mut u32) -> ShdsStatus {
    guard(|| {
        let f = &deref(field, "field")?.ctx;
        let r = f.add(element(f, a)?, element(f, b)?);
        *out(out_value, "out_value")? = r.0;
        Ok(())
    })
}

/// # Safety
/// `field` must be a live handle and `out_value` writable.
#[no_mangle]
pub unsafe extern "C" fn shds_field_mul(field: *const ShdsField, a: u32, b: u32, out_value: *mut u32) -> ShdsStatus {
    guard(|| {
        let f = &deref(field, "field")?.ctx;
        let r = f.mul(element(f, a)?, element(f, b)?);
        *out(out_value, "out_value")? = r.0;
        Ok(())
    })
}

/// Builds a set from a family label such as `"d7:1"`, `"paley"` or `"dy-1"`.
/// With `pds_mode` the odd-m and permutation gates are skipped.
///
/// # Safety
/// `field` must be a live handle, `family` a NUL-terminated string, `out_set` writable.
#[no_mangle]
pub unsafe extern "C" fn shds_set_build(
    field: *const ShdsField,
    family: *const c_char,
    pds_mode: bool,
    out_set: *mut *mut ShdsSet,
) -> ShdsStatus {
    guard(|| {
        let f = &deref(field, "field")?.ctx;
        let slot = out(out_set, "out_set")?;
        let label = deref(family, "family")?;
        let label = CStr::from_ptr(label)
            .to_str()
            .map_err(|_| fail(ShdsStatus::Parse, "family label is not UTF-8"))?;
        let spec: FamilySpec = label.parse()?;
        let mode = if pds_mode { BuildMode::Pds } else { BuildMode::Shds };
        let set = spec.build(f, mode)?;
        *slot = Box::into_raw(Box::new(ShdsSet { set }));
        Ok(())
    })
}

/// Builds a set from explicit element indices.
///
/// # Safety
/// `field` must be a live handle, `elements` valid for `len` values, `out_set` writable.
#[no_mangle]
pub unsafe extern "C" fn shds_set_from_elements(
    field: *const ShdsField,
    elements: *const u32,
    len: usize,
    out_set: *mut *mut ShdsSet,
) -> ShdsStatus {
    guard(|| {
        let f = &deref(field, "field")?.ctx;
        let slot = out(out_set, "out_set")?;
        let items: &[u32] = if len == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(deref(elements, "elements")?, len)
        };
        let set = ElementSet::from_elements(f, items.iter().map(|&e| Felt(e)))?;
        *slot = Box::into_raw(Box::new(ShdsSet { set }));
        Ok(())
    })
}

/// # Safety
/// `set` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn shds_set_free(set: *mut ShdsSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn shds_set_len(set: *const ShdsSet) -> usize {
    set.as_ref().map_or(0, |s| s.set.len())
}

/// Writes the sorted element indices to `buf`. `*out_len` receives the set
/// size; if it exceeds `cap` nothing is written and
/// `SHDS_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `set` must be a live handle, `buf` valid for `cap` values, `out_len` writable.
#[no_mangle]
pub unsafe extern "C" fn shds_set_elements(set: *const ShdsSet, buf: *mut u32, cap: usize, out_len: *mut usize) -> ShdsStatus {
    guard(|| {
        let s = &deref(set, "set")?.set;
        *out(out_len, "out_len")? = s.len();
        if s.len() > cap {
            return Err(fail(
                ShdsStatus::BufferTooSmall,
                format!("buffer holds {cap} values, set has {}", s.len()),
            ));
        }
        if s.is_empty() {
            return Ok(());
        }
        let dst = std::slice::from_raw_parts_mut(out(buf, "buf")?, s.len());
        for (d, e) in dst.iter_mut().zip(s.iter()) {
            *d = e.0;
        }
        Ok(())
    })
}

/// Exact difference counting on `set`.
///
/// # Safety
/// `field` and `set` must be live handles and `out_report` writable.
#[no_mangle]
pub unsafe extern "C" fn shds_difference_report(
    field: *const ShdsField,
    set: *const ShdsSet,
    out_report: *mut ShdsDifferenceReport,
) -> ShdsStatus {
    guard(|| {
        let f = &deref(field, "field")?.ctx;
        let s = &deref(set, "set")?.set;
        let slot = out(out_report, "out_report")?;
        let r = difference_report(f, s)?;
        let (verdict, lambda, mu) = match r.verdict {
            Verdict::DifferenceSet { lambda } => (ShdsVerdict::DifferenceSet, lambda, 0),
            Verdict::PartialDifferenceSet { lambda, mu } => (ShdsVerdict::PartialDifferenceSet, lambda, mu),
            Verdict::Neither => (ShdsVerdict::Neither, 0, 0),
        };
        *slot = ShdsDifferenceReport {
            v: r.v,
            k: r.k,
            verdict,
            lambda,
            mu,
            skew: r.skew,
        };
        Ok(())
    })
}

/// Smallest and largest triple intersection number over distinct nonzero pairs.
///
/// # Safety
/// `field` and `set` must be live handles and both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn shds_triple_minmax(
    field: *const ShdsField,
    set: *const ShdsSet,
    out_min: *mut u32,
    out_max: *mut u32,
) -> ShdsStatus {
    guard(|| {
        let f = &deref(field, "field")?.ctx;
        let s = &deref(set, "set")?.set;
        let mm = minmax_triple(f, s, PairConvention::CALIBRATED, "ffi")?;
        *out(out_min, "out_min")? = mm.min;
        *out(out_max, "out_max")? = mm.max;
        Ok(())
    })
}

fn scan_mode(samples: u64, seed: u64) -> ScanMode {
    if samples == 0 {
        ScanMode::Full
    } else {
        ScanMode::Sampled { samples, seed }
    }
}

/// One-variable digit inequality scan; `samples = 0` scans every value.
///
/// # Safety
/// `out_result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shds_goal41(m: u32, samples: u64, seed: u64, out_result: *mut ShdsScanResult) -> ShdsStatus {
    guard(|| {
        let slot = out(out_result, "out_result")?;
        let r = verify_goal41(m, scan_mode(samples, seed))?;
        *slot = ShdsScanResult {
            instances: r.instances,
            min: r.min,
            holds: r.holds && r.checks.iter().all(|c| c.passed),
        };
        Ok(())
    })
}

/// Two-variable digit inequality scan; `samples = 0` scans every pair.
///
/// # Safety
/// `out_result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shds_goal42(m: u32, samples: u64, seed: u64, out_result: *mut ShdsScanResult) -> ShdsStatus {
    guard(|| {
        let slot = out(out_result, "out_result")?;
        let r = verify_goal42(m, scan_mode(samples, seed))?;
        *slot = ShdsScanResult {
            instances: r.instances,
            min: r.min,
            holds: r.holds,
        };
        Ok(())
    })
}

/// Carry lemma audit; `holds` is false if any lemma was violated.
///
/// # Safety
/// `out_result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shds_carry_audit(m: u32, samples: u64, seed: u64, out_result: *mut ShdsScanResult) -> ShdsStatus {
    guard(|| {
        let slot = out(out_result, "out_result")?;
        let r = carry_lemma_audit(m, scan_mode(samples, seed))?;
        *slot = ShdsScanResult {
            instances: r.instances,
            min: r.min,
            holds: r.holds,
        };
        Ok(())
    })
}
