//! C ABI for gapforge.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns a
//! [`GfStatus`]; on failure the message is available from
//! [`gf_last_error`] on the same thread. Strings handed out by the library
//! are NUL-terminated UTF-8 and must be released with [`gf_string_free`].
//! Rationals are returned as decimal strings `"n"` or `"n/d"`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gapforge::io::{self, Artifact, SolveReport};
use gapforge::label_cover::{gen_disjoint, gen_planted, gen_random, max_weak_fraction, LabelCoverInstance};
use gapforge::math::fmt_rational;
use gapforge::modified_vs::{search_mvs, verify_mvs, ModifiedVectorSystem};
use gapforge::reduction::{verify_base_gap, ReductionInstance};
use gapforge::tensor::{min_cost, verify_infty_recurrence, verify_no_bound, verify_pairwise_l2, Caps};
use gapforge::vector_systems::{verify_vector_system, VectorSystem};
use gapforge::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    CapExceeded = 4,
    Precondition = 5,
    Overflow = 6,
    Exhausted = 7,
    Parse = 8,
    Version = 9,
    Kind = 10,
    Io = 11,
    Panic = 12,
}

impl From<&Error> for GfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::UnsupportedOrder(_) | Error::InsufficientColors { .. } => GfStatus::Unsupported,
            Error::DimensionCap { .. } | Error::SearchSpaceTooLarge { .. } => GfStatus::CapExceeded,
            Error::DimensionMismatch(..) | Error::AlphaMismatch | Error::ScaledSpace(_) | Error::InvalidArgument(_) => {
                GfStatus::InvalidArgument
            }
            Error::Precondition(_) | Error::UndefinedIterate { .. } => GfStatus::Precondition,
            Error::Overflow(_) => GfStatus::Overflow,
            Error::Exhausted(_) => GfStatus::Exhausted,
            Error::Parse { .. } => GfStatus::Parse,
            Error::Version { .. } => GfStatus::Version,
            Error::Kind { .. } => GfStatus::Kind,
            Error::Io(_) => GfStatus::Io,
        }
    }
}

/// Opaque label cover instance.
pub struct GfLabelCover(LabelCoverInstance);
/// Opaque vector system over a finite field.
pub struct GfVectorSystem(VectorSystem);
/// Opaque modified (0/1) vector system.
pub struct GfModifiedVs(ModifiedVectorSystem);
/// Opaque reduction instance.
pub struct GfReduction(ReductionInstance);

/// Enumeration limits for the solver and the verifiers. Zero selects the default.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GfCaps {
    pub paths: u64,
    pub dims: u64,
    pub pairs: u64,
    pub assignments: u64,
}

impl GfCaps {
    fn resolve(&self) -> Caps {
        let d = Caps::default();
        let pick = |v: u64, dv: u64| if v == 0 { dv } else { v };
        Caps {
            paths: pick(self.paths, d.paths),
            dims: pick(self.dims, d.dims),
            pairs: pick(self.pairs, d.pairs),
            assignments: pick(self.assignments, d.assignments),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', "\\0")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

enum Fail {
    Null(&'static str),
    Arg(String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GfStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GfStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            GfStatus::NullPointer
        }
        Ok(Err(Fail::Arg(msg))) => {
            set_error(format!("invalid argument: {msg}"));
            GfStatus::InvalidArgument
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            GfStatus::from(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            GfStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail::Arg(format!("{what} is not UTF-8: {e}")))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    *out = CString::new(s).map_err(|e| Fail::Arg(e.to_string()))?.into_raw();
    Ok(())
}

unsafe fn put_report(out_json: *mut *mut c_char, out_pass: *mut bool, a: Artifact, pass: bool) -> Result<(), Fail> {
    if !out_pass.is_null() {
        *out_pass = pass;
    }
    if !out_json.is_null() {
        put_string(out_json, io::to_string(&a))?;
    }
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// owned by the library and valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn gf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn gf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// bell_k(p) as a decimal string.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gf_bell(k: u32, p: u64, out: *mut *mut c_char) -> GfStatus {
    guard(|| put_string(out, gapforge::bell::bell_kp(k, p as usize).to_string()))
}

// ---- label cover ----

/// Parse a label cover file.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gf_label_cover_from_json(json: *const c_char, out: *mut *mut GfLabelCover) -> GfStatus {
    guard(|| put(out, GfLabelCover(io::parse_label_cover(text(json, "json")?)?)))
}

/// Generator selector for [`gf_label_cover_generate`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfGenerator {
    Planted = 0,
    Random = 1,
    /// `colors` is per part; no noisy hyperedges.
    Disjoint = 2,
}

/// Seeded instance generator.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gf_label_cover_generate(
    generator: GfGenerator,
    r: u64,
    part_size: u64,
    labels: u64,
    colors: u64,
    edges: u64,
    seed: u64,
    out: *mut *mut GfLabelCover,
) -> GfStatus {
    guard(|| {
        let (r, n, l, c, e) = (r as usize, part_size as usize, labels as usize, colors as usize, edges as usize);
        let inst = match generator {
            GfGenerator::Planted => gen_planted(r, n, l, c, e, seed)?.0,
            GfGenerator::Random => gen_random(r, n, l, c, e, seed)?,
            GfGenerator::Disjoint => gen_disjoint(r, n, l, c, e, 0, seed)?,
        };
        put(out, GfLabelCover(inst))
    })
}

/// Canonical JSON of a label cover instance.
///
/// # Safety
/// `lc` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gf_label_cover_to_json(lc: *const GfLabelCover, out: *mut *mut c_char) -> GfStatus {
    guard(|| put_string(out, io::to_string(&Artifact::LabelCover(borrow(lc, "lc")?.0.clone()))))
}

/// Brute-force ε*, the largest weakly satisfied fraction (0 cap = default).
///
/// # Safety
/// `lc` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gf_label_cover_eps(lc: *const GfLabelCover, cap: u64, out: *mut *mut c_char) -> GfStatus {
    guard(|| {
        let cap = if cap == 0 { gapforge::label_cover::DEFAULT_ASSIGNMENT_CAP } else { cap };
        put_string(out, fmt_rational(&max_weak_fraction(&borrow(lc, "lc")?.0, cap)?))
    })
}

/// # Safety
/// `lc` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gf_label_cover_free(lc: *mut GfLabelCover) {
    free(lc)
}

// ---- vector systems ----

/// Vector system over GF(r) for arity p with `colors` colors in general
/// position (0 = the full system with embedding power p).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gf_vector_system_build(
    r: u64,
    p: u32,
    colors: u64,
    allow_prime: bool,
    out: *mut *mut GfVectorSystem,
) -> GfStatus {
    guard(|| {
        let s = if colors == 0 {
            VectorSystem::build_embedded(r, p, p, allow_prime)?
        } else {
            VectorSystem::for_reduction(r, p, colors as usize, allow_prime)?
        };
        put(out, GfVectorSystem(s))
    })
}

/// # Safety
/// `json` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gf_vector_system_from_json(json: *const c_char, out: *mut *mut GfVectorSystem) -> GfStatus {
    guard(|| put(out, GfVectorSystem(io::parse_vector_system(text(json, "json")?)?)))
}

/// # Safety
/// `vs` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gf_vector_system_to_json(vs: *const GfVectorSystem, out: *mut *mut c_char) -> GfStatus {
    guard(|| put_string(out, io::to_string(&Artifact::VectorSystem(borrow(vs, "vs")?.0.clone()))))
}

/// Check the defining property. `out_pass` and `out_json` may be NULL.
///
/// # Safety
/// `vs` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gf_vector_system_verify(
    vs: *const GfVectorSystem,
    exhaustive_cap: u64,
    out_pass: *mut bool,
    out_json: *mut *mut c_char,
) -> GfStatus {
    guard(|| {
        let cap = if exhaustive_cap == 0 { gapforge::vector_systems::DEFAULT_EXHAUSTIVE_CAP } else { exhaustive_cap };
        let rep = verify_vector_system(&borrow(vs, "vs")?.0, cap);
        let pass = rep.pass();
        put_report(out_json, out_pass, Artifact::VerificationReport(rep), pass)
    })
}

/// # Safety
/// `vs` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gf_vector_system_free(vs: *mut GfVectorSystem) {
    free(vs)
}

// ---- modified vector systems ----

/// Seeded randomized search; `d0` = 0 selects the default dimension.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gf_modified_vs_search(
    q: u64,
    p: u32,
    d0: u64,
    seed: u64,
    max_tries: u64,
    out: *mut *mut GfModifiedVs,
) -> GfStatus {
    guard(|| {
        let d0 = (d0 != 0).then_some(d0 as usize);
        put(out, GfModifiedVs(search_mvs(q as usize, p, d0, seed, max_tries)?.system))
    })
}

/// # Safety
/// `json` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gf_modified_vs_from_json(json: *const c_char, out: *mut *mut GfModifiedVs) -> GfStatus {
    guard(|| put(out, GfModifiedVs(io::parse_modified_vs(text(json, "json")?)?)))
}

/// # Safety
/// `m` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gf_modified_vs_to_json(m: *const GfModifiedVs, out: *mut *mut c_char) -> GfStatus {
    guard(|| put_string(out, io::to_string(&Artifact::ModifiedVs(borrow(m, "mvs")?.0.clone()))))
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gf_modified_vs_verify(
    m: *const GfModifiedVs,
    out_pass: *mut bool,
    out_json: *mut *mut c_char,
) -> GfStatus {
    guard(|| {
        let rep = verify_mvs(&borrow(m, "mvs")?.0);
        let pass = rep.pass();
        put_report(out_json, out_pass, Artifact::VerificationReport(rep), pass)
    })
}

/// # Safety
/// `m` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gf_modified_vs_free(m: *mut GfModifiedVs) {
    free(m)
}

// ---- reductions ----

/// Finite-p reduction from a label cover instance and a vector system.
///
/// # Safety
/// `lc` and `vs` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gf_reduction_build(
    lc: *const GfLabelCover,
    p: u32,
    vs: *const GfVectorSystem,
    out: *mut *mut GfReduction,
) -> GfStatus {
    guard(|| {
        let (lc, vs) = (&borrow(lc, "lc")?.0, &borrow(vs, "vs")?.0);
        let mismatch = vs.r() as usize != lc.r();
        put(out, GfReduction(ReductionInstance::build_base(lc, p, vs, mismatch)?))
    })
}

/// ℓ∞ reduction from a label cover instance and a modified vector system.
///
/// # Safety
/// `lc` and `m` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gf_reduction_build_infty(
    lc: *const GfLabelCover,
    m: *const GfModifiedVs,
    out: *mut *mut GfReduction,
) -> GfStatus {
    guard(|| {
        let inst = ReductionInstance::build_base_infty(&borrow(lc, "lc")?.0, &borrow(m, "mvs")?.0)?;
        put(out, GfReduction(inst))
    })
}

/// # Safety
/// `json` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gf_reduction_from_json(json: *const c_char, out: *mut *mut GfReduction) -> GfStatus {
    guard(|| put(out, GfReduction(io::parse_reduction(text(json, "json")?)?)))
}

/// # Safety
/// `red` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gf_reduction_to_json(red: *const GfReduction, out: *mut *mut c_char) -> GfStatus {
    guard(|| put_string(out, io::to_string(&Artifact::Reduction(borrow(red, "reduction")?.0.clone()))))
}

/// Exact minimum cost over all k-th order tensor paths. `out_best` receives
/// the minimum as a rational string; `out_json` (may be NULL) the full report.
///
/// # Safety
/// `red` must be a live handle; `out_best` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gf_solve_min(
    red: *const GfReduction,
    k: u32,
    caps: GfCaps,
    out_best: *mut *mut c_char,
    out_json: *mut *mut c_char,
) -> GfStatus {
    guard(|| {
        let inst = &borrow(red, "reduction")?.0;
        let c = caps.resolve();
        let sol = min_cost(inst, k, c.paths, c.dims)?;
        if !out_json.is_null() {
            put_string(out_json, io::to_string(&Artifact::SolveReport(SolveReport::new(inst, k, &sol))))?;
        }
        put_string(out_best, fmt_rational(&sol.best))
    })
}

/// Which bound [`gf_verify`] checks.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfCheck {
    /// Order-1 gap; `k` is ignored.
    BaseGap = 0,
    NoCaseBound = 1,
    PairwiseL2 = 2,
    InftyRecurrence = 3,
}

/// Run a bound check and report whether no check failed.
///
/// # Safety
/// `red` must be a live handle; `out_pass` and `out_json` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn gf_verify(
    red: *const GfReduction,
    check: GfCheck,
    k: u32,
    caps: GfCaps,
    out_pass: *mut bool,
    out_json: *mut *mut c_char,
) -> GfStatus {
    guard(|| {
        let inst = &borrow(red, "reduction")?.0;
        let c = caps.resolve();
        let rep = match check {
            GfCheck::BaseGap => verify_base_gap(inst, c.paths)?,
            GfCheck::NoCaseBound => verify_no_bound(inst, k, &c)?,
            GfCheck::PairwiseL2 => verify_pairwise_l2(inst, k, &c)?,
            GfCheck::InftyRecurrence => verify_infty_recurrence(inst, k, &c)?,
        };
        let pass = !rep.failed();
        put_report(out_json, out_pass, Artifact::GapReport(rep), pass)
    })
}

/// # Safety
/// `red` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gf_reduction_free(red: *mut GfReduction) {
    free(red)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn take(s: *mut c_char) -> String {
        let v = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
        unsafe { gf_string_free(s) };
        v
    }

    #[test]
    fn bell_roundtrip() {
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { gf_bell(2, 3, &mut s) }, GfStatus::Ok);
        assert_eq!(take(s), "12");
    }

    #[test]
    fn errors_are_reported() {
        let mut h = ptr::null_mut();
        let st = unsafe { gf_vector_system_build(6, 2, 0, false, &mut h) };
        assert_eq!(st, GfStatus::Unsupported);
        assert!(h.is_null());
        let msg = unsafe { CStr::from_ptr(gf_last_error()) }.to_str().unwrap();
        assert!(msg.contains('6'));
        assert_eq!(unsafe { gf_bell(1, 1, ptr::null_mut()) }, GfStatus::NullPointer);
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { gf_bell(1, 1, &mut s) }, GfStatus::Ok);
        assert!(gf_last_error().is_null());
        take(s);
    }
}
