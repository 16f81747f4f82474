//! C interface to `cyclequiv`.
//!
//! Objects are opaque handles released with their `_free` function. Calls
//! return a [`CqStatus`]; on failure `cq_last_error` describes the error.
//! Strings returned by the library are released with `cq_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cyclequiv::config::RunConfig;
use cyclequiv::contact::{polar_locus, xr_dimension, PolarLocus};
use cyclequiv::cycles::{complete_intersection_cycle, line_surface_cycle, ZeroCycle};
use cyclequiv::expression::{match_multidegrees, MultiDegree};
use cyclequiv::geometry::{Line, ProjectivePoint, SurfaceP3};
use cyclequiv::poly::parse::parse_form;
use cyclequiv::Error;

/// Status codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    NotOnSurface = 5,
    Improper = 6,
    Singular = 7,
    PositiveDimensional = 8,
    Degenerate = 9,
    Numeric = 10,
    Panic = 11,
}

/// A surface `{f = 0}` in P^3.
pub struct CqSurface(SurfaceP3);

/// A 0-cycle.
pub struct CqCycle(ZeroCycle);

/// Seed and tolerances for a run.
pub struct CqConfig(RunConfig);

/// Witnesses bringing `(s1, e1)` and `(s2, e2)` to the common `(s, e)`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CqMultiDegreeMatch {
    pub s: u64,
    pub e: u64,
    pub t1: u64,
    pub t2: u64,
    pub r1: u64,
    pub r2: u64,
    pub pad1: u64,
    pub pad2: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CqStatus {
    match e {
        Error::Parse { .. } | Error::NonHomogeneous { .. } => CqStatus::Parse,
        Error::InvalidInput(_) | Error::Chart(_) | Error::DegreeMismatch(_) => CqStatus::InvalidInput,
        Error::NotOnSurface(_) => CqStatus::NotOnSurface,
        Error::Improper(_) | Error::LineOnSurface => CqStatus::Improper,
        Error::SingularPoint(_) => CqStatus::Singular,
        Error::PositiveDimensional(_) => CqStatus::PositiveDimensional,
        Error::Degenerate(_) | Error::SkewLines | Error::Capacity(_) => CqStatus::Degenerate,
        Error::Numeric(_) => CqStatus::Numeric,
    }
}

enum Failure {
    Status(CqStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CqStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            CqStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Status(CqStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(CqStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::Status(CqStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::Status(CqStatus::NullPointer, format!("{what} is null")))
}

unsafe fn config_or_default(cfg: *const CqConfig) -> RunConfig {
    cfg.as_ref().map(|c| c.0.clone()).unwrap_or_default()
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A configuration with the given seed and default tolerances.
#[no_mangle]
pub extern "C" fn cq_config_new(seed: u64) -> *mut CqConfig {
    Box::into_raw(Box::new(CqConfig(RunConfig::with_seed(seed))))
}

/// # Safety
/// `cfg` must be null or come from `cq_config_new`.
#[no_mangle]
pub unsafe extern "C" fn cq_config_free(cfg: *mut CqConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Sets the point identification tolerance.
///
/// # Safety
/// `cfg` must be a live configuration.
#[no_mangle]
pub unsafe extern "C" fn cq_config_set_point_tol(cfg: *mut CqConfig, tol: f64) -> CqStatus {
    guard(|| {
        let c = out_ptr(cfg, "config")?;
        let mut next = c.0.clone();
        next.point_tol = tol;
        next.validate()?;
        c.0 = next;
        Ok(())
    })
}

/// Parses a surface equation such as `"X^4 + Y^4 + Z^4 + T^4"`.
///
/// # Safety
/// `equation` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cq_surface_parse(equation: *const c_char, out: *mut *mut CqSurface) -> CqStatus {
    guard(|| {
        let slot = out_ptr(out, "out")?;
        *slot = ptr::null_mut();
        let s = SurfaceP3::parse(text(equation, "equation")?)?;
        *slot = Box::into_raw(Box::new(CqSurface(s)));
        Ok(())
    })
}

/// Degree of the surface, or 0 for a null handle.
///
/// # Safety
/// `surface` must be null or a live surface.
#[no_mangle]
pub unsafe extern "C" fn cq_surface_degree(surface: *const CqSurface) -> u32 {
    surface.as_ref().map_or(0, |s| s.0.degree())
}

/// # Safety
/// `surface` must be null or come from `cq_surface_parse`.
#[no_mangle]
pub unsafe extern "C" fn cq_surface_free(surface: *mut CqSurface) {
    if !surface.is_null() {
        drop(Box::from_raw(surface));
    }
}

fn store_cycle(out: &mut *mut CqCycle, c: ZeroCycle) {
    *out = Box::into_raw(Box::new(CqCycle(c)));
}

/// The cycle cut on the surface by the line through `p` and `q`
/// (coordinates as `"x, y, z, t"`). `cfg` may be null.
///
/// # Safety
/// Pointers must be live handles or nul-terminated strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cq_line_cycle(
    surface: *const CqSurface,
    p: *const c_char,
    q: *const c_char,
    cfg: *const CqConfig,
    out: *mut *mut CqCycle,
) -> CqStatus {
    guard(|| {
        let slot = out_ptr(out, "out")?;
        *slot = ptr::null_mut();
        let s = handle(surface, "surface")?;
        let line = Line::new(ProjectivePoint::parse(text(p, "p")?)?, ProjectivePoint::parse(text(q, "q")?)?)?;
        store_cycle(slot, line_surface_cycle(&line, &s.0, &config_or_default(cfg))?);
        Ok(())
    })
}

/// The cycle `[a = h = f = 0]`. `cfg` may be null.
///
/// # Safety
/// Pointers must be live handles or nul-terminated strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cq_ci_cycle(
    surface: *const CqSurface,
    a: *const c_char,
    h: *const c_char,
    cfg: *const CqConfig,
    out: *mut *mut CqCycle,
) -> CqStatus {
    guard(|| {
        let slot = out_ptr(out, "out")?;
        *slot = ptr::null_mut();
        let s = handle(surface, "surface")?;
        let a = parse_form(text(a, "a")?)?;
        let h = parse_form(text(h, "h")?)?;
        store_cycle(slot, complete_intersection_cycle(&a, &h, &s.0, &config_or_default(cfg))?);
        Ok(())
    })
}

/// Points of the surface where the first `r` polars of `q` vanish
/// (`r >= 3`; `r = 2` gives a curve and fails with
/// `PositiveDimensional`). `cfg` may be null.
///
/// # Safety
/// Pointers must be live handles or nul-terminated strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cq_polar_locus(
    surface: *const CqSurface,
    q: *const c_char,
    r: u32,
    cfg: *const CqConfig,
    out: *mut *mut CqCycle,
) -> CqStatus {
    guard(|| {
        let slot = out_ptr(out, "out")?;
        *slot = ptr::null_mut();
        let s = handle(surface, "surface")?;
        let q = ProjectivePoint::parse(text(q, "q")?)?;
        match polar_locus(&s.0, &q, r, &config_or_default(cfg))? {
            PolarLocus::Points(p) => store_cycle(slot, p.cycle),
            PolarLocus::Curve(c) => {
                return Err(Failure::Status(
                    CqStatus::PositiveDimensional,
                    format!("the polar locus is a curve of degree {}", c.degree),
                ))
            }
        }
        Ok(())
    })
}

/// Degree (sum of multiplicities) of a cycle, or 0 for a null handle.
///
/// # Safety
/// `cycle` must be null or a live cycle.
#[no_mangle]
pub unsafe extern "C" fn cq_cycle_degree(cycle: *const CqCycle) -> i64 {
    cycle.as_ref().map_or(0, |c| c.0.degree())
}

/// Number of distinct points in a cycle, or 0 for a null handle.
///
/// # Safety
/// `cycle` must be null or a live cycle.
#[no_mangle]
pub unsafe extern "C" fn cq_cycle_len(cycle: *const CqCycle) -> usize {
    cycle.as_ref().map_or(0, |c| c.0.len())
}

/// The cycle as JSON; release with `cq_string_free`. Null on error.
///
/// # Safety
/// `cycle` must be a live cycle.
#[no_mangle]
pub unsafe extern "C" fn cq_cycle_to_json(cycle: *const CqCycle) -> *mut c_char {
    let mut json = String::new();
    let status = guard(|| {
        let c = handle(cycle, "cycle")?;
        json = serde_json::to_string(&c.0.to_json()).expect("cycles serialize");
        Ok(())
    });
    if status == CqStatus::Ok {
        into_c_string(json)
    } else {
        ptr::null_mut()
    }
}

/// # Safety
/// `cycle` must be null or a cycle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn cq_cycle_free(cycle: *mut CqCycle) {
    if !cycle.is_null() {
        drop(Box::from_raw(cycle));
    }
}

/// Expected dimension of the fibre of lines with contact order `r` on a
/// surface of degree `d`.
///
/// # Safety
/// `fibre` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cq_xr_dimension(d: u32, r: u32, fibre: *mut i64) -> CqStatus {
    guard(|| {
        let slot = out_ptr(fibre, "fibre")?;
        *slot = xr_dimension(d, r)?.fibre;
        Ok(())
    })
}

/// Common multidegree for expressions of multidegrees `(s1, e1)` and `(s2, e2)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cq_match_multidegrees(
    s1: u64,
    e1: u64,
    s2: u64,
    e2: u64,
    out: *mut CqMultiDegreeMatch,
) -> CqStatus {
    guard(|| {
        let slot = out_ptr(out, "out")?;
        let m = match_multidegrees(MultiDegree::new(s1, e1)?, MultiDegree::new(s2, e2)?);
        *slot = CqMultiDegreeMatch {
            s: m.common.s,
            e: m.common.e,
            t1: m.t[0],
            t2: m.t[1],
            r1: m.r[0],
            r2: m.r[1],
            pad1: m.pad[0],
            pad2: m.pad[1],
        };
        Ok(())
    })
}

/// Runs a command line (without the program name), for example
/// `{"xr-dim", "--d", "6", "--r", "5"}`, and stores its report in `*out`.
/// Returns the command's exit code, or -1 if the arguments are unusable.
///
/// # Safety
/// `argv` must hold `argc` nul-terminated strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cq_run(argc: usize, argv: *const *const c_char, out: *mut *mut c_char) -> i32 {
    let mut code = -1;
    let status = guard(|| {
        let slot = out_ptr(out, "out")?;
        *slot = ptr::null_mut();
        if argv.is_null() && argc > 0 {
            return Err(Failure::Status(CqStatus::NullPointer, "argv is null".into()));
        }
        let mut args = vec!["cyclequiv".to_string()];
        for i in 0..argc {
            args.push(text(*argv.add(i), "argument")?.to_string());
        }
        let (c, report) = cyclequiv::cli::run(args);
        code = c;
        *slot = into_c_string(report);
        Ok(())
    });
    if status == CqStatus::Ok {
        code
    } else {
        -1
    }
}
