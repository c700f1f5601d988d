//! C ABI for `pst-core`.
//!
//! Models and reports are opaque heap handles created by `pst_model_new` and
//! `pst_run_transfer` and released with the matching `*_free` function.
//! Every fallible function returns a [`PstStatus`]; on failure a message is
//! available from [`pst_last_error`] on the same thread. Panics never cross
//! the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use pst_core::{cross_check, run_transfer, Error, Family, Representations, TransferReport, Walk, WalkModel};

/// Simulate the full state vector.
pub const PST_REPR_FULL: u32 = 1;
/// Evolve the coordinates in the invariant subspace.
pub const PST_REPR_REDUCED: u32 = 2;
/// Evaluate the closed-form fidelity.
pub const PST_REPR_ANALYTIC: u32 = 4;
/// Upper bound on the step count accepted by `pst_run_transfer` and
/// `pst_cross_check`.
pub const PST_MAX_STEPS: u64 = 10_000_000;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PstStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Consistency = 4,
    Numerical = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PstFamily {
    Star = 0,
    CompleteLoops = 1,
    Szegedy = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PstComplex {
    pub re: f64,
    pub im: f64,
}

/// One row of a transfer report. Missing representations are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PstPoint {
    pub t: u64,
    pub fidelity_full: f64,
    pub fidelity_reduced: f64,
    pub fidelity_analytic: f64,
}

/// Opaque walk model.
pub struct PstModel {
    inner: WalkModel,
}

/// Opaque transfer report.
pub struct PstReport {
    inner: TransferReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: PstStatus, msg: &str) -> PstStatus {
    set_error(msg);
    status
}

fn from_core(err: Error) -> PstStatus {
    let status = match err {
        Error::InvalidModel(_) | Error::NegativeTime(_) | Error::InvalidSweep { .. } => PstStatus::InvalidArgument,
        Error::StateDimension { .. } => PstStatus::DimensionMismatch,
        Error::Consistency { .. } => PstStatus::Consistency,
        Error::Linalg(_) => PstStatus::Numerical,
    };
    fail(status, &err.to_string())
}

/// Runs `body`, turning panics into `PstStatus::Panic`.
fn guard(body: impl FnOnce() -> PstStatus) -> PstStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(PstStatus::Panic, &format!("panic: {msg}"))
        }
    }
}

unsafe fn model_ref<'a>(model: *const PstModel) -> Result<&'a WalkModel, PstStatus> {
    unsafe { model.as_ref() }.map(|m| &m.inner).ok_or_else(|| fail(PstStatus::NullPointer, "model handle is null"))
}

unsafe fn report_ref<'a>(report: *const PstReport) -> Result<&'a TransferReport, PstStatus> {
    unsafe { report.as_ref() }.map(|r| &r.inner).ok_or_else(|| fail(PstStatus::NullPointer, "report handle is null"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> PstStatus {
    if out.is_null() {
        return fail(PstStatus::NullPointer, "output pointer is null");
    }
    unsafe { out.write(value) };
    PstStatus::Ok
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

fn check_steps(steps: u64) -> Result<(), PstStatus> {
    if steps > PST_MAX_STEPS {
        Err(fail(PstStatus::InvalidArgument, &format!("steps {steps} exceeds {PST_MAX_STEPS}")))
    } else {
        Ok(())
    }
}

/// Returns the message for the last failed call on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pst_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code. Unknown codes get a generic text.
#[no_mangle]
pub extern "C" fn pst_status_message(status: u32) -> *const c_char {
    let s: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null pointer\0",
        2 => b"invalid argument\0",
        3 => b"dimension mismatch\0",
        4 => b"internal consistency check failed\0",
        5 => b"numerical failure\0",
        6 => b"internal panic\0",
        _ => b"unknown status\0",
    };
    s.as_ptr().cast()
}

/// Creates a model. `family` is a `PstFamily` value; labels are 1-based.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn pst_model_new(
    family: u32,
    n: usize,
    sender: usize,
    receiver: usize,
    out: *mut *mut PstModel,
) -> PstStatus {
    guard(|| {
        if out.is_null() {
            return fail(PstStatus::NullPointer, "output pointer is null");
        }
        unsafe { out.write(ptr::null_mut()) };
        let family = match family {
            0 => Family::Star,
            1 => Family::CompleteLoops,
            2 => Family::Szegedy,
            other => return fail(PstStatus::InvalidArgument, &format!("unknown family {other}")),
        };
        let inner = tri!(WalkModel::new(family, n, sender, receiver).map_err(from_core));
        unsafe { out.write(Box::into_raw(Box::new(PstModel { inner }))) };
        PstStatus::Ok
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle from `pst_model_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pst_model_free(model: *mut PstModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Dimension of the full state space.
///
/// # Safety
/// `model` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pst_model_dimension(model: *const PstModel, out: *mut usize) -> PstStatus {
    guard(|| {
        let m = tri!(unsafe { model_ref(model) });
        unsafe { write_out(out, m.dimension()) }
    })
}

/// Predicted transfer time in steps.
///
/// # Safety
/// `model` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pst_model_transfer_time(model: *const PstModel, out: *mut u64) -> PstStatus {
    guard(|| {
        let m = tri!(unsafe { model_ref(model) });
        unsafe { write_out(out, m.transfer_time()) }
    })
}

/// Closed-form fidelity after `t` steps.
///
/// # Safety
/// `model` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pst_model_fidelity_analytic(model: *const PstModel, t: i64, out: *mut f64) -> PstStatus {
    guard(|| {
        let m = tri!(unsafe { model_ref(model) });
        let f = tri!(m.fidelity_analytic(t).map_err(from_core));
        unsafe { write_out(out, f) }
    })
}

unsafe fn state_slice<'a>(m: &WalkModel, buf: *mut PstComplex, len: usize) -> Result<&'a mut [PstComplex], PstStatus> {
    if buf.is_null() {
        return Err(fail(PstStatus::NullPointer, "state buffer is null"));
    }
    if len != m.dimension() {
        return Err(from_core(Error::StateDimension { expected: m.dimension(), found: len }));
    }
    Ok(unsafe { std::slice::from_raw_parts_mut(buf, len) })
}

/// Writes the sender state into `buf`, which must hold exactly
/// `pst_model_dimension` entries.
///
/// # Safety
/// `buf` must be null or valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn pst_model_initial_state(
    model: *const PstModel,
    buf: *mut PstComplex,
    len: usize,
) -> PstStatus {
    guard(|| {
        let m = tri!(unsafe { model_ref(model) });
        let dst = tri!(unsafe { state_slice(m, buf, len) });
        for (d, z) in dst.iter_mut().zip(m.initial_state().as_slice()) {
            *d = PstComplex { re: z.re, im: z.im };
        }
        PstStatus::Ok
    })
}

/// Applies one walk step to `buf` in place.
///
/// # Safety
/// `buf` must be null or valid for `len` reads and writes.
#[no_mangle]
pub unsafe extern "C" fn pst_model_step(model: *const PstModel, buf: *mut PstComplex, len: usize) -> PstStatus {
    guard(|| {
        let m = tri!(unsafe { model_ref(model) });
        let state = tri!(unsafe { state_slice(m, buf, len) });
        let mut work: Vec<Complex64> = state.iter().map(|z| Complex64::new(z.re, z.im)).collect();
        tri!(m.step_in_place(&mut work).map_err(from_core));
        for (d, z) in state.iter_mut().zip(&work) {
            *d = PstComplex { re: z.re, im: z.im };
        }
        PstStatus::Ok
    })
}

/// Runs the transfer experiment for `steps` steps. `repr_mask` is a
/// combination of the `PST_REPR_*` flags.
///
/// # Safety
/// `model` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pst_run_transfer(
    model: *const PstModel,
    steps: u64,
    repr_mask: u32,
    out: *mut *mut PstReport,
) -> PstStatus {
    guard(|| {
        if out.is_null() {
            return fail(PstStatus::NullPointer, "output pointer is null");
        }
        unsafe { out.write(ptr::null_mut()) };
        let m = tri!(unsafe { model_ref(model) });
        tri!(check_steps(steps));
        let all = PST_REPR_FULL | PST_REPR_REDUCED | PST_REPR_ANALYTIC;
        if repr_mask == 0 || repr_mask & !all != 0 {
            return fail(PstStatus::InvalidArgument, &format!("invalid representation mask {repr_mask:#x}"));
        }
        let reprs = Representations {
            full: repr_mask & PST_REPR_FULL != 0,
            reduced: repr_mask & PST_REPR_REDUCED != 0,
            analytic: repr_mask & PST_REPR_ANALYTIC != 0,
        };
        let inner = tri!(run_transfer(m, steps, reprs).map_err(from_core));
        unsafe { out.write(Box::into_raw(Box::new(PstReport { inner }))) };
        PstStatus::Ok
    })
}

/// Largest |full - reduced| fidelity difference over `steps` steps.
///
/// # Safety
/// `model` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pst_cross_check(model: *const PstModel, steps: u64, out: *mut f64) -> PstStatus {
    guard(|| {
        let m = tri!(unsafe { model_ref(model) });
        tri!(check_steps(steps));
        let gap = tri!(cross_check(m, steps).map_err(from_core));
        unsafe { write_out(out, gap) }
    })
}

/// Number of points in the report (steps + 1).
///
/// # Safety
/// `report` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pst_report_len(report: *const PstReport, out: *mut usize) -> PstStatus {
    guard(|| {
        let r = tri!(unsafe { report_ref(report) });
        unsafe { write_out(out, r.series.len()) }
    })
}

/// # Safety
/// `report` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pst_report_peak_step(report: *const PstReport, out: *mut u64) -> PstStatus {
    guard(|| {
        let r = tri!(unsafe { report_ref(report) });
        unsafe { write_out(out, r.peak_step) }
    })
}

/// # Safety
/// `report` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pst_report_peak_fidelity(report: *const PstReport, out: *mut f64) -> PstStatus {
    guard(|| {
        let r = tri!(unsafe { report_ref(report) });
        unsafe { write_out(out, r.peak_fidelity) }
    })
}

/// # Safety
/// `report` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pst_report_predicted_t(report: *const PstReport, out: *mut u64) -> PstStatus {
    guard(|| {
        let r = tri!(unsafe { report_ref(report) });
        unsafe { write_out(out, r.predicted_t) }
    })
}

/// Copies point `index` of the series into `out`.
///
/// # Safety
/// `report` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pst_report_point(report: *const PstReport, index: usize, out: *mut PstPoint) -> PstStatus {
    guard(|| {
        let r = tri!(unsafe { report_ref(report) });
        let Some(p) = r.series.get(index) else {
            return fail(
                PstStatus::InvalidArgument,
                &format!("index {index} out of range for {} points", r.series.len()),
            );
        };
        let point = PstPoint {
            t: p.t,
            fidelity_full: p.fidelity_full.unwrap_or(f64::NAN),
            fidelity_reduced: p.fidelity_reduced.unwrap_or(f64::NAN),
            fidelity_analytic: p.fidelity_analytic.unwrap_or(f64::NAN),
        };
        unsafe { write_out(out, point) }
    })
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must be null or a handle from `pst_run_transfer` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pst_report_free(report: *mut PstReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}
