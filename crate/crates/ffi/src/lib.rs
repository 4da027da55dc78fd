//! C ABI over `sympflow`.
//!
//! Every fallible function returns an [`SfStatus`]; results go through out
//! pointers. On failure a message is kept per thread and can be read with
//! [`sf_last_error_message`]. Handles are opaque and must be released with
//! the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use sympflow::flow::{self, FlowState, Profile};
use sympflow::pinch;
use sympflow::qform;
use sympflow::sympl::{self, SingularSpectrum, SymplecticMap};
use sympflow::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    NotSymplectic = 3,
    Numerical = 4,
    FlowFailure = 5,
    Io = 6,
    BufferSize = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfProfile {
    Constant = 0,
    SmoothTwist = 1,
}

/// Scalar monitors of a flow state.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SfMonitorReport {
    pub t: f64,
    pub min_star_omega: f64,
    pub max_sff_norm: f64,
    pub max_lambda_dev: f64,
    pub total_area: f64,
    pub max_symplectic_residual: f64,
}

/// Opaque symplectic matrix.
pub struct SfSymplecticMap(SymplecticMap);

/// Opaque flow state.
pub struct SfFlowState(FlowState);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> SfStatus {
    match err {
        Error::Invalid(_) | Error::Json { .. } => SfStatus::InvalidArgument,
        Error::NotSymplectic { .. } => SfStatus::NotSymplectic,
        Error::Flow { .. } => SfStatus::FlowFailure,
        Error::Io { .. } => SfStatus::Io,
        _ => SfStatus::Numerical,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
    Buffer { need: usize, got: usize },
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, recording any error or panic for `sf_last_error_message`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SfStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SfStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            SfStatus::NullPointer
        }
        Ok(Err(Fail::Buffer { need, got })) => {
            set_error(format!("buffer holds {got} values, need {need}"));
            SfStatus::BufferSize
        }
        Err(_) => {
            set_error("internal panic".into());
            SfStatus::Panic
        }
    }
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out_slice<'a>(p: *mut f64, len: usize, need: usize, what: &'static str) -> Result<&'a mut [f64], Fail> {
    if len != need {
        return Err(Fail::Buffer { need, got: len });
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn write<T>(p: *mut T, v: T, what: &'static str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    p.write(v);
    Ok(())
}

unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, Fail> {
    if p.is_null() {
        return Err(Fail::Null("path"));
    }
    let s = CStr::from_ptr(p).to_str().map_err(|_| Error::Invalid("path is not UTF-8".into()))?;
    Ok(PathBuf::from(s))
}

fn copy_row_major(m: &sympflow::nalgebra::DMatrix<f64>, out: &mut [f64]) {
    let c = m.ncols();
    for r in 0..m.nrows() {
        for k in 0..c {
            out[r * c + k] = m[(r, k)];
        }
    }
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn sf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---- symplectic maps ----

/// Builds a map from `len = 4n²` row-major entries.
///
/// # Safety
/// `entries` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_map_from_rows(
    n: usize,
    entries: *const f64,
    len: usize,
    tol: f64,
    out: *mut *mut SfSymplecticMap,
) -> SfStatus {
    guard(|| {
        let dim = 2 * n;
        if n == 0 || len != dim * dim {
            return Err(Error::Invalid(format!("need 4n² = {} entries for n = {n}, got {len}", dim * dim)).into());
        }
        let data = slice(entries, len, "entries")?;
        let rows: Vec<Vec<f64>> = data.chunks(dim).map(<[f64]>::to_vec).collect();
        let map = SymplecticMap::from_rows(&rows, tol)?;
        write(out, Box::into_raw(Box::new(SfSymplecticMap(map))), "out")
    })
}

/// `exp(JS)` with `S` drawn from `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_map_random(n: usize, seed: u64, spread: f64, out: *mut *mut SfSymplecticMap) -> SfStatus {
    guard(|| {
        let map = sympl::random_symplectic(n, seed, spread)?;
        write(out, Box::into_raw(Box::new(SfSymplecticMap(map))), "out")
    })
}

/// # Safety
/// `map` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sf_map_free(map: *mut SfSymplecticMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Half-dimension `n`, or 0 for null.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_map_n(map: *const SfSymplecticMap) -> usize {
    map.as_ref().map_or(0, |m| m.0.n())
}

/// Paired singular values into `out[0..2n]`.
///
/// # Safety
/// `map` must be a live handle; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sf_map_singular_values(map: *const SfSymplecticMap, out: *mut f64, len: usize) -> SfStatus {
    guard(|| {
        let m = map.as_ref().ok_or(Fail::Null("map"))?;
        let s = sympl::paired_singular_values(&m.0)?;
        out_slice(out, len, 2 * m.0.n(), "out")?.copy_from_slice(s.values());
        Ok(())
    })
}

/// Polar isometry, row-major, into `out[0..4n²]`.
///
/// # Safety
/// `map` must be a live handle; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sf_map_polar_isometry(map: *const SfSymplecticMap, out: *mut f64, len: usize) -> SfStatus {
    guard(|| {
        let m = map.as_ref().ok_or(Fail::Null("map"))?;
        let e = sympl::polar_isometry(&m.0)?;
        let dim = 2 * m.0.n();
        copy_row_major(&e, out_slice(out, len, dim * dim, "out")?);
        Ok(())
    })
}

/// Adapted bases `A` and `Ã` (row-major, `4n²` each) and the spectrum (`2n`).
///
/// # Safety
/// `map` must be a live handle; each buffer must hold the stated count.
#[no_mangle]
pub unsafe extern "C" fn sf_map_adapted_basis(
    map: *const SfSymplecticMap,
    a: *mut f64,
    a_tilde: *mut f64,
    square_len: usize,
    spectrum: *mut f64,
    spectrum_len: usize,
) -> SfStatus {
    guard(|| {
        let m = map.as_ref().ok_or(Fail::Null("map"))?;
        let b = sympl::adapted_basis(&m.0)?;
        let dim = 2 * m.0.n();
        copy_row_major(&b.a, out_slice(a, square_len, dim * dim, "a")?);
        copy_row_major(&b.a_tilde, out_slice(a_tilde, square_len, dim * dim, "a_tilde")?);
        out_slice(spectrum, spectrum_len, dim, "spectrum")?.copy_from_slice(b.spectrum.values());
        Ok(())
    })
}

// ---- spectra and pinching ----

unsafe fn spectrum_arg(lambda: *const f64, len: usize) -> Result<SingularSpectrum, Fail> {
    let v = slice(lambda, len, "lambda")?;
    Ok(SingularSpectrum::new(v.to_vec(), sympflow::DEFAULT_TOL)?)
}

/// `*Ω` of a paired spectrum of length `2n`.
///
/// # Safety
/// `lambda` must hold `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_star_omega(lambda: *const f64, len: usize, out: *mut f64) -> SfStatus {
    guard(|| write(out, pinch::star_omega(&spectrum_arg(lambda, len)?), "out"))
}

/// Curvature term of a paired spectrum.
///
/// # Safety
/// `lambda` must hold `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_curvature_sum(lambda: *const f64, len: usize, out: *mut f64) -> SfStatus {
    guard(|| write(out, pinch::curvature_sum(&spectrum_arg(lambda, len)?), "out"))
}

/// Smallest eigenvalue of `Q(λ)` relative to the tensor norm.
///
/// # Safety
/// `lambda` must hold `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_qform_min_eig_ratio(lambda: *const f64, len: usize, out: *mut f64) -> SfStatus {
    guard(|| {
        let s = spectrum_arg(lambda, len)?;
        let r = qform::min_eig_ratio(&qform::assemble_q(&s), &qform::norm_matrix(s.n()))?;
        write(out, r, "out")
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_eps_from_lambda(n: usize, big_lambda: f64, out: *mut f64) -> SfStatus {
    guard(|| write(out, pinch::eps_from_lambda(n, big_lambda)?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_lambda_from_eps(n: usize, eps: f64, out: *mut f64) -> SfStatus {
    guard(|| write(out, pinch::lambda_from_eps(n, eps)?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_preservation_eps(n: usize, big_lambda: f64, out: *mut f64) -> SfStatus {
    guard(|| write(out, pinch::preservation_eps(n, big_lambda)?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_lambda1(n: usize, lambda0: f64, out: *mut f64) -> SfStatus {
    guard(|| write(out, pinch::lambda1_from_lambda0(n, lambda0)?, "out"))
}

/// Box minimum `δ_Λ` with `grid` points per axis.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_delta_box(n: usize, big_lambda: f64, grid: usize, out: *mut f64) -> SfStatus {
    guard(|| write(out, qform::delta_box(n, big_lambda, grid)?.delta, "out"))
}

/// Pinching constant `Λ₀(n)`. `*found` is false when `δ` stays positive up
/// to `cap`; `*out` is then `+∞`.
///
/// # Safety
/// `out` and `found` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_lambda0(n: usize, tol: f64, cap: f64, grid: usize, out: *mut f64, found: *mut bool) -> SfStatus {
    guard(|| {
        if out.is_null() || found.is_null() {
            return Err(Fail::Null("out"));
        }
        let r = qform::lambda0(n, tol, cap, grid)?;
        write(out, r.lambda0.unwrap_or(f64::INFINITY), "out")?;
        write(found, r.lambda0.is_some(), "found")
    })
}

/// Closed-form solution of the comparison ODE at time `t`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn sf_comparison_ode(
    k1: f64,
    k2: f64,
    delta: f64,
    c0: f64,
    eps: f64,
    y0: f64,
    t: f64,
    out: *mut f64,
) -> SfStatus {
    guard(|| write(out, pinch::comparison_ode(k1, k2, delta, c0, eps, y0, t)?, "out"))
}

// ---- flow ----

/// Initial twist on `n` intervals.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_flow_init(n: usize, profile: SfProfile, amplitude: f64, out: *mut *mut SfFlowState) -> SfStatus {
    guard(|| {
        let p = match profile {
            SfProfile::Constant => Profile::Constant,
            SfProfile::SmoothTwist => Profile::SmoothTwist,
        };
        let s = flow::init_twist(n, p, amplitude)?;
        write(out, Box::into_raw(Box::new(SfFlowState(s))), "out")
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_flow_read_checkpoint(path: *const c_char, out: *mut *mut SfFlowState) -> SfStatus {
    guard(|| {
        let s = FlowState::read_checkpoint(&path_arg(path)?)?;
        write(out, Box::into_raw(Box::new(SfFlowState(s))), "out")
    })
}

/// # Safety
/// `state` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sf_flow_write_checkpoint(state: *const SfFlowState, path: *const c_char) -> SfStatus {
    guard(|| {
        let s = state.as_ref().ok_or(Fail::Null("state"))?;
        Ok(s.0.write_checkpoint(&path_arg(path)?)?)
    })
}

/// # Safety
/// `state` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sf_flow_free(state: *mut SfFlowState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Flow time of a state, NaN for null.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_flow_time(state: *const SfFlowState) -> f64 {
    state.as_ref().map_or(f64::NAN, |s| s.0.t)
}

/// Advances by `duration` with `dt = cfl·Δθ²` (the last step is shortened).
/// On failure the state is left unchanged.
///
/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_flow_advance(state: *mut SfFlowState, duration: f64, cfl: f64) -> SfStatus {
    guard(|| {
        let s = state.as_mut().ok_or(Fail::Null("state"))?;
        if !(duration >= 0.0) || !duration.is_finite() {
            return Err(Error::Invalid(format!("duration must be finite and nonnegative, got {duration}")).into());
        }
        if !(cfl > 0.0 && cfl <= 0.25) {
            return Err(Error::Invalid(format!("cfl must lie in (0, 0.25], got {cfl}")).into());
        }
        let dt = flow::stable_dt(s.0.n(), cfl);
        let target = s.0.t + duration;
        let mut cur = s.0.clone();
        while cur.t < target - 1e-9 * dt {
            cur = flow::step(&cur, dt.min(target - cur.t))?;
        }
        cur.t = target;
        s.0 = cur;
        Ok(())
    })
}

/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_flow_monitor(state: *const SfFlowState, out: *mut SfMonitorReport) -> SfStatus {
    guard(|| {
        let s = state.as_ref().ok_or(Fail::Null("state"))?;
        let r = flow::monitor(&s.0)?;
        let rep = SfMonitorReport {
            t: r.t,
            min_star_omega: r.min_star_omega,
            max_sff_norm: r.max_sff_norm,
            max_lambda_dev: r.max_lambda_dev,
            total_area: r.total_area,
            max_symplectic_residual: r.max_symplectic_residual,
        };
        write(out, rep, "out")
    })
}
