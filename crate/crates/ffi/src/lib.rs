//! C interface to framekit.
//!
//! Every function returns an [`FkStatus`]; on failure the message is kept in a
//! thread-local slot readable with [`fk_last_error`]. Frames are opaque
//! [`FkFrame`] handles released with [`fk_frame_free`]. Strings returned
//! through `char**` out-parameters are released with [`fk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use framekit::fusion::{certify_near_tight, Subspace};
use framekit::geometry::principal_angles;
use framekit::io::{any_frame_from_json, AnyFrame};
use framekit::replacement::{k1_limit, replacement_bracket};
use framekit::rip::rip_exhaustive;
use framekit::verify::{run_suite, SuiteConfig};
use framekit::{ConvergenceFailure, Error, Frame, Matrix, Partition, Scalar, Tolerances};
use num_complex::Complex64;

/// Result code of every `fk_*` call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A precondition of a certified bound does not hold (not tight, ε ≥ 1, ...).
    HypothesisViolated = 3,
    NotConverged = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Opaque frame handle.
pub struct FkFrame {
    inner: AnyFrame,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(FkStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::DidNotConverge { .. } => FkStatus::NotConverged,
            Error::NotTight { .. }
            | Error::NotUnitNorm { .. }
            | Error::BlockTooLarge { .. }
            | Error::RipReportMismatch { .. }
            | Error::NotRieszBasis { .. }
            | Error::EpsilonTooLarge(_)
            | Error::FormulaNegative(_)
            | Error::HypothesisViolated(_)
            | Error::DependentBlock { .. }
            | Error::NotAFusionFrame { .. } => FkStatus::HypothesisViolated,
            _ => FkStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(FkStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(FkStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            FkStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            FkStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn handle<'a>(p: *const FkFrame) -> Result<&'a AnyFrame, Fail> {
    p.as_ref().map(|f| &f.inner).ok_or_else(|| null("frame"))
}

unsafe fn string<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn indices<'a>(p: *const usize, len: usize, what: &str) -> Result<&'a [usize], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

fn give_string(s: String, dst: &mut *mut c_char) -> Result<(), Fail> {
    *dst = CString::new(s).map_err(|_| invalid("output contains NUL"))?.into_raw();
    Ok(())
}

fn give_frame(f: AnyFrame, dst: &mut *mut FkFrame) {
    *dst = Box::into_raw(Box::new(FkFrame { inner: f }));
}

/// Copies into `buf` (capacity `cap`) and reports the needed length; fails with
/// `BufferTooSmall` when `cap` is short, leaving `*len` set to the requirement.
fn fill<T: Copy>(src: &[T], buf: *mut T, cap: usize, len: &mut usize) -> Result<(), Fail> {
    *len = src.len();
    if src.len() > cap {
        return Err(Fail(FkStatus::BufferTooSmall, format!("need {} entries, buffer holds {cap}", src.len())));
    }
    if !src.is_empty() {
        if buf.is_null() {
            return Err(null("buffer"));
        }
        unsafe { ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len()) };
    }
    Ok(())
}

/// Version string of the library; static, never freed.
#[no_mangle]
pub extern "C" fn fk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message (NUL-terminated, truncated
/// to `cap`) into `buf`; returns the full message length excluding NUL, 0 if none.
///
/// # Safety
/// `buf` must point to `cap` writable bytes or be null with `cap == 0`.
#[no_mangle]
pub unsafe extern "C" fn fk_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            if cap > 0 && !buf.is_null() {
                *buf = 0;
            }
            return 0;
        };
        let bytes = msg.as_bytes();
        if cap > 0 && !buf.is_null() {
            let n = bytes.len().min(cap - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// # Safety
/// `s` must come from an `fk_*` string out-parameter, or be null.
#[no_mangle]
pub unsafe extern "C" fn fk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Real frame from `dim * count` column-major entries.
///
/// # Safety
/// `data` must point to `dim * count` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fk_frame_from_columns(dim: usize, count: usize, data: *const f64, out_frame: *mut *mut FkFrame) -> FkStatus {
    guard(|| {
        let dst = out(out_frame, "out_frame")?;
        let len = dim.checked_mul(count).ok_or_else(|| invalid("dim * count overflows"))?;
        if data.is_null() && len > 0 {
            return Err(null("data"));
        }
        let values = if len == 0 { Vec::new() } else { slice::from_raw_parts(data, len).to_vec() };
        let f = Frame::new(Matrix::from_col_major(dim, count, values)?)?;
        give_frame(f.into(), dst);
        Ok(())
    })
}

/// Harmonic unit-norm tight frame; `complex != 0` selects the complex build.
///
/// # Safety
/// `out_frame` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fk_frame_harmonic(dim: usize, count: usize, complex: i32, out_frame: *mut *mut FkFrame) -> FkStatus {
    guard(|| {
        let dst = out(out_frame, "out_frame")?;
        let f: AnyFrame = if complex != 0 {
            Frame::<Complex64>::harmonic(dim, count)?.into()
        } else {
            Frame::<f64>::harmonic(dim, count)?.into()
        };
        give_frame(f, dst);
        Ok(())
    })
}

/// # Safety
/// `out_frame` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fk_frame_orthonormal(dim: usize, out_frame: *mut *mut FkFrame) -> FkStatus {
    guard(|| {
        let dst = out(out_frame, "out_frame")?;
        give_frame(Frame::<f64>::orthonormal(dim)?.into(), dst);
        Ok(())
    })
}

/// Seeded real unit-norm tight frame; `iters == 0` uses the default cap.
///
/// # Safety
/// `out_frame` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fk_frame_random_tight(
    dim: usize,
    count: usize,
    seed: u64,
    iters: usize,
    tol: f64,
    out_frame: *mut *mut FkFrame,
) -> FkStatus {
    guard(|| {
        let dst = out(out_frame, "out_frame")?;
        let iters = (iters > 0).then_some(iters);
        match Frame::<f64>::random_unit_tight(dim, count, seed, iters, tol) {
            Ok(f) => {
                give_frame(f.into(), dst);
                Ok(())
            }
            Err(ConvergenceFailure::Invalid(e)) => Err(e.into()),
            Err(e) => Err(Fail(FkStatus::NotConverged, e.to_string())),
        }
    })
}

/// Parses a frame file (`{"dim", "field", "vectors"}`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_frame` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fk_frame_from_json(json: *const c_char, out_frame: *mut *mut FkFrame) -> FkStatus {
    guard(|| {
        let dst = out(out_frame, "out_frame")?;
        let v: serde_json::Value = serde_json::from_str(string(json, "json")?).map_err(|e| invalid(e.to_string()))?;
        give_frame(any_frame_from_json(&v, Tolerances::default())?, dst);
        Ok(())
    })
}

/// # Safety
/// `frame` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fk_frame_to_json(frame: *const FkFrame, out_json: *mut *mut c_char) -> FkStatus {
    guard(|| {
        let f = handle(frame)?;
        give_string(f.to_json().to_string(), out(out_json, "out_json")?)
    })
}

/// # Safety
/// `frame` must come from an `fk_frame_*` constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn fk_frame_free(frame: *mut FkFrame) {
    if !frame.is_null() {
        drop(Box::from_raw(frame));
    }
}

/// # Safety
/// `frame` must be a live handle; out-parameters must be writable.
#[no_mangle]
pub unsafe extern "C" fn fk_frame_shape(frame: *const FkFrame, dim: *mut usize, count: *mut usize, is_complex: *mut i32) -> FkStatus {
    guard(|| {
        let (d, c, z) = match handle(frame)? {
            AnyFrame::Real(f) => (f.dim(), f.count(), 0),
            AnyFrame::Complex(f) => (f.dim(), f.count(), 1),
        };
        *out(dim, "dim")? = d;
        *out(count, "count")? = c;
        *out(is_complex, "is_complex")? = z;
        Ok(())
    })
}

/// Optimal frame bounds.
///
/// # Safety
/// `frame` must be a live handle; out-parameters must be writable.
#[no_mangle]
pub unsafe extern "C" fn fk_frame_bounds(frame: *const FkFrame, lower: *mut f64, upper: *mut f64) -> FkStatus {
    guard(|| {
        let b = match handle(frame)? {
            AnyFrame::Real(f) => f.bounds(),
            AnyFrame::Complex(f) => f.bounds(),
        };
        *out(lower, "lower")? = b.lower;
        *out(upper, "upper")? = b.upper;
        Ok(())
    })
}

/// Exhaustive RIP constant at order `s`; the witness subset is copied into
/// `witness` (capacity `witness_cap`). `budget == 0` uses the default cap.
///
/// # Safety
/// `frame` must be a live handle; `witness` must hold `witness_cap` entries.
#[no_mangle]
pub unsafe extern "C" fn fk_rip_exhaustive(
    frame: *const FkFrame,
    s: usize,
    budget: u64,
    epsilon: *mut f64,
    witness: *mut usize,
    witness_cap: usize,
    witness_len: *mut usize,
) -> FkStatus {
    guard(|| {
        let budget = if budget == 0 { framekit::rip::DEFAULT_BUDGET } else { budget };
        let r = match handle(frame)? {
            AnyFrame::Real(f) => rip_exhaustive(f, s, budget)?,
            AnyFrame::Complex(f) => rip_exhaustive(f, s, budget)?,
        };
        *out(epsilon, "epsilon")? = r.epsilon_hat;
        fill(&r.witness, witness, witness_cap, out(witness_len, "witness_len")?)
    })
}

/// Near-tightness certificate of the block fusion frame for partition
/// `blocks` ("0,1;2,3;..."), using the exhaustive RIP constant at order `s`.
/// `*holds` is 1 when the measured bounds fall in the bracket. The full
/// report is returned as JSON when `out_json` is non-null.
///
/// # Safety
/// `frame` must be a live handle; `blocks` NUL-terminated; out-parameters writable or null where noted.
#[no_mangle]
pub unsafe extern "C" fn fk_certify_near_tight(
    frame: *const FkFrame,
    blocks: *const c_char,
    s: usize,
    holds: *mut i32,
    out_json: *mut *mut c_char,
) -> FkStatus {
    guard(|| {
        fn run<S: Scalar>(f: &Frame<S>, text: &str, s: usize) -> Result<framekit::fusion::NearTightnessReport, Error> {
            let p = Partition::parse(text, f.count())?;
            let rip = rip_exhaustive(f, s, framekit::rip::DEFAULT_BUDGET)?;
            certify_near_tight(f, &p, &rip)
        }
        let text = string(blocks, "blocks")?;
        let r = match handle(frame)? {
            AnyFrame::Real(f) => run(f, text, s)?,
            AnyFrame::Complex(f) => run(f, text, s)?,
        };
        *out(holds, "holds")? = r.holds as i32;
        if let Some(dst) = out_json.as_mut() {
            give_string(serde_json::to_string(&r).map_err(|e| invalid(e.to_string()))?, dst)?;
        }
        Ok(())
    })
}

/// Cosines of the principal angles between the spans of two index sets,
/// descending, copied into `cosines` (capacity `cap`).
///
/// # Safety
/// `frame` must be a live handle; index arrays must hold the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn fk_principal_cosines(
    frame: *const FkFrame,
    first: *const usize,
    first_len: usize,
    second: *const usize,
    second_len: usize,
    cosines: *mut f64,
    cap: usize,
    len: *mut usize,
) -> FkStatus {
    guard(|| {
        fn run<S: Scalar>(f: &Frame<S>, a: &[usize], b: &[usize]) -> Result<Vec<f64>, Error> {
            let tol = f.tolerances();
            for &i in a.iter().chain(b) {
                if i >= f.count() {
                    return Err(Error::IndexOutOfRange { index: i, count: f.count() });
                }
            }
            let u = Subspace::span(&f.vectors().select_columns(a), tol)?;
            let v = Subspace::span(&f.vectors().select_columns(b), tol)?;
            Ok(principal_angles(&u, &v, tol)?.cosines)
        }
        let a = indices(first, first_len, "first")?;
        let b = indices(second, second_len, "second")?;
        let c = match handle(frame)? {
            AnyFrame::Real(f) => run(f, a, b)?,
            AnyFrame::Complex(f) => run(f, a, b)?,
        };
        fill(&c, cosines, cap, out(len, "len")?)
    })
}

/// Largest number of replaced blocks the replacement bracket admits at `epsilon`.
///
/// # Safety
/// `limit` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fk_k1_limit(epsilon: f64, limit: *mut u64) -> FkStatus {
    guard(|| {
        *out(limit, "limit")? = k1_limit(epsilon)?;
        Ok(())
    })
}

/// Bracket on subset norms after replacing `k1` blocks of an ε-RIP frame.
///
/// # Safety
/// `lower` and `upper` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fk_replacement_bracket(epsilon: f64, k1: usize, lower: *mut f64, upper: *mut f64) -> FkStatus {
    guard(|| {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::EpsilonOutOfRange(epsilon).into());
        }
        let (lo, hi) = replacement_bracket(epsilon, k1);
        *out(lower, "lower")? = lo;
        *out(upper, "upper")? = hi;
        Ok(())
    })
}

/// Runs the certification suite. `config` is a JSON suite config or null for
/// defaults; `*passed` is 1 when every clause holds. The report goes to
/// `out_json` when non-null.
///
/// # Safety
/// `config` must be NUL-terminated or null; `passed` writable.
#[no_mangle]
pub unsafe extern "C" fn fk_verify_all(config: *const c_char, passed: *mut i32, out_json: *mut *mut c_char) -> FkStatus {
    guard(|| {
        let cfg: SuiteConfig = if config.is_null() {
            SuiteConfig::default()
        } else {
            serde_json::from_str(string(config, "config")?).map_err(|e| invalid(e.to_string()))?
        };
        let r = run_suite(&cfg)?;
        *out(passed, "passed")? = r.passed as i32;
        if let Some(dst) = out_json.as_mut() {
            give_string(serde_json::to_string(&r).map_err(|e| invalid(e.to_string()))?, dst)?;
        }
        Ok(())
    })
}
