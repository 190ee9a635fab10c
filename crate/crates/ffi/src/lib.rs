//! C ABI over `solti`.
//!
//! Systems and transfer matrices are opaque handles created by this library
//! and released with their `*_free` function. Every fallible call returns a
//! [`SoltiStatus`]; on failure [`solti_last_error_message`] describes it.
//! Matrices cross the boundary as row-major `double` arrays. Buffer-filling
//! calls take a capacity and report the size they need, so callers can pass
//! `NULL` first to query it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use solti::analysis::{controllability_matrix, is_controllable, is_observable, observability_matrix};
use solti::num_complex::Complex64;
use solti::trajectory::{reconstruct_initial_state, simulate_discrete, synthesize_control};
use solti::transfer::{evaluate, transfer_function, transfer_function_general, RationalTransferMatrix};
use solti::{dual_system, Error, RealMatrix, SecondOrderSystem, StateSnapshot, TimeKind};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoltiStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Dimension = 3,
    NonFinite = 4,
    Parameter = 5,
    NoInput = 6,
    Unobservable = 7,
    InconsistentData = 8,
    UncontrollableTarget = 9,
    Unsupported = 10,
    Numerical = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoltiKind {
    Discrete = 0,
    Continuous = 1,
}

/// Outcome of one rank criterion.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SoltiRankReport {
    pub rank: usize,
    pub required_rank: usize,
    pub verdict: bool,
}

/// Opaque second-order system.
pub struct SoltiSystem {
    inner: SecondOrderSystem,
}

/// Opaque rational transfer matrix `H(s)`.
pub struct SoltiTransfer {
    inner: RationalTransferMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure {
    status: SoltiStatus,
    message: String,
}

impl Failure {
    fn new(status: SoltiStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }

    fn null(what: &str) -> Self {
        Self::new(SoltiStatus::NullPointer, format!("{what} is NULL"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) => SoltiStatus::Parse,
            Error::Dimension(_) | Error::KindMismatch { .. } | Error::InsufficientSamples(_) => SoltiStatus::Dimension,
            Error::NonFinite(_) => SoltiStatus::NonFinite,
            Error::Parameter(_) => SoltiStatus::Parameter,
            Error::NoInput => SoltiStatus::NoInput,
            Error::Unobservable { .. } => SoltiStatus::Unobservable,
            Error::InconsistentData { .. } => SoltiStatus::InconsistentData,
            Error::UncontrollableTarget { .. } => SoltiStatus::UncontrollableTarget,
            Error::Unsupported(_) | Error::ZeroTransfer => SoltiStatus::Unsupported,
            Error::DegeneratePolynomial(_) | Error::EigenFailure | Error::PoleEvaluation(_) => SoltiStatus::Numerical,
        };
        Self::new(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

/// Runs `body`, records any failure and converts panics into `Panic`.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SoltiStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            SoltiStatus::Ok
        }
        Ok(Err(f)) => {
            set_last_error(&f.message);
            f.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("internal panic: {msg}"));
            SoltiStatus::Panic
        }
    }
}

unsafe fn system_ref<'a>(sys: *const SoltiSystem) -> Result<&'a SecondOrderSystem, Failure> {
    sys.as_ref().map(|s| &s.inner).ok_or_else(|| Failure::null("system"))
}

unsafe fn transfer_ref<'a>(h: *const SoltiTransfer) -> Result<&'a RationalTransferMatrix, Failure> {
    h.as_ref().map(|t| &t.inner).ok_or_else(|| Failure::null("transfer"))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::null(what))
}

/// `len` doubles from `p`; a zero-length read accepts `NULL`.
unsafe fn slice_in<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn rows_in(p: *const f64, rows: usize, cols: usize, what: &str) -> Result<Vec<Vec<f64>>, Failure> {
    let flat = slice_in(p, rows * cols, what)?;
    Ok((0..rows).map(|i| flat[i * cols..(i + 1) * cols].to_vec()).collect())
}

/// Copies `data` into `buf` when it fits. `needed` always receives the length.
unsafe fn copy_out(data: &[f64], buf: *mut f64, capacity: usize, needed: *mut usize) -> Result<(), Failure> {
    if let Some(n) = needed.as_mut() {
        *n = data.len();
    }
    if buf.is_null() || capacity < data.len() {
        return Err(Failure::new(
            SoltiStatus::BufferTooSmall,
            format!("buffer holds {capacity} values, {} needed", data.len()),
        ));
    }
    ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len());
    Ok(())
}

unsafe fn copy_matrix(
    m: &RealMatrix,
    buf: *mut f64,
    capacity: usize,
    rows: *mut usize,
    cols: *mut usize,
) -> Result<(), Failure> {
    if let Some(r) = rows.as_mut() {
        *r = m.nrows();
    }
    if let Some(c) = cols.as_mut() {
        *c = m.ncols();
    }
    copy_out(&m.to_row_major(), buf, capacity, ptr::null_mut())
}

fn boxed_system(sys: SecondOrderSystem) -> *mut SoltiSystem {
    Box::into_raw(Box::new(SoltiSystem { inner: sys }))
}

/// Message for the most recent failure on this thread, or "" after a success.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn solti_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses a system JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn solti_system_from_json(json: *const c_char, out: *mut *mut SoltiSystem) -> SoltiStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if json.is_null() {
            return Err(Failure::null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| Failure::new(SoltiStatus::Parse, "json is not valid UTF-8"))?;
        *out = boxed_system(solti::load_system(text)?);
        Ok(())
    })
}

/// Builds a system from row-major arrays: `a0`, `a1` are n x n, `b` is n x r
/// (may be NULL when r = 0), `c` is p x n. `kind` is a `SoltiKind` value.
///
/// # Safety
/// Each array must hold the stated number of doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn solti_system_new(
    kind: u32,
    n: usize,
    r: usize,
    p: usize,
    a0: *const f64,
    a1: *const f64,
    b: *const f64,
    c: *const f64,
    out: *mut *mut SoltiSystem,
) -> SoltiStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let kind = match kind {
            k if k == SoltiKind::Discrete as u32 => TimeKind::Discrete,
            k if k == SoltiKind::Continuous as u32 => TimeKind::Continuous,
            other => return Err(Failure::new(SoltiStatus::Parameter, format!("unknown system kind {other}"))),
        };
        let a0 = RealMatrix::new(n, n, slice_in(a0, n * n, "a0")?)?;
        let a1 = RealMatrix::new(n, n, slice_in(a1, n * n, "a1")?)?;
        let b = RealMatrix::new(n, r, slice_in(b, n * r, "b")?)?;
        let c = RealMatrix::new(p, n, slice_in(c, p * n, "c")?)?;
        *out = boxed_system(SecondOrderSystem::new(kind, a0, a1, b, c)?);
        Ok(())
    })
}

/// # Safety
/// `sys` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn solti_system_free(sys: *mut SoltiSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// # Safety
/// `sys` must be a live handle; any of the outputs may be NULL.
#[no_mangle]
pub unsafe extern "C" fn solti_system_dims(
    sys: *const SoltiSystem,
    kind: *mut SoltiKind,
    n: *mut usize,
    r: *mut usize,
    p: *mut usize,
) -> SoltiStatus {
    guard(|| {
        let s = system_ref(sys)?;
        if let Some(k) = kind.as_mut() {
            *k = match s.kind {
                TimeKind::Discrete => SoltiKind::Discrete,
                TimeKind::Continuous => SoltiKind::Continuous,
            };
        }
        for (slot, v) in [(n, s.n), (r, s.r), (p, s.p)] {
            if let Some(x) = slot.as_mut() {
                *x = v;
            }
        }
        Ok(())
    })
}

/// Serializes a system; release the string with [`solti_string_free`].
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn solti_system_to_json(sys: *const SoltiSystem, out: *mut *mut c_char) -> SoltiStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let text = system_ref(sys)?.to_json();
        *out = CString::new(text).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn solti_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Dual system `(A0ᵀ, -A1ᵀ, Cᵀ, Bᵀ)`.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn solti_system_dual(sys: *const SoltiSystem, out: *mut *mut SoltiSystem) -> SoltiStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let s = system_ref(sys)?;
        if s.r == 0 {
            return Err(Error::NoInput.into());
        }
        *out = boxed_system(dual_system(s));
        Ok(())
    })
}

/// Observability rank test over the 2n-block matrix.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn solti_is_observable(
    sys: *const SoltiSystem,
    rank_tol: f64,
    out: *mut SoltiRankReport,
) -> SoltiStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let rep = is_observable(system_ref(sys)?, rank_tol);
        *out = SoltiRankReport {
            rank: rep.computed_rank,
            required_rank: rep.required_rank,
            verdict: rep.verdict,
        };
        Ok(())
    })
}

/// Controllability rank test over `[M0 | ... | M(n-1)]`.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn solti_is_controllable(
    sys: *const SoltiSystem,
    rank_tol: f64,
    out: *mut SoltiRankReport,
) -> SoltiStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let rep = is_controllable(system_ref(sys)?, rank_tol)?;
        *out = SoltiRankReport {
            rank: rep.computed_rank,
            required_rank: rep.required_rank,
            verdict: rep.verdict,
        };
        Ok(())
    })
}

/// Observability matrix with `block_rows` block rows (2n for the criterion).
///
/// # Safety
/// `sys` must be a live handle; `buf` must hold `capacity` doubles or be NULL.
#[no_mangle]
pub unsafe extern "C" fn solti_observability_matrix(
    sys: *const SoltiSystem,
    block_rows: usize,
    buf: *mut f64,
    capacity: usize,
    rows: *mut usize,
    cols: *mut usize,
) -> SoltiStatus {
    guard(|| {
        let m = observability_matrix(system_ref(sys)?, block_rows)?;
        copy_matrix(&m, buf, capacity, rows, cols)
    })
}

/// Controllability matrix with `blocks` column blocks (n for the criterion).
///
/// # Safety
/// `sys` must be a live handle; `buf` must hold `capacity` doubles or be NULL.
#[no_mangle]
pub unsafe extern "C" fn solti_controllability_matrix(
    sys: *const SoltiSystem,
    blocks: usize,
    buf: *mut f64,
    capacity: usize,
    rows: *mut usize,
    cols: *mut usize,
) -> SoltiStatus {
    guard(|| {
        let m = controllability_matrix(system_ref(sys)?, blocks)?;
        copy_matrix(&m, buf, capacity, rows, cols)
    })
}

/// `H(s)`, using the position-only resolvent when A1 = 0 and the companion
/// lift otherwise.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn solti_transfer_function(sys: *const SoltiSystem, out: *mut *mut SoltiTransfer) -> SoltiStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let s = system_ref(sys)?;
        let h = if s.a1.is_zero() {
            transfer_function(s)?
        } else {
            transfer_function_general(s)?
        };
        *out = Box::into_raw(Box::new(SoltiTransfer { inner: h }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn solti_transfer_free(h: *mut SoltiTransfer) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle; outputs may be NULL.
#[no_mangle]
pub unsafe extern "C" fn solti_transfer_dims(
    h: *const SoltiTransfer,
    outputs: *mut usize,
    inputs: *mut usize,
) -> SoltiStatus {
    guard(|| {
        let t = transfer_ref(h)?;
        if let Some(o) = outputs.as_mut() {
            *o = t.outputs();
        }
        if let Some(i) = inputs.as_mut() {
            *i = t.inputs();
        }
        Ok(())
    })
}

/// Denominator coefficients, ascending powers of s.
///
/// # Safety
/// `h` must be a live handle; `buf` must hold `capacity` doubles or be NULL.
#[no_mangle]
pub unsafe extern "C" fn solti_transfer_denominator(
    h: *const SoltiTransfer,
    buf: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> SoltiStatus {
    guard(|| copy_out(transfer_ref(h)?.denominator.coeffs(), buf, capacity, len))
}

/// Numerator of entry (i, j), ascending powers of s. A zero entry has length 0.
///
/// # Safety
/// `h` must be a live handle; `buf` must hold `capacity` doubles or be NULL.
#[no_mangle]
pub unsafe extern "C" fn solti_transfer_numerator(
    h: *const SoltiTransfer,
    i: usize,
    j: usize,
    buf: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> SoltiStatus {
    guard(|| {
        let t = transfer_ref(h)?;
        if i >= t.outputs() || j >= t.inputs() {
            return Err(Failure::new(
                SoltiStatus::Dimension,
                format!("entry ({i}, {j}) outside {}x{}", t.outputs(), t.inputs()),
            ));
        }
        copy_out(t.numerators[i][j].coeffs(), buf, capacity, len)
    })
}

/// `H(s)` at `s = re + i·im`, written row-major into `out_re` / `out_im`
/// (outputs x inputs values each).
///
/// # Safety
/// `h` must be a live handle; both buffers must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn solti_transfer_evaluate(
    h: *const SoltiTransfer,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    capacity: usize,
) -> SoltiStatus {
    guard(|| {
        let values = evaluate(transfer_ref(h)?, Complex64::new(re, im))?;
        let flat: Vec<Complex64> = values.into_iter().flatten().collect();
        let reals: Vec<f64> = flat.iter().map(|z| z.re).collect();
        let imags: Vec<f64> = flat.iter().map(|z| z.im).collect();
        copy_out(&reals, out_re, capacity, ptr::null_mut())?;
        copy_out(&imags, out_im, capacity, ptr::null_mut())
    })
}

/// Runs the discrete recursion for `steps` steps. `inputs` holds
/// `(steps - 1) x r` values (NULL means zero input); `states` receives
/// `(steps + 1) x n` values.
///
/// # Safety
/// Arrays must hold the stated number of doubles.
#[no_mangle]
pub unsafe extern "C" fn solti_simulate(
    sys: *const SoltiSystem,
    x0: *const f64,
    x1: *const f64,
    inputs: *const f64,
    steps: usize,
    states: *mut f64,
    capacity: usize,
) -> SoltiStatus {
    guard(|| {
        let s = system_ref(sys)?;
        let snap = StateSnapshot::new(slice_in(x0, s.n, "x0")?.to_vec(), slice_in(x1, s.n, "x1")?.to_vec())?;
        let count = steps.saturating_sub(1);
        let u = if inputs.is_null() {
            vec![vec![0.0; s.r]; count]
        } else {
            rows_in(inputs, count, s.r, "inputs")?
        };
        let traj = simulate_discrete(s, &snap, &u, steps)?;
        let flat: Vec<f64> = traj.states.into_iter().flatten().collect();
        copy_out(&flat, states, capacity, ptr::null_mut())
    })
}

/// Recovers `(x0, x1)` from `2n x p` output samples and `(2n - 2) x r` input
/// samples (NULL means zero input). `x0`, `x1` receive n values each;
/// `residual` may be NULL.
///
/// # Safety
/// Arrays must hold the stated number of doubles.
#[no_mangle]
pub unsafe extern "C" fn solti_reconstruct(
    sys: *const SoltiSystem,
    outputs: *const f64,
    inputs: *const f64,
    rank_tol: f64,
    x0: *mut f64,
    x1: *mut f64,
    residual: *mut f64,
) -> SoltiStatus {
    guard(|| {
        let s = system_ref(sys)?;
        let n = s.n;
        let y = rows_in(outputs, 2 * n, s.p, "outputs")?;
        let count = if s.r == 0 { 0 } else { 2 * n - 2 };
        let u = if inputs.is_null() {
            vec![vec![0.0; s.r]; count]
        } else {
            rows_in(inputs, count, s.r, "inputs")?
        };
        let rec = reconstruct_initial_state(s, &y, &u, rank_tol)?;
        copy_out(&rec.snapshot.x0, x0, n, ptr::null_mut())?;
        copy_out(&rec.snapshot.x1, x1, n, ptr::null_mut())?;
        if let Some(r) = residual.as_mut() {
            *r = rec.residual_norm;
        }
        Ok(())
    })
}

/// Minimum-norm inputs `u0..u(n-1)` putting `x(n+1)` at `target`; `inputs`
/// receives `n x r` values in time order.
///
/// # Safety
/// Arrays must hold the stated number of doubles.
#[no_mangle]
pub unsafe extern "C" fn solti_steer(
    sys: *const SoltiSystem,
    x0: *const f64,
    x1: *const f64,
    target: *const f64,
    rank_tol: f64,
    inputs: *mut f64,
    capacity: usize,
) -> SoltiStatus {
    guard(|| {
        let s = system_ref(sys)?;
        let snap = StateSnapshot::new(slice_in(x0, s.n, "x0")?.to_vec(), slice_in(x1, s.n, "x1")?.to_vec())?;
        let target = slice_in(target, s.n, "target")?;
        let u = synthesize_control(s, &snap, target, rank_tol)?;
        let flat: Vec<f64> = u.into_iter().flatten().collect();
        copy_out(&flat, inputs, capacity, ptr::null_mut())
    })
}
