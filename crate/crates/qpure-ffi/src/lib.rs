//! C ABI for the qpure library.
//!
//! States and channels are exposed as opaque handles created and destroyed
//! by this library; every fallible call returns a [`QpureStatus`] and writes
//! results through out-pointers. Complex matrices cross the boundary as
//! interleaved `re, im` doubles in row-major order.

use std::panic::{catch_unwind, AssertUnwindSafe};

use qpure::channels::KrausChannel;
use qpure::geometry;
use qpure::matcore::{ComplexMatrix, Tolerances};
use qpure::purify;
use qpure::setanalysis::{self, StateSet, TwoStateVerdict};
use qpure::states::{self, DensityOperator};
use qpure::{Complex64, Error};

/// Opaque handle to a density operator.
pub struct QpureState {
    inner: DensityOperator,
}

/// Opaque handle to a Kraus channel.
pub struct QpureChannel {
    inner: KrausChannel,
}

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpureStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    BufferTooSmall = 4,
    Internal = 5,
}

fn status_of(err: &Error) -> QpureStatus {
    match err {
        Error::DimensionMismatch { .. } => QpureStatus::DimensionMismatch,
        Error::Io(_) | Error::Json(_) => QpureStatus::Internal,
        _ => QpureStatus::InvalidArgument,
    }
}

fn guarded(f: impl FnOnce() -> QpureStatus) -> QpureStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => QpureStatus::Internal,
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> QpureStatus {
    if out.is_null() {
        return QpureStatus::NullPointer;
    }
    unsafe { *out = value };
    QpureStatus::Ok
}

unsafe fn state_ref<'a>(ptr: *const QpureState) -> Option<&'a DensityOperator> {
    unsafe { ptr.as_ref().map(|s| &s.inner) }
}

unsafe fn channel_ref<'a>(ptr: *const QpureChannel) -> Option<&'a KrausChannel> {
    unsafe { ptr.as_ref().map(|c| &c.inner) }
}

fn matrix_into(buf: &mut [f64], m: &ComplexMatrix) {
    for (k, z) in m.entries().iter().enumerate() {
        buf[2 * k] = z.re;
        buf[2 * k + 1] = z.im;
    }
}

/// Creates a state from `2 * dim * dim` interleaved doubles (row-major
/// `re, im` pairs). Fails unless the matrix is a valid density operator.
///
/// # Safety
/// `entries` must point to `2 * dim * dim` readable doubles and `out` must
/// be a valid location for a handle pointer.
#[no_mangle]
pub unsafe extern "C" fn qpure_state_new(
    dim: usize,
    entries: *const f64,
    out: *mut *mut QpureState,
) -> QpureStatus {
    if entries.is_null() || out.is_null() {
        return QpureStatus::NullPointer;
    }
    guarded(|| {
        let raw = unsafe { std::slice::from_raw_parts(entries, 2 * dim * dim) };
        let data: Vec<Complex64> = raw
            .chunks_exact(2)
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        let matrix = match ComplexMatrix::new(dim, dim, data) {
            Ok(m) => m,
            Err(e) => return status_of(&e),
        };
        match DensityOperator::new(matrix, &Tolerances::default()) {
            Ok(rho) => unsafe {
                write_out(out, Box::into_raw(Box::new(QpureState { inner: rho })))
            },
            Err(e) => status_of(&e),
        }
    })
}

/// Seeded random density operator of the given rank (Ginibre recipe).
///
/// # Safety
/// `out` must be a valid location for a handle pointer.
#[no_mangle]
pub unsafe extern "C" fn qpure_state_random(
    dim: usize,
    rank: usize,
    seed: u64,
    out: *mut *mut QpureState,
) -> QpureStatus {
    if out.is_null() {
        return QpureStatus::NullPointer;
    }
    guarded(|| match states::random_density(dim, rank, seed) {
        Ok(rho) => unsafe { write_out(out, Box::into_raw(Box::new(QpureState { inner: rho }))) },
        Err(e) => status_of(&e),
    })
}

/// Reference counter-example pair on dimension 4 for `0 < p < 1/2`.
///
/// # Safety
/// `out1` and `out2` must be valid locations for handle pointers.
#[no_mangle]
pub unsafe extern "C" fn qpure_counter_example(
    p: f64,
    out1: *mut *mut QpureState,
    out2: *mut *mut QpureState,
) -> QpureStatus {
    if out1.is_null() || out2.is_null() {
        return QpureStatus::NullPointer;
    }
    guarded(|| match setanalysis::counter_example(p) {
        Ok((r1, r2)) => {
            unsafe {
                *out1 = Box::into_raw(Box::new(QpureState { inner: r1 }));
                *out2 = Box::into_raw(Box::new(QpureState { inner: r2 }));
            }
            QpureStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Releases a state handle. Null is ignored.
///
/// # Safety
/// `state` must be a pointer previously returned by this library and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn qpure_state_free(state: *mut QpureState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Dimension of the state's space; 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qpure_state_dim(state: *const QpureState) -> usize {
    unsafe { state_ref(state) }.map_or(0, |s| s.dim())
}

/// Copies the density matrix into `2 * dim * dim` interleaved doubles.
///
/// # Safety
/// `buf` must have room for `2 * dim * dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn qpure_state_entries(
    state: *const QpureState,
    buf: *mut f64,
    buf_len: usize,
) -> QpureStatus {
    let Some(rho) = (unsafe { state_ref(state) }) else {
        return QpureStatus::NullPointer;
    };
    if buf.is_null() {
        return QpureStatus::NullPointer;
    }
    let needed = 2 * rho.dim() * rho.dim();
    if buf_len < needed {
        return QpureStatus::BufferTooSmall;
    }
    let slice = unsafe { std::slice::from_raw_parts_mut(buf, needed) };
    matrix_into(slice, rho.matrix());
    QpureStatus::Ok
}

/// Purity `tr(rho^2)`.
///
/// # Safety
/// `out` must be writable; `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qpure_purity(state: *const QpureState, out: *mut f64) -> QpureStatus {
    let Some(rho) = (unsafe { state_ref(state) }) else {
        return QpureStatus::NullPointer;
    };
    unsafe { write_out(out, states::purity(rho)) }
}

fn pair_scalar(
    a: *const QpureState,
    b: *const QpureState,
    out: *mut f64,
    call: impl Fn(&DensityOperator, &DensityOperator) -> qpure::Result<f64>,
) -> QpureStatus {
    let (Some(x), Some(y)) = (unsafe { state_ref(a) }, unsafe { state_ref(b) }) else {
        return QpureStatus::NullPointer;
    };
    guarded(|| match call(x, y) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => status_of(&e),
    })
}

/// Trace distance of two states.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qpure_trace_distance(
    a: *const QpureState,
    b: *const QpureState,
    out: *mut f64,
) -> QpureStatus {
    pair_scalar(a, b, out, states::trace_distance)
}

/// Worst-case distinguishability of two states.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qpure_wcd(
    a: *const QpureState,
    b: *const QpureState,
    out: *mut f64,
) -> QpureStatus {
    pair_scalar(a, b, out, geometry::wcd)
}

/// Minimum-error discrimination probability `(1 + D) / 2`.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qpure_p_med(
    a: *const QpureState,
    b: *const QpureState,
    out: *mut f64,
) -> QpureStatus {
    pair_scalar(a, b, out, geometry::p_med)
}

/// Worst-case discrimination probability `(1 + wcd) / 2`.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qpure_p_wcd(
    a: *const QpureState,
    b: *const QpureState,
    out: *mut f64,
) -> QpureStatus {
    pair_scalar(a, b, out, geometry::p_wcd)
}

/// Jordan angles between the supports, ascending. Writes at most `buf_len`
/// angles and reports the total count.
///
/// # Safety
/// `buf` must have room for `buf_len` doubles; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qpure_jordan_angles(
    a: *const QpureState,
    b: *const QpureState,
    buf: *mut f64,
    buf_len: usize,
    written: *mut usize,
) -> QpureStatus {
    let (Some(x), Some(y)) = (unsafe { state_ref(a) }, unsafe { state_ref(b) }) else {
        return QpureStatus::NullPointer;
    };
    if buf.is_null() || written.is_null() {
        return QpureStatus::NullPointer;
    }
    guarded(|| {
        let tol = Tolerances::default();
        let jd = match geometry::jordan(&states::support(x, &tol), &states::support(y, &tol)) {
            Ok(jd) => jd,
            Err(e) => return status_of(&e),
        };
        let angles = jd.angles();
        if buf_len < angles.len() {
            unsafe { *written = angles.len() };
            return QpureStatus::BufferTooSmall;
        }
        let slice = unsafe { std::slice::from_raw_parts_mut(buf, angles.len()) };
        slice.copy_from_slice(angles);
        unsafe { *written = angles.len() };
        QpureStatus::Ok
    })
}

/// Exact two-state criterion: writes true when the pair is essentially pure
/// or orthogonal (`wcd == D`).
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qpure_two_state_criterion(
    a: *const QpureState,
    b: *const QpureState,
    out: *mut bool,
) -> QpureStatus {
    let (Some(x), Some(y)) = (unsafe { state_ref(a) }, unsafe { state_ref(b) }) else {
        return QpureStatus::NullPointer;
    };
    guarded(|| match setanalysis::two_state_criterion(x, y) {
        Ok(v) => unsafe { write_out(out, v == TwoStateVerdict::EssentiallyPureOrOrthogonal) },
        Err(e) => status_of(&e),
    })
}

/// Both sides of the product-state trace distance bound.
///
/// # Safety
/// All state arguments must be live handles; `lhs` and `rhs` writable.
#[no_mangle]
pub unsafe extern "C" fn qpure_product_bound(
    rho1: *const QpureState,
    rho2: *const QpureState,
    sigma1: *const QpureState,
    sigma2: *const QpureState,
    lhs: *mut f64,
    rhs: *mut f64,
) -> QpureStatus {
    let (Some(r1), Some(r2)) = (unsafe { state_ref(rho1) }, unsafe { state_ref(rho2) }) else {
        return QpureStatus::NullPointer;
    };
    let (Some(s1), Some(s2)) = (unsafe { state_ref(sigma1) }, unsafe { state_ref(sigma2) }) else {
        return QpureStatus::NullPointer;
    };
    if lhs.is_null() || rhs.is_null() {
        return QpureStatus::NullPointer;
    }
    guarded(|| match purify::product_bound(r1, r2, s1, s2) {
        Ok((l, r)) => {
            unsafe {
                *lhs = l;
                *rhs = r;
            }
            QpureStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Feasibility of unambiguous discrimination for an array of state handles.
///
/// # Safety
/// `states` must point to `n` live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qpure_usd_feasible(
    states_ptr: *const *const QpureState,
    n: usize,
    out: *mut bool,
) -> QpureStatus {
    if states_ptr.is_null() || out.is_null() {
        return QpureStatus::NullPointer;
    }
    guarded(|| {
        let handles = unsafe { std::slice::from_raw_parts(states_ptr, n) };
        let mut owned = Vec::with_capacity(n);
        for &h in handles {
            match unsafe { state_ref(h) } {
                Some(s) => owned.push(s.clone()),
                None => return QpureStatus::NullPointer,
            }
        }
        let set = match StateSet::new(owned) {
            Ok(s) => s,
            Err(e) => return status_of(&e),
        };
        match setanalysis::usd_feasible(&set) {
            Ok(v) => unsafe { write_out(out, v) },
            Err(e) => status_of(&e),
        }
    })
}

/// Builds the optimal purifying channel of two states, returning the full
/// composite channel and the achieved output distance.
///
/// # Safety
/// `a` and `b` must be live handles; `channel` and `achieved` writable.
#[no_mangle]
pub unsafe extern "C" fn qpure_optimal_purifier(
    a: *const QpureState,
    b: *const QpureState,
    channel: *mut *mut QpureChannel,
    achieved: *mut f64,
) -> QpureStatus {
    let (Some(x), Some(y)) = (unsafe { state_ref(a) }, unsafe { state_ref(b) }) else {
        return QpureStatus::NullPointer;
    };
    if channel.is_null() || achieved.is_null() {
        return QpureStatus::NullPointer;
    }
    guarded(|| match purify::optimal_purifier(x, y) {
        Ok(bundle) => {
            unsafe {
                *achieved = bundle.achieved_distance;
                *channel = Box::into_raw(Box::new(QpureChannel { inner: bundle.full }));
            }
            QpureStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Releases a channel handle. Null is ignored.
///
/// # Safety
/// `channel` must be a pointer previously returned by this library and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn qpure_channel_free(channel: *mut QpureChannel) {
    if !channel.is_null() {
        drop(unsafe { Box::from_raw(channel) });
    }
}

/// Input dimension; 0 for a null handle.
///
/// # Safety
/// `channel` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qpure_channel_dim_in(channel: *const QpureChannel) -> usize {
    unsafe { channel_ref(channel) }.map_or(0, |c| c.dim_in())
}

/// Output dimension; 0 for a null handle.
///
/// # Safety
/// `channel` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qpure_channel_dim_out(channel: *const QpureChannel) -> usize {
    unsafe { channel_ref(channel) }.map_or(0, |c| c.dim_out())
}

/// Number of Kraus operators; 0 for a null handle.
///
/// # Safety
/// `channel` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qpure_channel_kraus_count(channel: *const QpureChannel) -> usize {
    unsafe { channel_ref(channel) }.map_or(0, |c| c.kraus().len())
}

/// Copies Kraus operator `index` into `2 * dim_out * dim_in` interleaved
/// doubles.
///
/// # Safety
/// `buf` must have room for `buf_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qpure_channel_kraus_entries(
    channel: *const QpureChannel,
    index: usize,
    buf: *mut f64,
    buf_len: usize,
) -> QpureStatus {
    let Some(ch) = (unsafe { channel_ref(channel) }) else {
        return QpureStatus::NullPointer;
    };
    if buf.is_null() {
        return QpureStatus::NullPointer;
    }
    let Some(k) = ch.kraus().get(index) else {
        return QpureStatus::InvalidArgument;
    };
    let needed = 2 * k.rows() * k.cols();
    if buf_len < needed {
        return QpureStatus::BufferTooSmall;
    }
    let slice = unsafe { std::slice::from_raw_parts_mut(buf, needed) };
    matrix_into(slice, k);
    QpureStatus::Ok
}

/// Completeness check of the channel against its trace-preservation flag.
///
/// # Safety
/// `ok` and `max_deviation` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qpure_channel_validate(
    channel: *const QpureChannel,
    ok: *mut bool,
    max_deviation: *mut f64,
) -> QpureStatus {
    let Some(ch) = (unsafe { channel_ref(channel) }) else {
        return QpureStatus::NullPointer;
    };
    if ok.is_null() || max_deviation.is_null() {
        return QpureStatus::NullPointer;
    }
    guarded(|| match ch.validate(&Tolerances::default()) {
        Ok(report) => {
            unsafe {
                *ok = report.ok;
                *max_deviation = report.max_deviation;
            }
            QpureStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Applies a trace-preserving channel to a state, producing a new state
/// handle.
///
/// # Safety
/// `channel` and `state` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qpure_channel_apply(
    channel: *const QpureChannel,
    state: *const QpureState,
    out: *mut *mut QpureState,
) -> QpureStatus {
    let (Some(ch), Some(rho)) = (unsafe { channel_ref(channel) }, unsafe { state_ref(state) })
    else {
        return QpureStatus::NullPointer;
    };
    if out.is_null() {
        return QpureStatus::NullPointer;
    }
    guarded(|| match ch.apply_density(rho, &Tolerances::default()) {
        Ok(result) => unsafe {
            write_out(out, Box::into_raw(Box::new(QpureState { inner: result })))
        },
        Err(e) => status_of(&e),
    })
}
