//! C interface to the `chainpair` solvers.
//!
//! Chains and solutions are opaque handles created and freed through this
//! API. Every fallible function returns a [`CpStatus`]; on failure
//! [`cp_last_error_message`] describes the problem. Indices are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::{Duration, Instant};

use chainpair::{
    cps3f_decision, cps3f_min_dp, discrete_frechet, frechet_decision, one_sided_cps3f_min, simplify_min_delta,
    simplify_min_k, wcps3f_decision, wcps3f_min, Chain, CpsError, CpsParams, EndpointMode, GeometryError, Point,
    Simplification,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    /// No simplification pair meets the tolerances.
    NoSolution = 1,
    /// The hop cap was too small to decide optimality.
    RCapInconclusive = 2,
    /// Reconstruction would exceed the cell budget.
    MemoryGuard = 3,
    InvalidArgument = 4,
    TooLarge = 5,
    WeightOverflow = 6,
    Timeout = 7,
    /// Bad coordinates, weights or mismatched dimensions.
    Geometry = 8,
    NullPointer = 9,
    /// A Rust panic was caught at the boundary.
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpEndpointMode {
    FreeDogs = 0,
    Anchored = 1,
}

/// Tolerances and options for the two-chain solvers.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CpParams {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub endpoint_mode: CpEndpointMode,
    /// Hop cap; 0 means none.
    pub r_cap: usize,
    /// Wall-clock limit in seconds; 0 or less means none.
    pub timeout_seconds: f64,
}

/// Opaque chain handle.
pub struct CpChain(Chain);

/// Opaque solution handle.
pub struct CpSolution {
    k_star: usize,
    weight: f64,
    peak_cells: u64,
    a_indices: Option<Vec<usize>>,
    b_indices: Option<Vec<usize>>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

struct Failure(CpStatus, String);

impl From<CpsError> for Failure {
    fn from(e: CpsError) -> Self {
        let status = match &e {
            CpsError::NoSolution => CpStatus::NoSolution,
            CpsError::RCapInconclusive { .. } => CpStatus::RCapInconclusive,
            CpsError::MemoryGuard { .. } => CpStatus::MemoryGuard,
            CpsError::InvalidParameter(_) => CpStatus::InvalidArgument,
            CpsError::TooLarge(_) => CpStatus::TooLarge,
            CpsError::WeightOverflow => CpStatus::WeightOverflow,
            CpsError::Timeout => CpStatus::Timeout,
            CpsError::Geometry(_) => CpStatus::Geometry,
        };
        Failure(status, e.to_string())
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Failure(CpStatus::Geometry, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CpStatus::NullPointer, format!("{what} is null"))
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(CpStatus::InvalidArgument, message.into())
}

/// Runs `body`, recording errors and catching panics.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CpStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {message}"));
            CpStatus::Panic
        }
    }
}

unsafe fn chain_ref<'a>(chain: *const CpChain, what: &str) -> Result<&'a Chain, Failure> {
    chain.as_ref().map(|c| &c.0).ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn params_from(params: *const CpParams) -> Result<CpsParams, Failure> {
    let p = params.as_ref().ok_or_else(|| null("params"))?;
    let mode = match p.endpoint_mode {
        CpEndpointMode::FreeDogs => EndpointMode::FreeDogs,
        CpEndpointMode::Anchored => EndpointMode::Anchored,
    };
    let deadline = if p.timeout_seconds > 0.0 {
        let limit = Duration::try_from_secs_f64(p.timeout_seconds).map_err(|e| invalid(e.to_string()))?;
        Some(Instant::now() + limit)
    } else {
        None
    };
    Ok(CpsParams::new(p.delta1, p.delta2, p.delta3)
        .with_mode(mode)
        .with_r_cap((p.r_cap > 0).then_some(p.r_cap))
        .with_deadline(deadline))
}

fn boxed(solution: CpSolution) -> *mut CpSolution {
    Box::into_raw(Box::new(solution))
}

fn from_simplification(s: Simplification) -> CpSolution {
    CpSolution { k_star: s.len, weight: s.len as f64, peak_cells: 0, a_indices: Some(s.indices), b_indices: None }
}

/// Description of the last failure on this thread, or null after a
/// success. The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn cp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a chain from `len * dim` row-major coordinates (`dim` 2 or 3).
/// `weights` may be null, otherwise it holds `len` nonnegative weights.
///
/// # Safety
/// `coords` must point to `len * dim` doubles and `weights`, when not null,
/// to `len` doubles. `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_chain_new(
    coords: *const f64,
    len: usize,
    dim: usize,
    weights: *const f64,
    out: *mut *mut CpChain,
) -> CpStatus {
    guard(|| {
        if coords.is_null() {
            return Err(null("coords"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        if !(2..=3).contains(&dim) {
            return Err(GeometryError::UnsupportedDimension(dim).into());
        }
        let total = len.checked_mul(dim).ok_or_else(|| invalid("len * dim overflows"))?;
        let flat = if total == 0 { &[][..] } else { std::slice::from_raw_parts(coords, total) };
        let points = flat.chunks_exact(dim).map(Point::from_slice).collect::<Result<Vec<_>, _>>()?;
        let mut chain = Chain::new(points)?;
        if !weights.is_null() {
            chain = chain.weighted(std::slice::from_raw_parts(weights, len).to_vec())?;
        }
        out.write(Box::into_raw(Box::new(CpChain(chain))));
        Ok(())
    })
}

/// Releases a chain. Null is ignored.
///
/// # Safety
/// `chain` must come from [`cp_chain_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cp_chain_free(chain: *mut CpChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// Number of vertices, or 0 for null.
///
/// # Safety
/// `chain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_chain_len(chain: *const CpChain) -> usize {
    chain.as_ref().map_or(0, |c| c.0.len())
}

/// Discrete Fréchet distance between two chains.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_discrete_frechet(a: *const CpChain, b: *const CpChain, out: *mut f64) -> CpStatus {
    guard(|| {
        let value = discrete_frechet(chain_ref(a, "a")?, chain_ref(b, "b")?)?.value;
        write_out(out, value, "out")
    })
}

/// Whether the discrete Fréchet distance is at most `delta`.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_frechet_decision(
    a: *const CpChain,
    b: *const CpChain,
    delta: f64,
    out: *mut bool,
) -> CpStatus {
    guard(|| {
        let yes = frechet_decision(chain_ref(a, "a")?, chain_ref(b, "b")?, delta)?;
        write_out(out, yes, "out")
    })
}

/// Minimum of `max(|A'|, |B'|)`. With `reconstruct` the solution carries
/// both index lists.
///
/// # Safety
/// `a`, `b` and `params` must be valid and `out` writable. The solution
/// must be released with [`cp_solution_free`].
#[no_mangle]
pub unsafe extern "C" fn cp_cps3f_min(
    a: *const CpChain,
    b: *const CpChain,
    params: *const CpParams,
    reconstruct: bool,
    out: *mut *mut CpSolution,
) -> CpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let sol = cps3f_min_dp(chain_ref(a, "a")?, chain_ref(b, "b")?, &params_from(params)?, reconstruct)?;
        out.write(boxed(CpSolution {
            k_star: sol.k_star,
            weight: sol.k_star as f64,
            peak_cells: sol.stats.peak_cells,
            a_indices: sol.a_indices,
            b_indices: sol.b_indices,
        }));
        Ok(())
    })
}

/// Whether both simplifications fit in `k` vertices.
///
/// # Safety
/// `a`, `b` and `params` must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_cps3f_decision(
    a: *const CpChain,
    b: *const CpChain,
    params: *const CpParams,
    k: usize,
    out: *mut bool,
) -> CpStatus {
    guard(|| {
        let yes = cps3f_decision(chain_ref(a, "a")?, chain_ref(b, "b")?, k, &params_from(params)?)?;
        write_out(out, yes, "out")
    })
}

/// Minimum of `max(C(A'), C(B'))` with the chains' vertex weights. The
/// weight is read with [`cp_solution_weight`]. `params->r_cap` must be 0.
///
/// # Safety
/// As for [`cp_cps3f_min`].
#[no_mangle]
pub unsafe extern "C" fn cp_wcps3f_min(
    a: *const CpChain,
    b: *const CpChain,
    params: *const CpParams,
    reconstruct: bool,
    out: *mut *mut CpSolution,
) -> CpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let sol = wcps3f_min(chain_ref(a, "a")?, chain_ref(b, "b")?, &params_from(params)?, reconstruct)?;
        let count = sol.a_indices.as_ref().zip(sol.b_indices.as_ref()).map_or(0, |(x, y)| x.len().max(y.len()));
        out.write(boxed(CpSolution {
            k_star: count,
            weight: sol.k_star_weight,
            peak_cells: sol.stats.peak_cells,
            a_indices: sol.a_indices,
            b_indices: sol.b_indices,
        }));
        Ok(())
    })
}

/// Whether both weighted simplifications weigh at most `k`.
///
/// # Safety
/// As for [`cp_cps3f_decision`].
#[no_mangle]
pub unsafe extern "C" fn cp_wcps3f_decision(
    a: *const CpChain,
    b: *const CpChain,
    params: *const CpParams,
    k: f64,
    out: *mut bool,
) -> CpStatus {
    guard(|| {
        let yes = wcps3f_decision(chain_ref(a, "a")?, chain_ref(b, "b")?, k, &params_from(params)?)?;
        write_out(out, yes, "out")
    })
}

/// Shortest `A'` within `delta1` of `A` and `delta3` of `B`. The solution
/// holds only A-side indices.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_one_sided_min(
    a: *const CpChain,
    b: *const CpChain,
    delta1: f64,
    delta3: f64,
    out: *mut *mut CpSolution,
) -> CpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = one_sided_cps3f_min(chain_ref(a, "a")?, chain_ref(b, "b")?, delta1, delta3)?;
        out.write(boxed(from_simplification(s)));
        Ok(())
    })
}

/// Shortest subchain of `A` within `delta` of `B`.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_simplify_min_k(
    a: *const CpChain,
    b: *const CpChain,
    delta: f64,
    out: *mut *mut CpSolution,
) -> CpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = simplify_min_k(chain_ref(a, "a")?, chain_ref(b, "b")?, delta)?;
        out.write(boxed(from_simplification(s)));
        Ok(())
    })
}

/// Smallest distance to `B` reachable by a subchain of `A` with at most `k`
/// vertices, written to `out_delta`, and that subchain.
///
/// # Safety
/// `a` and `b` must be live handles; `out_delta` and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_simplify_min_delta(
    a: *const CpChain,
    b: *const CpChain,
    k: usize,
    out_delta: *mut f64,
    out: *mut *mut CpSolution,
) -> CpStatus {
    guard(|| {
        if out.is_null() || out_delta.is_null() {
            return Err(null("out"));
        }
        let (delta, s) = simplify_min_delta(chain_ref(a, "a")?, chain_ref(b, "b")?, k)?;
        out_delta.write(delta);
        out.write(boxed(from_simplification(s)));
        Ok(())
    })
}

/// Optimal vertex count: `max(|A'|, |B'|)`, or `|A'|` for the one-sided
/// solvers. For weighted solutions, the larger index list length (0 without
/// reconstruction).
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_solution_k_star(solution: *const CpSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.k_star)
}

/// Optimal weight for weighted solutions; the vertex count otherwise.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_solution_weight(solution: *const CpSolution) -> f64 {
    solution.as_ref().map_or(f64::NAN, |s| s.weight)
}

/// Largest number of DP cells alive during the solve.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_solution_peak_cells(solution: *const CpSolution) -> u64 {
    solution.as_ref().map_or(0, |s| s.peak_cells)
}

unsafe fn copy_indices(indices: Option<&Vec<usize>>, buf: *mut usize, cap: usize) -> usize {
    let Some(indices) = indices else { return 0 };
    if !buf.is_null() {
        let n = indices.len().min(cap);
        ptr::copy_nonoverlapping(indices.as_ptr(), buf, n);
    }
    indices.len()
}

/// Copies up to `cap` indices of `A'` into `buf` and returns the full count
/// (0 when not reconstructed). Pass a null `buf` to query the count.
///
/// # Safety
/// `solution` must be null or a live handle; `buf`, when not null, must
/// hold `cap` elements.
#[no_mangle]
pub unsafe extern "C" fn cp_solution_a_indices(solution: *const CpSolution, buf: *mut usize, cap: usize) -> usize {
    solution.as_ref().map_or(0, |s| copy_indices(s.a_indices.as_ref(), buf, cap))
}

/// As [`cp_solution_a_indices`] for `B'`.
///
/// # Safety
/// As for [`cp_solution_a_indices`].
#[no_mangle]
pub unsafe extern "C" fn cp_solution_b_indices(solution: *const CpSolution, buf: *mut usize, cap: usize) -> usize {
    solution.as_ref().map_or(0, |s| copy_indices(s.b_indices.as_ref(), buf, cap))
}

/// Releases a solution. Null is ignored.
///
/// # Safety
/// `solution` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cp_solution_free(solution: *mut CpSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}
