//! C ABI over `nls_waveguide`.
//!
//! Every function returns an [`NlswStatus`]; on failure the message is kept
//! per thread and can be copied out with [`nlsw_last_error`]. Problems and
//! scans are opaque handles released with their `_free` functions.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use nls_waveguide::field_solver::{bifurcation_scan, ScanConfig, ScanReport};
use nls_waveguide::gn_constants::{resolve_constants, GnConstants, GnOverrides, ManifoldSpec};
use nls_waveguide::ground_state::{g_constant, rho0, GroundStateData};
use nls_waveguide::sphere_criteria::{criterion_terms, sphere_mass_critical};
use nls_waveguide::thresholds::{second_variation, ImprovedThreshold, ThresholdReport, TStar};
use nls_waveguide::{Error, ProblemParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NlswStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Numeric = 3,
    Grid = 4,
    OutOfRange = 5,
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: NlswStatus, msg: &str) -> NlswStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> NlswStatus {
    let status = match e {
        Error::Domain(_) => NlswStatus::Domain,
        Error::Numeric(_) => NlswStatus::Numeric,
        Error::Grid(_) => NlswStatus::Grid,
    };
    fail(status, &e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), NlswStatus>) -> NlswStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NlswStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(NlswStatus::Panic, "internal panic"),
    }
}

fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, NlswStatus> {
    // SAFETY: callers pass either null or a valid, writable, aligned pointer.
    unsafe { p.as_mut() }.ok_or_else(|| fail(NlswStatus::NullPointer, "null output pointer"))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn nlsw_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nlsw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Opaque problem: exponent, dimensions, compact factor and GN constants.
pub struct NlswProblem {
    params: ProblemParams,
    manifold: ManifoldSpec,
    constants: GnConstants,
    ground: GroundStateData,
}

fn build_problem(
    n: u32,
    k: u32,
    alpha: f64,
    manifold: ManifoldSpec,
    overrides: GnOverrides,
    out: *mut *mut NlswProblem,
) -> NlswStatus {
    guard(|| {
        let out = out_ref(out)?;
        let params = ProblemParams::new(n, k, alpha).map_err(from_error)?;
        let (constants, _) = resolve_constants(&params, &manifold, &overrides).map_err(from_error)?;
        let ground = GroundStateData::new(params.alpha(), n).map_err(from_error)?;
        *out = Box::into_raw(Box::new(NlswProblem { params, manifold, constants, ground }));
        Ok(())
    })
}

/// ℝ × 𝕊ᵏ with its exact constants.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn nlsw_problem_new_sphere(k: u32, alpha: f64, out: *mut *mut NlswProblem) -> NlswStatus {
    match ManifoldSpec::sphere(k) {
        Ok(m) => build_problem(1, k, alpha, m, GnOverrides::default(), out),
        Err(e) => from_error(e),
    }
}

/// ℝ × circle of length `length`. B is unknown and defaulted (conditional).
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn nlsw_problem_new_torus(length: f64, alpha: f64, out: *mut *mut NlswProblem) -> NlswStatus {
    match ManifoldSpec::flat_torus(vec![length]) {
        Ok(m) => build_problem(1, 1, alpha, m, GnOverrides::default(), out),
        Err(e) => from_error(e),
    }
}

/// ℝᴺ × M with M described by (k, vol, μ₁). Non-positive `a` or `b` means "not known".
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn nlsw_problem_new_generic(
    n: u32,
    k: u32,
    alpha: f64,
    vol: f64,
    mu1: f64,
    a: f64,
    b: f64,
    out: *mut *mut NlswProblem,
) -> NlswStatus {
    let overrides = GnOverrides { a: (a > 0.0).then_some(a), b: (b > 0.0).then_some(b), sigma: None };
    match ManifoldSpec::generic(k, vol, mu1) {
        Ok(m) => build_problem(n, k, alpha, m, overrides, out),
        Err(e) => from_error(e),
    }
}

/// Releases a problem handle; null is ignored.
///
/// # Safety
/// `p` must be null or a handle from an `nlsw_problem_new_*` call not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nlsw_problem_free(p: *mut NlswProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Threshold summary. Infinite t* is `INFINITY`; `rho_ex_improved` is NaN
/// at the mass-critical exponent and `INFINITY` when the estimate is unbounded.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NlswThresholds {
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    pub g: f64,
    pub t_star: f64,
    pub rho_ex_basic: f64,
    pub rho_ex_improved: f64,
    pub rho_tr_upper: f64,
    pub lambda_ex: f64,
    pub criterion_basic: bool,
    pub criterion_improved: bool,
    pub conditional_on_a: bool,
    pub conditional_on_b: bool,
}

/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nlsw_thresholds(p: *const NlswProblem, out: *mut NlswThresholds) -> NlswStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| fail(NlswStatus::NullPointer, "null problem handle"))?;
        let out = out_ref(out)?;
        let r = ThresholdReport::compute(&p.params, &p.manifold, &p.constants, &p.ground, Vec::new())
            .map_err(from_error)?;
        *out = NlswThresholds {
            a: r.a,
            b: r.b,
            theta: r.theta,
            g: r.g,
            t_star: match r.t_star {
                TStar::Finite(t) => t,
                TStar::Infinite => f64::INFINITY,
            },
            rho_ex_basic: r.rho_ex_basic,
            rho_ex_improved: match r.rho_ex_improved {
                None => f64::NAN,
                Some(ImprovedThreshold::Finite(v)) => v,
                Some(ImprovedThreshold::UnboundedByEstimate) => f64::INFINITY,
            },
            rho_tr_upper: r.rho_tr_upper,
            lambda_ex: r.lambda_ex,
            criterion_basic: r.criterion_basic,
            criterion_improved: r.criterion_improved,
            conditional_on_a: r.conditional_on_a,
            conditional_on_b: r.conditional_on_b,
        };
        Ok(())
    })
}

/// Second variation of E at the y-constant soliton of total mass ρ² along φ₁Z.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nlsw_second_variation(p: *const NlswProblem, rho: f64, out: *mut f64) -> NlswStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| fail(NlswStatus::NullPointer, "null problem handle"))?;
        let out = out_ref(out)?;
        let rho_hat = rho / p.manifold.vol().sqrt();
        *out = second_variation(&p.params, p.manifold.mu1(), rho_hat, &p.ground).map_err(from_error)?;
        Ok(())
    })
}

/// ρ₀ = ‖U‖ for the unit-frequency soliton in ℝᴺ.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nlsw_rho0(alpha: f64, n: u32, out: *mut f64) -> NlswStatus {
    guard(|| {
        *out_ref(out)? = rho0(alpha, n).map_err(from_error)?;
        Ok(())
    })
}

/// G with I_ρ = −Gρ^{2+4α/(4−Nα)}.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nlsw_g_constant(alpha: f64, n: u32, out: *mut f64) -> NlswStatus {
    guard(|| {
        *out_ref(out)? = g_constant(alpha, n).map_err(from_error)?;
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NlswSphereTerms {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    pub holds: bool,
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nlsw_sphere_terms(k: u32, alpha: f64, out: *mut NlswSphereTerms) -> NlswStatus {
    guard(|| {
        let out = out_ref(out)?;
        let t = criterion_terms(k, alpha).map_err(from_error)?;
        *out = NlswSphereTerms { t1: t.t1, t2: t.t2, t3: t.t3, t4: t.t4, holds: t.verdict().holds };
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nlsw_sphere_mass_critical(k: u32, out: *mut bool) -> NlswStatus {
    guard(|| {
        *out_ref(out)? = sphere_mass_critical(k);
        Ok(())
    })
}

/// Opaque result of a bifurcation scan.
pub struct NlswScan {
    report: ScanReport,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NlswScanRow {
    pub rho: f64,
    pub m_numeric: f64,
    pub i_closed: f64,
    pub y_nontriviality: f64,
    pub t_ratio: f64,
    pub iterations: usize,
    /// 0 converged, 1 hit-t-star, 2 max-iterations, 3 diverged, 4 error.
    pub status: i32,
}

/// Runs the ℝ×T¹_L scan on `n` ascending masses with a `nx`×`ny` grid.
///
/// # Safety
/// `rhos` must point to `n` doubles and `out` to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn nlsw_scan_run(
    alpha: f64,
    length: f64,
    rhos: *const f64,
    n: usize,
    nx: usize,
    ny: usize,
    out: *mut *mut NlswScan,
) -> NlswStatus {
    guard(|| {
        let out = out_ref(out)?;
        if rhos.is_null() {
            return Err(fail(NlswStatus::NullPointer, "null mass array"));
        }
        let grid = std::slice::from_raw_parts(rhos, n);
        let mut cfg = ScanConfig::new(alpha, length).map_err(from_error)?;
        cfg.grid = nls_waveguide::field_solver::Grid::new(cfg.grid.x_half_width, nx, length, ny).map_err(from_error)?;
        let report = bifurcation_scan(grid, &cfg).map_err(from_error)?;
        *out = Box::into_raw(Box::new(NlswScan { report }));
        Ok(())
    })
}

/// # Safety
/// `s` must be a live scan handle.
#[no_mangle]
pub unsafe extern "C" fn nlsw_scan_len(s: *const NlswScan) -> usize {
    s.as_ref().map_or(0, |s| s.report.rows.len())
}

/// The ρ*_tr estimate of the scan, NaN when no row qualifies.
///
/// # Safety
/// `s` must be a live scan handle.
#[no_mangle]
pub unsafe extern "C" fn nlsw_scan_estimate(s: *const NlswScan) -> f64 {
    s.as_ref().and_then(|s| s.report.rho_tr_estimate).unwrap_or(f64::NAN)
}

/// # Safety
/// `s` must be a live scan handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nlsw_scan_row(s: *const NlswScan, index: usize, out: *mut NlswScanRow) -> NlswStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| fail(NlswStatus::NullPointer, "null scan handle"))?;
        let out = out_ref(out)?;
        let r = s
            .report
            .rows
            .get(index)
            .ok_or_else(|| fail(NlswStatus::OutOfRange, &format!("row {index} of {}", s.report.rows.len())))?;
        let status = match r.status.as_str() {
            "converged" => 0,
            "hit-t-star" => 1,
            "max-iterations" => 2,
            "diverged" => 3,
            _ => 4,
        };
        *out = NlswScanRow {
            rho: r.rho,
            m_numeric: r.m_numeric,
            i_closed: r.i_closed,
            y_nontriviality: r.y_nontriviality,
            t_ratio: r.t_ratio,
            iterations: r.iterations,
            status,
        };
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a handle from [`nlsw_scan_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nlsw_scan_free(s: *mut NlswScan) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}
