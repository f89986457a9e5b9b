//! C ABI over the oseen solver.
//!
//! The surface follows the usual conventions for C bindings:
//!
//! * handles (`OseenProblem`, `OseenSolution`) are opaque pointers created
//!   and released by this library;
//! * every fallible call returns an [`Status`] code and reports details
//!   through [`oseen_last_error_message`], a thread-local string valid
//!   until the next failing call on the same thread;
//! * callers own all buffers they pass in; the library copies data across
//!   the boundary and never retains caller pointers;
//! * panics never cross the boundary — they are caught and surfaced as
//!   [`Status::Panic`].
//!
//! The matching header, `include/oseen.h`, is generated at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use oseen::grids::{HeightLevels, SpatialGrid1D};
use oseen::halfplane::{residual, solve_slip, BoundarySignal, FieldComponent, SolutionFields};
use oseen::symbols::OseenParams;
use oseen::wholeplane::fundamental_solution;

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument failed validation; see `oseen_last_error_message`.
    InvalidArgument = 2,
    /// A buffer length or grid size disagrees with the handle.
    GridMismatch = 3,
    /// The requested quantity is not defined in this drift regime.
    RegimeViolation = 4,
    /// A computation failed to converge or left the valid range.
    NumericalFailure = 5,
    /// Configuration text could not be parsed.
    ConfigError = 6,
    /// CSV input could not be parsed.
    CsvFormatError = 7,
    /// An operating-system I/O call failed.
    IoError = 8,
    /// An internal invariant was violated; please report this.
    Panic = 9,
}

/// Field selector for solution rows.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    /// Tangential velocity component.
    U1 = 0,
    /// Wall-normal velocity component.
    U2 = 1,
    /// Pressure.
    Pressure = 2,
}

/// Sup-norm residuals of a solved flow, one per defining equation.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct Residuals {
    /// Interior momentum-equation residual.
    pub pde: f64,
    /// Velocity-divergence residual.
    pub divergence: f64,
    /// Tangential (slip) boundary-condition residual.
    pub bc_slip: f64,
    /// Wall-normal boundary-condition residual.
    pub bc_normal: f64,
}

/// A fixed problem setup: drift, friction, boundary grid, and the ladder
/// of heights on which solutions are evaluated.
pub struct Problem {
    params: OseenParams,
    grid: SpatialGrid1D,
    levels: HeightLevels,
}

/// A solved flow: velocity and pressure rows on the problem's grid at
/// each of its heights.
pub struct Solution {
    params: OseenParams,
    fields: SolutionFields,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let clean = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(clean).unwrap_or_default();
    });
}

fn fail(err: oseen::Error) -> Status {
    set_error(&err.to_string());
    match err {
        oseen::Error::InvalidArgument(_) => Status::InvalidArgument,
        oseen::Error::GridMismatch(_) => Status::GridMismatch,
        oseen::Error::RegimeViolation(_) => Status::RegimeViolation,
        oseen::Error::Numerical(_) => Status::NumericalFailure,
        oseen::Error::Config { .. } => Status::ConfigError,
        oseen::Error::CsvFormat { .. } => Status::CsvFormatError,
        oseen::Error::Io(_) => Status::IoError,
    }
}

fn null_pointer(what: &str) -> Status {
    set_error(&format!("{what} must not be null"));
    Status::NullPointer
}

fn guard<F: FnOnce() -> Status>(body: F) -> Status {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            Status::Panic
        }
    }
}

/// Library version as a static, nul-terminated string.
#[no_mangle]
pub extern "C" fn oseen_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message describing the most recent failure on the calling thread.
///
/// The pointer stays valid until the next failing call on this thread.
/// Before any failure it is the empty string.
#[no_mangle]
pub extern "C" fn oseen_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Creates a problem handle.
///
/// `a1`, `a2` set the drift (must not both be zero), `friction` the slip
/// coefficient (positive), `half_width` the boundary-grid half-width
/// (positive), `n` the number of grid nodes (even, at least 8), and
/// `level_count` the number of evaluation heights (at least 5). On
/// success `*out` owns the handle; release it with `oseen_problem_free`.
///
/// # Safety
///
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn oseen_problem_new(
    a1: f64,
    a2: f64,
    friction: f64,
    half_width: f64,
    n: usize,
    level_count: usize,
    out: *mut *mut Problem,
) -> Status {
    guard(|| {
        if out.is_null() {
            return null_pointer("out");
        }
        unsafe { *out = std::ptr::null_mut() };
        let params = match OseenParams::new(a1, a2, friction) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        let grid = match SpatialGrid1D::new(half_width, n) {
            Ok(g) => g,
            Err(e) => return fail(e),
        };
        let levels = match HeightLevels::default_for_grid(&grid, level_count) {
            Ok(l) => l,
            Err(e) => return fail(e),
        };
        let handle = Box::new(Problem {
            params,
            grid,
            levels,
        });
        unsafe { *out = Box::into_raw(handle) };
        Status::Ok
    })
}

/// Releases a problem handle. Passing null is a no-op.
///
/// # Safety
///
/// `problem` must be null or a handle from `oseen_problem_new` that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn oseen_problem_free(problem: *mut Problem) {
    if !problem.is_null() {
        drop(unsafe { Box::from_raw(problem) });
    }
}

/// Number of boundary-grid nodes, or 0 if the handle is null.
///
/// # Safety
///
/// `problem` must be null or a live handle from `oseen_problem_new`.
#[no_mangle]
pub unsafe extern "C" fn oseen_problem_grid_size(problem: *const Problem) -> usize {
    if problem.is_null() {
        return 0;
    }
    unsafe { &*problem }.grid.n()
}

/// Number of evaluation heights, or 0 if the handle is null.
///
/// # Safety
///
/// `problem` must be null or a live handle from `oseen_problem_new`.
#[no_mangle]
pub unsafe extern "C" fn oseen_problem_level_count(problem: *const Problem) -> usize {
    if problem.is_null() {
        return 0;
    }
    unsafe { &*problem }.levels.len()
}

/// Copies the boundary-grid nodes into `out[0..len]`; `len` must equal
/// `oseen_problem_grid_size`.
///
/// # Safety
///
/// `problem` must be null or a live handle from `oseen_problem_new`, and
/// `out` null or valid for writing `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn oseen_problem_nodes(
    problem: *const Problem,
    out: *mut f64,
    len: usize,
) -> Status {
    guard(|| {
        if problem.is_null() {
            return null_pointer("problem");
        }
        if out.is_null() {
            return null_pointer("out");
        }
        let p = unsafe { &*problem };
        if len != p.grid.n() {
            set_error(&format!(
                "node buffer holds {len} values; the grid has {}",
                p.grid.n()
            ));
            return Status::GridMismatch;
        }
        let dst = unsafe { std::slice::from_raw_parts_mut(out, len) };
        for (i, slot) in dst.iter_mut().enumerate() {
            *slot = p.grid.node(i);
        }
        Status::Ok
    })
}

/// Copies the evaluation heights into `out[0..len]`; `len` must equal
/// `oseen_problem_level_count`.
///
/// # Safety
///
/// `problem` must be null or a live handle from `oseen_problem_new`, and
/// `out` null or valid for writing `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn oseen_problem_heights(
    problem: *const Problem,
    out: *mut f64,
    len: usize,
) -> Status {
    guard(|| {
        if problem.is_null() {
            return null_pointer("problem");
        }
        if out.is_null() {
            return null_pointer("out");
        }
        let p = unsafe { &*problem };
        if len != p.levels.len() {
            set_error(&format!(
                "height buffer holds {len} values; the ladder has {}",
                p.levels.len()
            ));
            return Status::GridMismatch;
        }
        let dst = unsafe { std::slice::from_raw_parts_mut(out, len) };
        dst.copy_from_slice(p.levels.levels());
        Status::Ok
    })
}

/// Solves the slip problem for boundary data sampled on the problem grid.
///
/// `b[0..len]` is the tangential (slip) datum and `d[0..len]` the normal
/// datum; `len` must equal `oseen_problem_grid_size`. On success `*out`
/// owns the solution; release it with `oseen_solution_free`.
///
/// # Safety
///
/// `problem` must be null or a live handle from `oseen_problem_new`;
/// `b` and `d` null or valid for reading `len` doubles; `out` null or
/// valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn oseen_solve_slip(
    problem: *const Problem,
    b: *const f64,
    d: *const f64,
    len: usize,
    out: *mut *mut Solution,
) -> Status {
    guard(|| {
        if problem.is_null() {
            return null_pointer("problem");
        }
        if b.is_null() {
            return null_pointer("b");
        }
        if d.is_null() {
            return null_pointer("d");
        }
        if out.is_null() {
            return null_pointer("out");
        }
        unsafe { *out = std::ptr::null_mut() };
        let p = unsafe { &*problem };
        if len != p.grid.n() {
            set_error(&format!(
                "boundary buffers hold {len} values; the grid has {}",
                p.grid.n()
            ));
            return Status::GridMismatch;
        }
        let b_samples = unsafe { std::slice::from_raw_parts(b, len) }.to_vec();
        let d_samples = unsafe { std::slice::from_raw_parts(d, len) }.to_vec();
        let signal = |samples| BoundarySignal::new(p.grid, samples);
        let solved = signal(b_samples)
            .and_then(|b| Ok((b, signal(d_samples)?)))
            .and_then(|(b, d)| solve_slip(&p.params, &b, &d, &p.levels));
        match solved {
            Ok(fields) => {
                let handle = Box::new(Solution {
                    params: p.params,
                    fields,
                });
                unsafe { *out = Box::into_raw(handle) };
                Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a solution handle. Passing null is a no-op.
///
/// # Safety
///
/// `solution` must be null or a handle from `oseen_solve_slip` that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn oseen_solution_free(solution: *mut Solution) {
    if !solution.is_null() {
        drop(unsafe { Box::from_raw(solution) });
    }
}

/// Number of nodes per solution row, or 0 if the handle is null.
///
/// # Safety
///
/// `solution` must be null or a live handle from `oseen_solve_slip`.
#[no_mangle]
pub unsafe extern "C" fn oseen_solution_grid_size(solution: *const Solution) -> usize {
    if solution.is_null() {
        return 0;
    }
    unsafe { &*solution }.fields.grid().n()
}

/// Number of solved heights, or 0 if the handle is null.
///
/// # Safety
///
/// `solution` must be null or a live handle from `oseen_solve_slip`.
#[no_mangle]
pub unsafe extern "C" fn oseen_solution_level_count(solution: *const Solution) -> usize {
    if solution.is_null() {
        return 0;
    }
    unsafe { &*solution }.fields.levels().len()
}

/// Copies one field row at height index `level` into `out[0..len]`;
/// `len` must equal `oseen_solution_grid_size`.
///
/// # Safety
///
/// `solution` must be null or a live handle from `oseen_solve_slip`, and
/// `out` null or valid for writing `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn oseen_solution_row(
    solution: *const Solution,
    field: Field,
    level: usize,
    out: *mut f64,
    len: usize,
) -> Status {
    guard(|| {
        if solution.is_null() {
            return null_pointer("solution");
        }
        if out.is_null() {
            return null_pointer("out");
        }
        let s = unsafe { &*solution };
        let levels = s.fields.levels().len();
        if level >= levels {
            set_error(&format!(
                "height index {level} out of range; the solution has {levels} levels"
            ));
            return Status::InvalidArgument;
        }
        let n = s.fields.grid().n();
        if len != n {
            set_error(&format!("row buffer holds {len} values; rows have {n}"));
            return Status::GridMismatch;
        }
        let component = match field {
            Field::U1 => FieldComponent::U1,
            Field::U2 => FieldComponent::U2,
            Field::Pressure => FieldComponent::P,
        };
        let dst = unsafe { std::slice::from_raw_parts_mut(out, len) };
        dst.copy_from_slice(s.fields.row(component, level));
        Status::Ok
    })
}

/// Evaluates the defining-equation residuals of a solution.
///
/// # Safety
///
/// `solution` must be null or a live handle from `oseen_solve_slip`, and
/// `out` null or valid for writing one `Residuals` value.
#[no_mangle]
pub unsafe extern "C" fn oseen_solution_residuals(
    solution: *const Solution,
    out: *mut Residuals,
) -> Status {
    guard(|| {
        if solution.is_null() {
            return null_pointer("solution");
        }
        if out.is_null() {
            return null_pointer("out");
        }
        let s = unsafe { &*solution };
        match residual(&s.params, &s.fields) {
            Ok(report) => {
                unsafe {
                    *out = Residuals {
                        pde: report.pde_residual_linf,
                        divergence: report.divergence_linf,
                        bc_slip: report.bc_slip_residual_linf,
                        bc_normal: report.bc_normal_residual_linf,
                    };
                }
                Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Evaluates the whole-plane fundamental solution for drift `(a1, a2)`
/// at the point `(x1, x2)`; the drift must be nonzero and finite.
///
/// # Safety
///
/// `out` must be null or valid for writing one double.
#[no_mangle]
pub unsafe extern "C" fn oseen_fundamental_solution(
    a1: f64,
    a2: f64,
    x1: f64,
    x2: f64,
    out: *mut f64,
) -> Status {
    guard(|| {
        if out.is_null() {
            return null_pointer("out");
        }
        if !(a1.is_finite() && a2.is_finite()) || (a1 == 0.0 && a2 == 0.0) {
            set_error(&format!("drift must be finite and nonzero, got ({a1}, {a2})"));
            return Status::InvalidArgument;
        }
        if !(x1.is_finite() && x2.is_finite()) {
            set_error(&format!("point must be finite, got ({x1}, {x2})"));
            return Status::InvalidArgument;
        }
        unsafe { *out = fundamental_solution([a1, a2], x1, x2) };
        Status::Ok
    })
}
