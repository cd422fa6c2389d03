//! C ABI for the solver toolkit: opaque handles, integer error codes and a
//! thread-local last-error message. The header is generated by cbindgen at
//! build time into `include/twovrp.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;
use std::time::Duration;

use twovrp::dp::{solve_exact, DpOptions, SolveError};
use twovrp::harness::format::{parse_instance, InstanceBody};
use twovrp::harness::multistart::{multistart_solve, SolverParams};
use twovrp::model::{Instance, Orientation, TwoRouteSolution};
use twovrp::oracle::{brute_force, OracleOptions};
use twovrp::two_period::build_instance;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwovrpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseFailed = 3,
    Infeasible = 4,
    NoFiniteRoute = 5,
    TooLarge = 6,
    InternalError = 7,
}

/// Opaque solvable instance.
pub struct TwovrpInstance {
    inner: Instance,
}

/// Opaque solution handle.
pub struct TwovrpSolution {
    inner: TwoRouteSolution,
}

/// Multistart parameters; obtain defaults from `twovrp_default_params`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TwovrpParams {
    /// Window size of the sliding-subsets heuristic.
    pub s: u32,
    /// Sliding step.
    pub l: u32,
    pub restarts: u32,
    pub seed: u64,
    /// Max customers (switch included) per exact sub-solve.
    pub dp_cap: u32,
    /// Worker threads for restarts; 1 is sequential.
    pub parallel: u32,
    /// Soft time limit in seconds; 0 means none.
    pub time_limit_secs: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let s = CString::new(message.into()).unwrap_or_else(|_| CString::new("error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(s));
}

fn solve_error_status(e: &SolveError) -> TwovrpStatus {
    match e {
        SolveError::Infeasible => TwovrpStatus::Infeasible,
        SolveError::NoFiniteRoute => TwovrpStatus::NoFiniteRoute,
        SolveError::TooManyCustomers { .. } => TwovrpStatus::TooLarge,
        _ => TwovrpStatus::InternalError,
    }
}

/// Message for the most recent error on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn twovrp_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn twovrp_default_params() -> TwovrpParams {
    TwovrpParams { s: 3, l: 1, restarts: 48, seed: 1, dp_cap: 20, parallel: 1, time_limit_secs: 0 }
}

/// Loads a 2VRP or 2TSP instance file; 2TSP instances are encoded into their
/// solvable 2VRP form. On success stores a new handle in `out`.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn twovrp_instance_load(
    path: *const c_char,
    out: *mut *mut TwovrpInstance,
) -> TwovrpStatus {
    if path.is_null() || out.is_null() {
        set_error("null argument");
        return TwovrpStatus::NullArgument;
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        set_error("path is not valid UTF-8");
        return TwovrpStatus::InvalidUtf8;
    };
    let parsed = match parse_instance(Path::new(path)) {
        Ok(p) => p,
        Err(e) => {
            set_error(e.to_string());
            return TwovrpStatus::ParseFailed;
        }
    };
    let inst = match parsed.body {
        InstanceBody::Vrp(inst) => inst,
        InstanceBody::Tsp(tp) => match build_instance(&tp) {
            Ok(inst) => inst,
            Err(e) => {
                set_error(e.to_string());
                return TwovrpStatus::ParseFailed;
            }
        },
    };
    *out = Box::into_raw(Box::new(TwovrpInstance { inner: inst }));
    TwovrpStatus::Ok
}

/// Number of customers excluding the switch, or 0 for NULL.
///
/// # Safety
/// `inst` must be a live handle from this library or NULL.
#[no_mangle]
pub unsafe extern "C" fn twovrp_instance_customers(inst: *const TwovrpInstance) -> u32 {
    inst.as_ref().map_or(0, |i| i.inner.num_customers() as u32)
}

/// # Safety
/// `inst` must be a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn twovrp_instance_free(inst: *mut TwovrpInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Runs the multistart heuristic and stores a solution handle in `out`.
///
/// # Safety
/// `inst` must be a live instance handle, `params` and `out` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn twovrp_solve(
    inst: *const TwovrpInstance,
    params: *const TwovrpParams,
    out: *mut *mut TwovrpSolution,
) -> TwovrpStatus {
    let (Some(inst), Some(p)) = (inst.as_ref(), params.as_ref()) else {
        set_error("null argument");
        return TwovrpStatus::NullArgument;
    };
    if out.is_null() || p.s == 0 || p.l == 0 || p.restarts == 0 {
        set_error("invalid parameters");
        return TwovrpStatus::NullArgument;
    }
    let sp = SolverParams {
        s: p.s as usize,
        l: p.l as usize,
        restarts: p.restarts as usize,
        seed: p.seed,
        dp_cap: p.dp_cap as usize,
        time_limit: (p.time_limit_secs > 0).then(|| Duration::from_secs(p.time_limit_secs)),
        parallel: (p.parallel as usize).max(1),
        skip_sliding: false,
    };
    match multistart_solve(&inst.inner, &sp) {
        Ok(outcome) => {
            *out = Box::into_raw(Box::new(TwovrpSolution { inner: outcome.best }));
            TwovrpStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            solve_error_status(&e)
        }
    }
}

/// Solves the instance exactly (needs `customers + 1 <= dp_cap`).
///
/// # Safety
/// `inst` must be a live instance handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn twovrp_solve_exact(
    inst: *const TwovrpInstance,
    dp_cap: u32,
    out: *mut *mut TwovrpSolution,
) -> TwovrpStatus {
    let Some(inst) = inst.as_ref() else {
        set_error("null argument");
        return TwovrpStatus::NullArgument;
    };
    if out.is_null() {
        set_error("null argument");
        return TwovrpStatus::NullArgument;
    }
    let opts = DpOptions { cap: dp_cap as usize, ..DpOptions::default() };
    match solve_exact(&inst.inner, &opts) {
        Ok(sol) => {
            *out = Box::into_raw(Box::new(TwovrpSolution { inner: sol }));
            TwovrpStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            solve_error_status(&e)
        }
    }
}

/// Reference enumeration solver for tiny instances (`customers <= cap`).
///
/// # Safety
/// `inst` must be a live instance handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn twovrp_brute_force(
    inst: *const TwovrpInstance,
    cap: u32,
    out: *mut *mut TwovrpSolution,
) -> TwovrpStatus {
    let Some(inst) = inst.as_ref() else {
        set_error("null argument");
        return TwovrpStatus::NullArgument;
    };
    if out.is_null() {
        set_error("null argument");
        return TwovrpStatus::NullArgument;
    }
    let opts = OracleOptions { cap: cap as usize, ..OracleOptions::default() };
    match brute_force(&inst.inner, &opts) {
        Ok(sol) => {
            *out = Box::into_raw(Box::new(TwovrpSolution { inner: sol }));
            TwovrpStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            solve_error_status(&e)
        }
    }
}

/// Total cost; u64::MAX encodes the infinity sentinel.
///
/// # Safety
/// `sol` must be a live solution handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn twovrp_solution_cost(sol: *const TwovrpSolution) -> u64 {
    sol.as_ref().map_or(u64::MAX, |s| s.inner.cost.value())
}

/// Number of visits including the switch customer.
///
/// # Safety
/// `sol` must be a live solution handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn twovrp_solution_len(sol: *const TwovrpSolution) -> u32 {
    sol.as_ref().map_or(0, |s| s.inner.visits.len() as u32)
}

/// Visit at `index`: customer id (0 is the switch) and orientation
/// (0 = from the left node, 1 = from the right node).
///
/// # Safety
/// `sol` must be a live solution handle; `id` and `orientation` must be
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn twovrp_solution_visit(
    sol: *const TwovrpSolution,
    index: u32,
    id: *mut u32,
    orientation: *mut u8,
) -> TwovrpStatus {
    let Some(sol) = sol.as_ref() else {
        set_error("null argument");
        return TwovrpStatus::NullArgument;
    };
    if id.is_null() || orientation.is_null() {
        set_error("null argument");
        return TwovrpStatus::NullArgument;
    }
    let Some(&(cid, o)) = sol.inner.visits.get(index as usize) else {
        set_error("visit index out of range");
        return TwovrpStatus::TooLarge;
    };
    *id = cid as u32;
    *orientation = match o {
        Orientation::FromLeft => 0,
        Orientation::FromRight => 1,
    };
    TwovrpStatus::Ok
}

/// Load carried by vehicle 1 (`vehicle` = 1) or vehicle 2 (`vehicle` = 2).
///
/// # Safety
/// `sol` must be a live solution handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn twovrp_solution_load(sol: *const TwovrpSolution, vehicle: u8) -> u64 {
    match (sol.as_ref(), vehicle) {
        (Some(s), 1) => s.inner.loads[0],
        (Some(s), 2) => s.inner.loads[1],
        _ => 0,
    }
}

/// # Safety
/// `sol` must be a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn twovrp_solution_free(sol: *mut TwovrpSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}
