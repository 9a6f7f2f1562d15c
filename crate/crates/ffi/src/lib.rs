//! C ABI over `catbound`.
//!
//! Graphs cross the boundary as opaque [`CatboundGraph`] handles. Every
//! fallible function returns a [`CatboundStatus`] and writes its result
//! through an out-pointer. After a non-`Ok` status,
//! [`catbound_last_error_message`] describes the failure on the calling
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use catbound::bench::{bound_for_method, Method, StatGrid};
use catbound::homcount::catalog_pattern;
use catbound::{count_homs_with_budget, BoundStatus, Error, Graph, Pattern, StatKey, StatKind};

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatboundStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    Domain = 5,
    BudgetExceeded = 6,
    Unbounded = 7,
    Internal = 8,
}

/// Statistic selector for [`catbound_stat`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatboundStatKind {
    DomainSize = 0,
    EdgeCount = 1,
    MaxDegree = 2,
    Star = 3,
    BiStar = 4,
    CatV = 5,
    CatN = 6,
    CatW = 7,
}

/// Bound method selector for [`catbound_bound`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatboundMethod {
    EdgesOnly = 0,
    Star = 1,
    BiStar = 2,
    Vvv = 3,
    Nnn = 4,
    Www = 5,
}

/// Opaque undirected host graph.
pub struct CatboundGraph {
    inner: Graph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn fail(status: CatboundStatus, message: impl Into<String>) -> CatboundStatus {
    set_last_error(message.into());
    status
}

fn from_error(e: Error) -> CatboundStatus {
    let status = match &e {
        Error::Parse { .. } | Error::Csv(_) => CatboundStatus::Parse,
        Error::Io(_) => CatboundStatus::Io,
        Error::Domain(_) => CatboundStatus::Domain,
        Error::BudgetExceeded { .. } => CatboundStatus::BudgetExceeded,
        Error::IterationLimit(_) | Error::Internal(_) => CatboundStatus::Internal,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> CatboundStatus) -> CatboundStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(CatboundStatus::Internal, "panic inside catbound"),
    }
}

unsafe fn graph_ref<'a>(graph: *const CatboundGraph) -> Result<&'a Graph, CatboundStatus> {
    // SAFETY: the caller passes a handle obtained from this library or null.
    match unsafe { graph.as_ref() } {
        Some(g) => Ok(&g.inner),
        None => Err(fail(CatboundStatus::NullPointer, "graph handle is null")),
    }
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, CatboundStatus> {
    if s.is_null() {
        return Err(fail(CatboundStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: non-null and NUL-terminated per the API contract.
    unsafe { CStr::from_ptr(s) }.to_str().map_err(|_| {
        fail(
            CatboundStatus::InvalidArgument,
            format!("{what} is not UTF-8"),
        )
    })
}

fn emit_graph(g: Graph, out: *mut *mut CatboundGraph) -> CatboundStatus {
    let handle = Box::into_raw(Box::new(CatboundGraph { inner: g }));
    // SAFETY: `out` was checked non-null by the caller of this helper.
    unsafe { *out = handle };
    CatboundStatus::Ok
}

/// Loads an edge-list file. On success `*out` owns a handle that must be
/// released with [`catbound_graph_free`].
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn catbound_graph_load(
    path: *const c_char,
    out: *mut *mut CatboundGraph,
) -> CatboundStatus {
    guard(|| {
        if out.is_null() {
            return fail(CatboundStatus::NullPointer, "out is null");
        }
        let path = match unsafe { c_str(path, "path") } {
            Ok(p) => p,
            Err(s) => return s,
        };
        match Graph::load_path(path) {
            Ok(g) => emit_graph(g, out),
            Err(e) => from_error(e),
        }
    })
}

/// Builds a graph on vertices `0..vertex_count` from `edge_count` pairs
/// stored flat in `endpoints` (`2 * edge_count` entries).
///
/// # Safety
/// `endpoints` must point to `2 * edge_count` readable values (it may be
/// null when `edge_count` is 0) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn catbound_graph_from_edges(
    vertex_count: usize,
    endpoints: *const u32,
    edge_count: usize,
    out: *mut *mut CatboundGraph,
) -> CatboundStatus {
    guard(|| {
        if out.is_null() {
            return fail(CatboundStatus::NullPointer, "out is null");
        }
        let flat: &[u32] = if edge_count == 0 {
            &[]
        } else if endpoints.is_null() {
            return fail(CatboundStatus::NullPointer, "endpoints is null");
        } else {
            // SAFETY: caller guarantees 2 * edge_count readable values.
            unsafe { slice::from_raw_parts(endpoints, 2 * edge_count) }
        };
        let edges = flat.chunks_exact(2).map(|e| (e[0], e[1]));
        match Graph::from_edges(vertex_count, edges) {
            Ok(g) => emit_graph(g, out),
            Err(e) => from_error(e),
        }
    })
}

/// Releases a handle. Null is accepted and ignored.
///
/// # Safety
/// `graph` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn catbound_graph_free(graph: *mut CatboundGraph) {
    if !graph.is_null() {
        // SAFETY: produced by Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn catbound_graph_vertex_count(graph: *const CatboundGraph) -> usize {
    unsafe { graph_ref(graph) }.map_or(0, Graph::vertex_count)
}

/// Number of undirected edges, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn catbound_graph_edge_count(graph: *const CatboundGraph) -> usize {
    unsafe { graph_ref(graph) }.map_or(0, Graph::edge_count)
}

fn stat_kind(kind: CatboundStatKind, params: &[f64]) -> Result<StatKind, CatboundStatus> {
    let need = match kind {
        CatboundStatKind::DomainSize
        | CatboundStatKind::EdgeCount
        | CatboundStatKind::MaxDegree => 0,
        CatboundStatKind::Star => 1,
        CatboundStatKind::BiStar => 2,
        CatboundStatKind::CatV => 3,
        CatboundStatKind::CatN => 4,
        CatboundStatKind::CatW => 5,
    };
    if params.len() != need {
        return Err(fail(
            CatboundStatus::InvalidArgument,
            format!("{kind:?} takes {need} parameters, got {}", params.len()),
        ));
    }
    let p = |i: usize| params[i];
    Ok(match kind {
        CatboundStatKind::DomainSize => StatKind::DomainSize,
        CatboundStatKind::EdgeCount => StatKind::EdgeCount,
        CatboundStatKind::MaxDegree => StatKind::MaxDegree,
        CatboundStatKind::Star => StatKind::Star(p(0)),
        CatboundStatKind::BiStar => StatKind::BiStar(p(0), p(1)),
        CatboundStatKind::CatV => StatKind::CatV([p(0), p(1), p(2)]),
        CatboundStatKind::CatN => StatKind::CatN([p(0), p(1), p(2), p(3)]),
        CatboundStatKind::CatW => StatKind::CatW([p(0), p(1), p(2), p(3), p(4)]),
    })
}

/// Computes one statistic. `value_out` receives the plain value (infinite
/// on overflow) and `log_value_out`, if non-null, its natural log.
///
/// # Safety
/// `params` must point to `param_count` values (or be null when it is 0),
/// `graph` must be a live handle and `value_out` writable.
#[no_mangle]
pub unsafe extern "C" fn catbound_stat(
    graph: *const CatboundGraph,
    kind: CatboundStatKind,
    params: *const f64,
    param_count: usize,
    transposed: bool,
    value_out: *mut f64,
    log_value_out: *mut f64,
) -> CatboundStatus {
    guard(|| {
        let g = match unsafe { graph_ref(graph) } {
            Ok(g) => g,
            Err(s) => return s,
        };
        if value_out.is_null() {
            return fail(CatboundStatus::NullPointer, "value_out is null");
        }
        let params: &[f64] = if param_count == 0 {
            &[]
        } else if params.is_null() {
            return fail(CatboundStatus::NullPointer, "params is null");
        } else {
            // SAFETY: caller guarantees param_count readable values.
            unsafe { slice::from_raw_parts(params, param_count) }
        };
        let kind = match stat_kind(kind, params) {
            Ok(k) => k,
            Err(s) => return s,
        };
        let key = if transposed {
            StatKey::transposed(kind)
        } else {
            StatKey::new(kind)
        };
        match catbound::compute_stat(g, &key) {
            Ok(record) => {
                // SAFETY: checked non-null above; log_value_out is optional.
                unsafe {
                    *value_out = record.raw_value;
                    if !log_value_out.is_null() {
                        *log_value_out = record.log_value;
                    }
                }
                CatboundStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

unsafe fn pattern_by_name(name: *const c_char) -> Result<Pattern, CatboundStatus> {
    let name = unsafe { c_str(name, "pattern") }?;
    catalog_pattern(name).ok_or_else(|| {
        fail(
            CatboundStatus::InvalidArgument,
            format!("unknown pattern {name}"),
        )
    })
}

/// Exact number of homomorphisms from the named catalog pattern into the
/// graph. A `budget` of 0 selects the library default. Counts beyond
/// `u64::MAX` report `Domain`.
///
/// # Safety
/// `graph` must be a live handle, `pattern` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn catbound_count_homs(
    graph: *const CatboundGraph,
    pattern: *const c_char,
    budget: u64,
    out: *mut u64,
) -> CatboundStatus {
    guard(|| {
        let g = match unsafe { graph_ref(graph) } {
            Ok(g) => g,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(CatboundStatus::NullPointer, "out is null");
        }
        let pattern = match unsafe { pattern_by_name(pattern) } {
            Ok(p) => p,
            Err(s) => return s,
        };
        let budget = if budget == 0 {
            catbound::homcount::DEFAULT_BUDGET
        } else {
            budget
        };
        match count_homs_with_budget(&pattern, g, budget) {
            Ok(c) => match u64::try_from(c) {
                Ok(c) => {
                    // SAFETY: checked non-null above.
                    unsafe { *out = c };
                    CatboundStatus::Ok
                }
                Err(_) => fail(CatboundStatus::Domain, format!("count {c} exceeds u64")),
            },
            Err(e) => from_error(e),
        }
    })
}

/// Upper bound on the homomorphism count of the named catalog pattern into
/// the graph, using the default statistic grid of `method`. `log_bound_out`
/// is optional.
///
/// # Safety
/// `graph` must be a live handle, `pattern` NUL-terminated, `bound_out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn catbound_bound(
    graph: *const CatboundGraph,
    pattern: *const c_char,
    method: CatboundMethod,
    bound_out: *mut f64,
    log_bound_out: *mut f64,
) -> CatboundStatus {
    guard(|| {
        let g = match unsafe { graph_ref(graph) } {
            Ok(g) => g,
            Err(s) => return s,
        };
        if bound_out.is_null() {
            return fail(CatboundStatus::NullPointer, "bound_out is null");
        }
        let pattern = match unsafe { pattern_by_name(pattern) } {
            Ok(p) => p,
            Err(s) => return s,
        };
        let method = match method {
            CatboundMethod::EdgesOnly => Method::EdgesOnly,
            CatboundMethod::Star => Method::Star,
            CatboundMethod::BiStar => Method::BiStar,
            CatboundMethod::Vvv => Method::Vvv,
            CatboundMethod::Nnn => Method::Nnn,
            CatboundMethod::Www => Method::Www,
        };
        match bound_for_method(g, &pattern, method, &StatGrid::default()) {
            Ok(report) if report.status == BoundStatus::Optimal => {
                // SAFETY: checked non-null above; log_bound_out is optional.
                unsafe {
                    *bound_out = report.bound;
                    if !log_bound_out.is_null() {
                        *log_bound_out = report.log_bound;
                    }
                }
                CatboundStatus::Ok
            }
            Ok(_) => fail(CatboundStatus::Unbounded, "entropy program is unbounded"),
            Err(e) => from_error(e),
        }
    })
}

/// Message for the last failure on this thread, or null if there was none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn catbound_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
