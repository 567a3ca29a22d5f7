// SPDX-License-Identifier: Apache-2.0

//! C ABI over `medusa-core`.
//!
//! Objects cross the boundary as opaque handles, each released with its
//! matching `*_free` function. Every fallible call returns a
//! [`MedusaStatus`]; the message of the last failure on the calling thread
//! is available from [`medusa_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufReader;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use medusa_core::fit::{fit_power_law, Binning};
use medusa_core::fractal::box_cover;
use medusa_core::medusa::MedusaReport;
use medusa_core::{classify, decompose, load_edge_list, Error, Graph, IngestOptions, NodeSet};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MedusaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The input could not be read or parsed.
    Input = 3,
    /// The analysis could not be carried out on this input.
    Analysis = 4,
    Panic = 5,
}

/// Component of a node in the nucleus / peer-connected / isolated split.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MedusaComponent {
    Nucleus = 0,
    PeerConnected = 1,
    Isolated = 2,
}

/// An immutable simple undirected graph.
pub struct MedusaGraph(Graph);

/// Shell index of every node of one graph.
pub struct MedusaShells(medusa_core::ShellAssignment);

/// The nucleus / peer-connected / isolated split of one graph.
pub struct MedusaPartition(medusa_core::MedusaPartition);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> MedusaStatus {
    set_error(e.to_string());
    if e.is_input_error() {
        MedusaStatus::Input
    } else if matches!(e, Error::InvalidArgument(_) | Error::NodeOutOfRange(_)) {
        MedusaStatus::InvalidArgument
    } else {
        MedusaStatus::Analysis
    }
}

fn guard(f: impl FnOnce() -> MedusaStatus) -> MedusaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            MedusaStatus::Panic
        }
    }
}

fn null() -> MedusaStatus {
    set_error("null pointer argument");
    MedusaStatus::NullPointer
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn medusa_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a graph on nodes `0..node_count` from `edge_count` pairs stored
/// flat in `edges` (`u0, v0, u1, v1, ...`). Self-loops and duplicates are
/// dropped.
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable `uint32_t` values (it may
/// be NULL when `edge_count` is 0) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn medusa_graph_from_edges(
    node_count: usize,
    edges: *const u32,
    edge_count: usize,
    out: *mut *mut MedusaGraph,
) -> MedusaStatus {
    guard(|| {
        if out.is_null() || (edges.is_null() && edge_count > 0) {
            return null();
        }
        let flat = if edge_count == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let pairs: Vec<(u32, u32)> = flat.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        if let Some(&bad) = flat.iter().find(|&&v| v as usize >= node_count) {
            set_error(format!("node {bad} is outside 0..{node_count}"));
            return MedusaStatus::InvalidArgument;
        }
        put(out, MedusaGraph(Graph::from_edges(node_count, &pairs).0));
        MedusaStatus::Ok
    })
}

/// Loads a whitespace-separated edge-list file. Nodes are numbered in order
/// of first appearance in the file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn medusa_graph_load(path: *const c_char, out: *mut *mut MedusaGraph) -> MedusaStatus {
    guard(|| {
        if path.is_null() || out.is_null() {
            return null();
        }
        let Ok(path) = CStr::from_ptr(path).to_str() else {
            set_error("path is not valid UTF-8");
            return MedusaStatus::InvalidArgument;
        };
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) => {
                set_error(format!("{path}: {e}"));
                return MedusaStatus::Input;
            }
        };
        match load_edge_list(BufReader::new(file), IngestOptions::default()) {
            Ok((g, _)) => {
                put(out, MedusaGraph(g));
                MedusaStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `graph` must be NULL or a handle from this library that was not freed.
#[no_mangle]
pub unsafe extern "C" fn medusa_graph_free(graph: *mut MedusaGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Node count, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn medusa_graph_node_count(graph: *const MedusaGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.node_count())
}

/// Edge count, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn medusa_graph_edge_count(graph: *const MedusaGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.edge_count())
}

/// k-shell decomposition of `graph`.
///
/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn medusa_decompose(graph: *const MedusaGraph, out: *mut *mut MedusaShells) -> MedusaStatus {
    guard(|| {
        let Some(g) = graph.as_ref() else { return null() };
        if out.is_null() {
            return null();
        }
        put(out, MedusaShells(decompose(&g.0)));
        MedusaStatus::Ok
    })
}

/// # Safety
/// `shells` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn medusa_shells_free(shells: *mut MedusaShells) {
    if !shells.is_null() {
        drop(Box::from_raw(shells));
    }
}

/// Largest shell index, or 0 for NULL.
///
/// # Safety
/// `shells` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn medusa_shells_k_max(shells: *const MedusaShells) -> u32 {
    shells.as_ref().map_or(0, |s| s.0.k_max)
}

/// Copies the shell index of nodes `0..len` into `buf`. `len` must equal
/// the node count.
///
/// # Safety
/// `shells` must be a live handle and `buf` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn medusa_shells_copy(shells: *const MedusaShells, buf: *mut u32, len: usize) -> MedusaStatus {
    guard(|| {
        let Some(s) = shells.as_ref() else { return null() };
        if buf.is_null() && len > 0 {
            return null();
        }
        if len != s.0.node_count() {
            set_error(format!("buffer holds {len} values, graph has {} nodes", s.0.node_count()));
            return MedusaStatus::InvalidArgument;
        }
        if len > 0 {
            std::slice::from_raw_parts_mut(buf, len).copy_from_slice(&s.0.shell_index);
        }
        MedusaStatus::Ok
    })
}

/// Splits `graph` into nucleus, peer-connected and isolated nodes.
///
/// # Safety
/// `graph` and `shells` must be live handles for the same graph and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn medusa_classify(
    graph: *const MedusaGraph,
    shells: *const MedusaShells,
    out: *mut *mut MedusaPartition,
) -> MedusaStatus {
    guard(|| {
        let (Some(g), Some(s)) = (graph.as_ref(), shells.as_ref()) else {
            return null();
        };
        if out.is_null() {
            return null();
        }
        if g.0.node_count() != s.0.node_count() {
            set_error("shells belong to a different graph");
            return MedusaStatus::InvalidArgument;
        }
        put(out, MedusaPartition(classify(&g.0, &s.0)));
        MedusaStatus::Ok
    })
}

/// # Safety
/// `partition` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn medusa_partition_free(partition: *mut MedusaPartition) {
    if !partition.is_null() {
        drop(Box::from_raw(partition));
    }
}

/// Sizes of the three components. Any output pointer may be NULL.
///
/// # Safety
/// `partition` must be a live handle; non-NULL outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn medusa_partition_sizes(
    partition: *const MedusaPartition,
    nucleus: *mut usize,
    peer_connected: *mut usize,
    isolated: *mut usize,
) -> MedusaStatus {
    guard(|| {
        let Some(p) = partition.as_ref() else { return null() };
        for (dst, n) in [
            (nucleus, p.0.nucleus.len()),
            (peer_connected, p.0.peer_connected.len()),
            (isolated, p.0.isolated.len()),
        ] {
            if !dst.is_null() {
                *dst = n;
            }
        }
        MedusaStatus::Ok
    })
}

/// Component of `node`.
///
/// # Safety
/// `partition` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn medusa_partition_component(
    partition: *const MedusaPartition,
    node: u32,
    out: *mut MedusaComponent,
) -> MedusaStatus {
    guard(|| {
        let Some(p) = partition.as_ref() else { return null() };
        if out.is_null() {
            return null();
        }
        let p = &p.0;
        if node as usize >= p.nucleus.universe() {
            set_error(format!("node {node} is outside the graph"));
            return MedusaStatus::InvalidArgument;
        }
        *out = if p.nucleus.contains(node) {
            MedusaComponent::Nucleus
        } else if p.peer_connected.contains(node) {
            MedusaComponent::PeerConnected
        } else {
            MedusaComponent::Isolated
        };
        MedusaStatus::Ok
    })
}

/// The full component report as a JSON string; release with
/// [`medusa_string_free`].
///
/// # Safety
/// `graph` and `partition` must be live handles for the same graph and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn medusa_partition_report_json(
    graph: *const MedusaGraph,
    partition: *const MedusaPartition,
    out: *mut *mut c_char,
) -> MedusaStatus {
    guard(|| {
        let (Some(g), Some(p)) = (graph.as_ref(), partition.as_ref()) else {
            return null();
        };
        if out.is_null() {
            return null();
        }
        if g.0.node_count() != p.0.nucleus.universe() {
            set_error("partition belongs to a different graph");
            return MedusaStatus::InvalidArgument;
        }
        let text = match serde_json::to_string(&MedusaReport::build(&g.0, &p.0)) {
            Ok(t) => t,
            Err(e) => return status_of(&e.into()),
        };
        *out = CString::new(text).map_or(ptr::null_mut(), CString::into_raw);
        MedusaStatus::Ok
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn medusa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of boxes of size `box_size` in one seeded greedy covering of the
/// whole graph.
///
/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn medusa_box_count(
    graph: *const MedusaGraph,
    box_size: u32,
    seed: u64,
    out: *mut usize,
) -> MedusaStatus {
    guard(|| {
        let Some(g) = graph.as_ref() else { return null() };
        if out.is_null() {
            return null();
        }
        match box_cover(&g.0, &NodeSet::all(g.0.node_count()), box_size, seed) {
            Ok(c) => {
                *out = c.box_count;
                MedusaStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Least-squares power law `y = a * x^-exponent` on log-log axes.
///
/// # Safety
/// `x` and `y` must each hold `len` values; `exponent` and `r_squared` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn medusa_fit_power_law(
    x: *const f64,
    y: *const f64,
    len: usize,
    exponent: *mut f64,
    r_squared: *mut f64,
) -> MedusaStatus {
    guard(|| {
        if x.is_null() || y.is_null() || exponent.is_null() || r_squared.is_null() {
            return null();
        }
        let xs = std::slice::from_raw_parts(x, len);
        let ys = std::slice::from_raw_parts(y, len);
        let points: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
        match fit_power_law(&points, Binning::Linear) {
            Ok(f) => {
                *exponent = f.exponent;
                *r_squared = f.r_squared;
                MedusaStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}
