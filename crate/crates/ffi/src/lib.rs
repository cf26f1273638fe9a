//! C interface to `scan-core`.
//!
//! Every fallible function returns a [`ScanStatus`]; on failure a message is
//! stored per thread and can be read with [`scan_last_error`]. Objects are
//! opaque handles owned by the caller and released with the matching
//! `*_free` function. Strings returned through out-parameters are released
//! with [`scan_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use scan_core::checkpoint::Checkpoint;
use scan_core::eval::predict_sentence;
use scan_core::treebank::{parse_bracketed, tree_to_graph, ConstituencyGraph, GraphOptions, ParseTree};
use scan_core::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    MalformedTree = 3,
    Io = 4,
    Checkpoint = 5,
    OutOfRange = 6,
    BufferTooSmall = 7,
    InvalidInput = 8,
    Internal = 9,
}

/// A parsed constituency tree.
pub struct ScanTree(ParseTree);

/// The attention graph of a tree.
pub struct ScanGraph(ConstituencyGraph);

/// A trained model loaded from a checkpoint.
pub struct ScanModel(Checkpoint);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("nul bytes removed")));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> ScanStatus {
    match err {
        Error::MalformedTree { .. } => ScanStatus::MalformedTree,
        Error::Io { .. } => ScanStatus::Io,
        Error::Checkpoint(_) => ScanStatus::Checkpoint,
        _ => ScanStatus::InvalidInput,
    }
}

/// Runs `f`, recording its error and converting panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), (ScanStatus, String)>) -> ScanStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ScanStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ScanStatus::Internal
        }
    }
}

fn core_err(e: Error) -> (ScanStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (ScanStatus, String) {
    (ScanStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (ScanStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (ScanStatus::InvalidUtf8, format!("`{what}` is not valid UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (ScanStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), (ScanStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("nul bytes removed")
        .into_raw()
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn scan_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn scan_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses one bracketed tree.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scan_tree_parse(text: *const c_char, out: *mut *mut ScanTree) -> ScanStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let tree = parse_bracketed(text).map_err(core_err)?;
        write_out(out, Box::into_raw(Box::new(ScanTree(tree))), "out")
    })
}

/// # Safety
/// `tree` must come from [`scan_tree_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn scan_tree_free(tree: *mut ScanTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// # Safety
/// `tree` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scan_tree_num_leaves(tree: *const ScanTree, out: *mut usize) -> ScanStatus {
    guard(|| {
        let t = deref(tree, "tree")?;
        write_out(out, t.0.num_leaves(), "out")
    })
}

/// Serializes the tree back to bracketed form. Free the result with
/// [`scan_string_free`].
///
/// # Safety
/// `tree` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scan_tree_to_string(tree: *const ScanTree, out: *mut *mut c_char) -> ScanStatus {
    guard(|| {
        let t = deref(tree, "tree")?;
        write_out(out, to_c_string(t.0.to_string()), "out")
    })
}

/// Builds the leaf-sourced graph of `tree`. With `keep_preterminals` false,
/// a tag over a single word is merged into the word's leaf.
///
/// # Safety
/// `tree` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scan_graph_from_tree(
    tree: *const ScanTree,
    keep_preterminals: bool,
    out: *mut *mut ScanGraph,
) -> ScanStatus {
    guard(|| {
        let t = deref(tree, "tree")?;
        let g = tree_to_graph(&t.0, GraphOptions { keep_preterminals }).map_err(core_err)?;
        write_out(out, Box::into_raw(Box::new(ScanGraph(g))), "out")
    })
}

/// # Safety
/// `graph` must come from [`scan_graph_from_tree`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn scan_graph_free(graph: *mut ScanGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Leaf count `n`, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scan_graph_num_leaves(graph: *const ScanGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.n())
}

/// Internal-node count `m`, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scan_graph_num_internal(graph: *const ScanGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.m())
}

/// Total edge count including self-loops, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scan_graph_num_edges(graph: *const ScanGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Copies the source nodes of `node` into `buf`. `written` receives the
/// neighbour count; if it exceeds `capacity` nothing is copied and
/// `BufferTooSmall` is returned, so passing `capacity = 0` queries the size.
///
/// # Safety
/// `graph` must be a live handle, `buf` valid for `capacity` writes (or
/// NULL when `capacity` is 0), `written` writable.
#[no_mangle]
pub unsafe extern "C" fn scan_graph_neighbors(
    graph: *const ScanGraph,
    node: usize,
    buf: *mut usize,
    capacity: usize,
    written: *mut usize,
) -> ScanStatus {
    guard(|| {
        let g = &deref(graph, "graph")?.0;
        if node >= g.num_nodes() {
            return Err((
                ScanStatus::OutOfRange,
                format!("node {node} out of range (graph has {} nodes)", g.num_nodes()),
            ));
        }
        let nb = g.neighbors(node);
        write_out(written, nb.len(), "written")?;
        if nb.len() > capacity {
            return Err((
                ScanStatus::BufferTooSmall,
                format!("{} neighbours do not fit in {capacity}", nb.len()),
            ));
        }
        if !nb.is_empty() {
            if buf.is_null() {
                return Err(null("buf"));
            }
            ptr::copy_nonoverlapping(nb.as_ptr(), buf, nb.len());
        }
        Ok(())
    })
}

/// Half-open token span `[start, end)` covered by `node`.
///
/// # Safety
/// `graph` must be a live handle; `start` and `end` writable.
#[no_mangle]
pub unsafe extern "C" fn scan_graph_span(
    graph: *const ScanGraph,
    node: usize,
    start: *mut usize,
    end: *mut usize,
) -> ScanStatus {
    guard(|| {
        let g = &deref(graph, "graph")?.0;
        if node >= g.num_nodes() {
            return Err((ScanStatus::OutOfRange, format!("node {node} out of range")));
        }
        let (s, e) = g.node(node).span;
        write_out(start, s, "start")?;
        write_out(end, e, "end")
    })
}

/// Loads a checkpoint file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scan_model_load(path: *const c_char, out: *mut *mut ScanModel) -> ScanStatus {
    guard(|| {
        let path = read_str(path, "path")?;
        let ck = Checkpoint::load(Path::new(path)).map_err(core_err)?;
        write_out(out, Box::into_raw(Box::new(ScanModel(ck))), "out")
    })
}

/// # Safety
/// `model` must come from [`scan_model_load`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn scan_model_free(model: *mut ScanModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Category count `N`, or 0 for NULL.
///
/// # Safety
/// `model` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scan_model_num_categories(model: *const ScanModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.categories.len())
}

/// Runs the model on a parsed sentence and returns a JSON object with the
/// detected `labels` and the full `attention` dump. Free the result with
/// [`scan_string_free`].
///
/// # Safety
/// `model` must be a live handle, `parse` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn scan_model_predict(
    model: *const ScanModel,
    parse: *const c_char,
    out: *mut *mut c_char,
) -> ScanStatus {
    guard(|| {
        let ck = &deref(model, "model")?.0;
        let parse = read_str(parse, "parse")?;
        let opts = GraphOptions {
            keep_preterminals: ck.keep_preterminals,
        };
        let pred = predict_sentence(&ck.model, &ck.vocab, &ck.categories, parse, ck.variant, opts)
            .map_err(core_err)?;
        write_out(out, to_c_string(pred.to_json()), "out")
    })
}
