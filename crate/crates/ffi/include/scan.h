#ifndef SCAN_H
#define SCAN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

/*
 Result code of every fallible call.
 */
typedef enum ScanStatus {
  SCAN_STATUS_OK = 0,
  SCAN_STATUS_NULL_POINTER = 1,
  SCAN_STATUS_INVALID_UTF8 = 2,
  SCAN_STATUS_MALFORMED_TREE = 3,
  SCAN_STATUS_IO = 4,
  SCAN_STATUS_CHECKPOINT = 5,
  SCAN_STATUS_OUT_OF_RANGE = 6,
  SCAN_STATUS_BUFFER_TOO_SMALL = 7,
  SCAN_STATUS_INVALID_INPUT = 8,
  SCAN_STATUS_INTERNAL = 9,
} ScanStatus;

/*
 The attention graph of a tree.
 */
typedef struct ScanGraph ScanGraph;

/*
 A trained model loaded from a checkpoint.
 */
typedef struct ScanModel ScanModel;

/*
 A parsed constituency tree.
 */
typedef struct ScanTree ScanTree;

/*
 Message of the last failed call on this thread, or NULL. The pointer is
 valid until the next call into this library on the same thread.
 */
const char *scan_last_error(void);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void scan_string_free(char *s);

/*
 Parses one bracketed tree.

 # Safety
 `text` must be a NUL-terminated string; `out` must be writable.
 */
enum ScanStatus scan_tree_parse(const char *text, struct ScanTree **out);

/*
 # Safety
 `tree` must come from [`scan_tree_parse`] and not have been freed.
 */
void scan_tree_free(struct ScanTree *tree);

/*
 # Safety
 `tree` must be a live handle; `out` must be writable.
 */
enum ScanStatus scan_tree_num_leaves(const struct ScanTree *tree, size_t *out);

/*
 Serializes the tree back to bracketed form. Free the result with
 [`scan_string_free`].

 # Safety
 `tree` must be a live handle; `out` must be writable.
 */
enum ScanStatus scan_tree_to_string(const struct ScanTree *tree, char **out);

/*
 Builds the leaf-sourced graph of `tree`. With `keep_preterminals` false,
 a tag over a single word is merged into the word's leaf.

 # Safety
 `tree` must be a live handle; `out` must be writable.
 */
enum ScanStatus scan_graph_from_tree(const struct ScanTree *tree,
                                     bool keep_preterminals,
                                     struct ScanGraph **out);

/*
 # Safety
 `graph` must come from [`scan_graph_from_tree`] and not have been freed.
 */
void scan_graph_free(struct ScanGraph *graph);

/*
 Leaf count `n`, or 0 for NULL.

 # Safety
 `graph` must be NULL or a live handle.
 */
size_t scan_graph_num_leaves(const struct ScanGraph *graph);

/*
 Internal-node count `m`, or 0 for NULL.

 # Safety
 `graph` must be NULL or a live handle.
 */
size_t scan_graph_num_internal(const struct ScanGraph *graph);

/*
 Total edge count including self-loops, or 0 for NULL.

 # Safety
 `graph` must be NULL or a live handle.
 */
size_t scan_graph_num_edges(const struct ScanGraph *graph);

/*
 Copies the source nodes of `node` into `buf`. `written` receives the
 neighbour count; if it exceeds `capacity` nothing is copied and
 `BufferTooSmall` is returned, so passing `capacity = 0` queries the size.

 # Safety
 `graph` must be a live handle, `buf` valid for `capacity` writes (or
 NULL when `capacity` is 0), `written` writable.
 */
enum ScanStatus scan_graph_neighbors(const struct ScanGraph *graph,
                                     size_t node,
                                     size_t *buf,
                                     size_t capacity,
                                     size_t *written);

/*
 Half-open token span `[start, end)` covered by `node`.

 # Safety
 `graph` must be a live handle; `start` and `end` writable.
 */
enum ScanStatus scan_graph_span(const struct ScanGraph *graph,
                                size_t node,
                                size_t *start,
                                size_t *end);

/*
 Loads a checkpoint file.

 # Safety
 `path` must be a NUL-terminated string; `out` must be writable.
 */
enum ScanStatus scan_model_load(const char *path, struct ScanModel **out);

/*
 # Safety
 `model` must come from [`scan_model_load`] and not have been freed.
 */
void scan_model_free(struct ScanModel *model);

/*
 Category count `N`, or 0 for NULL.

 # Safety
 `model` must be NULL or a live handle.
 */
size_t scan_model_num_categories(const struct ScanModel *model);

/*
 Runs the model on a parsed sentence and returns a JSON object with the
 detected `labels` and the full `attention` dump. Free the result with
 [`scan_string_free`].

 # Safety
 `model` must be a live handle, `parse` NUL-terminated, `out` writable.
 */
enum ScanStatus scan_model_predict(const struct ScanModel *model, const char *parse, char **out);

#endif  /* SCAN_H */
