#ifndef CATBOUND_H
#define CATBOUND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every fallible call.
 */
typedef enum CatboundStatus {
  CATBOUND_STATUS_OK = 0,
  CATBOUND_STATUS_NULL_POINTER = 1,
  CATBOUND_STATUS_INVALID_ARGUMENT = 2,
  CATBOUND_STATUS_PARSE = 3,
  CATBOUND_STATUS_IO = 4,
  CATBOUND_STATUS_DOMAIN = 5,
  CATBOUND_STATUS_BUDGET_EXCEEDED = 6,
  CATBOUND_STATUS_UNBOUNDED = 7,
  CATBOUND_STATUS_INTERNAL = 8,
} CatboundStatus;

/**
 * Statistic selector for [`catbound_stat`].
 */
typedef enum CatboundStatKind {
  CATBOUND_STAT_KIND_DOMAIN_SIZE = 0,
  CATBOUND_STAT_KIND_EDGE_COUNT = 1,
  CATBOUND_STAT_KIND_MAX_DEGREE = 2,
  CATBOUND_STAT_KIND_STAR = 3,
  CATBOUND_STAT_KIND_BI_STAR = 4,
  CATBOUND_STAT_KIND_CAT_V = 5,
  CATBOUND_STAT_KIND_CAT_N = 6,
  CATBOUND_STAT_KIND_CAT_W = 7,
} CatboundStatKind;

/**
 * Bound method selector for [`catbound_bound`].
 */
typedef enum CatboundMethod {
  CATBOUND_METHOD_EDGES_ONLY = 0,
  CATBOUND_METHOD_STAR = 1,
  CATBOUND_METHOD_BI_STAR = 2,
  CATBOUND_METHOD_VVV = 3,
  CATBOUND_METHOD_NNN = 4,
  CATBOUND_METHOD_WWW = 5,
} CatboundMethod;

/**
 * Opaque undirected host graph.
 */
typedef struct CatboundGraph CatboundGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Loads an edge-list file. On success `*out` owns a handle that must be
 * released with [`catbound_graph_free`].
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a writable pointer.
 */
enum CatboundStatus catbound_graph_load(const char *path, struct CatboundGraph **out);

/**
 * Builds a graph on vertices `0..vertex_count` from `edge_count` pairs
 * stored flat in `endpoints` (`2 * edge_count` entries).
 *
 * # Safety
 * `endpoints` must point to `2 * edge_count` readable values (it may be
 * null when `edge_count` is 0) and `out` must be writable.
 */
enum CatboundStatus catbound_graph_from_edges(size_t vertex_count,
                                              const uint32_t *endpoints,
                                              size_t edge_count,
                                              struct CatboundGraph **out);

/**
 * Releases a handle. Null is accepted and ignored.
 *
 * # Safety
 * `graph` must be null or a handle not yet freed.
 */
void catbound_graph_free(struct CatboundGraph *graph);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t catbound_graph_vertex_count(const struct CatboundGraph *graph);

/**
 * Number of undirected edges, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t catbound_graph_edge_count(const struct CatboundGraph *graph);

/**
 * Computes one statistic. `value_out` receives the plain value (infinite
 * on overflow) and `log_value_out`, if non-null, its natural log.
 *
 * # Safety
 * `params` must point to `param_count` values (or be null when it is 0),
 * `graph` must be a live handle and `value_out` writable.
 */
enum CatboundStatus catbound_stat(const struct CatboundGraph *graph,
                                  enum CatboundStatKind kind,
                                  const double *params,
                                  size_t param_count,
                                  bool transposed,
                                  double *value_out,
                                  double *log_value_out);

/**
 * Exact number of homomorphisms from the named catalog pattern into the
 * graph. A `budget` of 0 selects the library default. Counts beyond
 * `u64::MAX` report `Domain`.
 *
 * # Safety
 * `graph` must be a live handle, `pattern` NUL-terminated, `out` writable.
 */
enum CatboundStatus catbound_count_homs(const struct CatboundGraph *graph,
                                        const char *pattern,
                                        uint64_t budget,
                                        uint64_t *out);

/**
 * Upper bound on the homomorphism count of the named catalog pattern into
 * the graph, using the default statistic grid of `method`. `log_bound_out`
 * is optional.
 *
 * # Safety
 * `graph` must be a live handle, `pattern` NUL-terminated, `bound_out`
 * writable.
 */
enum CatboundStatus catbound_bound(const struct CatboundGraph *graph,
                                   const char *pattern,
                                   enum CatboundMethod method,
                                   double *bound_out,
                                   double *log_bound_out);

/**
 * Message for the last failure on this thread, or null if there was none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *catbound_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CATBOUND_H */
