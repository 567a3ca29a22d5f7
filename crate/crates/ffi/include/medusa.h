#ifndef MEDUSA_H
#define MEDUSA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum {
  MEDUSA_STATUS_OK = 0,
  MEDUSA_STATUS_NULL_POINTER = 1,
  MEDUSA_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The input could not be read or parsed.
   */
  MEDUSA_STATUS_INPUT = 3,
  /**
   * The analysis could not be carried out on this input.
   */
  MEDUSA_STATUS_ANALYSIS = 4,
  MEDUSA_STATUS_PANIC = 5,
} MedusaStatus;

/**
 * Component of a node in the nucleus / peer-connected / isolated split.
 */
typedef enum {
  MEDUSA_COMPONENT_NUCLEUS = 0,
  MEDUSA_COMPONENT_PEER_CONNECTED = 1,
  MEDUSA_COMPONENT_ISOLATED = 2,
} MedusaComponent;

/**
 * An immutable simple undirected graph.
 */
typedef struct MedusaGraph MedusaGraph;

/**
 * The nucleus / peer-connected / isolated split of one graph.
 */
typedef struct MedusaPartition MedusaPartition;

/**
 * Shell index of every node of one graph.
 */
typedef struct MedusaShells MedusaShells;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *medusa_last_error(void);

/**
 * Builds a graph on nodes `0..node_count` from `edge_count` pairs stored
 * flat in `edges` (`u0, v0, u1, v1, ...`). Self-loops and duplicates are
 * dropped.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable `uint32_t` values (it may
 * be NULL when `edge_count` is 0) and `out` must be writable.
 */
MedusaStatus medusa_graph_from_edges(size_t node_count,
                                     const uint32_t *edges,
                                     size_t edge_count,
                                     MedusaGraph **out);

/**
 * Loads a whitespace-separated edge-list file. Nodes are numbered in order
 * of first appearance in the file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` must be writable.
 */
MedusaStatus medusa_graph_load(const char *path, MedusaGraph **out);

/**
 * # Safety
 * `graph` must be NULL or a handle from this library that was not freed.
 */
void medusa_graph_free(MedusaGraph *graph);

/**
 * Node count, or 0 for NULL.
 *
 * # Safety
 * `graph` must be NULL or a live handle.
 */
size_t medusa_graph_node_count(const MedusaGraph *graph);

/**
 * Edge count, or 0 for NULL.
 *
 * # Safety
 * `graph` must be NULL or a live handle.
 */
size_t medusa_graph_edge_count(const MedusaGraph *graph);

/**
 * k-shell decomposition of `graph`.
 *
 * # Safety
 * `graph` must be a live handle and `out` writable.
 */
MedusaStatus medusa_decompose(const MedusaGraph *graph, MedusaShells **out);

/**
 * # Safety
 * `shells` must be NULL or a live handle.
 */
void medusa_shells_free(MedusaShells *shells);

/**
 * Largest shell index, or 0 for NULL.
 *
 * # Safety
 * `shells` must be NULL or a live handle.
 */
uint32_t medusa_shells_k_max(const MedusaShells *shells);

/**
 * Copies the shell index of nodes `0..len` into `buf`. `len` must equal
 * the node count.
 *
 * # Safety
 * `shells` must be a live handle and `buf` must hold `len` values.
 */
MedusaStatus medusa_shells_copy(const MedusaShells *shells, uint32_t *buf, size_t len);

/**
 * Splits `graph` into nucleus, peer-connected and isolated nodes.
 *
 * # Safety
 * `graph` and `shells` must be live handles for the same graph and `out`
 * writable.
 */
MedusaStatus medusa_classify(const MedusaGraph *graph,
                             const MedusaShells *shells,
                             MedusaPartition **out);

/**
 * # Safety
 * `partition` must be NULL or a live handle.
 */
void medusa_partition_free(MedusaPartition *partition);

/**
 * Sizes of the three components. Any output pointer may be NULL.
 *
 * # Safety
 * `partition` must be a live handle; non-NULL outputs must be writable.
 */
MedusaStatus medusa_partition_sizes(const MedusaPartition *partition,
                                    size_t *nucleus,
                                    size_t *peer_connected,
                                    size_t *isolated);

/**
 * Component of `node`.
 *
 * # Safety
 * `partition` must be a live handle and `out` writable.
 */
MedusaStatus medusa_partition_component(const MedusaPartition *partition,
                                        uint32_t node,
                                        MedusaComponent *out);

/**
 * The full component report as a JSON string; release with
 * [`medusa_string_free`].
 *
 * # Safety
 * `graph` and `partition` must be live handles for the same graph and
 * `out` writable.
 */
MedusaStatus medusa_partition_report_json(const MedusaGraph *graph,
                                          const MedusaPartition *partition,
                                          char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, freed once.
 */
void medusa_string_free(char *s);

/**
 * Number of boxes of size `box_size` in one seeded greedy covering of the
 * whole graph.
 *
 * # Safety
 * `graph` must be a live handle and `out` writable.
 */
MedusaStatus medusa_box_count(const MedusaGraph *graph,
                              uint32_t box_size,
                              uint64_t seed,
                              size_t *out);

/**
 * Least-squares power law `y = a * x^-exponent` on log-log axes.
 *
 * # Safety
 * `x` and `y` must each hold `len` values; `exponent` and `r_squared` must
 * be writable.
 */
MedusaStatus medusa_fit_power_law(const double *x,
                                  const double *y,
                                  size_t len,
                                  double *exponent,
                                  double *r_squared);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEDUSA_H */
