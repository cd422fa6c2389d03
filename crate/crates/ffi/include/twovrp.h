/* C interface for the twovrp solver toolkit. */

#ifndef TWOVRP_H
#define TWOVRP_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum TwovrpStatus {
  TWOVRP_STATUS_OK = 0,
  TWOVRP_STATUS_NULL_ARGUMENT = 1,
  TWOVRP_STATUS_INVALID_UTF8 = 2,
  TWOVRP_STATUS_PARSE_FAILED = 3,
  TWOVRP_STATUS_INFEASIBLE = 4,
  TWOVRP_STATUS_NO_FINITE_ROUTE = 5,
  TWOVRP_STATUS_TOO_LARGE = 6,
  TWOVRP_STATUS_INTERNAL_ERROR = 7,
} TwovrpStatus;

/**
 * Opaque solvable instance.
 */
typedef struct TwovrpInstance TwovrpInstance;

/**
 * Opaque solution handle.
 */
typedef struct TwovrpSolution TwovrpSolution;

/**
 * Multistart parameters; obtain defaults from `twovrp_default_params`.
 */
typedef struct TwovrpParams {
  /**
   * Window size of the sliding-subsets heuristic.
   */
  uint32_t s;
  /**
   * Sliding step.
   */
  uint32_t l;
  uint32_t restarts;
  uint64_t seed;
  /**
   * Max customers (switch included) per exact sub-solve.
   */
  uint32_t dp_cap;
  /**
   * Worker threads for restarts; 1 is sequential.
   */
  uint32_t parallel;
  /**
   * Soft time limit in seconds; 0 means none.
   */
  uint64_t time_limit_secs;
} TwovrpParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent error on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *twovrp_last_error(void);

struct TwovrpParams twovrp_default_params(void);

/**
 * Loads a 2VRP or 2TSP instance file; 2TSP instances are encoded into their
 * solvable 2VRP form. On success stores a new handle in `out`.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum TwovrpStatus twovrp_instance_load(const char *path, struct TwovrpInstance **out);

/**
 * Number of customers excluding the switch, or 0 for NULL.
 *
 * # Safety
 * `inst` must be a live handle from this library or NULL.
 */
uint32_t twovrp_instance_customers(const struct TwovrpInstance *inst);

/**
 * # Safety
 * `inst` must be a handle returned by this library, not yet freed.
 */
void twovrp_instance_free(struct TwovrpInstance *inst);

/**
 * Runs the multistart heuristic and stores a solution handle in `out`.
 *
 * # Safety
 * `inst` must be a live instance handle, `params` and `out` valid pointers.
 */
enum TwovrpStatus twovrp_solve(const struct TwovrpInstance *inst,
                               const struct TwovrpParams *params,
                               struct TwovrpSolution **out);

/**
 * Solves the instance exactly (needs `customers + 1 <= dp_cap`).
 *
 * # Safety
 * `inst` must be a live instance handle and `out` a valid pointer.
 */
enum TwovrpStatus twovrp_solve_exact(const struct TwovrpInstance *inst,
                                     uint32_t dp_cap,
                                     struct TwovrpSolution **out);

/**
 * Reference enumeration solver for tiny instances (`customers <= cap`).
 *
 * # Safety
 * `inst` must be a live instance handle and `out` a valid pointer.
 */
enum TwovrpStatus twovrp_brute_force(const struct TwovrpInstance *inst,
                                     uint32_t cap,
                                     struct TwovrpSolution **out);

/**
 * Total cost; u64::MAX encodes the infinity sentinel.
 *
 * # Safety
 * `sol` must be a live solution handle or NULL.
 */
uint64_t twovrp_solution_cost(const struct TwovrpSolution *sol);

/**
 * Number of visits including the switch customer.
 *
 * # Safety
 * `sol` must be a live solution handle or NULL.
 */
uint32_t twovrp_solution_len(const struct TwovrpSolution *sol);

/**
 * Visit at `index`: customer id (0 is the switch) and orientation
 * (0 = from the left node, 1 = from the right node).
 *
 * # Safety
 * `sol` must be a live solution handle; `id` and `orientation` must be
 * valid pointers.
 */
enum TwovrpStatus twovrp_solution_visit(const struct TwovrpSolution *sol,
                                        uint32_t index,
                                        uint32_t *id,
                                        uint8_t *orientation);

/**
 * Load carried by vehicle 1 (`vehicle` = 1) or vehicle 2 (`vehicle` = 2).
 *
 * # Safety
 * `sol` must be a live solution handle or NULL.
 */
uint64_t twovrp_solution_load(const struct TwovrpSolution *sol, uint8_t vehicle);

/**
 * # Safety
 * `sol` must be a handle returned by this library, not yet freed.
 */
void twovrp_solution_free(struct TwovrpSolution *sol);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TWOVRP_H */
