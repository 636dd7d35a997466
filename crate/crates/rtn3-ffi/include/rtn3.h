#ifndef RTN3_H
#define RTN3_H

/* This file is generated by cbindgen from rtn3-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// GHZ initial-state family, `(|000⟩+|111⟩)/√2` mixed with white noise.
#define RTN3_FAMILY_GHZ 0

// W initial-state family, `(|001⟩+|010⟩+|100⟩)/√3` mixed with white noise.
#define RTN3_FAMILY_W 1

// Each qubit couples to its own independent telegraph fluctuator.
#define RTN3_COUPLING_LOCAL 0

// All three qubits couple to one shared telegraph fluctuator.
#define RTN3_COUPLING_COMMON 1

// GHZ-class witness `W_W2 = I/2 − |GHZ⟩⟨GHZ|`.
#define RTN3_WITNESS_GHZ_W2 0

// W-class witness `W_W1 = 2I/3 − |W⟩⟨W|`.
#define RTN3_WITNESS_W_W1 1

// Result of every fallible call. Values match the CLI exit codes where a
// counterpart exists.
typedef enum Rtn3Status {
  RTN3_STATUS_OK = 0,
  RTN3_STATUS_NULL_POINTER = 1,
  RTN3_STATUS_INVALID_ARGUMENT = 2,
  RTN3_STATUS_IO = 3,
  RTN3_STATUS_INTERNAL = 4,
} Rtn3Status;

// Opaque handle over a scenario (family, purity, coupling, noise rates).
typedef struct Rtn3Scenario Rtn3Scenario;

// Opaque handle over an evolved three-qubit density matrix.
typedef struct Rtn3State Rtn3State;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Create a scenario handle.
//
// `family` is one of the `RTN3_FAMILY_*` constants, `coupling` one of
// `RTN3_COUPLING_*`; `purity` is the Werner mixing weight in [0, 1];
// `gamma` and `nu` are the telegraph switching rate and qubit coupling
// strength (both positive). On success `*out` owns the handle; release it
// with `rtn3_scenario_free`.
//
// # Safety
// `out` must be null or valid for writing one pointer.
enum Rtn3Status rtn3_scenario_new(uint32_t family,
                                  uint32_t coupling,
                                  double purity,
                                  double gamma,
                                  double nu,
                                  struct Rtn3Scenario **out);

// Release a scenario handle; a null pointer is a no-op.
//
// # Safety
// `scenario` must be null or a pointer obtained from `rtn3_scenario_new`
// that has not been freed yet.
void rtn3_scenario_free(struct Rtn3Scenario *scenario);

// Evolve the scenario's initial state for time `t ≥ 0` (absolute units,
// 1/ν) using the exact noise-averaged propagator. On success `*out` owns a
// state handle; release it with `rtn3_state_free`.
//
// # Safety
// `scenario` must be a live scenario handle; `out` null or writable.
enum Rtn3Status rtn3_evolve_analytic(const struct Rtn3Scenario *scenario,
                                     double t,
                                     struct Rtn3State **out);

// Evolve by averaging `n_trajectories` sampled telegraph trajectories with
// the given RNG seed. Deterministic for a fixed (seed, n_trajectories).
//
// # Safety
// `scenario` must be a live scenario handle; `out` null or writable.
enum Rtn3Status rtn3_evolve_monte_carlo(const struct Rtn3Scenario *scenario,
                                        double t,
                                        size_t n_trajectories,
                                        uint64_t seed,
                                        struct Rtn3State **out);

// Release a state handle; a null pointer is a no-op.
//
// # Safety
// `state` must be null or a pointer obtained from an evolve call that has
// not been freed yet.
void rtn3_state_free(struct Rtn3State *state);

// Copy the 8×8 density matrix into caller buffers, row-major: entry (i, j)
// lands at index 8·i + j. Each buffer must hold 64 doubles.
//
// # Safety
// `state` must be a live state handle; `re` and `im` must be valid for
// writing 64 doubles each.
enum Rtn3Status rtn3_state_elements(const struct Rtn3State *state, double *re, double *im);

// Tripartite negativity: geometric mean of the three one-vs-two bipartite
// negativities.
//
// # Safety
// `state` must be a live state handle; `out` null or writable.
enum Rtn3Status rtn3_negativity3(const struct Rtn3State *state, double *out);

// Expectation value of an entanglement witness (`RTN3_WITNESS_*`); negative
// values certify entanglement of the matching class.
//
// # Safety
// `state` must be a live state handle; `out` null or writable.
enum Rtn3Status rtn3_witness_expectation(const struct Rtn3State *state,
                                         uint32_t witness,
                                         double *out);

// Genuine tripartite total, classical and quantum correlations, in bits.
// `grid_points_per_angle` controls the measurement-frame search; pass 0 for
// the default (8). Any of the out-pointers may be null to skip that value.
//
// # Safety
// `state` must be a live state handle; non-null out-pointers writable.
enum Rtn3Status rtn3_discord3(const struct Rtn3State *state,
                              size_t grid_points_per_angle,
                              double *out_total,
                              double *out_classical,
                              double *out_discord);

// Noise-averaged dephasing factor ⟨cos nφ(t)⟩ for harmonic `n` in 1..=6 of
// a telegraph process with switching rate `gamma` and coupling `nu`.
//
// # Safety
// `out` must be null or valid for writing one double.
enum Rtn3Status rtn3_dephasing_factor(uint32_t n, double gamma, double nu, double t, double *out);

// Static description of a status code (never null).
const char *rtn3_status_message(uint32_t status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RTN3_H */
