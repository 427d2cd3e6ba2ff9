#ifndef SED_FFI_H
#define SED_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SedSamplingLaw {
  SED_SAMPLING_LAW_UNIFORM = 0,
  /**
   * Stratified Cauchy law; uses `center` and `half_width`.
   */
  SED_SAMPLING_LAW_RESONANCE = 1,
} SedSamplingLaw;

typedef enum SedStatus {
  SED_STATUS_OK = 0,
  SED_STATUS_NULL_POINTER = 1,
  SED_STATUS_CONFIG = 2,
  SED_STATUS_DOMAIN = 3,
  SED_STATUS_MODEL_VALIDITY = 4,
  SED_STATUS_COVERAGE = 5,
  SED_STATUS_SINGULARITY = 6,
  SED_STATUS_RANGE = 7,
  SED_STATUS_SHAPE = 8,
  SED_STATUS_IO = 9,
  SED_STATUS_PANIC = 10,
} SedStatus;

typedef enum SedUnitSystem {
  SED_UNIT_SYSTEM_NATURAL = 0,
  SED_UNIT_SYSTEM_GAUSSIAN_CGS = 1,
} SedUnitSystem;

/**
 * Opaque handle to a sampled set of field modes.
 */
typedef struct SedModeSet SedModeSet;

typedef struct SedOscillatorParams {
  double charge;
  double mass;
  double natural_frequency;
  double light_speed;
  double hbar;
  double radiation_tau;
} SedOscillatorParams;

typedef struct SedModeSamplingConfig {
  size_t count;
  double omega_min;
  double omega_max;
  enum SedSamplingLaw law;
  double center;
  double half_width;
  uint64_t seed;
  double light_speed;
  double hbar;
  double volume;
} SedModeSamplingConfig;

typedef struct SedVec3 {
  double x;
  double y;
  double z;
} SedVec3;

typedef struct SedGroundState {
  uint32_t z;
  double r_min;
  double e_min;
  double e_min_ev;
  double r_numeric;
  double e_numeric;
} SedGroundState;

typedef struct SedAngularMomentum {
  uint32_t l;
  double lz_bar2;
  double dlx2;
  double dly2;
  double dlz2;
  double l2_total;
  double standard_l2;
  bool satisfies_component_bound;
} SedAngularMomentum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `len - 1` bytes) and returns the full message
 * length in bytes. Pass a null `buf` to query the length.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t sed_last_error_message(char *buf, size_t len);

/**
 * Natural-unit parameters (ħ = m = ω₀ = c = 1) for damping `τω₀`.
 *
 * # Safety
 * `out` must be null or a valid pointer.
 */
enum SedStatus sed_oscillator_params_natural(double damping, struct SedOscillatorParams *out);

/**
 * Electron parameters in Gaussian-CGS units bound at `omega0` [1/s].
 *
 * # Safety
 * `out` must be null or a valid pointer.
 */
enum SedStatus sed_oscillator_params_cgs_electron(double omega0, struct SedOscillatorParams *out);

/**
 * `τ = 2e²/(3mc³)`.
 *
 * # Safety
 * `out` must be null or a valid pointer.
 */
enum SedStatus sed_radiation_time_constant(double charge,
                                           double mass,
                                           double light_speed,
                                           double *out);

/**
 * `χ(ω) = 1/(ω₀² − ω² + iτω³)` as real and imaginary parts.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum SedStatus sed_susceptibility(double omega,
                                  const struct SedOscillatorParams *params,
                                  double *out_re,
                                  double *out_im);

/**
 * Samples a mode set. On success `*out` owns a handle that must be released
 * with [`sed_mode_set_free`].
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum SedStatus sed_mode_set_new(const struct SedModeSamplingConfig *config,
                                struct SedModeSet **out);

/**
 * Releases a handle from [`sed_mode_set_new`]. Null is ignored.
 *
 * # Safety
 * `set` must be null or a live handle; it is invalid afterwards.
 */
void sed_mode_set_free(struct SedModeSet *set);

/**
 * # Safety
 * Pointers must be null or valid.
 */
enum SedStatus sed_mode_set_len(const struct SedModeSet *set, size_t *out);

/**
 * Electric field at position `r` and time `t`.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum SedStatus sed_mode_set_electric_field(const struct SedModeSet *set,
                                           struct SedVec3 r,
                                           double t,
                                           struct SedVec3 *out);

/**
 * Vector potential (Coulomb gauge) at position `r` and time `t`.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum SedStatus sed_mode_set_vector_potential(const struct SedModeSet *set,
                                             struct SedVec3 r,
                                             double t,
                                             struct SedVec3 *out);

/**
 * Mode sum for `[x, p]`, per component, in the units of ħ.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum SedStatus sed_commutator_mode_sum(const struct SedOscillatorParams *params,
                                       const struct SedModeSet *set,
                                       double *out);

/**
 * Phase-averaged per-component `⟨x²⟩` and `⟨p²⟩`.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum SedStatus sed_phase_averaged_moments(const struct SedOscillatorParams *params,
                                          const struct SedModeSet *set,
                                          double *out_x2,
                                          double *out_p2);

/**
 * Closed-form steady-state position and momentum at `n` instants.
 * `out_positions` and `out_momenta` must each hold `n` elements.
 *
 * # Safety
 * `times` must be valid for `n` reads, the outputs for `n` writes.
 */
enum SedStatus sed_steady_state(const struct SedOscillatorParams *params,
                                const struct SedModeSet *set,
                                const double *times,
                                size_t n,
                                struct SedVec3 *out_positions,
                                struct SedVec3 *out_momenta);

/**
 * Minimum of the uncertainty energy functional for nuclear charge `z`.
 *
 * # Safety
 * `out` must be null or a valid pointer.
 */
enum SedStatus sed_minimize_ground_energy(uint32_t z,
                                          enum SedUnitSystem units,
                                          struct SedGroundState *out);

/**
 * Angular-momentum dispersions and total `(l + 1/2)²ħ²` for quantum number `l`.
 *
 * # Safety
 * `out` must be null or a valid pointer.
 */
enum SedStatus sed_angular_momentum_total(int64_t l, double hbar, struct SedAngularMomentum *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SED_FFI_H */
