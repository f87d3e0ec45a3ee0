#ifndef DIAMOND_H
#define DIAMOND_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DiamondAdderBound {
  DIAMOND_ADDER_BOUND_CAPACITY = 0,
  DIAMOND_ADDER_BOUND_CUTSET = 1,
  // Markov-choice auxiliary.
  DIAMOND_ADDER_BOUND_MARKOV = 2,
  // Time-sharing converse.
  DIAMOND_ADDER_BOUND_TIME_SHARING = 3,
  // Single-letter relaxation through the entropy-convexity bound.
  DIAMOND_ADDER_BOUND_MGL = 4,
} DiamondAdderBound;

typedef enum DiamondDmcBound {
  DIAMOND_DMC_BOUND_LOWER = 0,
  DIAMOND_DMC_BOUND_CUTSET = 1,
  // Max-min over auxiliary channels.
  DIAMOND_DMC_BOUND_UPPER_AUX = 2,
} DiamondDmcBound;

typedef enum DiamondGaussBound {
  // Best lower bound; jointly Gaussian and full cooperation inputs.
  DIAMOND_GAUSS_BOUND_LOWER = 0,
  // Lower bound that also searches two-component mixtures.
  DIAMOND_GAUSS_BOUND_LOWER_MIXTURE = 1,
  DIAMOND_GAUSS_BOUND_CUTSET = 2,
  DIAMOND_GAUSS_BOUND_MARKOV = 3,
  DIAMOND_GAUSS_BOUND_TIME_SHARING = 4,
} DiamondGaussBound;

typedef enum DiamondStatus {
  DIAMOND_STATUS_OK = 0,
  DIAMOND_STATUS_NULL_POINTER = 1,
  DIAMOND_STATUS_INVALID_ARGUMENT = 2,
  DIAMOND_STATUS_SINGULAR = 3,
  DIAMOND_STATUS_BUDGET = 4,
  DIAMOND_STATUS_VERIFICATION_FAILED = 5,
  DIAMOND_STATUS_IO = 6,
  DIAMOND_STATUS_PANIC = 7,
} DiamondStatus;

// Channel handle.
typedef struct DiamondMac DiamondMac;

// Result of a bound evaluation.
typedef struct DiamondReport DiamondReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *diamond_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must come from this library and not be freed twice.
void diamond_string_free(char *s);

// Channel from a row-major table `p[(x1 * x2_size + x2) * y_size + y]`.
//
// # Safety
// `p` must point to `len` doubles; `out` must be writable.
enum DiamondStatus diamond_mac_new(size_t x1_size,
                                   size_t x2_size,
                                   size_t y_size,
                                   const double *p,
                                   size_t len,
                                   struct DiamondMac **out);

// Channel from its JSON form.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum DiamondStatus diamond_mac_from_json(const char *json, struct DiamondMac **out);

struct DiamondMac *diamond_mac_binary_adder(void);

// # Safety
// `mac` must come from this library and not be freed twice.
void diamond_mac_free(struct DiamondMac *mac);

// Evaluates a bound on a channel handle. `quick` trades accuracy for time.
//
// # Safety
// `mac` must be a live handle; `out` must be writable.
enum DiamondStatus diamond_dmc_bound(const struct DiamondMac *mac,
                                     double c1,
                                     double c2,
                                     enum DiamondDmcBound which,
                                     int quick,
                                     struct DiamondReport **out);

// # Safety
// `out` must be writable.
enum DiamondStatus diamond_adder_bound(double c1,
                                       double c2,
                                       enum DiamondAdderBound which,
                                       struct DiamondReport **out);

// # Safety
// `out` must be writable.
enum DiamondStatus diamond_gauss_bound(double p1,
                                       double p2,
                                       double c1,
                                       double c2,
                                       enum DiamondGaussBound which,
                                       struct DiamondReport **out);

// Bound value in bits, or NaN for a null handle.
//
// # Safety
// `report` must be a live handle or NULL.
double diamond_report_value(const struct DiamondReport *report);

// Full report as JSON; release with [`diamond_string_free`]. NULL for a
// null handle.
//
// # Safety
// `report` must be a live handle or NULL.
char *diamond_report_json(const struct DiamondReport *report);

// # Safety
// `report` must come from this library and not be freed twice.
void diamond_report_free(struct DiamondReport *report);

// Runs a named property suite. `passed` receives 0 or 1; a failing suite
// still returns `DIAMOND_STATUS_OK`. `json_out` may be NULL.
//
// # Safety
// `suite` must be NUL-terminated; `passed` must be writable.
enum DiamondStatus diamond_verify(const char *suite, int *passed, char **json_out);

// Runs the simulator on a JSON configuration and returns the outcome as JSON.
//
// # Safety
// `config` must be NUL-terminated; `json_out` must be writable.
enum DiamondStatus diamond_simulate(const char *config, char **json_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIAMOND_H */
