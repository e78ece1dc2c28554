#ifndef LINSYM_H
#define LINSYM_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of a fallible call.
 */
typedef enum LinsymStatus {
  LINSYM_STATUS_OK = 0,
  LINSYM_STATUS_NULL_POINTER = 1,
  LINSYM_STATUS_INVALID_UTF8 = 2,
  LINSYM_STATUS_MALFORMED_INPUT = 3,
  LINSYM_STATUS_DISCRIMINANT = 4,
  LINSYM_STATUS_ALGEBRA = 5,
  LINSYM_STATUS_INTERNAL = 6,
  LINSYM_STATUS_NUMERIC = 7,
  LINSYM_STATUS_PANIC = 8,
} LinsymStatus;

/**
 * A classification report.
 */
typedef struct LinsymReport LinsymReport;

/**
 * A parsed system `y'' = A y' + B y + f`.
 */
typedef struct LinsymSystem LinsymSystem;

/**
 * Options for [`linsym_classify`].
 */
typedef struct LinsymConfig {
  /**
   * Run the numeric flow check in addition to the exact one.
   */
  bool verify;
  /**
   * Rescale x so that lambda = 1 in the J1 branch.
   */
  bool normalize_lambda;
  /**
   * Pass threshold for numeric residuals.
   */
  double tol;
  /**
   * Seed for verification initial data.
   */
  uint64_t seed;
} LinsymConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *linsym_last_error_message(void);

/**
 * Defaults: no numeric verification, tol = 1e-6, seed = 0.
 */
struct LinsymConfig linsym_config_default(void);

/**
 * Parses one system from JSON (`{"A": ..., "B": ..., "f": ..., "d": ...}`).
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LinsymStatus linsym_system_from_json(const char *json, struct LinsymSystem **out);

/**
 * # Safety
 * `system` must come from [`linsym_system_from_json`] or be NULL.
 */
void linsym_system_free(struct LinsymSystem *system);

/**
 * Writes whether `A` and `B` commute to `out`.
 *
 * # Safety
 * `system` and `out` must be valid pointers.
 */
enum LinsymStatus linsym_commute_test(const struct LinsymSystem *system, bool *out);

/**
 * Runs the full classification. `config` may be NULL for defaults.
 *
 * # Safety
 * `system` and `out` must be valid pointers; `config` valid or NULL.
 */
enum LinsymStatus linsym_classify(const struct LinsymSystem *system,
                                  const struct LinsymConfig *config,
                                  struct LinsymReport **out);

/**
 * # Safety
 * `report` must come from [`linsym_classify`] or be NULL.
 */
void linsym_report_free(struct LinsymReport *report);

/**
 * Class label such as `"J1_ONE_EXTRA"`; a static string, NULL for a NULL
 * report.
 *
 * # Safety
 * `report` must be valid or NULL.
 */
const char *linsym_report_label(const struct LinsymReport *report);

/**
 * Number of admitted generators listed, including `d_x` and
 * `y d_y + z d_z`; 0 for a NULL report.
 *
 * # Safety
 * `report` must be valid or NULL.
 */
size_t linsym_report_generator_count(const struct LinsymReport *report);

/**
 * Whether every requested verification passed.
 *
 * # Safety
 * `report` must be valid or NULL.
 */
bool linsym_report_passed(const struct LinsymReport *report);

/**
 * The report as a JSON string, to be released with [`linsym_string_free`].
 *
 * # Safety
 * `report` must be valid or NULL.
 */
char *linsym_report_to_json(const struct LinsymReport *report);

/**
 * # Safety
 * `s` must come from this library or be NULL.
 */
void linsym_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LINSYM_H */
