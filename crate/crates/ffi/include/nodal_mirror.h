#ifndef NODAL_MIRROR_H
#define NODAL_MIRROR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NmScenario {
  NM_SCENARIO_CLOSED = 0,
  NM_SCENARIO_PUNCTURED = 1,
  NM_SCENARIO_MULTI_TWIST = 2,
} NmScenario;

/**
 * Status codes. The first four match the command-line exit codes.
 */
typedef enum NmStatus {
  NM_STATUS_PASS = 0,
  NM_STATUS_FAIL = 1,
  NM_STATUS_USAGE = 2,
  NM_STATUS_CUTOFF = 3,
  NM_STATUS_NULL_POINTER = 4,
  NM_STATUS_PANIC = 5,
} NmStatus;

/**
 * Opaque run configuration.
 */
typedef struct NmConfig NmConfig;

/**
 * Opaque report with its JSON rendering.
 */
typedef struct NmReport NmReport;

/**
 * Finite cutoffs. A `max_stage` of 0 selects the default headroom.
 */
typedef struct NmCutoffs {
  uint32_t max_weight;
  uint32_t slack;
  uint32_t truncation;
  uint32_t stability_truncation;
  uint32_t max_stage;
} NmCutoffs;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default cutoffs.
 */
struct NmCutoffs nm_cutoffs_default(void);

/**
 * Message of the last failure on this thread. Valid until the next call
 * on the same thread; never null.
 */
const char *nm_last_error(void);

/**
 * Parses a JSON run configuration.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum NmStatus nm_config_parse(const char *json, struct NmConfig **out);

/**
 * Runs a configuration. On `Pass` or `Fail` with a report, `*out` holds it.
 *
 * # Safety
 * `cfg` must come from [`nm_config_parse`] and `out` must be valid.
 */
enum NmStatus nm_config_run(const struct NmConfig *cfg, struct NmReport **out);

/**
 * # Safety
 * `cfg` must come from [`nm_config_parse`] or be null.
 */
void nm_config_free(struct NmConfig *cfg);

/**
 * Runs the closed-string comparison for one scenario. `count` is the
 * number of punctures or twist circles and is ignored for `Closed`.
 *
 * # Safety
 * `cutoffs` may be null for the defaults; `out` must be valid.
 */
enum NmStatus nm_verify(enum NmScenario scenario,
                        uint32_t genus,
                        uint32_t count,
                        const struct NmCutoffs *cutoffs,
                        struct NmReport **out);

/**
 * # Safety
 * `r` must come from this library or be null.
 */
bool nm_report_passed(const struct NmReport *r);

/**
 * # Safety
 * `r` must come from this library or be null.
 */
uintptr_t nm_report_check_count(const struct NmReport *r);

/**
 * JSON rendering, owned by the report.
 *
 * # Safety
 * `r` must come from this library or be null.
 */
const char *nm_report_json(const struct NmReport *r);

/**
 * # Safety
 * `r` must come from this library or be null.
 */
void nm_report_free(struct NmReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NODAL_MIRROR_H */
