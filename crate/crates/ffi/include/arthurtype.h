#ifndef ARTHURTYPE_H
#define ARTHURTYPE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AtStatus {
  /**
   * Definite answer.
   */
  AT_STATUS_OK = 0,
  /**
   * The payload or options were rejected; the report says why.
   */
  AT_STATUS_INPUT_ERROR = 1,
  /**
   * The answer depends on an oracle or an uncertified rule.
   */
  AT_STATUS_PARTIAL = 2,
  AT_STATUS_NULL_POINTER = -1,
  AT_STATUS_INVALID_UTF8 = -2,
  AT_STATUS_PANIC = -3,
  AT_STATUS_BAD_OPTIONS = -4,
} AtStatus;

/**
 * Opaque handle.
 */
typedef struct AtContext AtContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * A new context with default options. Free it with [`at_context_free`].
 */
struct AtContext *at_context_new(void);

/**
 * # Safety
 * `ctx` must come from [`at_context_new`] and not be used afterwards.
 */
void at_context_free(struct AtContext *ctx);

/**
 * Options as a JSON object: `group`, `dim_bound`, `oracle`, `format`, `seed`.
 *
 * # Safety
 * `ctx` must be a live context and `options` a NUL-terminated string.
 */
int32_t at_context_set_options(struct AtContext *ctx, const char *options);

/**
 * Runs `command` on `payload`; the report is stored in `*out` even when the input is rejected.
 *
 * # Safety
 * `ctx` must be a live context, `command` and `payload` NUL-terminated strings and `out` a valid
 * pointer. The string written to `*out` must be released with [`at_string_free`].
 */
int32_t at_run(struct AtContext *ctx, const char *command, const char *payload, char **out);

/**
 * Message of the last failed call on `ctx`, or null. Valid until the next call on `ctx`.
 *
 * # Safety
 * `ctx` must be a live context.
 */
const char *at_last_error(const struct AtContext *ctx);

/**
 * # Safety
 * `s` must come from [`at_run`] and not be freed twice.
 */
void at_string_free(char *s);

/**
 * Library version, a static string.
 */
const char *at_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARTHURTYPE_H */
