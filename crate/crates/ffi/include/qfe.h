#ifndef QFE_H
#define QFE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum QfeStatus {
  QFE_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  QFE_STATUS_NULL_POINTER = 1,
  /**
   * An input string was not valid UTF-8.
   */
  QFE_STATUS_INVALID_UTF8 = 2,
  /**
   * An expression or rational literal did not parse.
   */
  QFE_STATUS_PARSE = 3,
  /**
   * A JSON document was malformed or failed validation.
   */
  QFE_STATUS_SCHEMA = 4,
  /**
   * The spec is not a solution (decomposition rejected it).
   */
  QFE_STATUS_NOT_A_SOLUTION = 5,
  /**
   * Decomposition needs at least two primes.
   */
  QFE_STATUS_TOO_FEW_PRIMES = 6,
  /**
   * Any other domain failure: non-commuting generators, zero input,
   * arguments out of range.
   */
  QFE_STATUS_DOMAIN = 7,
  /**
   * The library panicked; this is a bug.
   */
  QFE_STATUS_PANIC = 8,
} QfeStatus;

/**
 * Opaque solution spec.
 */
typedef struct QfeSpec QfeSpec;

/**
 * Opaque structure data.
 */
typedef struct QfeStructure QfeStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a spec document into a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum QfeStatus qfe_spec_from_json(const char *json, struct QfeSpec **out);

/**
 * Releases a spec handle. Null is ignored.
 *
 * # Safety
 * `spec` must come from this library and not be used afterwards.
 */
void qfe_spec_free(struct QfeSpec *spec);

/**
 * Writes whether the generators satisfy the commutativity condition.
 *
 * # Safety
 * `spec` must be a live handle; `holds` must be valid for writes.
 */
enum QfeStatus qfe_spec_check(const struct QfeSpec *spec, bool *holds);

/**
 * Writes `f_n` as an expression string. Fails with `QFE_STATUS_DOMAIN` when
 * the generators do not commute.
 *
 * # Safety
 * `spec` must be a live handle; `out` must be valid for writes.
 */
enum QfeStatus qfe_spec_synthesize(const struct QfeSpec *spec, uint64_t n, char **out);

/**
 * Writes whether the functional equation holds at `(m, n)`.
 *
 * # Safety
 * `spec` must be a live handle; `holds` must be valid for writes.
 */
enum QfeStatus qfe_spec_verify(const struct QfeSpec *spec, uint64_t m, uint64_t n, bool *holds);

/**
 * Decomposes a spec into a new structure handle.
 *
 * # Safety
 * `spec` must be a live handle; `out` must be valid for writes.
 */
enum QfeStatus qfe_spec_decompose(const struct QfeSpec *spec, struct QfeStructure **out);

/**
 * Parses a structure document into a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum QfeStatus qfe_structure_from_json(const char *json, struct QfeStructure **out);

/**
 * Writes the structure as a JSON document.
 *
 * # Safety
 * `structure` must be a live handle; `out` must be valid for writes.
 */
enum QfeStatus qfe_structure_to_json(const struct QfeStructure *structure, char **out);

/**
 * Writes the closed-form `f_n` as an expression string.
 *
 * # Safety
 * `structure` must be a live handle; `out` must be valid for writes.
 */
enum QfeStatus qfe_structure_closed_form(const struct QfeStructure *structure,
                                         uint64_t n,
                                         char **out);

/**
 * Releases a structure handle. Null is ignored.
 *
 * # Safety
 * `structure` must come from this library and not be used afterwards.
 */
void qfe_structure_free(struct QfeStructure *structure);

/**
 * Writes the cyclotomic polynomial `Phi_k`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum QfeStatus qfe_cyclotomic(uint64_t k, char **out);

/**
 * Writes the standard form `lambda q^e u/v` of an expression as JSON:
 * `{"lambda": "a/b", "e": int, "u": "<poly>", "v": "<poly>"}`.
 *
 * # Safety
 * `expr` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum QfeStatus qfe_standard_form(const char *expr, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void qfe_string_free(char *s);

/**
 * Message for the last failed call on this thread, empty after a success.
 * Owned by the library; valid until the next call on this thread.
 */
const char *qfe_last_error_message(void);

/**
 * Library version, a static NUL-terminated string.
 */
const char *qfe_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QFE_H */
