#ifndef CURVED_KOSZUL_H
#define CURVED_KOSZUL_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum CkStatus {
  CK_STATUS_OK = 0,
  CK_STATUS_NULL_POINTER = 1,
  CK_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed or inconsistent input.
   */
  CK_STATUS_INVALID_INPUT = 3,
  /**
   * A check ran and found a violation.
   */
  CK_STATUS_CHECK_FAILED = 4,
  /**
   * An internal invariant broke; the message describes it.
   */
  CK_STATUS_INTERNAL = 5,
} CkStatus;

/**
 * Factorization homology of a model, with its certificate.
 */
typedef struct CkFacthomReport CkFacthomReport;

/**
 * A Poincaré duality model.
 */
typedef struct CkModel CkModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Free with `ck_string_free`.
 */
char *ck_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer previously returned by this library.
 */
void ck_string_free(char *s);

/**
 * Parses and validates a model from its JSON description.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum CkStatus ck_model_from_json(const char *json, struct CkModel **out);

/**
 * The standard model of the `m`-sphere, or null for `m < 1`.
 */
struct CkModel *ck_model_sphere(int64_t m);

/**
 * Dimension of the modelled manifold.
 *
 * # Safety
 * `model` must be a live handle.
 */
int64_t ck_model_dimension(const struct CkModel *model);

/**
 * # Safety
 * `model` must be null or a handle not yet freed.
 */
void ck_model_free(struct CkModel *model);

/**
 * Factorization homology of `model` with coefficients in the symplectic
 * algebra on `d` pairs with bracket degree `n`, up to word length `max_length`.
 *
 * # Safety
 * `model` must be a live handle and `out` a valid pointer.
 */
enum CkStatus ck_facthom(const struct CkModel *model,
                         int64_t n,
                         uintptr_t d,
                         uintptr_t max_length,
                         struct CkFacthomReport **out);

/**
 * Total homology dimension within the truncation.
 *
 * # Safety
 * `report` must be a live handle.
 */
uintptr_t ck_report_total(const struct CkFacthomReport *report);

/**
 * Writes the certified Euler bound to `out`; false when nothing is certified.
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
bool ck_report_certified_euler(const struct CkFacthomReport *report, uintptr_t *out);

/**
 * The report as JSON. Free with `ck_string_free`.
 *
 * # Safety
 * `report` must be a live handle.
 */
char *ck_report_to_json(const struct CkFacthomReport *report);

/**
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void ck_report_free(struct CkFacthomReport *report);

/**
 * Compares the cobar resolution of the symplectic algebra with the algebra
 * itself up to `max_weight`; `passed` receives the verdict.
 *
 * # Safety
 * `passed` must be a valid pointer.
 */
enum CkStatus ck_verify_koszulity(int64_t n, uintptr_t d, uintptr_t max_weight, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CURVED_KOSZUL_H */
