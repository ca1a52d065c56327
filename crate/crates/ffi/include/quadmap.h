#ifndef QUADMAP_H
#define QUADMAP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QmStatus {
  QM_STATUS_OK = 0,
  QM_STATUS_NULL_POINTER = 1,
  QM_STATUS_INVALID_ARGUMENT = 2,
  QM_STATUS_DOMAIN = 3,
  QM_STATUS_VERIFICATION = 4,
  QM_STATUS_BUFFER_TOO_SMALL = 5,
  QM_STATUS_PANIC = 6,
} QmStatus;

// Label, witness pair and residual of a successful classification.
typedef struct QmClassification QmClassification;

// A quadratic map of the plane.
typedef struct QmMap QmMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Number of class labels; valid label indices are `0..qm_label_count()`.
uint32_t qm_label_count(void);

// Static NUL-terminated name of label `index`, or null if out of range.
const char *qm_label_name(uint32_t index);

// Builds a map from twelve coefficients
// `a20,a11,a02,a10,a01,a00,b20,b11,b02,b10,b01,b00`.
//
// # Safety
// `coeffs` must point to 12 doubles and `out` must be writable.
enum QmStatus qm_map_new(const double *coeffs, struct QmMap **out);

// Builds a map from a JSON map spec (keys `a20` .. `b00`).
//
// # Safety
// `json` must be a NUL-terminated string and `out` must be writable.
enum QmStatus qm_map_from_json(const char *json, struct QmMap **out);

// Writes the twelve coefficients of `map` to `coeffs`.
//
// # Safety
// `map` must come from this library; `coeffs` must hold 12 doubles.
enum QmStatus qm_map_coefficients(const struct QmMap *map, double *coeffs);

// # Safety
// `map` must be null or come from `qm_map_new` / `qm_map_from_json`, and is
// not used afterwards.
void qm_map_free(struct QmMap *map);

// Classifies `map` up to affine equivalence.
//
// # Safety
// `map` must come from this library and `out` must be writable.
enum QmStatus qm_classify(const struct QmMap *map, struct QmClassification **out);

// Label index of a classification, for use with `qm_label_name`.
//
// # Safety
// `c` must come from `qm_classify`.
enum QmStatus qm_classification_label(const struct QmClassification *c, uint32_t *label);

// Witness residual `|k∘Q∘h⁻¹ − N|`.
//
// # Safety
// `c` must come from `qm_classify`.
enum QmStatus qm_classification_residual(const struct QmClassification *c, double *residual);

// Witness affine maps as `m11,m12,m21,m22,t1,t2` each.
//
// # Safety
// `c` must come from `qm_classify`; `h` and `k` must hold 6 doubles each.
enum QmStatus qm_classification_witness(const struct QmClassification *c, double *h, double *k);

// # Safety
// `c` must be null or come from `qm_classify`, and is not used afterwards.
void qm_classification_free(struct QmClassification *c);

// Number of preimages of `(x, y)`; `-1` when the preimage is a curve.
//
// # Safety
// `map` must come from this library and `count` must be writable.
enum QmStatus qm_preimage_count(const struct QmMap *map, double x, double y, int32_t *count);

// Full JSON report for `map`. The string is released with `qm_string_free`.
//
// # Safety
// `map` must come from this library and `out` must be writable.
enum QmStatus qm_report_json(const struct QmMap *map, uint64_t seed, char **out);

// # Safety
// `s` must be null or come from `qm_report_json`.
void qm_string_free(char *s);

// Copies the last error message of this thread into `buf`. `*needed`
// receives the required size. Writes an empty string when there is none.
//
// # Safety
// `buf` must be null or hold `len` bytes; `needed` must be null or writable.
enum QmStatus qm_last_error(char *buf, size_t len, size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUADMAP_H */
