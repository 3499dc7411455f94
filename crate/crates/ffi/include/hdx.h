#ifndef HDX_H
#define HDX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HdxStatus {
  HdxStatus_Ok = 0,
  HdxStatus_NullArgument = 1,
  HdxStatus_Malformed = 2,
  HdxStatus_Resource = 3,
  HdxStatus_NoCone = 4,
  HdxStatus_Io = 5,
  HdxStatus_Panic = 6,
} HdxStatus;

/**
 * A finite simplicial complex.
 */
typedef struct HdxComplex HdxComplex;

/**
 * An integral cone function.
 */
typedef struct HdxCone HdxCone;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *hdx_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void hdx_string_free(char *s);

/**
 * Parses `{"vertices":[...],"maximal_faces":[[...]]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum HdxStatus hdx_complex_from_json(const char *json, struct HdxComplex **out);

/**
 * Builds a named complex from a spec such as `{"kind":"an-opposition","q":3,"dim":3,"flag":"full"}`.
 * Caps come from the `HDX_CAPS` environment variable.
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string; `out` must be writable.
 */
enum HdxStatus hdx_complex_build(const char *spec_json,
                                 struct HdxComplex **out);

/**
 * # Safety
 * `x` must come from this library and not have been freed.
 */
void hdx_complex_free(struct HdxComplex *x);

/**
 * Dimension of the complex; -1 for the void complex or a null handle.
 *
 * # Safety
 * `x` must be null or a live handle.
 */
int32_t hdx_complex_dim(const struct HdxComplex *x);

/**
 * Number of k-faces, for k ≥ -1 (the empty face counts once).
 *
 * # Safety
 * `x` must be a live handle; `out` must be writable.
 */
enum HdxStatus hdx_complex_face_count(const struct HdxComplex *x, int32_t k, uintptr_t *out);

/**
 * Serializes the complex; free the result with `hdx_string_free`.
 *
 * # Safety
 * `x` must be a live handle; `out` must be writable.
 */
enum HdxStatus hdx_complex_to_json(const struct HdxComplex *x, char **out);

/**
 * Second largest eigenvalue of the random walk on the 1-skeleton.
 *
 * # Safety
 * `x` must be a live handle; `value` and `error_bound` must be writable.
 */
enum HdxStatus hdx_second_eigenvalue(const struct HdxComplex *x,
                                     double *value,
                                     double *error_bound);

/**
 * Exact coboundary expansion h^k over ℤ/m as `num/den`, by exhaustive
 * search. `*has_value` is 0 when the constant is undefined (no
 * non-coboundary cochains).
 *
 * # Safety
 * `x` must be a live handle; the out pointers must be writable.
 */
enum HdxStatus hdx_coboundary_constant(const struct HdxComplex *x,
                                       int32_t k,
                                       uint64_t modulus,
                                       int32_t *has_value,
                                       int64_t *num,
                                       int64_t *den);

/**
 * Solves for an integral k-cone with the given apex (a vertex id).
 *
 * # Safety
 * `x` must be a live handle; `out` must be writable.
 */
enum HdxStatus hdx_cone_solve(const struct HdxComplex *x,
                              int32_t k,
                              uint32_t apex,
                              struct HdxCone **out);

/**
 * Parses an integral cone table.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum HdxStatus hdx_cone_from_json(const char *json, struct HdxCone **out);

/**
 * # Safety
 * `c` must come from this library and not have been freed.
 */
void hdx_cone_free(struct HdxCone *c);

/**
 * Checks the cone equation on every face; `*ok` is 1 when it holds.
 *
 * # Safety
 * Both handles must be live; `ok` must be writable.
 */
enum HdxStatus hdx_cone_verify(const struct HdxComplex *x, const struct HdxCone *c, int32_t *ok);

/**
 * Writes up to `len` radii Rad_{-1}, Rad_0, ... into `radii` and the full
 * count into `*count`.
 *
 * # Safety
 * `c` must be a live handle; `radii` must hold `len` entries (or be null
 * with `len` 0); `count` must be writable.
 */
enum HdxStatus hdx_cone_radii(const struct HdxCone *c,
                              uint64_t *radii,
                              uintptr_t len,
                              uintptr_t *count);

/**
 * Serializes the cone as an integral table; free with `hdx_string_free`.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum HdxStatus hdx_cone_to_json(const struct HdxCone *c, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HDX_H */
