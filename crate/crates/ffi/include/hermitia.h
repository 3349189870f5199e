#ifndef HERMITIA_H
#define HERMITIA_H

#include <stdbool.h>
#include <stddef.h>

typedef enum HermitiaStatus {
  HERMITIA_STATUS_OK = 0,
  HERMITIA_STATUS_NULL_POINTER = 1,
  HERMITIA_STATUS_INVALID_UTF8 = 2,
  HERMITIA_STATUS_PARSE = 3,
  HERMITIA_STATUS_INVALID_PARAMETER = 4,
  HERMITIA_STATUS_OUTSIDE_DOMAIN = 5,
  HERMITIA_STATUS_INVALID_STRUCTURE = 6,
  HERMITIA_STATUS_DIMENSION_MISMATCH = 7,
  HERMITIA_STATUS_INDEX_OUT_OF_RANGE = 8,
  HERMITIA_STATUS_UNKNOWN_CATALOG = 9,
  HERMITIA_STATUS_ZERO_VECTOR = 10,
  HERMITIA_STATUS_NOT_UNITARY = 11,
  HERMITIA_STATUS_INCONSISTENT_EQUATION = 12,
  HERMITIA_STATUS_BUFFER_TOO_SMALL = 13,
  HERMITIA_STATUS_PANIC = 99,
} HermitiaStatus;

typedef enum HermitiaConnection {
  HERMITIA_CONNECTION_CHERN = 0,
  HERMITIA_CONNECTION_BISMUT = 1,
  HERMITIA_CONNECTION_LEVI_CIVITA = 2,
  /*
   D^r_s; the only kind that reads `r` and `s`.
   */
  HERMITIA_CONNECTION_GENERAL = 3,
} HermitiaConnection;

/*
 Left-invariant Hermitian structure (opaque).
 */
typedef struct HermitiaAlgebra HermitiaAlgebra;

/*
 Curvature tensor R_{i j̄ k l̄} (opaque).
 */
typedef struct HermitiaCurvature HermitiaCurvature;

typedef struct HermitiaHscVerdict {
  bool constant;
  double c;
  double max_residual;
} HermitiaHscVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread. The pointer stays valid
 until the next failing call on the same thread.
 */
const char *hermitia_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *hermitia_version(void);

/*
 Parses an algebra file (JSON text).

 # Safety
 `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum HermitiaStatus hermitia_algebra_from_json(const char *json, struct HermitiaAlgebra **out);

/*
 Catalog entry by name. `n` is only read by entries that take a dimension;
 pass 0 for the default.

 # Safety
 `name` must be a NUL-terminated string and `out` a writable pointer.
 */
enum HermitiaStatus hermitia_algebra_catalog(const char *name,
                                             size_t n,
                                             struct HermitiaAlgebra **out);

/*
 # Safety
 `alg` must come from this library and not be used afterwards. Null is ignored.
 */
void hermitia_algebra_free(struct HermitiaAlgebra *alg);

/*
 # Safety
 `alg` must be a live handle and `out` a writable pointer.
 */
enum HermitiaStatus hermitia_algebra_dim(const struct HermitiaAlgebra *alg, size_t *out);

/*
 Jacobi check. Writes whether the structure is valid at `tol` and the
 largest residual.

 # Safety
 `alg` must be a live handle; `ok` and `max_residual` writable pointers.
 */
enum HermitiaStatus hermitia_algebra_validate(const struct HermitiaAlgebra *alg,
                                              double tol,
                                              bool *ok,
                                              double *max_residual);

/*
 Curvature of the chosen connection. `r` and `s` are ignored unless
 `kind` is `General`.

 # Safety
 `alg` must be a live handle and `out` a writable pointer.
 */
enum HermitiaStatus hermitia_curvature_new(const struct HermitiaAlgebra *alg,
                                           enum HermitiaConnection kind,
                                           double r,
                                           double s,
                                           struct HermitiaCurvature **out);

/*
 New handle holding the symmetrization R̂ of `curv`.

 # Safety
 `curv` must be a live handle and `out` a writable pointer.
 */
enum HermitiaStatus hermitia_curvature_symmetrize(const struct HermitiaCurvature *curv,
                                                  struct HermitiaCurvature **out);

/*
 # Safety
 `curv` must be a live handle and `out` a writable pointer.
 */
enum HermitiaStatus hermitia_curvature_dim(const struct HermitiaCurvature *curv, size_t *out);

/*
 Component R_{i j̄ k l̄}.

 # Safety
 `curv` must be a live handle; `re` and `im` writable pointers.
 */
enum HermitiaStatus hermitia_curvature_get(const struct HermitiaCurvature *curv,
                                           size_t i,
                                           size_t j,
                                           size_t k,
                                           size_t l,
                                           double *re,
                                           double *im);

/*
 Constant-HSC test on the symmetrization of `curv`.

 # Safety
 `curv` must be a live handle and `out` a writable pointer.
 */
enum HermitiaStatus hermitia_curvature_constancy(const struct HermitiaCurvature *curv,
                                                 double tol,
                                                 struct HermitiaHscVerdict *out);

/*
 # Safety
 `curv` must come from this library and not be used afterwards. Null is ignored.
 */
void hermitia_curvature_free(struct HermitiaCurvature *curv);

/*
 Whether (r, s) lies on the Chen–Nie curve.
 */
bool hermitia_chen_nie_membership(double r, double s, double tol);

/*
 Flat parameters of the standard Hopf manifold of dimension `n`, written as
 interleaved (r, s) pairs. `count` receives the number of pairs; when it
 exceeds `capacity` nothing is written and `BufferTooSmall` is returned.

 # Safety
 `out` must have room for `2 * capacity` doubles (may be null when
 `capacity` is 0); `count` must be writable.
 */
enum HermitiaStatus hermitia_hopf_flat_params(size_t n,
                                              double *out,
                                              size_t capacity,
                                              size_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HERMITIA_H */
