#ifndef FROBCURVE_H
#define FROBCURVE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FcRigidityMode {
  FC_RIGIDITY_MODE_BRUTE = 0,
  FC_RIGIDITY_MODE_LINEAR = 1,
} FcRigidityMode;

/**
 * Result codes.
 */
typedef enum FcStatus {
  FC_STATUS_OK = 0,
  FC_STATUS_NULL_POINTER = 1,
  FC_STATUS_INVALID_ARGUMENT = 2,
  FC_STATUS_NOT_ODD_PRIME = 3,
  FC_STATUS_EVEN_CHARACTERISTIC = 4,
  FC_STATUS_NOT_SQUAREFREE = 5,
  FC_STATUS_DEGREE_NOT_FIVE = 6,
  /**
   * A brute-force scan or degree cap would be exceeded.
   */
  FC_STATUS_RESOURCE_GUARD = 7,
  /**
   * The curve has no nonzero torsion form over its field.
   */
  FC_STATUS_NO_TORSION = 8,
  FC_STATUS_UNSUPPORTED = 9,
  FC_STATUS_INTERNAL = 10,
  FC_STATUS_PANIC = 11,
} FcStatus;

typedef enum FcTorsionMethod {
  FC_TORSION_METHOD_BRUTE = 0,
  FC_TORSION_METHOD_SEMILINEAR = 1,
} FcTorsionMethod;

/**
 * Opaque curve handle.
 */
typedef struct FcCurve FcCurve;

/**
 * Closed-form counts, see the `formulas` command.
 */
typedef struct FcCounts {
  uint64_t base_locus_length;
  uint64_t verschiebung_degree;
  uint64_t hbar_degree;
  uint64_t preimage_degree;
  uint64_t tau_invariant_count;
  uint64_t max_destab_degree;
  bool consistent;
} FcCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the next failing
 * call on the same thread; do not free.
 */
const char *fc_last_error(void);

/**
 * Builds y² = f(x) over F_p from `len` (= 6) coefficients c0..c5.
 *
 * # Safety
 * `coeffs` must point to `len` readable values; `out` must be writable.
 */
enum FcStatus fc_curve_new(uint64_t p, const int64_t *coeffs, uintptr_t len, struct FcCurve **out);

/**
 * # Safety
 * `curve` must be NULL or a handle from [`fc_curve_new`] not yet freed.
 */
void fc_curve_free(struct FcCurve *curve);

/**
 * Canonical curve id (hex); release with [`fc_string_free`].
 *
 * # Safety
 * `curve` must be a live handle; `out` must be writable.
 */
enum FcStatus fc_curve_id(const struct FcCurve *curve, char **out);

/**
 * # Safety
 * `curve` must be a live handle; `out` must be writable.
 */
enum FcStatus fc_curve_is_ordinary(const struct FcCurve *curve, bool *out);

/**
 * Cartier–Manin matrix, row-major, as residues mod p.
 *
 * # Safety
 * `curve` must be a live handle; `out` must point to 4 writable values.
 */
enum FcStatus fc_curve_cartier_manin(const struct FcCurve *curve, uint64_t *out);

/**
 * Number of F_p-rational torsion forms and their F_p-dimension.
 *
 * # Safety
 * `curve` must be a live handle; `count` and `dimension` must be writable.
 */
enum FcStatus fc_torsion_count(const struct FcCurve *curve,
                               enum FcTorsionMethod method,
                               uint64_t *count,
                               uint32_t *dimension);

/**
 * # Safety
 * `out` must be writable.
 */
enum FcStatus fc_formulas_counts(uint64_t p, uint64_t g, struct FcCounts *out);

/**
 * Full lemma verification report as JSON; release with [`fc_string_free`].
 *
 * # Safety
 * `curve` must be a live handle; `out` must be writable.
 */
enum FcStatus fc_verify_json(const struct FcCurve *curve, enum FcRigidityMode mode, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void fc_string_free(char *s);

/**
 * Library version; static, do not free.
 */
const char *fc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FROBCURVE_H */
