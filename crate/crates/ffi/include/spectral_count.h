/* C interface for the spectral-count library. Generated by cbindgen; do not edit. */

#ifndef SPECTRAL_COUNT_H
#define SPECTRAL_COUNT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call in this interface.
typedef enum ScStatus {
  // The call succeeded.
  SC_STATUS_OK = 0,
  // A required pointer argument was NULL.
  SC_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  SC_STATUS_INVALID_UTF8 = 2,
  // An argument was out of the call's documented range.
  SC_STATUS_INVALID_ARGUMENT = 3,
  // A JSON document failed to parse or validate.
  SC_STATUS_BAD_DOCUMENT = 4,
  // A numerical precondition failed (singular matrix, norm bound, ...).
  SC_STATUS_NUMERIC = 5,
  // The search completed but found nothing to certify.
  SC_STATUS_NOT_FOUND = 6,
  // An output buffer was too small; the error message names the needed size.
  SC_STATUS_BUFFER_TOO_SMALL = 7,
  // An internal panic was caught at the boundary.
  SC_STATUS_PANICKED = 8,
} ScStatus;

// Opaque handle to a Hermitian matrix.
typedef struct ScMatrix ScMatrix;

// Opaque handle to a random-model description.
typedef struct ScModel ScModel;

// Parameters of a norm reduction, see [`sc_reduce`].
typedef struct ScReduction {
  // Integer shift with `3 <= |a| <= L + 3`, at distance >= 2 from the
  // second matrix's spectrum.
  int64_t a;
  // Dimension of the pair.
  size_t l;
  // `|(B1 - a)^{-1}|`; always within `[1/(L+4), 1/2]`.
  double nu;
  // Window shrink factor `225 L^4` of the lower count comparison.
  double lower_scale;
  // Window dilation factor `7 L^2` of the upper count comparison.
  double upper_scale;
} ScReduction;

// Window counts bracketing a sum's count, see [`sc_count_sandwich`].
typedef struct ScSandwich {
  // Count of the transformed pair at the shrunk window.
  size_t low;
  // Count of `B1 + B2` at the requested window.
  size_t mid;
  // Count of the transformed pair at the dilated window.
  size_t high;
  // Whether `low <= mid <= high` held.
  bool holds;
} ScSandwich;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string. Never freed.
const char *sc_version(void);

// Copy the calling thread's last error message into `buf`.
//
// Returns the full length of the message including the trailing NUL. When
// `buf` is NULL or `cap` is 0 nothing is written, so calling once with
// `buf = NULL` sizes the buffer. Longer messages are truncated to
// `cap - 1` bytes plus a NUL.
//
// # Safety
// `buf`, when non-NULL, must point to at least `cap` writable bytes.
size_t sc_last_error_message(char *buf, size_t cap);

// Release a string returned by this library. NULL is a no-op.
//
// # Safety
// `s` must be NULL or a pointer previously returned by a `*_json` or other
// string-returning function of this library, not yet freed.
void sc_string_free(char *s);

// Build a `dim x dim` Hermitian matrix from row-major entry arrays.
//
// `im` may be NULL for a real matrix. Slightly non-Hermitian input is
// symmetrized (each off-diagonal pair is averaged, diagonals keep their
// real part), matching the JSON loader. Returns NULL on error.
//
// # Safety
// `re` must point to `dim * dim` readable doubles; `im`, when non-NULL,
// must too.
struct ScMatrix *sc_matrix_new(size_t dim, const double *re, const double *im);

// Parse a matrix from its JSON document form
// (`{"dim": N, "re": [[...]], "im": [[...]]}`; `im` optional).
// Returns NULL on error.
//
// # Safety
// `text` must be a NUL-terminated string.
struct ScMatrix *sc_matrix_from_json(const char *text);

// Serialize a matrix to its JSON document form. Returns NULL on error;
// release the result with [`sc_string_free`].
//
// # Safety
// `m` must be a live matrix handle from this library.
char *sc_matrix_to_json(const struct ScMatrix *m);

// Release a matrix handle. NULL is a no-op.
//
// # Safety
// `m` must be NULL or a live matrix handle from this library, not yet freed.
void sc_matrix_free(struct ScMatrix *m);

// Dimension of the matrix; 0 when the handle is NULL.
//
// # Safety
// `m` must be NULL or a live matrix handle from this library.
size_t sc_matrix_dim(const struct ScMatrix *m);

// Write all eigenvalues, ascending, into `out`.
//
// `cap` must be at least the matrix dimension; on `BUFFER_TOO_SMALL` the
// error message names the required count.
//
// # Safety
// `m` must be a live matrix handle; `out` must point to `cap` writable
// doubles.
enum ScStatus sc_matrix_eigenvalues(const struct ScMatrix *m, double *out, size_t cap);

// Count eigenvalues in the open window `(center - eps, center + eps)`.
//
// # Safety
// `m` must be a live matrix handle; `out` must point to a writable `size_t`.
enum ScStatus sc_count_in_window(const struct ScMatrix *m, double center, double eps, size_t *out);

// The guaranteed search strength for witness size `m` on an `n`-dimensional
// matrix: writes `c_m = 1/(m! 2^(m-1))` and `k = c_m / n`.
//
// # Safety
// `out_c_m` and `out_k` must point to writable doubles.
enum ScStatus sc_counting_constant(size_t m, size_t n, double *out_c_m, double *out_k);

// Search for a witness pair certifying at least `m` eigenvalues in
// `(-eps, eps)`, at strength `strength` (pass 0 or a negative value to use
// the guaranteed strength for `(m, dim)`).
//
// On `OK`, `*out_json` receives the certificate as JSON (release with
// [`sc_string_free`]). `NOT_FOUND` means the search completed without a
// certificate; `*out_json` is set to NULL.
//
// # Safety
// `matrix` must be a live matrix handle; `out_json` must point to a
// writable `char*`.
enum ScStatus sc_witness_json(const struct ScMatrix *matrix,
                              double eps,
                              size_t m,
                              double strength,
                              char **out_json);

// Compute the shift reduction of a Hermitian pair (`|B1|, |B2| <= 1`, both
// of dimension L with `L >= 2`): an integer shift, the resolvent norm, and
// the two window scale factors.
//
// # Safety
// `b1` and `b2` must be live matrix handles; `out` must point to a
// writable [`ScReduction`].
enum ScStatus sc_reduce(const struct ScMatrix *b1,
                        const struct ScMatrix *b2,
                        struct ScReduction *out);

// Evaluate the three-way window-count comparison for a Hermitian pair at
// `eps` (`0 < eps < 1/2`): counts at the shrunk and dilated windows of the
// transformed pair bracket the count of `B1 + B2`.
//
// # Safety
// `b1` and `b2` must be live matrix handles; `out` must point to a
// writable [`ScSandwich`].
enum ScStatus sc_count_sandwich(const struct ScMatrix *b1,
                                const struct ScMatrix *b2,
                                double eps,
                                struct ScSandwich *out);

// Parse and validate a random-model description from its JSON form.
// Returns NULL on error.
//
// # Safety
// `text` must be a NUL-terminated string.
struct ScModel *sc_model_from_json(const char *text);

// Release a model handle. NULL is a no-op.
//
// # Safety
// `model` must be NULL or a live model handle from this library, not yet
// freed.
void sc_model_free(struct ScModel *model);

// Hamiltonian dimension of the model (sites times block size); 0 when the
// handle is NULL.
//
// # Safety
// `model` must be NULL or a live model handle from this library.
size_t sc_model_dim(const struct ScModel *model);

// Draw one Hamiltonian from the model at counter position
// `(master, trial)`. The same position always yields the same matrix.
// Returns NULL on error.
//
// # Safety
// `model` must be a live model handle from this library.
struct ScMatrix *sc_sample_hamiltonian(const struct ScModel *model,
                                       uint64_t master,
                                       uint64_t trial);

// Monte Carlo sweep of window-count event rates: for each level in `ms`
// and each half-width in `eps`, estimate `P(count >= m)` over `trials`
// samples (all cells share the same per-trial draws). On `OK`,
// `*out_json` receives the report rows as a JSON array, ordered level-major
// then grid order; release it with [`sc_string_free`].
//
// # Safety
// `model` must be a live model handle; `eps` must point to `n_eps` readable
// doubles; `ms` must point to `n_ms` readable `uint32_t`; `out_json` must
// point to a writable `char*`.
enum ScStatus sc_wegner_sweep_json(const struct ScModel *model,
                                   const double *eps,
                                   size_t n_eps,
                                   const uint32_t *ms,
                                   size_t n_ms,
                                   uint64_t trials,
                                   uint64_t master,
                                   char **out_json);

// Monte Carlo sweep of small-determinant event rates for the reduced model
// at integer shift `a` (`|a| >= 3`): for each cutoff in `deltas`, estimate
// `P(|det| <= delta)` over `trials` samples. On `OK`, `*out_json` receives
// the report rows as a JSON array; release it with [`sc_string_free`].
//
// # Safety
// `model` must be a live model handle; `deltas` must point to `n_deltas`
// readable doubles; `out_json` must point to a writable `char*`.
enum ScStatus sc_det_event_sweep_json(const struct ScModel *model,
                                      int64_t a,
                                      const double *deltas,
                                      size_t n_deltas,
                                      uint64_t trials,
                                      uint64_t master,
                                      char **out_json);

// Exact probability that `|h + 1/(v - a)| <= delta` for `v` uniform on
// `[-b, b]` — the closed form the determinant-event sweeps are compared
// against for single-site models.
//
// # Safety
// `out` must point to a writable double.
enum ScStatus sc_single_site_event_measure(double h, double a, double delta, double b, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECTRAL_COUNT_H */
