/* C interface for the hare Riccati solution-family library. */

#ifndef HARE_H
#define HARE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible function.
typedef enum HareStatus {
  HareStatus_Ok = 0,
  HareStatus_NullPointer = 1,
  HareStatus_InvalidInput = 2,
  HareStatus_SingularInput = 3,
  HareStatus_PreconditionViolated = 4,
  HareStatus_IndefiniteInnerTerm = 5,
  HareStatus_NumericalBreakdown = 6,
  HareStatus_NoSteinSolution = 7,
  HareStatus_BufferSize = 8,
  HareStatus_IndexOutOfRange = 9,
  HareStatus_WrongVerdict = 10,
  HareStatus_Internal = 11,
} HareStatus;

// Classification verdict for a candidate solution.
typedef enum HareVerdict {
  HareVerdict_InFamily = 0,
  HareVerdict_Spurious = 1,
  HareVerdict_NotASolution = 2,
} HareVerdict;

// Opaque classification handle.
typedef struct HareClassificationHandle HareClassificationHandle;

// Opaque family-enumeration handle.
typedef struct HareFamiliesHandle HareFamiliesHandle;

// Opaque problem handle.
typedef struct HareProblemHandle HareProblemHandle;

// Opaque spectrum-report handle.
typedef struct HareSpectrumHandle HareSpectrumHandle;

// Opaque Stein solution-set handle.
typedef struct HareSteinHandle HareSteinHandle;

// Tolerance overrides; pass NULL for the defaults (1e-10, 1e-8, 1e-10).
typedef struct HareTolerances {
  double rank_tol;
  double resid_tol;
  double sym_tol;
} HareTolerances;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Human-readable description of a status code (static storage).
const char *hare_status_message(enum HareStatus status);

// Library version string (static storage).
const char *hare_version(void);

// Creates a problem from row-major `A` (`n x n`), `B` (`n x m`), and
// optionally `R` (`m x m`, NULL for the identity) and tolerance
// overrides (NULL for defaults). On success writes a handle that must be
// released with [`hare_problem_free`].
//
// # Safety
// `a` must point to `n * n` readable doubles and `b` to `n * m`; `r`,
// when non-NULL, to `m * m`. `out` must be a valid writable location.
enum HareStatus hare_problem_new(const double *a,
                                 size_t n,
                                 const double *b,
                                 size_t m,
                                 const double *r,
                                 const struct HareTolerances *tolerances,
                                 struct HareProblemHandle **out);

// Releases a problem handle. NULL is ignored.
//
// # Safety
// `handle` must be NULL or a pointer returned by [`hare_problem_new`]
// that has not been freed yet.
void hare_problem_free(struct HareProblemHandle *handle);

// State dimension `n`, or 0 for NULL.
//
// # Safety
// `handle` must be NULL or a live problem handle.
size_t hare_problem_state_dim(const struct HareProblemHandle *handle);

// Input dimension `m`, or 0 for NULL.
//
// # Safety
// `handle` must be NULL or a live problem handle.
size_t hare_problem_input_dim(const struct HareProblemHandle *handle);

// Whether `(A, B)` is a reachable pair.
//
// # Safety
// `handle` must be a live problem handle; `out` must be writable.
enum HareStatus hare_problem_is_reachable(const struct HareProblemHandle *handle, bool *out);

// Whether the enumerated families provably cover all solutions.
//
// # Safety
// `handle` must be a live problem handle; `out` must be writable.
enum HareStatus hare_problem_theorem4_guarantee(const struct HareProblemHandle *handle, bool *out);

// Copies the spectrum analysis out of the problem into its own handle.
//
// # Safety
// `handle` must be a live problem handle; `out` must be writable. The
// result must be released with [`hare_spectrum_free`].
enum HareStatus hare_spectrum_new(const struct HareProblemHandle *handle,
                                  struct HareSpectrumHandle **out);

// # Safety
// `handle` must be NULL or a live spectrum handle, freed at most once.
void hare_spectrum_free(struct HareSpectrumHandle *handle);

// Number of distinct eigenvalues.
//
// # Safety
// `handle` must be NULL or a live spectrum handle.
size_t hare_spectrum_eigenvalue_count(const struct HareSpectrumHandle *handle);

// Eigenvalue `index` as (re, im, algebraic multiplicity).
//
// # Safety
// `handle` must be a live spectrum handle; output pointers writable.
enum HareStatus hare_spectrum_eigenvalue(const struct HareSpectrumHandle *handle,
                                         size_t index,
                                         double *re,
                                         double *im,
                                         size_t *multiplicity);

// Number of reciprocal eigenvalue pairs.
//
// # Safety
// `handle` must be NULL or a live spectrum handle.
size_t hare_spectrum_reciprocal_pair_count(const struct HareSpectrumHandle *handle);

// Reciprocal pair `index` as indices into the eigenvalue list.
//
// # Safety
// `handle` must be a live spectrum handle; output pointers writable.
enum HareStatus hare_spectrum_reciprocal_pair(const struct HareSpectrumHandle *handle,
                                              size_t index,
                                              size_t *first,
                                              size_t *second);

// Unmixing flag: true iff there are no reciprocal pairs.
//
// # Safety
// `handle` must be a live spectrum handle; `out` writable.
enum HareStatus hare_spectrum_is_unmixed(const struct HareSpectrumHandle *handle, bool *out);

// # Safety
// `handle` must be a live spectrum handle; `out` writable.
enum HareStatus hare_spectrum_is_nonsingular(const struct HareSpectrumHandle *handle, bool *out);

// # Safety
// `handle` must be a live spectrum handle; `out` writable.
enum HareStatus hare_spectrum_theorem4_applies(const struct HareSpectrumHandle *handle, bool *out);

// Solves the Stein equation. The handle reports inconsistency through
// [`hare_stein_exists`]; solving itself only fails on invalid handles.
//
// # Safety
// `handle` must be a live problem handle; `out` writable. The result
// must be released with [`hare_stein_free`].
enum HareStatus hare_stein_solve(const struct HareProblemHandle *handle,
                                 struct HareSteinHandle **out);

// # Safety
// `handle` must be NULL or a live Stein handle, freed at most once.
void hare_stein_free(struct HareSteinHandle *handle);

// # Safety
// `handle` must be NULL or a live Stein handle.
bool hare_stein_exists(const struct HareSteinHandle *handle);

// Dimension of the homogeneous kernel `{D = D' : A D A' = D}`.
//
// # Safety
// `handle` must be NULL or a live Stein handle.
size_t hare_stein_kernel_dim(const struct HareSteinHandle *handle);

// Copies the particular solution `P0` into a row-major buffer of length
// `n * n`.
//
// # Safety
// `handle` must be a live Stein handle; `buf` must point to `len`
// writable doubles.
enum HareStatus hare_stein_particular(const struct HareSteinHandle *handle,
                                      double *buf,
                                      size_t len);

// Copies kernel basis element `index` (unit Frobenius norm) into a
// row-major buffer of length `n * n`.
//
// # Safety
// `handle` must be a live Stein handle; `buf` must point to `len`
// writable doubles.
enum HareStatus hare_stein_kernel_element(const struct HareSteinHandle *handle,
                                          size_t index,
                                          double *buf,
                                          size_t len);

// Enumerates the solution families: `random_samples` seeded random
// kernel-coefficient draws on top of the deterministic zero and signed
// unit vectors.
//
// # Safety
// `handle` must be a live problem handle; `out` writable. The result
// must be released with [`hare_families_free`].
enum HareStatus hare_families_enumerate(const struct HareProblemHandle *handle,
                                        size_t random_samples,
                                        uint64_t seed,
                                        struct HareFamiliesHandle **out);

// # Safety
// `handle` must be NULL or a live families handle, freed at most once.
void hare_families_free(struct HareFamiliesHandle *handle);

// # Safety
// `handle` must be NULL or a live families handle.
size_t hare_families_count(const struct HareFamiliesHandle *handle);

// Whether the invariant-subspace lattice was enumerated completely
// (false means only the trivial subspaces were available).
//
// # Safety
// `handle` must be NULL or a live families handle.
bool hare_families_lattice_complete(const struct HareFamiliesHandle *handle);

// Copies solution `index` into a row-major buffer of length `n * n`.
//
// # Safety
// `handle` must be a live families handle; `buf` must point to `len`
// writable doubles.
enum HareStatus hare_families_solution(const struct HareFamiliesHandle *handle,
                                       size_t index,
                                       double *buf,
                                       size_t len);

// Kernel dimension of solution `index`.
//
// # Safety
// `handle` must be a live families handle; `out` writable.
enum HareStatus hare_families_kernel_dim(const struct HareFamiliesHandle *handle,
                                         size_t index,
                                         size_t *out);

// Achieved Riccati residual norm of solution `index`.
//
// # Safety
// `handle` must be a live families handle; `out` writable.
enum HareStatus hare_families_residual_norm(const struct HareFamiliesHandle *handle,
                                            size_t index,
                                            double *out);

// Classifies a row-major symmetric candidate `q` (`n * n` doubles).
//
// # Safety
// `handle` must be a live problem handle; `q` must point to `n * n`
// readable doubles; `out` writable. The result must be released with
// [`hare_classification_free`].
enum HareStatus hare_classify(const struct HareProblemHandle *handle,
                              const double *q,
                              struct HareClassificationHandle **out);

// # Safety
// `handle` must be NULL or a live classification handle, freed at most
// once.
void hare_classification_free(struct HareClassificationHandle *handle);

// Verdict of a classification; NULL maps to `NotASolution`.
//
// # Safety
// `handle` must be NULL or a live classification handle.
enum HareVerdict hare_classification_verdict(const struct HareClassificationHandle *handle);

// Kernel dimension of the candidate, available for in-family verdicts.
//
// # Safety
// `handle` must be a live classification handle; `out` writable.
enum HareStatus hare_classification_kernel_dim(const struct HareClassificationHandle *handle,
                                               size_t *out);

// Copies the witnessing Stein solution (in-family verdicts only) into a
// row-major `n * n` buffer.
//
// # Safety
// `handle` must be a live classification handle; `buf` must point to
// `len` writable doubles.
enum HareStatus hare_classification_witness(const struct HareClassificationHandle *handle,
                                            double *buf,
                                            size_t len);

// Copies the extension-inconsistency residual (spurious verdicts only)
// into a row-major `n * n` buffer.
//
// # Safety
// `handle` must be a live classification handle; `buf` must point to
// `len` writable doubles.
enum HareStatus hare_classification_residual(const struct HareClassificationHandle *handle,
                                             double *buf,
                                             size_t len);

// Residual norm attached to the verdict: the extension inconsistency for
// spurious candidates, the equation residual for non-solutions, zero for
// in-family verdicts.
//
// # Safety
// `handle` must be a live classification handle; `out` writable.
enum HareStatus hare_classification_residual_norm(const struct HareClassificationHandle *handle,
                                                  double *out);

// Evaluates the Riccati residual norm of a row-major symmetric candidate
// and whether it passes the acceptance threshold. A singular `R + B'QB`
// reports an infinite residual with `is_solution = false`.
//
// # Safety
// `handle` must be a live problem handle; `q` must point to `n * n`
// readable doubles; output pointers writable.
enum HareStatus hare_verify(const struct HareProblemHandle *handle,
                            const double *q,
                            double *out_residual_norm,
                            bool *out_is_solution);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARE_H */
