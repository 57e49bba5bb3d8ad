#ifndef HOPFCHAIN_H
#define HOPFCHAIN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit codes.
 */
typedef enum hopfchain_status {
  HOPFCHAIN_OK = 0,
  HOPFCHAIN_INVALID_INPUT = 2,
  HOPFCHAIN_NO_MARKOV_RESCALING = 3,
  HOPFCHAIN_UNSUPPORTED_SIZE = 4,
  HOPFCHAIN_INTERNAL_ERROR = 5,
} hopfchain_status;

/**
 * Opaque eigensystem handle (left and right bases with exponents).
 */
typedef struct hopfchain_eigen hopfchain_eigen;

/**
 * Opaque transition-matrix handle.
 */
typedef struct hopfchain_matrix hopfchain_matrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the most recent error on this thread. Borrowed; valid
 * until the next failing call.
 */
const char *hopfchain_last_error(void);

/**
 * Library version, static storage.
 */
const char *hopfchain_version(void);

/**
 * Frees a string returned by any hopfchain function.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library and not yet
 * freed; NULL is accepted.
 */
void hopfchain_string_free(char *s);

/**
 * Builds the exact degree-n transition matrix K_a for the named instance.
 * On success writes a handle to `out` and returns OK.
 *
 * # Safety
 * `spec` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum hopfchain_status hopfchain_matrix_new(const char *spec,
                                           uint32_t n,
                                           uint32_t a,
                                           struct hopfchain_matrix **out);

/**
 * Number of states in the block.
 *
 * # Safety
 * `m` must be a live handle from `hopfchain_matrix_new`.
 */
uintptr_t hopfchain_matrix_dim(const struct hopfchain_matrix *m);

/**
 * The entry K(row, col) as a "p/q" string; NULL when out of range.
 *
 * # Safety
 * `m` must be a live handle.
 */
char *hopfchain_matrix_entry(const struct hopfchain_matrix *m, uintptr_t row, uintptr_t col);

/**
 * The label of basis state `idx`; NULL when out of range.
 *
 * # Safety
 * `m` must be a live handle.
 */
char *hopfchain_matrix_label(const struct hopfchain_matrix *m, uintptr_t idx);

/**
 * # Safety
 * `m` must be a handle from `hopfchain_matrix_new`, freed at most once.
 */
void hopfchain_matrix_free(struct hopfchain_matrix *m);

/**
 * Builds the full left/right eigenbasis of the degree-n block and runs the
 * duality certificate.
 *
 * # Safety
 * `spec` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum hopfchain_status hopfchain_eigen_new(const char *spec,
                                          uint32_t n,
                                          struct hopfchain_eigen **out);

/**
 * # Safety
 * `h` must be a live handle.
 */
uintptr_t hopfchain_eigen_dim(const struct hopfchain_eigen *h);

/**
 * The eigenvalue exponent of the i-th eigenvector pair: the chain
 * eigenvalue is a^{exponent - n}. Returns u32::MAX when out of range.
 *
 * # Safety
 * `h` must be a live handle.
 */
uint32_t hopfchain_eigen_exponent(const struct hopfchain_eigen *h, uintptr_t idx);

/**
 * Left eigenvector matrix entry (row i is g_{b_i}), as "p/q".
 *
 * # Safety
 * `h` must be a live handle.
 */
char *hopfchain_eigen_left_entry(const struct hopfchain_eigen *h, uintptr_t i, uintptr_t j);

/**
 * Right eigenvector matrix entry (column j is f_{b_j}), as "p/q".
 *
 * # Safety
 * `h` must be a live handle.
 */
char *hopfchain_eigen_right_entry(const struct hopfchain_eigen *h, uintptr_t i, uintptr_t j);

/**
 * 1 when the exact duality certificate (f-columns inverse to g-rows) holds.
 *
 * # Safety
 * `h` must be a live handle.
 */
int32_t hopfchain_eigen_duality(const struct hopfchain_eigen *h);

/**
 * # Safety
 * `h` must be a handle from `hopfchain_eigen_new`, freed at most once.
 */
void hopfchain_eigen_free(struct hopfchain_eigen *h);

/**
 * Q_a(w) of the GSR law (descent form) for a permutation given as
 * one-line values 1..n; "p/q" string, NULL on invalid input.
 *
 * # Safety
 * `word` must point to `len` readable u32 values.
 */
char *hopfchain_gsr_probability(uint32_t n, uint32_t a, const uint32_t *word, uintptr_t len);

/**
 * Exact absorption probability of the rock-breaking chain from (n) after k
 * binary breaks, as "p/q".
 */
char *hopfchain_rock_absorption(uint32_t n, uint32_t k);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOPFCHAIN_H */
