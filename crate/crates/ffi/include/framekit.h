#ifndef FRAMEKIT_H
#define FRAMEKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every `fk_*` call.
typedef enum FkStatus {
  FK_STATUS_OK = 0,
  FK_STATUS_NULL_POINTER = 1,
  FK_STATUS_INVALID_ARGUMENT = 2,
  // A precondition of a certified bound does not hold (not tight, ε ≥ 1, ...).
  FK_STATUS_HYPOTHESIS_VIOLATED = 3,
  FK_STATUS_NOT_CONVERGED = 4,
  FK_STATUS_BUFFER_TOO_SMALL = 5,
  FK_STATUS_PANIC = 6,
} FkStatus;

// Opaque frame handle.
typedef struct FkFrame FkFrame;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version string of the library; static, never freed.
const char *fk_version(void);

// Copies the calling thread's last error message (NUL-terminated, truncated
// to `cap`) into `buf`; returns the full message length excluding NUL, 0 if none.
//
// # Safety
// `buf` must point to `cap` writable bytes or be null with `cap == 0`.
size_t fk_last_error(char *buf, size_t cap);

// # Safety
// `s` must come from an `fk_*` string out-parameter, or be null.
void fk_string_free(char *s);

// Real frame from `dim * count` column-major entries.
//
// # Safety
// `data` must point to `dim * count` doubles; `out` must be writable.
enum FkStatus fk_frame_from_columns(size_t dim,
                                    size_t count,
                                    const double *data,
                                    struct FkFrame **out_frame);

// Harmonic unit-norm tight frame; `complex != 0` selects the complex build.
//
// # Safety
// `out_frame` must be writable.
enum FkStatus fk_frame_harmonic(size_t dim,
                                size_t count,
                                int32_t complex,
                                struct FkFrame **out_frame);

// # Safety
// `out_frame` must be writable.
enum FkStatus fk_frame_orthonormal(size_t dim, struct FkFrame **out_frame);

// Seeded real unit-norm tight frame; `iters == 0` uses the default cap.
//
// # Safety
// `out_frame` must be writable.
enum FkStatus fk_frame_random_tight(size_t dim,
                                    size_t count,
                                    uint64_t seed,
                                    size_t iters,
                                    double tol,
                                    struct FkFrame **out_frame);

// Parses a frame file (`{"dim", "field", "vectors"}`).
//
// # Safety
// `json` must be a NUL-terminated string; `out_frame` must be writable.
enum FkStatus fk_frame_from_json(const char *json, struct FkFrame **out_frame);

// # Safety
// `frame` must be a live handle; `out_json` must be writable.
enum FkStatus fk_frame_to_json(const struct FkFrame *frame, char **out_json);

// # Safety
// `frame` must come from an `fk_frame_*` constructor, or be null.
void fk_frame_free(struct FkFrame *frame);

// # Safety
// `frame` must be a live handle; out-parameters must be writable.
enum FkStatus fk_frame_shape(const struct FkFrame *frame,
                             size_t *dim,
                             size_t *count,
                             int32_t *is_complex);

// Optimal frame bounds.
//
// # Safety
// `frame` must be a live handle; out-parameters must be writable.
enum FkStatus fk_frame_bounds(const struct FkFrame *frame, double *lower, double *upper);

// Exhaustive RIP constant at order `s`; the witness subset is copied into
// `witness` (capacity `witness_cap`). `budget == 0` uses the default cap.
//
// # Safety
// `frame` must be a live handle; `witness` must hold `witness_cap` entries.
enum FkStatus fk_rip_exhaustive(const struct FkFrame *frame,
                                size_t s,
                                uint64_t budget,
                                double *epsilon,
                                size_t *witness,
                                size_t witness_cap,
                                size_t *witness_len);

// Near-tightness certificate of the block fusion frame for partition
// `blocks` ("0,1;2,3;..."), using the exhaustive RIP constant at order `s`.
// `*holds` is 1 when the measured bounds fall in the bracket. The full
// report is returned as JSON when `out_json` is non-null.
//
// # Safety
// `frame` must be a live handle; `blocks` NUL-terminated; out-parameters writable or null where noted.
enum FkStatus fk_certify_near_tight(const struct FkFrame *frame,
                                    const char *blocks,
                                    size_t s,
                                    int32_t *holds,
                                    char **out_json);

// Cosines of the principal angles between the spans of two index sets,
// descending, copied into `cosines` (capacity `cap`).
//
// # Safety
// `frame` must be a live handle; index arrays must hold the stated lengths.
enum FkStatus fk_principal_cosines(const struct FkFrame *frame,
                                   const size_t *first,
                                   size_t first_len,
                                   const size_t *second,
                                   size_t second_len,
                                   double *cosines,
                                   size_t cap,
                                   size_t *len);

// Largest number of replaced blocks the replacement bracket admits at `epsilon`.
//
// # Safety
// `limit` must be writable.
enum FkStatus fk_k1_limit(double epsilon, uint64_t *limit);

// Bracket on subset norms after replacing `k1` blocks of an ε-RIP frame.
//
// # Safety
// `lower` and `upper` must be writable.
enum FkStatus fk_replacement_bracket(double epsilon, size_t k1, double *lower, double *upper);

// Runs the certification suite. `config` is a JSON suite config or null for
// defaults; `*passed` is 1 when every clause holds. The report goes to
// `out_json` when non-null.
//
// # Safety
// `config` must be NUL-terminated or null; `passed` writable.
enum FkStatus fk_verify_all(const char *config, int32_t *passed, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRAMEKIT_H */
