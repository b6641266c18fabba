#ifndef RPE_H
#define RPE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. The first four match the exit codes of the `rpe` binary.
typedef enum RpeStatus {
  RPE_STATUS_OK = 0,
  RPE_STATUS_PARSE_ERROR = 1,
  RPE_STATUS_THEOREM_VIOLATION = 2,
  RPE_STATUS_VERIFICATION_FAILURE = 3,
  RPE_STATUS_INVALID_ARGUMENT = 4,
  RPE_STATUS_NULL_POINTER = 5,
  RPE_STATUS_PANIC = 6,
} RpeStatus;

// A monomial ideal of a polynomial ring.
typedef struct RpeMonomialIdeal RpeMonomialIdeal;

// A parsed session file.
typedef struct RpeSession RpeSession;

// A submodule of a finitely generated abelian group `Z^n / L`.
typedef struct RpeZSubmodule RpeZSubmodule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null if none.
// The pointer stays valid until the next failing call on the same thread.
const char *rpe_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void rpe_string_free(char *s);

// Parses session text into a new handle stored in `*out`.
//
// # Safety
// `text` must be a nul-terminated string and `out` a valid pointer.
enum RpeStatus rpe_session_parse(const char *text, struct RpeSession **out);

// Runs every command of a session. The rendered output (text, or one JSON
// object per line) goes to `*out_output` and the exit code the `rpe`
// binary would return goes to `*out_exit_code`. `base_dir` resolves
// `verify` paths and may be null for the current directory.
//
// # Safety
// `session` must be a live handle; `base_dir` null or a nul-terminated
// string; `out_output` and `out_exit_code` valid pointers.
enum RpeStatus rpe_session_run(const struct RpeSession *session,
                               const char *base_dir,
                               bool json,
                               bool oracle,
                               char **out_output,
                               int32_t *out_exit_code);

// # Safety
// `session` must be null or a live handle from [`rpe_session_parse`].
void rpe_session_free(struct RpeSession *session);

// Builds the monomial ideal generated by `ngens` monomials in `nvars`
// variables; `exponents` holds `ngens * nvars` values, one row per
// generator.
//
// # Safety
// `exponents` must point to `ngens * nvars` values (or be null when that
// is zero) and `out` must be valid.
enum RpeStatus rpe_monomial_ideal_new(uintptr_t nvars,
                                      const uint32_t *exponents,
                                      uintptr_t ngens,
                                      struct RpeMonomialIdeal **out);

// Writes the factorization of `R/I` as JSON to `*out_json`: primes are
// arrays of variable indices.
//
// # Safety
// `ideal` must be a live handle and `out_json` a valid pointer.
enum RpeStatus rpe_monomial_ideal_factorization(const struct RpeMonomialIdeal *ideal,
                                                char **out_json);

// # Safety
// `ideal` must be null or a live handle from [`rpe_monomial_ideal_new`].
void rpe_monomial_ideal_free(struct RpeMonomialIdeal *ideal);

// Builds the submodule generated by `ngenerators` vectors inside
// `Z^rank / <relations>`. Both arrays are row-major with `rank` columns.
//
// # Safety
// Each array must hold `count * rank` values (or be null when that is
// zero) and `out` must be valid.
enum RpeStatus rpe_zsubmodule_new(uintptr_t rank,
                                  const int64_t *relations,
                                  uintptr_t nrelations,
                                  const int64_t *generators,
                                  uintptr_t ngenerators,
                                  struct RpeZSubmodule **out);

// Writes the factorization of `M/N` as JSON to `*out_json`: primes are
// integers, with `0` for the zero ideal.
//
// # Safety
// `sub` must be a live handle and `out_json` a valid pointer.
enum RpeStatus rpe_zsubmodule_factorization(const struct RpeZSubmodule *sub, char **out_json);

// # Safety
// `sub` must be null or a live handle from [`rpe_zsubmodule_new`].
void rpe_zsubmodule_free(struct RpeZSubmodule *sub);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RPE_H */
