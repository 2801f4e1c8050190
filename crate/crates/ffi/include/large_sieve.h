#ifndef LARGE_SIEVE_H
#define LARGE_SIEVE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes of every fallible call.
typedef enum LsStatus {
  LS_STATUS_OK = 0,
  LS_STATUS_NULL_POINTER = 1,
  LS_STATUS_DOMAIN = 2,
  LS_STATUS_RANGE = 3,
  LS_STATUS_CONFIG = 4,
  LS_STATUS_IO = 5,
  LS_STATUS_INVALID_UTF8 = 6,
  LS_STATUS_OUT_OF_BOUNDS = 7,
  LS_STATUS_PANIC = 8,
} LsStatus;

// The Dirichlet characters modulo `D` in their canonical order.
typedef struct LsCharacterGroup LsCharacterGroup;

// Primes up to a limit with their logarithms and reciprocal prefix sums.
typedef struct LsPrimeTable LsPrimeTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *ls_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed already.
void ls_string_free(char *s);

// Sieves the primes up to `limit` (2 ≤ limit ≤ 10^8).
//
// # Safety
// `out` must be a valid pointer.
enum LsStatus ls_prime_table_new(uint64_t limit, struct LsPrimeTable **out);

// # Safety
// `table` must come from [`ls_prime_table_new`] and not be used afterwards.
void ls_prime_table_free(struct LsPrimeTable *table);

// Number of primes in the table.
//
// # Safety
// Pointers must be valid.
enum LsStatus ls_prime_table_len(const struct LsPrimeTable *table, uintptr_t *out);

// The `index`-th prime (0-based).
//
// # Safety
// Pointers must be valid.
enum LsStatus ls_prime_table_get(const struct LsPrimeTable *table, uintptr_t index, uint64_t *out);

// `Σ_{d<p≤x} 1/p`.
//
// # Safety
// Pointers must be valid.
enum LsStatus ls_sum_reciprocal_primes(const struct LsPrimeTable *table,
                                       uint64_t d,
                                       uint64_t x,
                                       double *out);

// All characters modulo `d`, principal first.
//
// # Safety
// `out` must be a valid pointer.
enum LsStatus ls_character_group_new(uint64_t d, struct LsCharacterGroup **out);

// # Safety
// `group` must come from [`ls_character_group_new`] and not be used afterwards.
void ls_character_group_free(struct LsCharacterGroup *group);

// Number of characters, `φ(d)`.
//
// # Safety
// Pointers must be valid.
enum LsStatus ls_character_group_len(const struct LsCharacterGroup *group, uintptr_t *out);

// `χ_index(n)` as a real and imaginary part.
//
// # Safety
// Pointers must be valid.
enum LsStatus ls_character_evaluate(const struct LsCharacterGroup *group,
                                    uintptr_t index,
                                    uint64_t n,
                                    double *re,
                                    double *im);

// Checks the inequality for `a_p ≡ 1` and the non-principal characters mod
// `d`, with constant `c`, and writes the JSON report to `out_json`.
// `passed` receives 1 or 0.
//
// # Safety
// Pointers must be valid; `table` must cover `x`.
enum LsStatus ls_verify_ones_json(const struct LsPrimeTable *table,
                                  uint64_t d,
                                  uint64_t x,
                                  double b_exponent,
                                  double c,
                                  char **out_json,
                                  int32_t *passed);

// Runs a command line subcommand (`"verify"`, `"lemma-scan"`, ...) with a
// `key=value` configuration text and returns its JSON report.
// `exit_code` receives the code the command line tool would exit with.
//
// # Safety
// Pointers must be valid; `config` may be null for defaults.
enum LsStatus ls_run_command_json(const char *command,
                                  const char *config,
                                  char **out_json,
                                  int32_t *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LARGE_SIEVE_H */
