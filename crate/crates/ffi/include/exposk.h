/* C interface for the exposk solver. Generated by cbindgen; do not edit. */

#ifndef EXPOSK_H
#define EXPOSK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum ExposkStatus {
  // The call succeeded and all out-parameters are filled in.
  EXPOSK_STATUS_OK = 0,
  // A required pointer argument was NULL.
  EXPOSK_STATUS_NULL_ARGUMENT = 1,
  // An argument was out of range or malformed (bad pattern, bad
  // modulus, bad bound).
  EXPOSK_STATUS_INVALID_ARGUMENT = 2,
  // The equation text did not parse.
  EXPOSK_STATUS_PARSE_ERROR = 3,
  // A resource cap stopped the computation before a decision was made.
  EXPOSK_STATUS_RESOURCE_EXCEEDED = 4,
  // The witness search exhausted its ladder without finding a modulus.
  EXPOSK_STATUS_NO_WITNESS = 5,
} ExposkStatus;

// Opaque equation handle.
typedef struct ExposkEquation ExposkEquation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the linked library as a static string; do not free.
const char *exposk_version(void);

// Schema tag stamped on every JSON document this library returns.
uint32_t exposk_schema_version(void);

// Most recent error message on this thread as an owned string, or NULL
// when the last call succeeded. Release with exposk_string_free.
char *exposk_last_error(void);

// Releases a string returned by this library; NULL is a no-op.
//
// # Safety
// `s` must be NULL or a pointer obtained from this library that has not
// been freed already.
void exposk_string_free(char *s);

// Parses equation text like "2^x - 3^y = 0" into a handle.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be valid for a
// pointer write.
enum ExposkStatus exposk_parse(const char *text, struct ExposkEquation **out);

// Builds the family member n^x d1 (n+1)^y d2 (n+2)^z d3 (n+3)^w = 0 from
// a base n >= 2 and a three-character sign pattern like "---".
//
// # Safety
// `pattern` must be a NUL-terminated string; `out` must be valid for a
// pointer write.
enum ExposkStatus exposk_family(uint64_t n, const char *pattern, struct ExposkEquation **out);

// Releases an equation handle; NULL is a no-op.
//
// # Safety
// `eq` must be NULL or a handle from exposk_parse or exposk_family that
// has not been freed already.
void exposk_equation_free(struct ExposkEquation *eq);

// Writes the canonical text of the equation.
//
// # Safety
// `eq` must be a live handle; `out` must be valid for a pointer write.
enum ExposkStatus exposk_format(const struct ExposkEquation *eq, char **out);

// Decides solvability modulo `modulus` (2 <= modulus <= 2^62). On OK,
// `*solvable` holds the answer and `certificate_json`, when non-NULL,
// receives the full certificate document.
//
// # Safety
// `eq` must be a live handle; `solvable` must be valid for a bool write;
// `certificate_json` must be NULL or valid for a pointer write.
enum ExposkStatus exposk_check_mod(const struct ExposkEquation *eq,
                                   uint64_t modulus,
                                   bool *solvable,
                                   char **certificate_json);

// Hunts for a modulus proving the equation has no integer solutions.
// Pass 0 for `prime_bound` or `max_modulus` to use the defaults. On OK,
// `*modulus` holds the witness and `certificate_json`, when non-NULL,
// receives its unsolvability certificate. NoWitness means the ladder was
// exhausted; the reason is available via exposk_last_error.
//
// # Safety
// `eq` must be a live handle; `modulus` must be valid for a u64 write;
// `certificate_json` must be NULL or valid for a pointer write.
enum ExposkStatus exposk_find_modulus(const struct ExposkEquation *eq,
                                      uint64_t prime_bound,
                                      uint64_t max_modulus,
                                      uint64_t *modulus,
                                      char **certificate_json);

// Enumerates every integer solution with all term magnitudes at most
// `bound` (2 <= bound <= 10^18). Writes a JSON document with the
// variable order and one exponent row per solution.
//
// # Safety
// `eq` must be a live handle; `solutions_json` must be valid for a
// pointer write.
enum ExposkStatus exposk_search(const struct ExposkEquation *eq,
                                uint64_t bound,
                                char **solutions_json);

// Writes the proved verdict for the family member (n, pattern) as a JSON
// document: solutions proved complete, no-solution proved, or not
// covered.
//
// # Safety
// `pattern` must be a NUL-terminated string; `verdict_json` must be
// valid for a pointer write.
enum ExposkStatus exposk_classify(uint64_t n, const char *pattern, char **verdict_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EXPOSK_H */
