/* C interface for the semfetch prefetching engine. */

#pragma once

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a call into the library.
typedef enum SemfetchStatus {
  // The call succeeded.
  SEMFETCH_STATUS_OK = 0,
  // A required pointer argument was null.
  SEMFETCH_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  SEMFETCH_STATUS_INVALID_UTF8 = 2,
  // An argument was out of range or otherwise unusable.
  SEMFETCH_STATUS_INVALID_ARGUMENT = 3,
  // A resource file or document could not be loaded or parsed.
  SEMFETCH_STATUS_PARSE_FAILED = 4,
} SemfetchStatus;

// Opaque engine handle: the loaded resources plus the configuration.
typedef struct SemfetchEngine SemfetchEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates an engine with the built-in resources and default
// configuration. Never fails; release with [`semfetch_engine_free`].
struct SemfetchEngine *semfetch_engine_new(void);

// Creates an engine from resource files. Each path may be null to keep
// the built-in data for that slot. On success `*out_engine` owns the
// new engine; on failure it is left untouched.
//
// # Safety
//
// Path arguments must be null or valid NUL-terminated strings.
// `out_engine` must be a valid pointer.
enum SemfetchStatus semfetch_engine_open(const char *stopwords,
                                         const char *lemmas,
                                         const char *simtable,
                                         const char *ontology,
                                         const char *numbers,
                                         struct SemfetchEngine **out_engine);

// Releases an engine. Null is a no-op.
//
// # Safety
//
// `engine` must be null or a pointer obtained from
// [`semfetch_engine_new`] or [`semfetch_engine_open`] that has not
// been freed already.
void semfetch_engine_free(struct SemfetchEngine *engine);

// Sets the similar-relation threshold (inclusive, within 0..=1).
//
// # Safety
//
// `engine` must be a valid engine pointer.
enum SemfetchStatus semfetch_engine_set_threshold(struct SemfetchEngine *engine, double threshold);

// Sets the maximum number of links prefetched per page visit.
//
// # Safety
//
// `engine` must be a valid engine pointer.
enum SemfetchStatus semfetch_engine_set_max_prefetch(struct SemfetchEngine *engine,
                                                     size_t max_prefetch);

// Scores two phrases; writes the probability to `out_probability`.
//
// # Safety
//
// `engine` must be a valid engine pointer, `phrase_a` and `phrase_b`
// valid NUL-terminated strings, `out_probability` a valid pointer.
enum SemfetchStatus semfetch_similarity(const struct SemfetchEngine *engine,
                                        const char *phrase_a,
                                        const char *phrase_b,
                                        double *out_probability);

// Scores two phrases and returns the full report as a JSON string in
// `*out_json` (normalized phrases, matrix, total, probability,
// verdict). Free it with [`semfetch_string_free`].
//
// # Safety
//
// Same contract as [`semfetch_similarity`], with `out_json` a valid
// pointer.
enum SemfetchStatus semfetch_similarity_json(const struct SemfetchEngine *engine,
                                             const char *phrase_a,
                                             const char *phrase_b,
                                             char **out_json);

// Scores a page's links against the keywords and returns the analysis
// as a JSON string in `*out_json`: the ordered prefetch list plus the
// rejected links. Relative links resolve against `base_url`. Free the
// string with [`semfetch_string_free`].
//
// # Safety
//
// `engine` must be a valid engine pointer, the string arguments valid
// NUL-terminated strings and `out_json` a valid pointer.
enum SemfetchStatus semfetch_analyze_json(const struct SemfetchEngine *engine,
                                          const char *html,
                                          const char *base_url,
                                          const char *keywords,
                                          char **out_json);

// Releases a string returned by this library. Null is a no-op.
//
// # Safety
//
// `text` must be null or a pointer returned by one of the `*_json`
// functions that has not been freed already.
void semfetch_string_free(char *text);

// The library version as a static string; do not free it.
const char *semfetch_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
