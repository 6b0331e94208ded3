#ifndef BUNCHED_H
#define BUNCHED_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a C API call.
 */
typedef enum BunchedStatus {
  /**
   * The call succeeded.
   */
  BUNCHED_STATUS_OK = 0,
  /**
   * A search finished without finding a derivation.
   */
  BUNCHED_STATUS_NOT_FOUND = 1,
  /**
   * The kernel rejected a derivation.
   */
  BUNCHED_STATUS_CHECK_FAILED = 2,
  /**
   * Text input failed to parse.
   */
  BUNCHED_STATUS_PARSE_ERROR = 3,
  /**
   * A null pointer or otherwise unusable argument.
   */
  BUNCHED_STATUS_INVALID_ARGUMENT = 4,
} BunchedStatus;

/**
 * Calculus configuration handle.
 */
typedef struct BunchedConfig BunchedConfig;

/**
 * Derivation handle.
 */
typedef struct BunchedDerivation BunchedDerivation;

/**
 * Sequent handle.
 */
typedef struct BunchedSequent BunchedSequent;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the most recent failure on this thread, or null. The
 * returned string is owned by the caller.
 */
char *bunched_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library, or null.
 */
void bunched_string_free(char *s);

char *bunched_version(void);

/**
 * A fresh configuration: plain BI by default.
 */
struct BunchedConfig *bunched_config_new(bool s4, bool allow_cut);

/**
 * Installs simple structural rules from their text form, one
 * `T1 & ... => T` per line.
 *
 * # Safety
 * `config` must be a live handle from [`bunched_config_new`]; `rules`
 * must be a valid NUL-terminated string or null.
 */
enum BunchedStatus bunched_config_add_rules(struct BunchedConfig *config, const char *rules);

/**
 * # Safety
 * `config` must come from [`bunched_config_new`] and not be used again.
 */
void bunched_config_free(struct BunchedConfig *config);

/**
 * Parses `text` as a sequent (`bunch |- formula`).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be writable.
 */
enum BunchedStatus bunched_sequent_parse(const char *text, struct BunchedSequent **out);

/**
 * Canonical text of a sequent; caller frees.
 *
 * # Safety
 * `sequent` must be a live handle.
 */
char *bunched_sequent_to_string(const struct BunchedSequent *sequent);

/**
 * # Safety
 * `sequent` must come from this library and not be used again.
 */
void bunched_sequent_free(struct BunchedSequent *sequent);

/**
 * Searches for a cut-free derivation of height at most `depth`.
 * `NotFound` is inconclusive, not a refutation.
 *
 * # Safety
 * All handles must be live; `out` must be writable.
 */
enum BunchedStatus bunched_prove(const struct BunchedSequent *sequent,
                                 const struct BunchedConfig *config,
                                 uintptr_t depth,
                                 struct BunchedDerivation **out);

/**
 * A checked cut-free derivation of `formula |- formula`.
 *
 * # Safety
 * `formula` must be a valid NUL-terminated string; `config` live;
 * `out` writable.
 */
enum BunchedStatus bunched_identity_expansion(const char *formula,
                                              const struct BunchedConfig *config,
                                              struct BunchedDerivation **out);

/**
 * Loads a derivation from its JSON document form.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` writable.
 */
enum BunchedStatus bunched_derivation_parse_json(const char *json, struct BunchedDerivation **out);

/**
 * JSON document form of a derivation; caller frees.
 *
 * # Safety
 * `derivation` must be a live handle.
 */
char *bunched_derivation_to_json(const struct BunchedDerivation *derivation);

/**
 * Runs the kernel. `Ok` means accepted; `CheckFailed` carries the
 * first failure in the last-error message.
 *
 * # Safety
 * Both handles must be live.
 */
enum BunchedStatus bunched_derivation_check(const struct BunchedDerivation *derivation,
                                            const struct BunchedConfig *config);

/**
 * # Safety
 * `derivation` must be a live handle.
 */
uintptr_t bunched_derivation_height(const struct BunchedDerivation *derivation);

/**
 * # Safety
 * `derivation` must be a live handle.
 */
bool bunched_derivation_uses_cut(const struct BunchedDerivation *derivation);

/**
 * The conclusion sequent as a fresh handle.
 *
 * # Safety
 * `derivation` must be a live handle; `out` writable.
 */
enum BunchedStatus bunched_derivation_conclusion(const struct BunchedDerivation *derivation,
                                                 struct BunchedSequent **out);

/**
 * # Safety
 * `derivation` must come from this library and not be used again.
 */
void bunched_derivation_free(struct BunchedDerivation *derivation);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BUNCHED_H */
