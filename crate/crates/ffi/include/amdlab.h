#ifndef AMDLAB_H
#define AMDLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define AMD_STRATEGY_ZIC 1

#define AMD_STRATEGY_ZIP 2

#define AMD_STRATEGY_RE 4

#define AMD_STRATEGY_GD 8

#define AMD_STRATEGY_ALL 15

typedef enum AmdStatus {
  AMD_STATUS_OK = 0,
  AMD_STATUS_NULL_POINTER = 1,
  AMD_STATUS_INVALID_UTF8 = 2,
  AMD_STATUS_PARSE_ERROR = 3,
  AMD_STATUS_INVALID_CONFIG = 4,
  AMD_STATUS_OUT_OF_RANGE = 5,
  AMD_STATUS_PANIC = 6,
} AmdStatus;

/**
 * A game under construction: markets, population and length.
 */
typedef struct AmdGameConfig AmdGameConfig;

typedef struct AmdGameResult AmdGameResult;

/**
 * A parsed mechanism genome.
 */
typedef struct AmdGenome AmdGenome;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *amd_last_error_message(void);

/**
 * Parses a genome string or a preset name such as `CDA_l`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum AmdStatus amd_genome_parse(const char *text, struct AmdGenome **out);

/**
 * Canonical string of a genome; release it with [`amd_string_free`].
 * Returns null if `genome` is null.
 *
 * # Safety
 * `genome` must be null or a live handle from [`amd_genome_parse`].
 */
char *amd_genome_to_string(const struct AmdGenome *genome);

/**
 * # Safety
 * `genome` must be null or a handle that has not been freed yet.
 */
void amd_genome_free(struct AmdGenome *genome);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void amd_string_free(char *s);

/**
 * New game with no markets and the default population (120 traders of all
 * four strategies, values in [50, 150]).
 */
struct AmdGameConfig *amd_game_config_new(uint32_t num_days,
                                          uint32_t rounds_per_day,
                                          uint64_t seed);

/**
 * Adds a market running `genome`. The genome handle is copied, not taken.
 *
 * # Safety
 * Both pointers must be null or live handles.
 */
enum AmdStatus amd_game_config_add_market(struct AmdGameConfig *config,
                                          const struct AmdGenome *genome);

/**
 * Sets the population: `traders` traders, alternating buyer and seller,
 * strategies from `strategy_mask` (`AMD_STRATEGY_*` bits) in equal blocks.
 *
 * # Safety
 * `config` must be null or a live handle.
 */
enum AmdStatus amd_game_config_set_population(struct AmdGameConfig *config,
                                              uint32_t traders,
                                              double value_low,
                                              double value_high,
                                              uint32_t strategy_mask);

/**
 * # Safety
 * `config` must be null or a handle that has not been freed yet.
 */
void amd_game_config_free(struct AmdGameConfig *config);

/**
 * Plays the configured game. The same config and seed give the same result.
 *
 * # Safety
 * `config` must be a live handle and `out` a valid pointer.
 */
enum AmdStatus amd_game_run(const struct AmdGameConfig *config, struct AmdGameResult **out);

/**
 * Number of markets in the result, 0 for null.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
uintptr_t amd_game_result_num_markets(const struct AmdGameResult *result);

/**
 * Mean combined daily score of market `market`.
 *
 * # Safety
 * `result` must be a live handle and `out` a valid pointer.
 */
enum AmdStatus amd_game_result_score(const struct AmdGameResult *result,
                                     uintptr_t market,
                                     double *out);

/**
 * # Safety
 * `result` must be null or a handle that has not been freed yet.
 */
void amd_game_result_free(struct AmdGameResult *result);

/**
 * Runs `runs` single-market games of `genome` against a population of one
 * strategy (a single `AMD_STRATEGY_*` bit) and writes the mean allocative
 * efficiency and mean Smith's alpha. Either output is NaN when no run
 * produced a value.
 *
 * # Safety
 * `genome` must be a live handle; `out_ea` and `out_alpha` valid pointers.
 */
enum AmdStatus amd_isolate_run(const struct AmdGenome *genome,
                               uint32_t strategy,
                               uint32_t traders_per_side,
                               uint32_t runs,
                               uint64_t seed,
                               double *out_ea,
                               double *out_alpha);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AMDLAB_H */
