#ifndef GRC_H
#define GRC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GrcEngine {
  GRC_ENGINE_TEXT_NAIVE = 0,
  GRC_ENGINE_TEXT_FAST = 1,
  GRC_ENGINE_SCAN = 2,
  GRC_ENGINE_FAST = 3,
} GrcEngine;

/**
 * Status codes; format and internal errors share their values with the
 * `grc` exit codes.
 */
typedef enum GrcStatus {
  GRC_STATUS_OK = 0,
  GRC_STATUS_NULL_ARGUMENT = 1,
  GRC_STATUS_FORMAT = 2,
  GRC_STATUS_INTERNAL = 4,
  GRC_STATUS_IO = 5,
  GRC_STATUS_INVALID_ARGUMENT = 6,
  GRC_STATUS_PANIC = 7,
} GrcStatus;

/**
 * Opaque RePair grammar.
 */
typedef struct GrcGrammar GrcGrammar;

/**
 * Opaque straight-line program.
 */
typedef struct GrcSlp GrcSlp;

/**
 * An owned byte buffer returned by the library; release it with
 * [`grc_buffer_free`].
 */
typedef struct GrcBuffer {
  uint8_t *data;
  size_t len;
} GrcBuffer;

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *grc_last_error(void);

/**
 * Builds an SLP of `text` with the pairing builder (alphabet: bytes).
 *
 * # Safety
 * `text` must be valid for `len` reads; `out` must be a valid pointer.
 */
enum GrcStatus grc_slp_build(const uint8_t *text, size_t len, struct GrcSlp **out);

/**
 * Parses an SLP in binary or text format.
 *
 * # Safety
 * `data` must be valid for `len` reads; `out` must be a valid pointer.
 */
enum GrcStatus grc_slp_from_bytes(const uint8_t *data, size_t len, struct GrcSlp **out);

/**
 * Serializes an SLP in the binary format.
 *
 * # Safety
 * `slp` must come from this library; `out` must be a valid pointer.
 */
enum GrcStatus grc_slp_to_bytes(const struct GrcSlp *slp, struct GrcBuffer *out);

/**
 * Number of rules, or 0 for a null handle.
 *
 * # Safety
 * `slp` must be null or come from this library.
 */
size_t grc_slp_rule_count(const struct GrcSlp *slp);

/**
 * Expands an SLP.
 *
 * # Safety
 * `slp` must come from this library; `out` must be a valid pointer.
 */
enum GrcStatus grc_slp_expand(const struct GrcSlp *slp, struct GrcBuffer *out);

/**
 * # Safety
 * `slp` must be null or come from this library and not be used again.
 */
void grc_slp_free(struct GrcSlp *slp);

/**
 * RePair of a byte text with `GRC_ENGINE_TEXT_NAIVE` or `GRC_ENGINE_TEXT_FAST`.
 *
 * # Safety
 * `text` must be valid for `len` reads; `out` must be a valid pointer.
 */
enum GrcStatus grc_repair_text(const uint8_t *text,
                               size_t len,
                               enum GrcEngine engine,
                               struct GrcGrammar **out);

/**
 * RePair computed on an SLP with `GRC_ENGINE_SCAN` or `GRC_ENGINE_FAST`.
 *
 * # Safety
 * `slp` must come from this library; `out` must be a valid pointer.
 */
enum GrcStatus grc_recompress(const struct GrcSlp *slp,
                              enum GrcEngine engine,
                              struct GrcGrammar **out);

/**
 * Hybrid run with shrink factor `t` (0 means never switch).
 *
 * # Safety
 * `slp` must come from this library; `out` must be a valid pointer.
 */
enum GrcStatus grc_hybrid(const struct GrcSlp *slp,
                          uint64_t t,
                          enum GrcEngine phase1,
                          struct GrcGrammar **out);

/**
 * Parses a RePair grammar in binary or text format.
 *
 * # Safety
 * `data` must be valid for `len` reads; `out` must be a valid pointer.
 */
enum GrcStatus grc_grammar_from_bytes(const uint8_t *data, size_t len, struct GrcGrammar **out);

/**
 * Serializes a grammar in the binary format.
 *
 * # Safety
 * `grammar` must come from this library; `out` must be a valid pointer.
 */
enum GrcStatus grc_grammar_to_bytes(const struct GrcGrammar *grammar, struct GrcBuffer *out);

/**
 * Expands a grammar back to its text.
 *
 * # Safety
 * `grammar` must come from this library; `out` must be a valid pointer.
 */
enum GrcStatus grc_grammar_expand(const struct GrcGrammar *grammar, struct GrcBuffer *out);

/**
 * Number of introduced pairs, or 0 for a null handle.
 *
 * # Safety
 * `grammar` must be null or come from this library.
 */
size_t grc_grammar_pair_count(const struct GrcGrammar *grammar);

/**
 * Length of the final sequence, or 0 for a null handle.
 *
 * # Safety
 * `grammar` must be null or come from this library.
 */
size_t grc_grammar_final_len(const struct GrcGrammar *grammar);

/**
 * # Safety
 * `grammar` must be null or come from this library and not be used again.
 */
void grc_grammar_free(struct GrcGrammar *grammar);

/**
 * # Safety
 * `buf` must have been filled by this library and not freed before.
 */
void grc_buffer_free(struct GrcBuffer buf);

#endif  /* GRC_H */
