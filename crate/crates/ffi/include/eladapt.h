#ifndef ELADAPT_H
#define ELADAPT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes of the C API.
 */
typedef enum EladaptStatus {
  ELADAPT_STATUS_OK = 0,
  ELADAPT_STATUS_NULL_ARGUMENT = 1,
  ELADAPT_STATUS_INVALID_UTF8 = 2,
  ELADAPT_STATUS_PARSE_ERROR = 3,
  ELADAPT_STATUS_TARGET_INCONSISTENT = 4,
  ELADAPT_STATUS_SOLUTION_INCONSISTENT = 5,
  ELADAPT_STATUS_INVALID_INPUT = 6,
  ELADAPT_STATUS_PANIC = 7,
} EladaptStatus;

/*
 A parsed knowledge base.
 */
typedef struct EladaptKb EladaptKb;

/*
 Parses `text` in the knowledge-base text format into a new handle.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum EladaptStatus eladapt_kb_parse(const char *text, struct EladaptKb **out);

/*
 Releases a handle. Null is ignored.

 # Safety
 `kb` must come from `eladapt_kb_parse` and not be used afterwards.
 */
void eladapt_kb_free(struct EladaptKb *kb);

/*
 Prints a knowledge base in canonical text form.

 # Safety
 `kb` must be a live handle and `out` a valid pointer.
 */
enum EladaptStatus eladapt_kb_print(const struct EladaptKb *kb, char **out);

/*
 Writes whether the knowledge base is consistent to `out`.

 # Safety
 `kb` must be a live handle and `out` a valid pointer.
 */
enum EladaptStatus eladapt_is_consistent(const struct EladaptKb *kb, bool *out);

/*
 Writes whether the knowledge base entails `assertion`, e.g. `"C(a)"`.

 # Safety
 `kb` must be a live handle, `assertion` a NUL-terminated string and
 `out` a valid pointer.
 */
enum EladaptStatus eladapt_entails(const struct EladaptKb *kb, const char *assertion, bool *out);

/*
 Adapts `solution` to `target` under the TBox of `tbox` and writes the
 ranked outcomes as JSON. A negative `k` selects the default bound.

 # Safety
 The three handles must be live and `out_json` a valid pointer.
 */
enum EladaptStatus eladapt_adapt(const struct EladaptKb *tbox,
                                 const struct EladaptKb *solution,
                                 const struct EladaptKb *target,
                                 int64_t k,
                                 char **out_json);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void eladapt_string_free(char *s);

/*
 Message of the last failed call on this thread, or null. Valid until
 the next call into the library on this thread.
 */
const char *eladapt_last_error_message(void);

#endif  /* ELADAPT_H */
