/* SPDX-License-Identifier: Apache-2.0 */

#ifndef ENGMORPH_H
#define ENGMORPH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of an API call.
 */
typedef enum EngmorphStatus {
  ENGMORPH_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  ENGMORPH_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  ENGMORPH_STATUS_INVALID_UTF8 = 2,
  /**
   * The file could not be read or written.
   */
  ENGMORPH_STATUS_IO = 3,
  /**
   * Malformed lexicon, flat file or lexical form.
   */
  ENGMORPH_STATUS_INVALID_INPUT = 4,
  /**
   * The database file is damaged or not a database.
   */
  ENGMORPH_STATUS_CORRUPT = 5,
  /**
   * An internal panic was caught at the boundary.
   */
  ENGMORPH_STATUS_PANIC = 6,
} EngmorphStatus;

/**
 * Opaque handle to an open database file.
 */
typedef struct EngmorphDb EngmorphDb;

/**
 * Opaque lexicon handle for rule-mode recognition.
 */
typedef struct EngmorphLexicon EngmorphLexicon;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call on the same thread.
 */
const char *engmorph_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void engmorph_string_free(char *s);

/**
 * Loads a lexicon file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for a pointer write.
 */
enum EngmorphStatus engmorph_lexicon_open(const char *path, struct EngmorphLexicon **out);

/**
 * Builds a lexicon from lexicon-file text held in memory.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid for a pointer write.
 */
enum EngmorphStatus engmorph_lexicon_parse(const char *text, struct EngmorphLexicon **out);

/**
 * # Safety
 * `lexicon` must be NULL or a handle from `engmorph_lexicon_open` / `_parse`
 * that has not been freed.
 */
void engmorph_lexicon_free(struct EngmorphLexicon *lexicon);

/**
 * Analyses `word` against the lexicon. `out` receives one line per
 * analysis, `lexical_form<TAB>parse\n`; an empty string means unrecognized.
 *
 * # Safety
 * `lexicon` must be a live handle, `word` a NUL-terminated string, and
 * `out` valid for a pointer write.
 */
enum EngmorphStatus engmorph_recognize(const struct EngmorphLexicon *lexicon,
                                       const char *word,
                                       char **out);

/**
 * Opens a compiled database file for lookups.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for a pointer write.
 */
enum EngmorphStatus engmorph_db_open(const char *path, struct EngmorphDb **out);

/**
 * # Safety
 * `db` must be NULL or a handle from `engmorph_db_open` that has not been freed.
 */
void engmorph_db_free(struct EngmorphDb *db);

/**
 * Looks `word` up. `out` receives one `root POS ATTR...\n` line per entry;
 * an empty string means the key is absent.
 *
 * # Safety
 * `db` must be a live handle, `word` a NUL-terminated string, and `out`
 * valid for a pointer write.
 */
enum EngmorphStatus engmorph_db_lookup(const struct EngmorphDb *db, const char *word, char **out);

/**
 * Number of keys in the database, or 0 for a NULL handle.
 *
 * # Safety
 * `db` must be NULL or a live handle.
 */
uint64_t engmorph_db_key_count(const struct EngmorphDb *db);

/**
 * Compiles a lexicon file into a database file.
 *
 * # Safety
 * Both arguments must be NUL-terminated strings.
 */
enum EngmorphStatus engmorph_compile(const char *lexicon_path, const char *db_path);

/**
 * Spells a lexical form such as `stop+ed`.
 *
 * # Safety
 * `lexical_form` must be a NUL-terminated string; `out` must be valid for a
 * pointer write.
 */
enum EngmorphStatus engmorph_spell(const char *lexical_form, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENGMORPH_H */
