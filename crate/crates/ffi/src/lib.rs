// SPDX-License-Identifier: Apache-2.0

//! C ABI for engmorph.
//!
//! Handles are opaque pointers created by `*_open` functions and released
//! with the matching `*_free`. Every fallible call returns an
//! [`EngmorphStatus`]; on failure [`engmorph_last_error`] describes the
//! problem. Strings returned through `out` parameters are NUL-terminated
//! UTF-8, owned by the caller, and must be released with
//! [`engmorph_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use engmorph::db::{self, Database, DbError};
use engmorph::{recognize, surface_of, LexicalForm, Lexicon};

/// Result of an API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngmorphStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The file could not be read or written.
    Io = 3,
    /// Malformed lexicon, flat file or lexical form.
    InvalidInput = 4,
    /// The database file is damaged or not a database.
    Corrupt = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

/// Opaque lexicon handle for rule-mode recognition.
pub struct EngmorphLexicon {
    lexicon: Lexicon,
}

/// Opaque handle to an open database file.
pub struct EngmorphDb {
    db: Database,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(EngmorphStatus, String);

impl From<DbError> for Failure {
    fn from(e: DbError) -> Self {
        let status = match &e {
            DbError::Io(_) => EngmorphStatus::Io,
            e if e.is_corruption() => EngmorphStatus::Corrupt,
            _ => EngmorphStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EngmorphStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            EngmorphStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            EngmorphStatus::Panic
        }
    }
}

/// # Safety
/// `s` must be NULL or point to a NUL-terminated string.
unsafe fn arg_str<'a>(s: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(
            EngmorphStatus::NullArgument,
            format!("`{name}` is NULL"),
        ));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        Failure(
            EngmorphStatus::InvalidUtf8,
            format!("`{name}` is not UTF-8"),
        )
    })
}

fn null(name: &str) -> Failure {
    Failure(EngmorphStatus::NullArgument, format!("`{name}` is NULL"))
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(EngmorphStatus::Io, format!("{path}: {e}")))
}

/// # Safety
/// `out` must be NULL or valid for a pointer write.
unsafe fn put_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(text)
        .map_err(|_| Failure(EngmorphStatus::InvalidInput, "result contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn engmorph_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn engmorph_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a lexicon file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn engmorph_lexicon_open(
    path: *const c_char,
    out: *mut *mut EngmorphLexicon,
) -> EngmorphStatus {
    guard(|| {
        let path = arg_str(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_file(path)?;
        let lexicon = Lexicon::parse(&text)
            .map_err(|e| Failure(EngmorphStatus::InvalidInput, format!("{path}: {e}")))?;
        *out = Box::into_raw(Box::new(EngmorphLexicon { lexicon }));
        Ok(())
    })
}

/// Builds a lexicon from lexicon-file text held in memory.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn engmorph_lexicon_parse(
    text: *const c_char,
    out: *mut *mut EngmorphLexicon,
) -> EngmorphStatus {
    guard(|| {
        let text = arg_str(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let lexicon = Lexicon::parse(text)
            .map_err(|e| Failure(EngmorphStatus::InvalidInput, e.to_string()))?;
        *out = Box::into_raw(Box::new(EngmorphLexicon { lexicon }));
        Ok(())
    })
}

/// # Safety
/// `lexicon` must be NULL or a handle from `engmorph_lexicon_open` / `_parse`
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn engmorph_lexicon_free(lexicon: *mut EngmorphLexicon) {
    if !lexicon.is_null() {
        drop(Box::from_raw(lexicon));
    }
}

/// Analyses `word` against the lexicon. `out` receives one line per
/// analysis, `lexical_form<TAB>parse\n`; an empty string means unrecognized.
///
/// # Safety
/// `lexicon` must be a live handle, `word` a NUL-terminated string, and
/// `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn engmorph_recognize(
    lexicon: *const EngmorphLexicon,
    word: *const c_char,
    out: *mut *mut c_char,
) -> EngmorphStatus {
    guard(|| {
        let handle = lexicon.as_ref().ok_or_else(|| null("lexicon"))?;
        let word = arg_str(word, "word")?;
        let mut text = String::new();
        for a in recognize(word, &handle.lexicon) {
            text.push_str(&format!("{}\t{}\n", a.lexical_form, a.parse));
        }
        put_string(out, text)
    })
}

/// Opens a compiled database file for lookups.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn engmorph_db_open(
    path: *const c_char,
    out: *mut *mut EngmorphDb,
) -> EngmorphStatus {
    guard(|| {
        let path = arg_str(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let db = Database::open(path).map_err(|e| {
            let Failure(status, msg) = Failure::from(e);
            Failure(status, format!("{path}: {msg}"))
        })?;
        *out = Box::into_raw(Box::new(EngmorphDb { db }));
        Ok(())
    })
}

/// # Safety
/// `db` must be NULL or a handle from `engmorph_db_open` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn engmorph_db_free(db: *mut EngmorphDb) {
    if !db.is_null() {
        drop(Box::from_raw(db));
    }
}

/// Looks `word` up. `out` receives one `root POS ATTR...\n` line per entry;
/// an empty string means the key is absent.
///
/// # Safety
/// `db` must be a live handle, `word` a NUL-terminated string, and `out`
/// valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn engmorph_db_lookup(
    db: *const EngmorphDb,
    word: *const c_char,
    out: *mut *mut c_char,
) -> EngmorphStatus {
    guard(|| {
        let handle = db.as_ref().ok_or_else(|| null("db"))?;
        let word = arg_str(word, "word")?;
        let mut text = String::new();
        for parse in handle.db.lookup(word)? {
            text.push_str(&parse.content_text());
            text.push('\n');
        }
        put_string(out, text)
    })
}

/// Number of keys in the database, or 0 for a NULL handle.
///
/// # Safety
/// `db` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn engmorph_db_key_count(db: *const EngmorphDb) -> u64 {
    db.as_ref().map_or(0, |h| h.db.key_count())
}

/// Compiles a lexicon file into a database file.
///
/// # Safety
/// Both arguments must be NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn engmorph_compile(
    lexicon_path: *const c_char,
    db_path: *const c_char,
) -> EngmorphStatus {
    guard(|| {
        let lexicon_path = arg_str(lexicon_path, "lexicon_path")?;
        let db_path = arg_str(db_path, "db_path")?;
        let text = read_file(lexicon_path)?;
        let lexicon = Lexicon::parse(&text)
            .map_err(|e| Failure(EngmorphStatus::InvalidInput, format!("{lexicon_path}: {e}")))?;
        let bytes = db::compile(&lexicon)?;
        db::write_atomic(db_path, &bytes)
            .map_err(|e| Failure(EngmorphStatus::Io, format!("{db_path}: {e}")))
    })
}

/// Spells a lexical form such as `stop+ed`.
///
/// # Safety
/// `lexical_form` must be a NUL-terminated string; `out` must be valid for a
/// pointer write.
#[no_mangle]
pub unsafe extern "C" fn engmorph_spell(
    lexical_form: *const c_char,
    out: *mut *mut c_char,
) -> EngmorphStatus {
    guard(|| {
        let text = arg_str(lexical_form, "lexical_form")?;
        let lf: LexicalForm = text
            .parse()
            .map_err(|e: engmorph::spelling::LexicalFormError| {
                Failure(EngmorphStatus::InvalidInput, e.to_string())
            })?;
        put_string(out, surface_of(&lf))
    })
}
