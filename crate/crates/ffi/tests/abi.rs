// SPDX-License-Identifier: Apache-2.0

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use engmorph_ffi::*;

const SAW: &str = "saw N_Root2 \"N(saw)\"\n\
                   saw V_Root8 \"V(saw)\"\n\
                   saw V_Root1 \"V(see) PAST STR\"\n";

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
    engmorph_string_free(s);
    text
}

unsafe fn last_error() -> String {
    let p = engmorph_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn recognize_through_lexicon_handle() {
    unsafe {
        let mut lex = ptr::null_mut();
        assert_eq!(
            engmorph_lexicon_parse(c(SAW).as_ptr(), &mut lex),
            EngmorphStatus::Ok
        );
        assert!(engmorph_last_error().is_null());

        let mut out = ptr::null_mut();
        let word = c("saws");
        assert_eq!(
            engmorph_recognize(lex, word.as_ptr(), &mut out),
            EngmorphStatus::Ok
        );
        assert_eq!(take(out), "saw+s\tN(saw) PL\nsaw+s\tV(saw) 3SG PRES\n");

        let word = c("zzz");
        assert_eq!(
            engmorph_recognize(lex, word.as_ptr(), &mut out),
            EngmorphStatus::Ok
        );
        assert_eq!(take(out), "");
        engmorph_lexicon_free(lex);
    }
}

#[test]
fn compile_open_and_lookup() {
    let dir = tempfile::tempdir().unwrap();
    let lex_path = dir.path().join("saw.lex");
    let db_path = dir.path().join("saw.db");
    std::fs::write(&lex_path, SAW).unwrap();
    let lex_c = c(lex_path.to_str().unwrap());
    let db_c = c(db_path.to_str().unwrap());
    unsafe {
        assert_eq!(
            engmorph_compile(lex_c.as_ptr(), db_c.as_ptr()),
            EngmorphStatus::Ok
        );
        let mut db = ptr::null_mut();
        assert_eq!(engmorph_db_open(db_c.as_ptr(), &mut db), EngmorphStatus::Ok);
        assert_eq!(engmorph_db_key_count(db), 6);

        let mut out = ptr::null_mut();
        let word = c("sawing");
        assert_eq!(
            engmorph_db_lookup(db, word.as_ptr(), &mut out),
            EngmorphStatus::Ok
        );
        assert_eq!(take(out), "saw V PROG\n");
        let word = c("saw");
        assert_eq!(
            engmorph_db_lookup(db, word.as_ptr(), &mut out),
            EngmorphStatus::Ok
        );
        assert_eq!(take(out).lines().count(), 3);
        engmorph_db_free(db);
    }
}

#[test]
fn spell_lexical_forms() {
    unsafe {
        let mut out = ptr::null_mut();
        for (form, want) in [
            ("stop+ed", "stopped"),
            ("fly+s", "flies"),
            ("box+s+'s", "boxes'"),
        ] {
            let f = c(form);
            assert_eq!(engmorph_spell(f.as_ptr(), &mut out), EngmorphStatus::Ok);
            assert_eq!(take(out), want);
        }
        let f = c("walk+zz");
        assert_eq!(
            engmorph_spell(f.as_ptr(), &mut out),
            EngmorphStatus::InvalidInput
        );
        assert!(!last_error().is_empty());
    }
}

#[test]
fn error_statuses() {
    let dir = tempfile::tempdir().unwrap();
    unsafe {
        let mut lex = ptr::null_mut();
        assert_eq!(
            engmorph_lexicon_parse(ptr::null(), &mut lex),
            EngmorphStatus::NullArgument
        );
        assert!(last_error().contains("text"));
        assert_eq!(
            engmorph_lexicon_parse(c(SAW).as_ptr(), ptr::null_mut()),
            EngmorphStatus::NullArgument
        );

        let bad = c("saw X_Root9 \"N(saw)\"\n");
        assert_eq!(
            engmorph_lexicon_parse(bad.as_ptr(), &mut lex),
            EngmorphStatus::InvalidInput
        );

        let invalid: [u8; 3] = [0xff, 0xfe, 0];
        assert_eq!(
            engmorph_lexicon_parse(invalid.as_ptr().cast(), &mut lex),
            EngmorphStatus::InvalidUtf8
        );

        let missing = c(dir.path().join("missing.db").to_str().unwrap());
        let mut db = ptr::null_mut();
        assert_eq!(
            engmorph_db_open(missing.as_ptr(), &mut db),
            EngmorphStatus::Io
        );

        let junk_path = dir.path().join("junk.db");
        std::fs::write(&junk_path, vec![7u8; 128]).unwrap();
        let junk = c(junk_path.to_str().unwrap());
        assert_eq!(
            engmorph_db_open(junk.as_ptr(), &mut db),
            EngmorphStatus::Corrupt
        );
        assert!(db.is_null());

        let mut out = ptr::null_mut();
        let word = c("saw");
        assert_eq!(
            engmorph_db_lookup(ptr::null(), word.as_ptr(), &mut out),
            EngmorphStatus::NullArgument
        );
        assert_eq!(engmorph_db_key_count(ptr::null()), 0);

        engmorph_string_free(ptr::null_mut());
        engmorph_lexicon_free(ptr::null_mut());
        engmorph_db_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/engmorph.h"))
            .unwrap();
    for name in [
        "engmorph_last_error",
        "engmorph_string_free",
        "engmorph_lexicon_open",
        "engmorph_lexicon_parse",
        "engmorph_lexicon_free",
        "engmorph_recognize",
        "engmorph_db_open",
        "engmorph_db_free",
        "engmorph_db_lookup",
        "engmorph_db_key_count",
        "engmorph_compile",
        "engmorph_spell",
        "typedef struct EngmorphDb EngmorphDb;",
        "typedef struct EngmorphLexicon EngmorphLexicon;",
        "ENGMORPH_STATUS_OK = 0",
        "ENGMORPH_STATUS_CORRUPT = 5",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
