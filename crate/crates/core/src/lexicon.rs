// SPDX-License-Identifier: Apache-2.0

//! Lexicon files and continuation-class expansion.
//!
//! A lexicon file holds one entry per line:
//!
//! ```text
//! ; comment
//! funky   A_Root2  "A(funky)"
//! taught  V_Root1  "V(teach) PAST STR"
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::spelling::LexicalForm;
use crate::types::{ContinuationClass, Parse, ParseError};

/// One lexicon line: lexical form, continuation class and stored parse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexiconEntry {
    pub lexical: String,
    pub class: ContinuationClass,
    pub parse: Parse,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EntryError {
    #[error("empty lexical form")]
    EmptyLexical,
    #[error("lexical form `{0}` contains a reserved character")]
    BadLexical(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("class {class} requires part of speech {expected}, parse has {found}")]
    PosMismatch {
        class: ContinuationClass,
        expected: crate::types::PartOfSpeech,
        found: crate::types::PartOfSpeech,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("line {line}: {source}")]
    Entry { line: usize, source: EntryError },
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: duplicate entry `{entry}`")]
    Duplicate { line: usize, entry: String },
}

impl LexiconError {
    pub fn line(&self) -> usize {
        match self {
            LexiconError::Entry { line, .. }
            | LexiconError::Syntax { line, .. }
            | LexiconError::Duplicate { line, .. } => *line,
        }
    }
}

impl LexiconEntry {
    /// Builds an entry from its three text fields, checking each one.
    pub fn from_fields(
        lexical: &str,
        class: &str,
        parse: &str,
    ) -> Result<LexiconEntry, EntryError> {
        if lexical.is_empty() {
            return Err(EntryError::EmptyLexical);
        }
        if lexical
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '+' | ';' | '"' | '#'))
        {
            return Err(EntryError::BadLexical(lexical.to_owned()));
        }
        let class: ContinuationClass = class.parse()?;
        let parse: Parse = parse.parse()?;
        LexiconEntry::new(lexical.to_owned(), class, parse)
    }

    pub fn new(
        lexical: String,
        class: ContinuationClass,
        parse: Parse,
    ) -> Result<LexiconEntry, EntryError> {
        if class.pos() != parse.pos {
            return Err(EntryError::PosMismatch {
                class,
                expected: class.pos(),
                found: parse.pos,
            });
        }
        Ok(LexiconEntry {
            lexical,
            class,
            parse,
        })
    }

    /// Every (lexical form, parse) pair the entry licenses: the bare form,
    /// then one pair per permitted suffix reading.
    pub fn expand(&self) -> Vec<(LexicalForm, Parse)> {
        let base = match self.class.base_attribute() {
            Some(attr) => self.parse.with_attrs(&[attr]),
            None => self.parse.clone(),
        };
        let mut out = vec![(LexicalForm::bare(&*self.lexical), base.clone())];
        for &seq in self.class.permitted_suffixes() {
            // The genitive builds on the base reading (SG GEN); the others on
            // the stored parse.
            let start = if seq == crate::types::SuffixSeq::Genitive {
                &base
            } else {
                &self.parse
            };
            for delta in seq.attribute_deltas(self.parse.pos) {
                out.push((
                    LexicalForm::new(&*self.lexical, seq),
                    start.with_attrs(delta),
                ));
            }
        }
        out
    }
}

impl fmt::Display for LexiconEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} \"{}\"", self.lexical, self.class, self.parse)
    }
}

/// An ordered set of entries with an index by lexical form.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    index: HashMap<String, Vec<usize>>,
}

impl Lexicon {
    pub fn new() -> Lexicon {
        Lexicon::default()
    }

    pub fn parse(text: &str) -> Result<Lexicon, LexiconError> {
        let mut lexicon = Lexicon::new();
        lexicon.extend_from_text(text)?;
        Ok(lexicon)
    }

    /// Appends the entries of another lexicon file; used to merge several
    /// files in order.
    pub fn extend_from_text(&mut self, text: &str) -> Result<(), LexiconError> {
        let mut seen: HashSet<LexiconEntry> = self.entries.iter().cloned().collect();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let Some(entry) = parse_line(raw, line)? else {
                continue;
            };
            if !seen.insert(entry.clone()) {
                return Err(LexiconError::Duplicate {
                    line,
                    entry: entry.to_string(),
                });
            }
            self.push_unchecked(entry);
        }
        Ok(())
    }

    /// Adds an entry, returning `false` if the exact triple is already present.
    pub fn insert(&mut self, entry: LexiconEntry) -> bool {
        if self.contains(&entry) {
            return false;
        }
        self.push_unchecked(entry);
        true
    }

    fn push_unchecked(&mut self, entry: LexiconEntry) {
        self.index
            .entry(entry.lexical.clone())
            .or_default()
            .push(self.entries.len());
        self.entries.push(entry);
    }

    pub fn contains(&self, entry: &LexiconEntry) -> bool {
        self.lookup(&entry.lexical).any(|e| e == entry)
    }

    pub fn remove(&mut self, entry: &LexiconEntry) -> bool {
        let Some(pos) = self.entries.iter().position(|e| e == entry) else {
            return false;
        };
        self.entries.remove(pos);
        self.reindex();
        true
    }

    fn reindex(&mut self) {
        self.index.clear();
        for (i, e) in self.entries.iter().enumerate() {
            self.index.entry(e.lexical.clone()).or_default().push(i);
        }
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries whose lexical form is exactly `lexical`, in file order.
    pub fn lookup<'a>(&'a self, lexical: &str) -> impl Iterator<Item = &'a LexiconEntry> + 'a {
        self.index
            .get(lexical)
            .into_iter()
            .flatten()
            .map(move |&i| &self.entries[i])
    }

    /// Renders the lexicon back to file form, one entry per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            ';' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Parses one lexicon line; `Ok(None)` for blank and comment-only lines.
pub fn parse_line(raw: &str, line: usize) -> Result<Option<LexiconEntry>, LexiconError> {
    let text = strip_comment(raw).trim();
    if text.is_empty() {
        return Ok(None);
    }
    let syntax = |reason: &str| LexiconError::Syntax {
        line,
        reason: reason.to_owned(),
    };
    let (lexical, rest) = text
        .split_once(char::is_whitespace)
        .ok_or_else(|| syntax("expected `lexical class \"parse\"`"))?;
    let rest = rest.trim_start();
    let (class, rest) = rest
        .split_once(char::is_whitespace)
        .ok_or_else(|| syntax("missing parse string"))?;
    let quoted = rest.trim();
    let parse = quoted
        .strip_prefix('"')
        .and_then(|q| q.strip_suffix('"'))
        .filter(|q| !q.contains('"'))
        .ok_or_else(|| syntax("parse string must be double-quoted"))?;
    LexiconEntry::from_fields(lexical, class, parse)
        .map(Some)
        .map_err(|source| LexiconError::Entry { line, source })
}
