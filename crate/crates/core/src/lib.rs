// SPDX-License-Identifier: Apache-2.0

//! English inflectional morphology.
//!
//! A continuation-class [`lexicon`] plus orthographic [`spelling`] rules
//! license every inflected form of every root. The [`analyzer`] recognizes
//! and generates forms directly from the lexicon; [`db`] compiles the same
//! forms into a compact disk hash database for fast lookup, with a flat text
//! dump for browsing and editing. [`service`] serves both over HTTP and keeps
//! the lexicon, database and flat file consistent under edits.

pub mod analyzer;
pub mod db;
pub mod lexicon;
pub mod service;
pub mod spelling;
pub mod types;

pub use analyzer::{generate, recognize, Analysis};
pub use db::{Database, DbError, Stats};
pub use lexicon::{Lexicon, LexiconEntry, LexiconError};
pub use spelling::{segmentations, surface_of, LexicalForm};
pub use types::{Attribute, ContinuationClass, Parse, ParseError, PartOfSpeech, Suffix, SuffixSeq};

/// Marker printed for a word with no analyses.
pub const NONE_MARKER: &str = "*** NONE ***";
