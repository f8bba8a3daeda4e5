// SPDX-License-Identifier: Apache-2.0

//! Rule-mode recognition and generation over a [`Lexicon`].

use std::collections::BTreeMap;

use crate::lexicon::{Lexicon, LexiconEntry};
use crate::spelling::{segmentations, surface_of, LexicalForm};
use crate::types::Parse;

/// One reading of a surface word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Analysis {
    pub lexical_form: LexicalForm,
    pub parse: Parse,
}

/// Every analysis of `surface`, duplicate-free and sorted by rendered parse.
/// An empty result means the word is not recognized.
pub fn recognize(surface: &str, lexicon: &Lexicon) -> Vec<Analysis> {
    let mut found: BTreeMap<(String, String), Analysis> = BTreeMap::new();
    for candidate in segmentations(surface) {
        for entry in lexicon.lookup(&candidate.root) {
            if let Some(seq) = candidate.suffixes {
                if !entry.class.permits(seq) {
                    continue;
                }
            }
            for (lf, parse) in entry.expand() {
                if lf == candidate {
                    let key = (parse.to_string(), lf.to_string());
                    found.insert(
                        key,
                        Analysis {
                            lexical_form: lf,
                            parse,
                        },
                    );
                }
            }
        }
    }
    found.into_values().collect()
}

/// Surface spellings and parses of every form an entry licenses.
pub fn generate(entry: &LexiconEntry) -> Vec<(String, Parse)> {
    entry
        .expand()
        .into_iter()
        .map(|(lf, parse)| (surface_of(&lf), parse))
        .collect()
}
