// SPDX-License-Identifier: Apache-2.0

//! Orthographic rules for English inflection.
//!
//! [`surface_of`] spells a lexical form (`root+suffix...`) and
//! [`segmentations`] inverts a surface string into every lexical form that
//! spells it. The rules, applied at each `+` boundary:
//!
//! * y to i: a final `y` after a consonant becomes `i` before `s`, `ed`,
//!   `er` and `est` (`funky+er` -> `funkier`). It is kept before `ing`.
//! * epenthesis: `e` is inserted before `s` after `s`, `z`, `x`, `ch`, `sh`
//!   or a raised `i` (`teach+s` -> `teaches`, `spy+s` -> `spies`).
//! * elision: a final `e` drops before a vowel-initial suffix
//!   (`admire+ing` -> `admiring`).
//! * s-deletion: `'s` after a final `s` is written as a bare apostrophe
//!   (`saw+s+'s` -> `saws'`).
//! * i to y: a final `ie` becomes `y` before `ing` (`lie+ing` -> `lying`).
//! * gemination: a monosyllabic root ending in a single vowel and a
//!   consonant other than `w`, `x`, `y` doubles that consonant before a
//!   vowel-initial suffix (`stop+ed` -> `stopped`).
//!
//! Anything the rules get wrong (`dyeing`, `tangoes`, `zigzagged`) is listed
//! in the lexicon as an irregular form instead.

use std::fmt;
use std::str::FromStr;

use crate::types::{Suffix, SuffixSeq};

/// A root followed by zero or more suffix morphemes, written `saw+s+'s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexicalForm {
    pub root: String,
    pub suffixes: Option<SuffixSeq>,
}

impl LexicalForm {
    pub fn bare(root: impl Into<String>) -> LexicalForm {
        LexicalForm {
            root: root.into(),
            suffixes: None,
        }
    }

    pub fn new(root: impl Into<String>, suffixes: SuffixSeq) -> LexicalForm {
        LexicalForm {
            root: root.into(),
            suffixes: Some(suffixes),
        }
    }

    pub fn morphemes(&self) -> &'static [Suffix] {
        self.suffixes.map_or(&[], SuffixSeq::morphemes)
    }
}

impl fmt::Display for LexicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.root)?;
        for suffix in self.morphemes() {
            write!(f, "+{suffix}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid lexical form `{0}`")]
pub struct LexicalFormError(pub String);

impl FromStr for LexicalForm {
    type Err = LexicalFormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split('+');
        let root = parts.next().unwrap_or_default();
        if root.is_empty() || root.chars().any(char::is_whitespace) {
            return Err(LexicalFormError(s.to_owned()));
        }
        let morphemes = parts
            .map(|part| match part {
                "s" => Ok(Suffix::S),
                "'s" => Ok(Suffix::Possessive),
                "ed" => Ok(Suffix::Ed),
                "ing" => Ok(Suffix::Ing),
                "er" => Ok(Suffix::Er),
                "est" => Ok(Suffix::Est),
                _ => Err(LexicalFormError(s.to_owned())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if morphemes.is_empty() {
            return Ok(LexicalForm::bare(root));
        }
        let seq =
            SuffixSeq::from_morphemes(&morphemes).ok_or_else(|| LexicalFormError(s.to_owned()))?;
        Ok(LexicalForm::new(root, seq))
    }
}

fn is_vowel(b: u8) -> bool {
    matches!(b, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn is_consonant(b: u8) -> bool {
    b.is_ascii_alphabetic() && !is_vowel(b)
}

/// Final `y` preceded by a consonant.
fn raises_y(stem: &[u8]) -> bool {
    match stem {
        [.., prev, b'y'] => is_consonant(*prev),
        _ => false,
    }
}

fn is_sibilant_final(stem: &[u8]) -> bool {
    matches!(stem.last(), Some(b's' | b'z' | b'x'))
        || stem.ends_with(b"ch")
        || stem.ends_with(b"sh")
}

fn geminates(stem: &[u8]) -> bool {
    let n = stem.len();
    if n < 2 {
        return false;
    }
    let last = stem[n - 1];
    let vowel = stem[n - 2];
    if !is_consonant(last) || matches!(last, b'w' | b'x' | b'y') || !is_vowel(vowel) {
        return false;
    }
    if n >= 3 && is_vowel(stem[n - 3]) {
        return false;
    }
    // Monosyllabic: the final vowel is the only vowel in the root.
    !stem[..n - 2].iter().copied().any(is_vowel)
}

fn attach(stem: &str, suffix: Suffix) -> String {
    let bytes = stem.as_bytes();
    let text = suffix.as_str();
    let mut out = String::with_capacity(stem.len() + text.len() + 2);
    match suffix {
        Suffix::S => {
            if raises_y(bytes) {
                out.push_str(&stem[..stem.len() - 1]);
                out.push_str("ies");
            } else {
                out.push_str(stem);
                if is_sibilant_final(bytes) {
                    out.push('e');
                }
                out.push('s');
            }
        }
        Suffix::Possessive => {
            out.push_str(stem);
            out.push_str(if bytes.ends_with(b"s") { "'" } else { "'s" });
        }
        Suffix::Ing if bytes.ends_with(b"ie") => {
            out.push_str(&stem[..stem.len() - 2]);
            out.push('y');
            out.push_str(text);
        }
        _ if suffix != Suffix::Ing && raises_y(bytes) => {
            out.push_str(&stem[..stem.len() - 1]);
            out.push('i');
            out.push_str(text);
        }
        _ if bytes.ends_with(b"e") => {
            out.push_str(&stem[..stem.len() - 1]);
            out.push_str(text);
        }
        _ if geminates(bytes) => {
            out.push_str(stem);
            out.push(bytes[bytes.len() - 1] as char);
            out.push_str(text);
        }
        _ => {
            out.push_str(stem);
            out.push_str(text);
        }
    }
    out
}

/// Spells a lexical form by applying the rules across each `+` boundary.
pub fn surface_of(lf: &LexicalForm) -> String {
    lf.morphemes()
        .iter()
        .fold(lf.root.clone(), |stem, suffix| attach(&stem, *suffix))
}

/// Possible surface endings of each sequence; used to skip hopeless splits.
fn plausible_ending(surface: &str, seq: SuffixSeq) -> bool {
    match seq {
        SuffixSeq::Plural => surface.ends_with('s'),
        SuffixSeq::Genitive => surface.ends_with("'s") || surface.ends_with('\''),
        SuffixSeq::PluralGenitive => surface.ends_with('\''),
        SuffixSeq::Ed => surface.ends_with("ed"),
        SuffixSeq::Ing => surface.ends_with("ing"),
        SuffixSeq::Er => surface.ends_with("er"),
        SuffixSeq::Est => surface.ends_with("est"),
    }
}

/// Roots whose spelled stem could be `prefix`: each rule changes at most the
/// last two letters of the root, so undoing one edit is enough.
fn root_candidates(prefix: &str, out: &mut Vec<String>) {
    out.clear();
    if !prefix.is_empty() {
        out.push(prefix.to_owned());
    }
    out.push(format!("{prefix}e"));
    if let Some(stripped) = prefix.strip_suffix('i') {
        out.push(format!("{stripped}y"));
    }
    if let Some(stripped) = prefix.strip_suffix('y') {
        out.push(format!("{stripped}ie"));
    }
    let bytes = prefix.as_bytes();
    if bytes.len() >= 2 && bytes[bytes.len() - 1] == bytes[bytes.len() - 2] {
        out.push(prefix[..prefix.len() - 1].to_owned());
    }
}

/// All lexical forms that spell `surface`, always including the bare form.
///
/// Candidate roots are not checked against any lexicon. The result is
/// ordered: the bare form first, then by suffix sequence and root.
pub fn segmentations(surface: &str) -> Vec<LexicalForm> {
    let mut found = vec![LexicalForm::bare(surface)];
    let mut candidates = Vec::new();
    for &seq in SuffixSeq::ALL {
        if !plausible_ending(surface, seq) {
            continue;
        }
        let mut for_seq: Vec<LexicalForm> = Vec::new();
        let splits = surface
            .char_indices()
            .map(|(i, _)| i)
            .chain(std::iter::once(surface.len()));
        for split in splits {
            root_candidates(&surface[..split], &mut candidates);
            for root in candidates.drain(..) {
                if root.contains('+') {
                    continue;
                }
                let lf = LexicalForm::new(root, seq);
                if surface_of(&lf) == surface && !for_seq.contains(&lf) {
                    for_seq.push(lf);
                }
            }
        }
        for_seq.sort();
        found.extend(for_seq);
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spell(text: &str) -> String {
        surface_of(&text.parse().unwrap())
    }

    #[test]
    fn transcript_spellings() {
        assert_eq!(spell("funky+er"), "funkier");
        assert_eq!(spell("funky+est"), "funkiest");
        assert_eq!(spell("teach+s"), "teaches");
        assert_eq!(spell("saw+s+'s"), "saws'");
        assert_eq!(spell("saw+'s"), "saw's");
        assert_eq!(spell("saw+s"), "saws");
        assert_eq!(spell("admire+ing"), "admiring");
        assert_eq!(spell("admire+ed"), "admired");
        assert_eq!(spell("admire+s"), "admires");
        assert_eq!(spell("mice+'s"), "mice's");
        assert_eq!(spell("tango+ed"), "tangoed");
        assert_eq!(spell("tango+ing"), "tangoing");
        assert_eq!(spell("dye+ed"), "dyed");
        assert_eq!(spell("lie+ed"), "lied");
        assert_eq!(spell("ambassador+s+'s"), "ambassadors'");
    }

    #[test]
    fn individual_rules() {
        // i to y
        assert_eq!(spell("lie+ing"), "lying");
        // gemination
        assert_eq!(spell("stop+ed"), "stopped");
        assert_eq!(spell("grok+ing"), "grokking");
        assert_eq!(spell("big+est"), "biggest");
        assert_eq!(spell("saw+ed"), "sawed");
        assert_eq!(spell("box+ing"), "boxing");
        assert_eq!(spell("zigzag+ed"), "zigzaged");
        assert_eq!(spell("seat+ed"), "seated");
        assert_eq!(spell("stop+s"), "stops");
        // y to i and epenthesis
        assert_eq!(spell("spy+s"), "spies");
        assert_eq!(spell("spy+ed"), "spied");
        assert_eq!(spell("spy+ing"), "spying");
        assert_eq!(spell("play+s"), "plays");
        assert_eq!(spell("play+ed"), "played");
        assert_eq!(spell("wish+s"), "wishes");
        assert_eq!(spell("box+s"), "boxes");
        assert_eq!(spell("quiz+s"), "quizes");
        assert_eq!(spell("tango+s"), "tangos");
        // s-deletion only after s
        assert_eq!(spell("boss+'s"), "boss'");
        assert_eq!(spell("box+s+'s"), "boxes'");
    }

    #[test]
    fn zero_suffix_is_identity() {
        assert_eq!(spell("saw"), "saw");
        assert_eq!(spell("x"), "x");
    }

    #[test]
    fn lexical_form_text() {
        let lf: LexicalForm = "saw+s+'s".parse().unwrap();
        assert_eq!(lf, LexicalForm::new("saw", SuffixSeq::PluralGenitive));
        assert_eq!(lf.to_string(), "saw+s+'s");
        assert!("saw+'s+s".parse::<LexicalForm>().is_err());
        assert!("+s".parse::<LexicalForm>().is_err());
        assert!("saw+".parse::<LexicalForm>().is_err());
        assert!("saw+ly".parse::<LexicalForm>().is_err());
    }

    #[test]
    fn segmentation_examples() {
        let segs = segmentations("funkier");
        assert!(segs.contains(&"funky+er".parse().unwrap()));
        assert!(segs.contains(&LexicalForm::bare("funkier")));
        assert_eq!(segs[0], LexicalForm::bare("funkier"));

        assert!(segmentations("saws'").contains(&"saw+s+'s".parse().unwrap()));
        let segs = segmentations("dyes");
        assert!(segs.contains(&"dye+s".parse().unwrap()));
        assert!(segs.contains(&LexicalForm::bare("dyes")));
        assert!(segmentations("lying").contains(&"lie+ing".parse().unwrap()));
        assert!(segmentations("stopped").contains(&"stop+ed".parse().unwrap()));
    }

    /// Brute force: every string over the letters of `surface` (plus `y`)
    /// up to one letter longer than the stem, under every suffix sequence.
    fn brute_force_segmentations(surface: &str) -> Vec<LexicalForm> {
        let mut alphabet: Vec<char> = surface.chars().chain(['y', 'e']).collect();
        alphabet.sort();
        alphabet.dedup();
        let mut roots = vec![String::new()];
        let mut all = Vec::new();
        for _ in 0..surface.len() {
            let mut next = Vec::new();
            for r in &roots {
                for c in &alphabet {
                    let mut s = r.clone();
                    s.push(*c);
                    next.push(s);
                }
            }
            all.extend(next.iter().cloned());
            roots = next;
        }
        let mut found = Vec::new();
        for root in all {
            for seq in SuffixSeq::ALL {
                let lf = LexicalForm::new(root.clone(), *seq);
                if surface_of(&lf) == surface {
                    found.push(lf);
                }
            }
        }
        found.sort();
        found
    }

    #[test]
    fn spies_matches_brute_force() {
        let brute = brute_force_segmentations("spies");
        // `spie+s` spells the same way; both are legitimate candidates.
        assert_eq!(
            brute,
            ["spie+s", "spy+s"].map(|t| t.parse::<LexicalForm>().unwrap())
        );
        let mut ours: Vec<_> = segmentations("spies")
            .into_iter()
            .filter(|lf| lf.suffixes.is_some())
            .collect();
        ours.sort();
        assert_eq!(ours, brute);
    }

    #[test]
    fn short_words_match_brute_force() {
        for word in ["lying", "dyed", "saws'", "boxes", "stops", "bed", "ies"] {
            let mut ours: Vec<_> = segmentations(word)
                .into_iter()
                .filter(|lf| lf.suffixes.is_some())
                .collect();
            ours.sort();
            assert_eq!(ours, brute_force_segmentations(word), "{word}");
        }
    }

    fn arb_form() -> impl Strategy<Value = LexicalForm> {
        (
            "[a-z']{1,8}",
            prop::option::of(prop::sample::select(SuffixSeq::ALL)),
        )
            .prop_map(|(root, suffixes)| LexicalForm { root, suffixes })
    }

    proptest! {
        #[test]
        fn inversion_is_complete_and_sound(lf in arb_form()) {
            let surface = surface_of(&lf);
            prop_assert!(!surface.contains('+'));
            prop_assert!(!surface.chars().any(char::is_whitespace));
            let segs = segmentations(&surface);
            prop_assert!(segs.contains(&lf), "{} -> {} missing", lf, surface);
            for seg in &segs {
                prop_assert_eq!(&surface_of(seg), &surface);
            }
        }
    }
}
