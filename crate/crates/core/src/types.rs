// SPDX-License-Identifier: Apache-2.0

//! Shared domain types: parts of speech, attributes, parses, continuation
//! classes and inflectional suffixes.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Error produced when a textual tag or parse string cannot be read.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown part of speech `{0}`")]
    UnknownPos(String),
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("unknown continuation class `{0}`")]
    UnknownClass(String),
    #[error("duplicate attribute `{0}`")]
    DuplicateAttribute(String),
    #[error("malformed parse string `{text}`: {reason}")]
    Malformed { text: String, reason: &'static str },
}

macro_rules! tag_enum {
    ($(#[$meta:meta])* $name:ident, $err:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = ParseError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(ParseError::$err(other.to_owned())),
                }
            }
        }
    };
}

tag_enum! {
    /// The eight parts of speech used by the lexicon.
    PartOfSpeech, UnknownPos {
        V => "V",
        N => "N",
        A => "A",
        Adv => "Adv",
        Pron => "Pron",
        Prep => "Prep",
        D => "D",
        Conj => "Conj",
    }
}

tag_enum! {
    /// Inflectional and lexical attributes that may follow the root in a parse.
    Attribute, UnknownAttribute {
        FirstSg => "1SG",
        SecondSg => "2SG",
        ThirdSg => "3SG",
        FirstPl => "1PL",
        SecondPl => "2PL",
        ThirdPl => "3PL",
        Second => "2ND",
        Third => "3RD",
        Sg => "SG",
        Pl => "PL",
        Prog => "PROG",
        Past => "PAST",
        PastPart => "PPART",
        Inf => "INF",
        Pres => "PRES",
        Strong => "STR",
        Weak => "WK",
        Gen => "GEN",
        Nom => "NOM",
        Acc => "ACC",
        NomAcc => "NOMACC",
        Neg => "NEG",
        Passive => "PASSIVE",
        To => "to",
        Comp => "COMP",
        Super => "SUPER",
        Masc => "MASC",
        Fem => "FEM",
        Neut => "NEUT",
        Wh => "WH",
        Refl => "REFL",
        Ref1Sg => "REF1SG",
        Ref2nd => "REF2ND",
        Ref2Sg => "REF2SG",
        Ref2Pl => "REF2PL",
        Ref3Sg => "REF3SG",
        Ref3Pl => "REF3PL",
        RefMasc => "REFMASC",
        RefFem => "REFFEM",
    }
}

tag_enum! {
    /// Names the set of inflections a lexicon entry may undergo.
    ContinuationClass, UnknownClass {
        ARoot1 => "A_Root1",
        ARoot2 => "A_Root2",
        NRoot1 => "N_Root1",
        NRoot2 => "N_Root2",
        VRoot1 => "V_Root1",
        VRoot2 => "V_Root2",
        VRoot3 => "V_Root3",
        VRoot4 => "V_Root4",
        VRoot5 => "V_Root5",
        VRoot6 => "V_Root6",
        VRoot7 => "V_Root7",
        VRoot8 => "V_Root8",
        Pron => "Pron",
        Prep => "Prep",
        Det => "Det",
        Conj => "Conj",
        Adv => "Adv",
    }
}

impl ContinuationClass {
    /// Part of speech every entry of this class must carry.
    pub fn pos(self) -> PartOfSpeech {
        use ContinuationClass::*;
        match self {
            ARoot1 | ARoot2 => PartOfSpeech::A,
            NRoot1 | NRoot2 => PartOfSpeech::N,
            VRoot1 | VRoot2 | VRoot3 | VRoot4 | VRoot5 | VRoot6 | VRoot7 | VRoot8 => {
                PartOfSpeech::V
            }
            Pron => PartOfSpeech::Pron,
            Prep => PartOfSpeech::Prep,
            Det => PartOfSpeech::D,
            Conj => PartOfSpeech::Conj,
            Adv => PartOfSpeech::Adv,
        }
    }

    /// Suffix sequences the class permits, in canonical order.
    pub fn permitted_suffixes(self) -> &'static [SuffixSeq] {
        use ContinuationClass::*;
        use SuffixSeq as S;
        match self {
            ARoot2 => &[S::Er, S::Est],
            NRoot1 => &[S::Genitive],
            NRoot2 => &[S::Plural, S::Genitive, S::PluralGenitive],
            VRoot2 => &[S::Ed],
            VRoot3 => &[S::Plural],
            VRoot4 => &[S::Plural, S::Ed],
            VRoot5 => &[S::Ing],
            VRoot6 => &[S::Ed, S::Ing],
            VRoot7 => &[S::Plural, S::Ing],
            VRoot8 => &[S::Plural, S::Ed, S::Ing],
            ARoot1 | VRoot1 | Pron | Prep | Det | Conj | Adv => &[],
        }
    }

    pub fn permits(self, seq: SuffixSeq) -> bool {
        self.permitted_suffixes().contains(&seq)
    }

    /// Attribute added to the uninflected form when the entry is expanded.
    pub fn base_attribute(self) -> Option<Attribute> {
        use ContinuationClass::*;
        match self {
            NRoot2 => Some(Attribute::Sg),
            VRoot2 | VRoot3 | VRoot4 | VRoot5 | VRoot6 | VRoot7 | VRoot8 => Some(Attribute::Inf),
            _ => None,
        }
    }
}

/// A single suffix morpheme as it appears in a lexical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suffix {
    S,
    Possessive,
    Ed,
    Ing,
    Er,
    Est,
}

impl Suffix {
    pub fn as_str(self) -> &'static str {
        match self {
            Suffix::S => "s",
            Suffix::Possessive => "'s",
            Suffix::Ed => "ed",
            Suffix::Ing => "ing",
            Suffix::Er => "er",
            Suffix::Est => "est",
        }
    }

    pub fn is_vowel_initial(self) -> bool {
        matches!(self, Suffix::Ed | Suffix::Ing | Suffix::Er | Suffix::Est)
    }
}

impl fmt::Display for Suffix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One of the legal suffix sequences a root can take.
///
/// `Plural` is the `+s` morpheme for both nouns (plural) and verbs
/// (third person singular present).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuffixSeq {
    Plural,
    Genitive,
    PluralGenitive,
    Ed,
    Ing,
    Er,
    Est,
}

impl SuffixSeq {
    pub const ALL: &'static [SuffixSeq] = &[
        SuffixSeq::Plural,
        SuffixSeq::Genitive,
        SuffixSeq::PluralGenitive,
        SuffixSeq::Ed,
        SuffixSeq::Ing,
        SuffixSeq::Er,
        SuffixSeq::Est,
    ];

    pub fn morphemes(self) -> &'static [Suffix] {
        match self {
            SuffixSeq::Plural => &[Suffix::S],
            SuffixSeq::Genitive => &[Suffix::Possessive],
            SuffixSeq::PluralGenitive => &[Suffix::S, Suffix::Possessive],
            SuffixSeq::Ed => &[Suffix::Ed],
            SuffixSeq::Ing => &[Suffix::Ing],
            SuffixSeq::Er => &[Suffix::Er],
            SuffixSeq::Est => &[Suffix::Est],
        }
    }

    pub fn from_morphemes(morphemes: &[Suffix]) -> Option<SuffixSeq> {
        SuffixSeq::ALL
            .iter()
            .copied()
            .find(|seq| seq.morphemes() == morphemes)
    }

    /// Attribute lists the sequence contributes for a given part of speech.
    /// `+ed` on a verb contributes two readings.
    pub fn attribute_deltas(self, pos: PartOfSpeech) -> &'static [&'static [Attribute]] {
        use Attribute::*;
        match (self, pos) {
            (SuffixSeq::Plural, PartOfSpeech::N) => &[&[Pl]],
            (SuffixSeq::Plural, PartOfSpeech::V) => &[&[ThirdSg, Pres]],
            (SuffixSeq::Genitive, PartOfSpeech::N) => &[&[Gen]],
            (SuffixSeq::PluralGenitive, PartOfSpeech::N) => &[&[Pl, Gen]],
            (SuffixSeq::Ed, PartOfSpeech::V) => &[&[Past, Weak], &[PastPart, Weak]],
            (SuffixSeq::Ing, PartOfSpeech::V) => &[&[Prog]],
            (SuffixSeq::Er, PartOfSpeech::A) => &[&[Comp]],
            (SuffixSeq::Est, PartOfSpeech::A) => &[&[Super]],
            _ => &[],
        }
    }
}

/// Part of speech, root and ordered attributes, e.g. `V(teach) PAST STR`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Parse {
    pub pos: PartOfSpeech,
    pub root: String,
    pub attrs: Vec<Attribute>,
}

impl Parse {
    pub fn new(pos: PartOfSpeech, root: impl Into<String>, attrs: Vec<Attribute>) -> Parse {
        Parse {
            pos,
            root: root.into(),
            attrs,
        }
    }

    /// Returns a copy with `extra` appended, skipping attributes already present.
    pub fn with_attrs(&self, extra: &[Attribute]) -> Parse {
        let mut attrs = self.attrs.clone();
        for attr in extra {
            if !attrs.contains(attr) {
                attrs.push(*attr);
            }
        }
        Parse {
            pos: self.pos,
            root: self.root.clone(),
            attrs,
        }
    }

    /// The parse without its root: `POS ATTR...`.
    pub fn combo(&self) -> String {
        let mut out = self.pos.as_str().to_owned();
        for attr in &self.attrs {
            out.push(' ');
            out.push_str(attr.as_str());
        }
        out
    }

    /// Database content rendering: `root POS ATTR...`.
    pub fn content_text(&self) -> String {
        format!("{} {}", self.root, self.combo())
    }

    /// Reads the database content rendering produced by [`Parse::content_text`].
    pub fn from_content_text(text: &str) -> Result<Parse, ParseError> {
        let mut tokens = text.split(' ');
        let root = tokens.next().unwrap_or_default();
        let rest: Vec<&str> = tokens.collect();
        if root.is_empty() || rest.is_empty() {
            return Err(ParseError::Malformed {
                text: text.to_owned(),
                reason: "expected `root POS ATTR...`",
            });
        }
        check_root(root, text)?;
        let pos: PartOfSpeech = rest[0].parse()?;
        let attrs = parse_attrs(&rest[1..], text)?;
        Ok(Parse::new(pos, root, attrs))
    }

    /// Reads a `POS ATTR...` combo string and attaches `root`.
    pub fn from_combo(root: &str, combo: &str) -> Result<Parse, ParseError> {
        let tokens: Vec<&str> = combo.split(' ').collect();
        let pos: PartOfSpeech = tokens[0].parse()?;
        let attrs = parse_attrs(&tokens[1..], combo)?;
        Ok(Parse::new(pos, root, attrs))
    }
}

impl fmt::Display for Parse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.pos, self.root)?;
        for attr in &self.attrs {
            write!(f, " {attr}")?;
        }
        Ok(())
    }
}

impl FromStr for Parse {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = |reason| ParseError::Malformed {
            text: s.to_owned(),
            reason,
        };
        let open = s.find('(').ok_or_else(|| malformed("missing `(`"))?;
        let close = s[open..]
            .find(')')
            .map(|i| i + open)
            .ok_or_else(|| malformed("missing `)`"))?;
        let pos: PartOfSpeech = s[..open].parse()?;
        let root = &s[open + 1..close];
        check_root(root, s)?;
        let rest = &s[close + 1..];
        let attrs = if rest.is_empty() {
            Vec::new()
        } else {
            let rest = rest
                .strip_prefix(' ')
                .ok_or_else(|| malformed("expected a space after `)`"))?;
            let tokens: Vec<&str> = rest.split(' ').collect();
            parse_attrs(&tokens, s)?
        };
        Ok(Parse::new(pos, root, attrs))
    }
}

fn check_root(root: &str, text: &str) -> Result<(), ParseError> {
    let reason = if root.is_empty() {
        "empty root"
    } else if root
        .chars()
        .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '#' | '"'))
    {
        "root contains a reserved character"
    } else {
        return Ok(());
    };
    Err(ParseError::Malformed {
        text: text.to_owned(),
        reason,
    })
}

fn parse_attrs(tokens: &[&str], text: &str) -> Result<Vec<Attribute>, ParseError> {
    let mut attrs = Vec::with_capacity(tokens.len());
    for token in tokens {
        if token.is_empty() {
            return Err(ParseError::Malformed {
                text: text.to_owned(),
                reason: "attributes must be separated by single spaces",
            });
        }
        let attr: Attribute = token.parse()?;
        if attrs.contains(&attr) {
            return Err(ParseError::DuplicateAttribute(attr.to_string()));
        }
        attrs.push(attr);
    }
    Ok(attrs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn renders_transcript_parses() {
        use Attribute::*;
        let p = Parse::new(PartOfSpeech::V, "teach", vec![Past, Strong]);
        assert_eq!(p.to_string(), "V(teach) PAST STR");
        assert_eq!(
            Parse::new(PartOfSpeech::A, "funky", vec![]).to_string(),
            "A(funky)"
        );
        let p = Parse::new(PartOfSpeech::Pron, "herself", vec![Refl, Fem, ThirdSg]);
        assert_eq!(p.to_string(), "Pron(herself) REFL FEM 3SG");
    }

    #[test]
    fn parses_parse_strings() {
        let p: Parse = "N(mouse) PL".parse().unwrap();
        assert_eq!(p, Parse::new(PartOfSpeech::N, "mouse", vec![Attribute::Pl]));
        let p: Parse = "A(funky)".parse().unwrap();
        assert!(p.attrs.is_empty());
        assert_eq!(
            "X(foo)".parse::<Parse>(),
            Err(ParseError::UnknownPos("X".into()))
        );
    }

    #[test]
    fn rejects_malformed_parse_strings() {
        for bad in [
            "V(teach",
            "Vteach",
            "V() PAST",
            "V(teach)PAST",
            "V(teach) PAST  STR",
            "V(teach) PAST ",
            "V(te ach)",
        ] {
            assert!(bad.parse::<Parse>().is_err(), "{bad}");
        }
        assert_eq!(
            "V(teach) PAST PAST".parse::<Parse>(),
            Err(ParseError::DuplicateAttribute("PAST".into()))
        );
        assert_eq!(
            "V(teach) past".parse::<Parse>(),
            Err(ParseError::UnknownAttribute("past".into()))
        );
    }

    #[test]
    fn every_tag_round_trips() {
        assert_eq!(Attribute::ALL.len(), 39);
        for attr in Attribute::ALL {
            assert_eq!(attr.as_str().parse::<Attribute>().unwrap(), *attr);
        }
        assert_eq!(Attribute::To.as_str(), "to");
        assert_eq!(PartOfSpeech::ALL.len(), 8);
        for pos in PartOfSpeech::ALL {
            assert_eq!(pos.as_str().parse::<PartOfSpeech>().unwrap(), *pos);
        }
        for class in ContinuationClass::ALL {
            assert_eq!(class.as_str().parse::<ContinuationClass>().unwrap(), *class);
        }
    }

    #[test]
    fn content_text_round_trips() {
        let p: Parse = "V(see) PAST STR".parse().unwrap();
        assert_eq!(p.content_text(), "see V PAST STR");
        assert_eq!(Parse::from_content_text("see V PAST STR").unwrap(), p);
        assert_eq!(p.combo(), "V PAST STR");
        assert!(Parse::from_content_text("see").is_err());
    }

    #[test]
    fn verb_class_table() {
        use SuffixSeq::*;
        assert_eq!(
            ContinuationClass::VRoot8.permitted_suffixes(),
            &[Plural, Ed, Ing]
        );
        assert_eq!(
            ContinuationClass::VRoot7.permitted_suffixes(),
            &[Plural, Ing]
        );
        assert!(ContinuationClass::ARoot1.permitted_suffixes().is_empty());
        assert_eq!(ContinuationClass::Det.pos(), PartOfSpeech::D);
    }

    fn arb_parse() -> impl Strategy<Value = Parse> {
        (
            prop::sample::select(PartOfSpeech::ALL),
            "[a-z'][a-z'-]{0,11}",
            prop::sample::subsequence(Attribute::ALL, 0..6).prop_shuffle(),
        )
            .prop_map(|(pos, root, attrs)| Parse::new(pos, root, attrs))
    }

    proptest! {
        #[test]
        fn render_then_parse_is_identity(p in arb_parse()) {
            prop_assert_eq!(p.to_string().parse::<Parse>().unwrap(), p.clone());
            prop_assert_eq!(Parse::from_content_text(&p.content_text()).unwrap(), p);
        }
    }
}
