// SPDX-License-Identifier: Apache-2.0

//! The human-readable flat file: one line per key,
//! `key<TAB>root POS ATTR...#root POS ATTR...`, keys in bytewise order.

use super::build::{write_database, Records};
use super::{Database, DbError};
use crate::types::Parse;

pub fn dump_flat(db: &Database) -> Result<String, DbError> {
    let mut out = String::new();
    for (key, parses) in db.decoded()? {
        out.push_str(&key);
        out.push('\t');
        for (i, parse) in parses.iter().enumerate() {
            if i > 0 {
                out.push('#');
            }
            out.push_str(&parse.content_text());
        }
        out.push('\n');
    }
    Ok(out)
}

/// Reads flat text back into records.
pub fn parse_flat(text: &str) -> Result<Records, DbError> {
    let mut records = Records::new();
    for (idx, line) in text.lines().enumerate() {
        let err = |reason: String| DbError::Flat {
            line: idx + 1,
            reason,
        };
        if line.is_empty() {
            continue;
        }
        let (key, contents) = line
            .split_once('\t')
            .ok_or_else(|| err("missing tab between key and contents".into()))?;
        if key.is_empty() {
            return Err(err("empty key".into()));
        }
        if contents.is_empty() {
            return Err(err("key has no entries".into()));
        }
        for entry in contents.split('#') {
            let parse = Parse::from_content_text(entry).map_err(|e| err(e.to_string()))?;
            records.insert(key, parse);
        }
    }
    Ok(records)
}

/// Builds database bytes from flat text.
pub fn restore_flat(text: &str) -> Result<Vec<u8>, DbError> {
    write_database(&parse_flat(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::db::compile;
    use crate::lexicon::Lexicon;

    const SAW: &str =
        "saw N_Root2 \"N(saw)\"\nsaw V_Root8 \"V(saw)\"\nsaw V_Root1 \"V(see) PAST STR\"\n";

    #[test]
    fn dumps_saw_rows() {
        let db = Database::from_bytes(compile(&Lexicon::parse(SAW).unwrap()).unwrap()).unwrap();
        let flat = dump_flat(&db).unwrap();
        let lines: Vec<&str> = flat.lines().collect();
        assert_eq!(lines[0], "saw\tsaw N SG#saw V INF#see V PAST STR");
        assert!(lines.contains(&"saws'\tsaw N PL GEN"));
        assert_eq!(lines.len(), 6);
        assert!(flat.ends_with('\n'));
    }

    #[test]
    fn restore_round_trips() {
        let bytes = compile(&Lexicon::parse(SAW).unwrap()).unwrap();
        let flat = dump_flat(&Database::from_bytes(bytes.clone()).unwrap()).unwrap();
        assert_eq!(restore_flat(&flat).unwrap(), bytes);
    }

    #[test]
    fn empty_round_trip() {
        let bytes = compile(&Lexicon::new()).unwrap();
        let flat = dump_flat(&Database::from_bytes(bytes.clone()).unwrap()).unwrap();
        assert_eq!(flat, "");
        assert_eq!(restore_flat("").unwrap(), bytes);
    }

    #[test]
    fn malformed_lines_report_line_number() {
        let cases = [
            ("saw\tsaw N SG\nsaws saw N PL\n", 2),
            ("saw\tsaw Q SG\n", 1),
            ("saw\tsaw N SG\n\nx\t\n", 3),
            ("saw\tsaw N SG#\n", 1),
            ("\tsaw N SG\n", 1),
        ];
        for (text, line) in cases {
            match restore_flat(text) {
                Err(DbError::Flat { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
