// SPDX-License-Identifier: Apache-2.0

//! Compressed entry encoding.
//!
//! An entry stores the root relative to its key:
//!
//! ```text
//! +------------+----------+------+-------+
//! | prefix_len | tail_len | tail | combo |
//! +------------+----------+------+-------+
//!      u8          u8      var-len   u8
//! ```
//!
//! `root = key[..prefix_len] ++ tail`, with `prefix_len` the longest common
//! byte prefix of key and root (capped at 255). `combo` indexes the sorted
//! table of `POS ATTR...` strings stored with the database.

use std::collections::BTreeSet;

use super::DbError;
use crate::types::Parse;

pub const MAX_COMBOS: usize = 256;

/// Decoded form of one entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DbEntry {
    pub prefix_len: u8,
    pub tail: Vec<u8>,
    pub combo: u8,
}

impl DbEntry {
    pub fn encoded_len(&self) -> usize {
        3 + self.tail.len()
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.push(self.prefix_len);
        out.push(self.tail.len() as u8);
        out.extend_from_slice(&self.tail);
        out.push(self.combo);
    }

    /// Reads one entry from the front of `bytes`, returning it and the
    /// number of bytes consumed.
    pub fn read_from(bytes: &[u8]) -> Result<(DbEntry, usize), DbError> {
        let truncated = || DbError::Corrupt("truncated entry".into());
        let (&prefix_len, rest) = bytes.split_first().ok_or_else(truncated)?;
        let (&tail_len, rest) = rest.split_first().ok_or_else(truncated)?;
        let tail_len = tail_len as usize;
        if rest.len() < tail_len + 1 {
            return Err(truncated());
        }
        let entry = DbEntry {
            prefix_len,
            tail: rest[..tail_len].to_vec(),
            combo: rest[tail_len],
        };
        Ok((entry, 3 + tail_len))
    }
}

/// Sorted, deduplicated combo strings; a combo's code is its index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComboTable {
    combos: Vec<String>,
}

impl ComboTable {
    pub fn from_combos<I>(combos: I) -> Result<ComboTable, DbError>
    where
        I: IntoIterator<Item = String>,
    {
        let set: BTreeSet<String> = combos.into_iter().collect();
        if set.len() > MAX_COMBOS {
            return Err(DbError::ComboOverflow {
                combos: set.into_iter().collect(),
            });
        }
        if let Some(long) = set.iter().find(|c| c.len() > u8::MAX as usize) {
            return Err(DbError::Corrupt(format!(
                "combo `{long}` longer than 255 bytes"
            )));
        }
        Ok(ComboTable {
            combos: set.into_iter().collect(),
        })
    }

    pub fn code(&self, combo: &str) -> Option<u8> {
        self.combos
            .binary_search_by(|c| c.as_str().cmp(combo))
            .ok()
            .map(|i| i as u8)
    }

    pub fn get(&self, code: u8) -> Option<&str> {
        self.combos.get(code as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.combos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.combos.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.combos.iter().map(String::as_str)
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.combos.len() as u16).to_le_bytes());
        for combo in &self.combos {
            out.push(combo.len() as u8);
            out.extend_from_slice(combo.as_bytes());
        }
    }

    pub fn read_from(bytes: &[u8]) -> Result<ComboTable, DbError> {
        let corrupt = |what: &str| DbError::Corrupt(format!("combo table: {what}"));
        if bytes.len() < 2 {
            return Err(corrupt("truncated count"));
        }
        let count = u16::from_le_bytes([bytes[0], bytes[1]]) as usize;
        if count > MAX_COMBOS {
            return Err(corrupt("too many combos"));
        }
        let mut pos = 2;
        let mut combos = Vec::with_capacity(count);
        for _ in 0..count {
            let len = *bytes.get(pos).ok_or_else(|| corrupt("truncated"))? as usize;
            pos += 1;
            let raw = bytes
                .get(pos..pos + len)
                .ok_or_else(|| corrupt("truncated"))?;
            pos += len;
            let text = std::str::from_utf8(raw).map_err(|_| corrupt("invalid UTF-8"))?;
            Parse::from_combo("x", text).map_err(|e| corrupt(&e.to_string()))?;
            combos.push(text.to_owned());
        }
        if pos != bytes.len() {
            return Err(corrupt("trailing bytes"));
        }
        if combos.windows(2).any(|w| w[0] >= w[1]) {
            return Err(corrupt("combos not sorted"));
        }
        Ok(ComboTable { combos })
    }
}

fn common_prefix_len(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Encodes `parse` as an entry under `key`.
pub fn encode_entry(key: &str, parse: &Parse, combos: &ComboTable) -> Result<DbEntry, DbError> {
    let combo_text = parse.combo();
    let combo = combos
        .code(&combo_text)
        .ok_or(DbError::UnknownCombo(combo_text))?;
    let root = parse.root.as_bytes();
    let prefix_len = common_prefix_len(key.as_bytes(), root).min(u8::MAX as usize);
    let tail = &root[prefix_len..];
    if tail.len() > u8::MAX as usize {
        return Err(DbError::TailTooLong {
            key: key.to_owned(),
            root: parse.root.clone(),
        });
    }
    Ok(DbEntry {
        prefix_len: prefix_len as u8,
        tail: tail.to_vec(),
        combo,
    })
}

/// Rebuilds the parse an entry stores under `key`.
pub fn decode_entry(key: &[u8], entry: &DbEntry, combos: &ComboTable) -> Result<Parse, DbError> {
    let prefix_len = entry.prefix_len as usize;
    if prefix_len > key.len() {
        return Err(DbError::Corrupt(format!(
            "prefix length {prefix_len} exceeds key length {}",
            key.len()
        )));
    }
    let mut root = key[..prefix_len].to_vec();
    root.extend_from_slice(&entry.tail);
    let root = String::from_utf8(root).map_err(|_| DbError::Corrupt("root is not UTF-8".into()))?;
    let combo = combos
        .get(entry.combo)
        .ok_or_else(|| DbError::Corrupt(format!("combo code {} out of range", entry.combo)))?;
    Parse::from_combo(&root, combo).map_err(|e| DbError::Corrupt(e.to_string()))
}
