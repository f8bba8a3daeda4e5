// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use super::codec::{encode_entry, ComboTable};
use super::{bucket_count_for, fnv1a64, DbError, Header, HEADER_LEN};
use crate::analyzer::generate;
use crate::lexicon::Lexicon;
use crate::types::Parse;

/// Keys with their entries, both in canonical (bytewise) order. Entries are
/// keyed by their `root POS ATTR...` text, which also deduplicates them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Records {
    map: BTreeMap<String, BTreeMap<String, Parse>>,
}

impl Records {
    pub fn new() -> Records {
        Records::default()
    }

    pub fn insert(&mut self, key: impl Into<String>, parse: Parse) {
        self.map
            .entry(key.into())
            .or_default()
            .insert(parse.content_text(), parse);
    }

    pub fn key_count(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, impl Iterator<Item = &Parse>)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v.values()))
    }

    pub fn combos(&self) -> impl Iterator<Item = String> + '_ {
        self.map.values().flat_map(|v| v.values().map(Parse::combo))
    }
}

/// Expands every entry and gathers the generated forms by surface key.
pub fn collect_records(lexicon: &Lexicon) -> Records {
    let mut records = Records::new();
    for entry in lexicon.entries() {
        for (surface, parse) in generate(entry) {
            records.insert(surface, parse);
        }
    }
    records
}

/// Compiles a lexicon into database bytes.
pub fn compile(lexicon: &Lexicon) -> Result<Vec<u8>, DbError> {
    write_database(&collect_records(lexicon))
}

/// Serializes records into the on-disk format. Output depends only on the
/// record contents.
pub fn write_database(records: &Records) -> Result<Vec<u8>, DbError> {
    let combos = ComboTable::from_combos(records.combos())?;
    let key_count = records.key_count();
    let bucket_count = bucket_count_for(key_count);
    let records_offset = HEADER_LEN + 8 * bucket_count as u64;

    // Encode record bodies (everything after `next`) first so offsets are known.
    let mut bodies: Vec<(u64, Vec<u8>)> = Vec::with_capacity(key_count);
    for (key, parses) in records.iter() {
        if key.len() > u16::MAX as usize {
            return Err(DbError::KeyTooLong(key.to_owned()));
        }
        let mut body = Vec::with_capacity(key.len() + 8);
        body.extend_from_slice(&(key.len() as u16).to_le_bytes());
        body.extend_from_slice(key.as_bytes());
        let count_at = body.len();
        body.extend_from_slice(&[0, 0]);
        let mut count = 0usize;
        for parse in parses {
            encode_entry(key, parse, &combos)?.write_to(&mut body);
            count += 1;
        }
        if count > u16::MAX as usize {
            return Err(DbError::TooManyEntries(key.to_owned()));
        }
        body[count_at..count_at + 2].copy_from_slice(&(count as u16).to_le_bytes());
        bodies.push((fnv1a64(key.as_bytes()) % bucket_count as u64, body));
    }

    let mut offsets = Vec::with_capacity(key_count);
    let mut offset = records_offset;
    for (_, body) in &bodies {
        offsets.push(offset);
        offset += 8 + body.len() as u64;
    }
    let combo_offset = offset;

    // Walk backwards so each record links to the next larger key in its bucket.
    let mut heads = vec![0u64; bucket_count as usize];
    let mut next = vec![0u64; key_count];
    for i in (0..key_count).rev() {
        let bucket = bodies[i].0 as usize;
        next[i] = heads[bucket];
        heads[bucket] = offsets[i];
    }

    let header = Header {
        bucket_count,
        key_count: key_count as u64,
        combo_offset,
        records_offset,
    };
    let mut out = Vec::with_capacity(combo_offset as usize + 2 + combos.len() * 12);
    out.extend_from_slice(&header.to_bytes());
    for head in &heads {
        out.extend_from_slice(&head.to_le_bytes());
    }
    for (i, (_, body)) in bodies.iter().enumerate() {
        out.extend_from_slice(&next[i].to_le_bytes());
        out.extend_from_slice(body);
    }
    debug_assert_eq!(out.len() as u64, combo_offset);
    combos.write_to(&mut out);
    Ok(out)
}
