// SPDX-License-Identifier: Apache-2.0

//! Disk-resident hash database of inflected forms.
//!
//! # File layout
//!
//! All integers are little-endian.
//!
//! ```text
//! +-------------------------------------------+ (offset 0)
//! | Header (40 bytes)                         |
//! +-------------------------------------------+ (offset 40)
//! | Bucket directory: bucket_count x u64      |
//! +-------------------------------------------+ (records_offset)
//! | Record 1 | Record 2 | ... | Record n      |
//! +-------------------------------------------+ (combo_offset)
//! | Combo table                               |
//! +-------------------------------------------+
//! ```
//!
//! ## Header
//!
//! ```text
//! +------+---------+--------------+-----------+--------------+----------------+----------+
//! | MDB1 | version | bucket_count | key_count | combo_offset | records_offset | reserved |
//! +------+---------+--------------+-----------+--------------+----------------+----------+
//!   4B      u32         u32           u64          u64             u64           u32
//! ```
//!
//! ## Record
//!
//! ```text
//! +------+---------+-----+-------------+---------------------+
//! | next | key_len | key | entry_count | entries (see codec) |
//! +------+---------+-----+-------------+---------------------+
//!   u64     u16    var-len    u16            var-len
//! ```
//!
//! Records are written in ascending key order. A bucket slot holds the
//! absolute offset of its chain head (0 for an empty bucket) and `next`
//! links to the following record of the same bucket, also in ascending key
//! order (0 ends the chain). Buckets are chosen by 64-bit FNV-1a of the key
//! modulo `bucket_count`.
//!
//! ## Combo table
//!
//! ```text
//! +-------+-----+-------+-----+-------+-----+
//! | count | len | combo | len | combo | ... |
//! +-------+-----+-------+-----+-------+-----+
//!   u16     u8   var-len
//! ```

pub mod build;
pub mod codec;
pub mod flat;

use std::fmt;
use std::fs::File;
use std::io;
use std::os::unix::fs::FileExt;
use std::path::Path;

use thiserror::Error;

pub use build::{collect_records, compile, write_database, Records};
pub use codec::{decode_entry, encode_entry, ComboTable, DbEntry};
pub use flat::{dump_flat, restore_flat};

use crate::types::Parse;

pub const MAGIC: &[u8; 4] = b"MDB1";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: u64 = 40;
pub const MIN_BUCKETS: u32 = 8;

#[derive(Debug, Error)]
pub enum DbError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("not a morphology database (bad magic)")]
    BadMagic,
    #[error("unsupported database version {0}")]
    UnsupportedVersion(u32),
    #[error("corrupt database: {0}")]
    Corrupt(String),
    #[error("more than 256 attribute combinations ({} found): {}", combos.len(), combos.join(", "))]
    ComboOverflow { combos: Vec<String> },
    #[error("combination `{0}` is not in the combo table")]
    UnknownCombo(String),
    #[error("root `{root}` differs from key `{key}` by more than 255 bytes")]
    TailTooLong { key: String, root: String },
    #[error("key `{0}` is too long")]
    KeyTooLong(String),
    #[error("key `{0}` has more than 65535 entries")]
    TooManyEntries(String),
    #[error("flat file line {line}: {reason}")]
    Flat { line: usize, reason: String },
}

impl DbError {
    /// True for failures of the file itself rather than of the input data.
    pub fn is_corruption(&self) -> bool {
        matches!(
            self,
            DbError::BadMagic | DbError::UnsupportedVersion(_) | DbError::Corrupt(_)
        )
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Smallest power of two >= 2 * key_count, and at least [`MIN_BUCKETS`].
pub fn bucket_count_for(key_count: usize) -> u32 {
    let wanted = (key_count * 2).max(MIN_BUCKETS as usize);
    wanted.next_power_of_two() as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub bucket_count: u32,
    pub key_count: u64,
    pub combo_offset: u64,
    pub records_offset: u64,
}

impl Header {
    pub fn to_bytes(&self) -> [u8; HEADER_LEN as usize] {
        let mut out = [0u8; HEADER_LEN as usize];
        out[0..4].copy_from_slice(MAGIC);
        out[4..8].copy_from_slice(&VERSION.to_le_bytes());
        out[8..12].copy_from_slice(&self.bucket_count.to_le_bytes());
        out[12..20].copy_from_slice(&self.key_count.to_le_bytes());
        out[20..28].copy_from_slice(&self.combo_offset.to_le_bytes());
        out[28..36].copy_from_slice(&self.records_offset.to_le_bytes());
        out
    }

    fn parse(bytes: &[u8; HEADER_LEN as usize], file_len: u64) -> Result<Header, DbError> {
        if &bytes[0..4] != MAGIC {
            return Err(DbError::BadMagic);
        }
        let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
        let u64_at = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
        let version = u32_at(4);
        if version != VERSION {
            return Err(DbError::UnsupportedVersion(version));
        }
        let header = Header {
            bucket_count: u32_at(8),
            key_count: u64_at(12),
            combo_offset: u64_at(20),
            records_offset: u64_at(28),
        };
        if header.bucket_count < MIN_BUCKETS || !header.bucket_count.is_power_of_two() {
            return Err(DbError::Corrupt(format!(
                "bad bucket count {}",
                header.bucket_count
            )));
        }
        if header.records_offset != HEADER_LEN + 8 * header.bucket_count as u64 {
            return Err(DbError::Corrupt(
                "records offset does not follow the directory".into(),
            ));
        }
        if header.combo_offset < header.records_offset || header.combo_offset > file_len {
            return Err(DbError::Corrupt("combo table offset out of range".into()));
        }
        Ok(header)
    }
}

enum Storage {
    File(File),
    Memory(Vec<u8>),
}

impl Storage {
    fn read_exact_at(&self, buf: &mut [u8], offset: u64) -> Result<(), DbError> {
        match self {
            Storage::File(f) => f.read_exact_at(buf, offset).map_err(|e| {
                if e.kind() == io::ErrorKind::UnexpectedEof {
                    DbError::Corrupt(format!("truncated read at offset {offset}"))
                } else {
                    DbError::Io(e)
                }
            }),
            Storage::Memory(bytes) => {
                let start = usize::try_from(offset).ok();
                let slice = start
                    .and_then(|s| bytes.get(s..s.checked_add(buf.len())?))
                    .ok_or_else(|| {
                        DbError::Corrupt(format!("truncated read at offset {offset}"))
                    })?;
                buf.copy_from_slice(slice);
                Ok(())
            }
        }
    }
}

/// A read-only open database. Lookups read the directory and chain from
/// storage on every call; only the header and combo table are kept in memory.
pub struct Database {
    storage: Storage,
    header: Header,
    combos: ComboTable,
    file_len: u64,
}

/// One stored record as read by a scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub key: String,
    pub entries: Vec<DbEntry>,
}

impl Database {
    pub fn open(path: impl AsRef<Path>) -> Result<Database, DbError> {
        let file = File::open(path)?;
        let len = file.metadata()?.len();
        Database::with_storage(Storage::File(file), len)
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Result<Database, DbError> {
        let len = bytes.len() as u64;
        Database::with_storage(Storage::Memory(bytes), len)
    }

    fn with_storage(storage: Storage, file_len: u64) -> Result<Database, DbError> {
        if file_len < HEADER_LEN {
            return Err(if file_len >= 4 {
                let mut magic = [0u8; 4];
                storage.read_exact_at(&mut magic, 0)?;
                if &magic != MAGIC {
                    DbError::BadMagic
                } else {
                    DbError::Corrupt("truncated header".into())
                }
            } else {
                DbError::BadMagic
            });
        }
        let mut raw = [0u8; HEADER_LEN as usize];
        storage.read_exact_at(&mut raw, 0)?;
        let header = Header::parse(&raw, file_len)?;
        let mut combo_bytes = vec![0u8; (file_len - header.combo_offset) as usize];
        storage.read_exact_at(&mut combo_bytes, header.combo_offset)?;
        let combos = ComboTable::read_from(&combo_bytes)?;
        Ok(Database {
            storage,
            header,
            combos,
            file_len,
        })
    }

    pub fn header(&self) -> &Header {
        &self.header
    }

    pub fn combos(&self) -> &ComboTable {
        &self.combos
    }

    pub fn key_count(&self) -> u64 {
        self.header.key_count
    }

    pub fn file_len(&self) -> u64 {
        self.file_len
    }

    fn check_record_offset(&self, offset: u64) -> Result<(), DbError> {
        if offset < self.header.records_offset || offset >= self.header.combo_offset {
            return Err(DbError::Corrupt(format!(
                "record offset {offset} out of range"
            )));
        }
        Ok(())
    }

    /// Parses for `key` in stored order; empty if the key is absent.
    pub fn lookup(&self, key: &str) -> Result<Vec<Parse>, DbError> {
        let Some((offset, key_len)) = self.find(key.as_bytes())? else {
            return Ok(Vec::new());
        };
        let entries = self.read_entries(offset + 10 + key_len as u64)?;
        entries
            .iter()
            .map(|e| decode_entry(key.as_bytes(), e, &self.combos))
            .collect()
    }

    /// Offset and key length of the record for `key`, if present.
    fn find(&self, key: &[u8]) -> Result<Option<(u64, u16)>, DbError> {
        let bucket = fnv1a64(key) % self.header.bucket_count as u64;
        let mut slot = [0u8; 8];
        self.storage
            .read_exact_at(&mut slot, HEADER_LEN + bucket * 8)?;
        let mut offset = u64::from_le_bytes(slot);
        let mut key_buf = Vec::with_capacity(key.len());
        let mut hops = 0u64;
        while offset != 0 {
            self.check_record_offset(offset)?;
            hops += 1;
            if hops > self.header.key_count {
                return Err(DbError::Corrupt("cycle in bucket chain".into()));
            }
            let mut head = [0u8; 10];
            self.storage.read_exact_at(&mut head, offset)?;
            let next = u64::from_le_bytes(head[0..8].try_into().unwrap());
            let key_len = u16::from_le_bytes([head[8], head[9]]);
            key_buf.resize(key_len as usize, 0);
            self.storage.read_exact_at(&mut key_buf, offset + 10)?;
            match key_buf.as_slice().cmp(key) {
                std::cmp::Ordering::Equal => return Ok(Some((offset, key_len))),
                // Chains are sorted, so the key cannot appear further on.
                std::cmp::Ordering::Greater => return Ok(None),
                std::cmp::Ordering::Less => {}
            }
            if next != 0 && next <= offset {
                return Err(DbError::Corrupt("bucket chain is not ascending".into()));
            }
            offset = next;
        }
        Ok(None)
    }

    fn read_entries(&self, offset: u64) -> Result<Vec<DbEntry>, DbError> {
        let mut count = [0u8; 2];
        self.storage.read_exact_at(&mut count, offset)?;
        let count = u16::from_le_bytes(count) as usize;
        // Entries are at most 258 bytes each; read what is there, bounded by
        // the combo table.
        let avail = self.header.combo_offset.saturating_sub(offset + 2);
        let want = (count as u64 * 258).min(avail) as usize;
        let mut buf = vec![0u8; want];
        self.storage.read_exact_at(&mut buf, offset + 2)?;
        let mut entries = Vec::with_capacity(count);
        let mut pos = 0;
        for _ in 0..count {
            let (entry, used) = DbEntry::read_from(&buf[pos..])?;
            pos += used;
            entries.push(entry);
        }
        Ok(entries)
    }

    /// All records in stored (ascending key) order.
    pub fn records(&self) -> Result<Vec<Record>, DbError> {
        let start = self.header.records_offset;
        let mut region = vec![0u8; (self.header.combo_offset - start) as usize];
        self.storage.read_exact_at(&mut region, start)?;
        let mut records = Vec::with_capacity(self.header.key_count as usize);
        let mut pos = 0usize;
        let truncated = || DbError::Corrupt("truncated record".into());
        while pos < region.len() {
            let head = region.get(pos..pos + 10).ok_or_else(truncated)?;
            let key_len = u16::from_le_bytes([head[8], head[9]]) as usize;
            pos += 10;
            let key = region.get(pos..pos + key_len).ok_or_else(truncated)?;
            let key = String::from_utf8(key.to_vec())
                .map_err(|_| DbError::Corrupt("key is not UTF-8".into()))?;
            pos += key_len;
            let count = region.get(pos..pos + 2).ok_or_else(truncated)?;
            let count = u16::from_le_bytes([count[0], count[1]]) as usize;
            pos += 2;
            let mut entries = Vec::with_capacity(count);
            for _ in 0..count {
                let (entry, used) = DbEntry::read_from(&region[pos..])?;
                pos += used;
                entries.push(entry);
            }
            records.push(Record { key, entries });
        }
        if records.len() as u64 != self.header.key_count {
            return Err(DbError::Corrupt(format!(
                "header claims {} keys, found {}",
                self.header.key_count,
                records.len()
            )));
        }
        Ok(records)
    }

    /// Every key with its decoded parses, in ascending key order.
    pub fn decoded(&self) -> Result<Vec<(String, Vec<Parse>)>, DbError> {
        self.records()?
            .into_iter()
            .map(|r| {
                let parses = r
                    .entries
                    .iter()
                    .map(|e| decode_entry(r.key.as_bytes(), e, &self.combos))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((r.key, parses))
            })
            .collect()
    }

    pub fn stats(&self) -> Result<Stats, DbError> {
        let records = self.records()?;
        let mut stats = Stats {
            keys: records.len() as u64,
            file_bytes: self.file_len,
            combos: self.combos.len() as u64,
            ..Stats::default()
        };
        for r in &records {
            stats.entries += r.entries.len() as u64;
            if r.entries.len() == 1 {
                stats.single_entry_keys += 1;
            }
            stats.content_bytes += r
                .entries
                .iter()
                .map(|e| e.encoded_len() as u64)
                .sum::<u64>();
        }
        Ok(stats)
    }
}

/// Size and shape summary of a database.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub keys: u64,
    pub entries: u64,
    pub single_entry_keys: u64,
    /// Total encoded entry bytes over all records.
    pub content_bytes: u64,
    pub combos: u64,
    pub file_bytes: u64,
}

impl Stats {
    pub fn single_entry_fraction(&self) -> f64 {
        if self.keys == 0 {
            0.0
        } else {
            self.single_entry_keys as f64 / self.keys as f64
        }
    }

    pub fn mean_content_bytes(&self) -> f64 {
        if self.keys == 0 {
            0.0
        } else {
            self.content_bytes as f64 / self.keys as f64
        }
    }
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "keys\t{}", self.keys)?;
        writeln!(f, "entries\t{}", self.entries)?;
        writeln!(f, "single_entry_keys\t{}", self.single_entry_keys)?;
        writeln!(
            f,
            "single_entry_fraction\t{:.4}",
            self.single_entry_fraction()
        )?;
        writeln!(f, "content_bytes\t{}", self.content_bytes)?;
        writeln!(
            f,
            "mean_content_bytes_per_key\t{:.4}",
            self.mean_content_bytes()
        )?;
        writeln!(f, "combos\t{}", self.combos)?;
        write!(f, "file_bytes\t{}", self.file_bytes)
    }
}

/// Replaces `path` with `bytes` via a synced temporary file and a rename.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> io::Result<()> {
    use std::io::Write;
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    if let Ok(d) = File::open(dir) {
        let _ = d.sync_all();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_reference_vectors() {
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn bucket_counts() {
        assert_eq!(bucket_count_for(0), 8);
        assert_eq!(bucket_count_for(4), 8);
        assert_eq!(bucket_count_for(5), 16);
        assert_eq!(bucket_count_for(6), 16);
        assert_eq!(bucket_count_for(300_000), 1 << 20);
    }

    #[test]
    fn header_round_trips() {
        let h = Header {
            bucket_count: 16,
            key_count: 6,
            combo_offset: 300,
            records_offset: 40 + 128,
        };
        let bytes = h.to_bytes();
        assert_eq!(&bytes[0..4], b"MDB1");
        assert_eq!(Header::parse(&bytes, 400).unwrap(), h);
        assert!(matches!(
            Header::parse(&bytes, 200),
            Err(DbError::Corrupt(_))
        ));
        let mut bad = bytes;
        bad[0] = b'X';
        assert!(matches!(Header::parse(&bad, 400), Err(DbError::BadMagic)));
        let mut bad = bytes;
        bad[4] = 2;
        assert!(matches!(
            Header::parse(&bad, 400),
            Err(DbError::UnsupportedVersion(2))
        ));
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(
            Database::from_bytes(vec![]),
            Err(DbError::BadMagic)
        ));
        assert!(matches!(
            Database::from_bytes(b"hello world".to_vec()),
            Err(DbError::BadMagic)
        ));
        assert!(matches!(
            Database::from_bytes(b"MDB1\x01\0\0\0".to_vec()),
            Err(DbError::Corrupt(_))
        ));
    }
}
