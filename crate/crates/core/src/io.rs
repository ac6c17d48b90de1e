//! Binary index files.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "ASDI"
//!      4     2  format version (1)
//!      6     1  flags: bit 0 signatures, bit 1 compacted
//!      7     1  error level
//!      8     2  load factor numerator
//!     10     2  load factor denominator
//!     12     1  beta
//!     13     1  delta
//!     14     1  checksum algorithm (1 = FNV-1a 64)
//!     15     1  reserved, 0
//!     16     4  bucket seed
//!     20     4  signature seed
//!     24     8  rng seed the index was built with
//!     32    24  byte lengths of the exact, level-1 and level-2 sections
//!     56     -  sections
//!  end-8     8  checksum of every preceding byte
//! ```
//!
//! All integers are little-endian. An absent store has length 0.

use std::fs;
use std::hash::Hasher;
use std::io::Write;
use std::path::Path;

use fnv::FnvHasher;

use crate::codec::{ByteReader, ByteWriter};
use crate::config::{BuildConfig, LoadFactor};
use crate::error::{Error, Result};
use crate::exact_dict::ExactDictionary;
use crate::hashing::HashSeed;
use crate::index::Index;
use crate::subst_store::{SeedPair, SubstStore};

pub const MAGIC: [u8; 4] = *b"ASDI";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 56;
const CHECKSUM_FNV1A64: u8 = 1;

fn checksum(bytes: &[u8]) -> u64 {
    let mut h = FnvHasher::default();
    h.write(bytes);
    h.finish()
}

/// Serializes the index. Identical indexes give identical bytes.
pub fn to_bytes(index: &Index) -> Vec<u8> {
    let cfg = index.config();
    let section = |f: &dyn Fn(&mut ByteWriter)| {
        let mut w = ByteWriter::default();
        f(&mut w);
        w.into_inner()
    };
    let exact = section(&|w| index.exact().encode(w));
    let store1 = index.store1().map_or_else(Vec::new, |s| section(&|w| s.encode(w)));
    let store2 = index.store2().map_or_else(Vec::new, |s| section(&|w| s.encode(w)));

    let mut w = ByteWriter::default();
    w.bytes(&MAGIC);
    w.u16(VERSION);
    w.u8(cfg.use_signatures as u8 | (cfg.compact as u8) << 1);
    w.u8(cfg.errors);
    w.u16(cfg.load_factor.num());
    w.u16(cfg.load_factor.den());
    w.u8(cfg.beta as u8);
    w.u8(cfg.delta as u8);
    w.u8(CHECKSUM_FNV1A64);
    w.u8(0);
    w.u32(index.seeds().bucket.get());
    w.u32(index.seeds().signature.get());
    w.u64(cfg.rng_seed);
    for s in [&exact, &store1, &store2] {
        w.u64(s.len() as u64);
    }
    debug_assert_eq!(w.len(), HEADER_LEN);
    for s in [&exact, &store1, &store2] {
        w.bytes(s);
    }
    let mut out = w.into_inner();
    let sum = checksum(&out);
    out.extend_from_slice(&sum.to_le_bytes());
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<Index> {
    if bytes.len() < MAGIC.len() || bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    let mut r = ByteReader::new(bytes);
    r.take(4)?;
    let version = r.u16()?;
    if version != VERSION {
        return Err(Error::VersionMismatch { found: version, expected: VERSION });
    }
    if bytes.len() < HEADER_LEN + 8 {
        return Err(Error::Truncated { needed: HEADER_LEN + 8 - bytes.len() });
    }
    let flags = r.u8()?;
    let errors = r.u8()?;
    let (num, den) = (r.u16()?, r.u16()?);
    let beta = r.u8()? as usize;
    let delta = r.u8()? as usize;
    let algo = r.u8()?;
    let reserved = r.u8()?;
    let bucket = r.u32()?;
    let signature = r.u32()?;
    let rng_seed = r.u64()?;
    let lens = [r.u64()?, r.u64()?, r.u64()?];
    let body: u128 = lens.iter().map(|&l| l as u128).sum();
    let expected = HEADER_LEN as u128 + body + 8;
    if (bytes.len() as u128) < expected {
        return Err(Error::Truncated { needed: (expected - bytes.len() as u128).min(usize::MAX as u128) as usize });
    }
    if (bytes.len() as u128) > expected {
        return Err(Error::Corrupt(format!("{} trailing bytes", bytes.len() as u128 - expected)));
    }
    let end = bytes.len() - 8;
    let stored = u64::from_le_bytes(bytes[end..].try_into().expect("8 bytes"));
    if algo != CHECKSUM_FNV1A64 {
        return Err(Error::Corrupt(format!("checksum algorithm {algo}")));
    }
    let computed = checksum(&bytes[..end]);
    if stored != computed {
        return Err(Error::ChecksumMismatch { stored, computed });
    }

    if flags & !0b11 != 0 || reserved != 0 {
        return Err(Error::Corrupt(format!("header flags {flags:#x}")));
    }
    let load_factor = LoadFactor::new(num, den).map_err(|e| Error::Corrupt(e.to_string()))?;
    let seeds = match (HashSeed::new(bucket), HashSeed::new(signature)) {
        (Some(bucket), Some(signature)) => SeedPair { bucket, signature },
        _ => return Err(Error::Corrupt("hash seed out of range".into())),
    };
    let config = BuildConfig {
        errors,
        load_factor,
        use_signatures: flags & 1 == 1,
        compact: flags & 2 == 2,
        beta,
        delta,
        rng_seed,
    };
    config.validate().map_err(|e| Error::Corrupt(e.to_string()))?;

    let mut offset = HEADER_LEN;
    let mut sections = lens.iter().map(|&l| {
        let s = &bytes[offset..offset + l as usize];
        offset += l as usize;
        s
    });
    let (exact_bytes, s1, s2) = (sections.next().unwrap(), sections.next().unwrap(), sections.next().unwrap());

    let mut r = ByteReader::new(exact_bytes);
    let exact = ExactDictionary::decode(&mut r, load_factor, beta, seeds.bucket, delta)?;
    expect_consumed(&r, "exact")?;
    let store = |b: &[u8]| -> Result<Option<SubstStore>> {
        if b.is_empty() {
            return Ok(None);
        }
        let mut r = ByteReader::new(b);
        let s = SubstStore::decode(&mut r, seeds)?;
        expect_consumed(&r, "store")?;
        Ok(Some(s))
    };
    Index::from_parts(config, seeds, exact, store(s1)?, store(s2)?)
}

fn expect_consumed(r: &ByteReader<'_>, what: &str) -> Result<()> {
    if r.is_empty() {
        Ok(())
    } else {
        Err(Error::Corrupt(format!("{} unread bytes in {what} section", r.remaining())))
    }
}

/// Parses a word list: one word per line, LF separated, trailing CR
/// stripped, empty lines skipped, duplicates removed (first occurrence
/// kept). A zero byte is an error naming its 1-based line.
pub fn parse_word_list(bytes: &[u8]) -> Result<Vec<Vec<u8>>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (line_no, line) in bytes.split(|&b| b == b'\n').enumerate() {
        let line = line.strip_suffix(b"\r").unwrap_or(line);
        if line.is_empty() {
            continue;
        }
        if line.contains(&0) {
            return Err(Error::ZeroByte { index: line_no + 1 });
        }
        if seen.insert(line) {
            out.push(line.to_vec());
        }
    }
    Ok(out)
}

pub fn read_word_list(path: impl AsRef<Path>) -> Result<Vec<Vec<u8>>> {
    parse_word_list(&fs::read(path)?)
}

pub fn save(index: &Index, path: impl AsRef<Path>) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(&to_bytes(index))?;
    f.sync_all()?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<Index> {
    from_bytes(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(errors: u8, compact: bool) -> Index {
        let words: Vec<&[u8]> = vec![b"alabama", b"axabaya", b"a", b"an_extremely_long_word_here", b"zz"];
        let cfg = BuildConfig { errors, compact, ..Default::default() };
        Index::build(words, &cfg).unwrap()
    }

    #[test]
    fn word_list_parsing() {
        let words = parse_word_list(b"b\r\na\n\n\nb\nc\r").unwrap();
        assert_eq!(words, vec![b"b".to_vec(), b"a".to_vec(), b"c".to_vec()]);
        assert!(parse_word_list(b"").unwrap().is_empty());
        assert!(matches!(parse_word_list(b"ok\nb\0d\n"), Err(Error::ZeroByte { index: 2 })));
    }

    #[test]
    fn round_trip_all_variants() {
        for errors in 0..=2 {
            for compact in [false, true] {
                let idx = sample(errors, compact);
                let bytes = to_bytes(&idx);
                let back = from_bytes(&bytes).unwrap();
                assert_eq!(back, idx);
                assert_eq!(to_bytes(&back), bytes);
            }
        }
    }

    #[test]
    fn header_layout() {
        let idx = sample(2, true);
        let b = to_bytes(&idx);
        assert_eq!(&b[..4], b"ASDI");
        assert_eq!(u16::from_le_bytes([b[4], b[5]]), 1);
        assert_eq!(b[6], 0b11);
        assert_eq!(b[7], 2);
        assert_eq!(u16::from_le_bytes([b[8], b[9]]), 7);
        assert_eq!(u16::from_le_bytes([b[10], b[11]]), 10);
        assert_eq!(b[12], 16);
        assert_eq!(b[13], 4);
        assert_eq!(b[14], 1);
        assert_eq!(u32::from_le_bytes(b[16..20].try_into().unwrap()), idx.seeds().bucket.get());
    }

    #[test]
    fn rejects_damage() {
        let b = to_bytes(&sample(1, false));
        assert!(matches!(from_bytes(b"NOPE"), Err(Error::BadMagic)));
        assert!(matches!(from_bytes(&[]), Err(Error::BadMagic)));

        let mut v = b.clone();
        v[4] = 9;
        assert!(matches!(from_bytes(&v), Err(Error::VersionMismatch { found: 9, expected: 1 })));

        assert!(matches!(from_bytes(&b[..b.len() - 1]), Err(Error::Truncated { .. })));
        assert!(matches!(from_bytes(&b[..20]), Err(Error::Truncated { .. })));

        for pos in [HEADER_LEN, b.len() / 2, b.len() - 9, b.len() - 1] {
            let mut v = b.clone();
            v[pos] ^= 0x40;
            assert!(matches!(from_bytes(&v), Err(Error::ChecksumMismatch { .. })), "flip at {pos}");
        }
    }

    #[test]
    fn checked_fields_after_valid_checksum() {
        let b = to_bytes(&sample(1, false));
        let mut v = b[..b.len() - 8].to_vec();
        v[15] = 7;
        let sum = checksum(&v);
        v.extend_from_slice(&sum.to_le_bytes());
        assert!(matches!(from_bytes(&v), Err(Error::Corrupt(_))));
    }
}
