//! Exact membership over the dictionary words.
//!
//! Words shorter than `beta` live inline in one linear-probing table per
//! length, a slot being exactly `len` bytes and empty when its first byte is
//! zero. Longer words are appended to an arena (LEB128 length prefix, then
//! the bytes) and a single table of 32-bit arena offsets indexes them, with
//! `u32::MAX` marking an empty slot.

use std::collections::HashSet;

use crate::codec::{ByteReader, ByteWriter};
use crate::config::{within_insert_ceiling, LoadFactor};
use crate::error::{Error, Result};
use crate::hashing::{poly_hash, HashSeed, HashValue};
use crate::succinct::{compact_table, probe_run, CompactedTable, RankBitVector};

pub const EMPTY_OFFSET: u32 = u32::MAX;

/// Validates and deduplicates an input word list, keeping first occurrences
/// in input order. Errors name the offending word's input index.
pub fn prepare_words<'a, I>(words: I) -> Result<Vec<&'a [u8]>>
where
    I: IntoIterator<Item = &'a [u8]>,
{
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (index, w) in words.into_iter().enumerate() {
        if w.is_empty() {
            return Err(Error::EmptyWord { index });
        }
        if w.contains(&0) {
            return Err(Error::ZeroByte { index });
        }
        if seen.insert(w) {
            out.push(w);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum InlineSlots {
    Raw(Vec<u8>),
    Compact { occupancy: RankBitVector, dense: Vec<u8> },
}

/// Table of all words of one length below `beta`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct InlineTable {
    width: usize,
    capacity: usize,
    count: usize,
    slots: InlineSlots,
}

impl InlineTable {
    fn new(width: usize, capacity: usize) -> Self {
        InlineTable {
            width,
            capacity,
            count: 0,
            slots: InlineSlots::Raw(vec![0; capacity * width]),
        }
    }

    fn contains(&self, w: &[u8], h: HashValue) -> bool {
        if self.capacity == 0 {
            return false;
        }
        let start = h.bucket(self.capacity);
        match &self.slots {
            InlineSlots::Raw(raw) => {
                let mut i = start;
                loop {
                    let slot = &raw[i * self.width..(i + 1) * self.width];
                    if slot[0] == 0 {
                        return false;
                    }
                    if slot == w {
                        return true;
                    }
                    i += 1;
                    if i == self.capacity {
                        i = 0;
                    }
                }
            }
            InlineSlots::Compact { occupancy, dense } => probe_run(occupancy, start)
                .any(|d| &dense[d * self.width..(d + 1) * self.width] == w),
        }
    }

    /// Returns false when the word was already present.
    fn insert(&mut self, w: &[u8], h: HashValue) -> bool {
        let InlineSlots::Raw(raw) = &mut self.slots else {
            unreachable!("insert into compacted table")
        };
        let mut i = h.bucket(self.capacity);
        loop {
            let slot = &mut raw[i * self.width..(i + 1) * self.width];
            if slot[0] == 0 {
                slot.copy_from_slice(w);
                self.count += 1;
                return true;
            }
            if slot == w {
                return false;
            }
            i = (i + 1) % self.capacity;
        }
    }

    fn compact(&mut self, delta: usize) {
        if self.width == 0 {
            return;
        }
        if let InlineSlots::Raw(raw) = &self.slots {
            let chunks: Vec<&[u8]> = raw.chunks_exact(self.width).collect();
            let occupancy = RankBitVector::build(chunks.iter().map(|c| c[0] != 0), delta);
            let dense = chunks.iter().filter(|c| c[0] != 0).flat_map(|c| c.iter().copied()).collect();
            self.slots = InlineSlots::Compact { occupancy, dense };
        }
    }

    fn words(&self) -> Box<dyn Iterator<Item = &[u8]> + '_> {
        if self.width == 0 {
            return Box::new(std::iter::empty());
        }
        match &self.slots {
            InlineSlots::Raw(raw) => Box::new(raw.chunks_exact(self.width).filter(|c| c[0] != 0)),
            InlineSlots::Compact { dense, .. } => Box::new(dense.chunks_exact(self.width)),
        }
    }

    fn stored_bytes(&self) -> usize {
        match &self.slots {
            InlineSlots::Raw(raw) => raw.len(),
            InlineSlots::Compact { occupancy, dense } => occupancy.storage_bits() / 8 + dense.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum OffsetSlots {
    Raw(Vec<u32>),
    Compact(CompactedTable<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct LongTable {
    capacity: usize,
    count: usize,
    slots: OffsetSlots,
    arena: Vec<u8>,
}

fn read_arena(arena: &[u8], offset: u32) -> &[u8] {
    let mut pos = offset as usize;
    let mut len = 0usize;
    let mut shift = 0;
    loop {
        let b = arena[pos];
        pos += 1;
        len |= ((b & 0x7F) as usize) << shift;
        if b & 0x80 == 0 {
            break;
        }
        shift += 7;
    }
    &arena[pos..pos + len]
}

fn push_arena(arena: &mut Vec<u8>, w: &[u8]) -> Result<u32> {
    let offset = u32::try_from(arena.len())
        .ok()
        .filter(|&o| o != EMPTY_OFFSET)
        .ok_or_else(|| Error::TableFull("long-word arena exceeds 32-bit offsets".into()))?;
    let mut len = w.len();
    loop {
        let b = (len & 0x7F) as u8;
        len >>= 7;
        if len == 0 {
            arena.push(b);
            break;
        }
        arena.push(b | 0x80);
    }
    arena.extend_from_slice(w);
    Ok(offset)
}

impl LongTable {
    fn new(capacity: usize) -> Self {
        LongTable {
            capacity,
            count: 0,
            slots: OffsetSlots::Raw(vec![EMPTY_OFFSET; capacity]),
            arena: Vec::new(),
        }
    }

    fn contains(&self, w: &[u8], h: HashValue) -> bool {
        if self.capacity == 0 {
            return false;
        }
        let start = h.bucket(self.capacity);
        match &self.slots {
            OffsetSlots::Raw(raw) => {
                let mut i = start;
                while raw[i] != EMPTY_OFFSET {
                    if read_arena(&self.arena, raw[i]) == w {
                        return true;
                    }
                    i = (i + 1) % self.capacity;
                }
                false
            }
            OffsetSlots::Compact(table) => table.run(start).any(|&o| read_arena(&self.arena, o) == w),
        }
    }

    fn insert(&mut self, w: &[u8], h: HashValue) -> Result<bool> {
        let OffsetSlots::Raw(raw) = &mut self.slots else {
            unreachable!("insert into compacted table")
        };
        let mut i = h.bucket(self.capacity);
        while raw[i] != EMPTY_OFFSET {
            if read_arena(&self.arena, raw[i]) == w {
                return Ok(false);
            }
            i = (i + 1) % self.capacity;
        }
        raw[i] = push_arena(&mut self.arena, w)?;
        self.count += 1;
        Ok(true)
    }

    fn compact(&mut self, delta: usize) {
        if let OffsetSlots::Raw(raw) = &self.slots {
            self.slots = OffsetSlots::Compact(compact_table(raw, |&o| o == EMPTY_OFFSET, delta));
        }
    }

    fn words(&self) -> impl Iterator<Item = &[u8]> + '_ {
        let mut pos = 0usize;
        std::iter::from_fn(move || {
            (pos < self.arena.len()).then(|| {
                let w = read_arena(&self.arena, pos as u32);
                pos = w.as_ptr() as usize - self.arena.as_ptr() as usize + w.len();
                w
            })
        })
    }

    fn stored_bytes(&self) -> usize {
        let slots = match &self.slots {
            OffsetSlots::Raw(raw) => raw.len() * 4,
            OffsetSlots::Compact(t) => t.occupancy().storage_bits() / 8 + t.dense().len() * 4,
        };
        slots + self.arena.len()
    }
}

/// Per-length occupancy summary used by the stats report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableOccupancy {
    /// Word length of the table, or `None` for the long-word table.
    pub length: Option<usize>,
    pub capacity: usize,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDictionary {
    beta: usize,
    load: LoadFactor,
    seed: HashSeed,
    delta: usize,
    /// Indexed by word length; slot 0 is an unused placeholder.
    inline: Vec<InlineTable>,
    long: LongTable,
    word_count: usize,
    total_len: usize,
    compacted: bool,
}

impl ExactDictionary {
    /// Builds the dictionary; input is validated and deduplicated first.
    pub fn build<'a, I>(words: I, load: LoadFactor, beta: usize, seed: HashSeed, delta: usize) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [u8]>,
    {
        let words = prepare_words(words)?;
        Self::build_prepared(&words, load, beta, seed, delta)
    }

    pub(crate) fn build_prepared(
        words: &[&[u8]],
        load: LoadFactor,
        beta: usize,
        seed: HashSeed,
        delta: usize,
    ) -> Result<Self> {
        assert!(beta >= 1);
        let mut counts = vec![0usize; beta];
        let mut long_count = 0usize;
        for w in words {
            if w.len() < beta {
                counts[w.len()] += 1;
            } else {
                long_count += 1;
            }
        }
        let inline = counts
            .iter()
            .enumerate()
            .map(|(len, &c)| InlineTable::new(len, if c == 0 || len == 0 { 0 } else { load.capacity(c) }))
            .collect();
        let long = LongTable::new(if long_count == 0 { 0 } else { load.capacity(long_count) });
        let mut dict = ExactDictionary {
            beta,
            load,
            seed,
            delta,
            inline,
            long,
            word_count: 0,
            total_len: 0,
            compacted: false,
        };
        for w in words {
            dict.insert_unchecked(w)?;
        }
        Ok(dict)
    }

    fn insert_unchecked(&mut self, w: &[u8]) -> Result<bool> {
        let h = poly_hash(w, self.seed);
        let added = if w.len() < self.beta {
            self.inline[w.len()].insert(w, h)
        } else {
            self.long.insert(w, h)?
        };
        if added {
            self.word_count += 1;
            self.total_len += w.len();
        }
        Ok(added)
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn seed(&self) -> HashSeed {
        self.seed
    }

    pub fn load_factor(&self) -> LoadFactor {
        self.load
    }

    /// Number of distinct words `d`.
    pub fn word_count(&self) -> usize {
        self.word_count
    }

    /// Total length `n` of the distinct words.
    pub fn total_length(&self) -> usize {
        self.total_len
    }

    pub fn is_compacted(&self) -> bool {
        self.compacted
    }

    /// Whether any stored word has length `len`.
    pub fn has_table_for(&self, len: usize) -> bool {
        if len == 0 {
            false
        } else if len < self.beta {
            self.inline[len].count > 0
        } else {
            self.long.count > 0
        }
    }

    pub fn contains(&self, w: &[u8]) -> bool {
        self.contains_hashed(w, poly_hash(w, self.seed))
    }

    /// Membership test with a precomputed `poly_hash(w)` under this
    /// dictionary's seed.
    pub fn contains_hashed(&self, w: &[u8], h: HashValue) -> bool {
        debug_assert_eq!(h, poly_hash(w, self.seed));
        if w.is_empty() {
            false
        } else if w.len() < self.beta {
            self.inline[w.len()].contains(w, h)
        } else {
            self.long.contains(w, h)
        }
    }

    /// Whether `w` could be inserted without breaching the 0.95 ceiling.
    pub fn check_insert(&self, w: &[u8]) -> Result<()> {
        if self.compacted {
            return Err(Error::Unsupported("insert into a compacted dictionary".into()));
        }
        if w.is_empty() {
            return Err(Error::EmptyWord { index: 0 });
        }
        if w.contains(&0) {
            return Err(Error::ZeroByte { index: 0 });
        }
        let (count, capacity) = if w.len() < self.beta {
            let t = &self.inline[w.len()];
            (t.count, t.capacity)
        } else {
            (self.long.count, self.long.capacity)
        };
        if !within_insert_ceiling(count + 1, capacity) {
            return Err(Error::TableFull(format!(
                "exact table for length {} ({count} of {capacity} slots used)",
                w.len()
            )));
        }
        Ok(())
    }

    /// Inserts one word. Returns false when it was already present.
    pub fn insert(&mut self, w: &[u8]) -> Result<bool> {
        if self.contains(w) {
            return Ok(false);
        }
        self.check_insert(w)?;
        self.insert_unchecked(w)
    }

    /// Replaces every table by its compacted form. Irreversible.
    pub fn compact(&mut self) {
        for t in &mut self.inline {
            t.compact(self.delta);
        }
        self.long.compact(self.delta);
        self.compacted = true;
    }

    /// All stored words, in table order.
    pub fn words(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.inline.iter().flat_map(|t| t.words()).chain(self.long.words())
    }

    pub fn occupancy(&self) -> Vec<TableOccupancy> {
        let mut out: Vec<TableOccupancy> = self
            .inline
            .iter()
            .filter(|t| t.count > 0)
            .map(|t| TableOccupancy { length: Some(t.width), capacity: t.capacity, count: t.count })
            .collect();
        if self.long.count > 0 {
            out.push(TableOccupancy { length: None, capacity: self.long.capacity, count: self.long.count });
        }
        out
    }

    /// Bytes held by slots, bit vectors and the arena.
    pub fn stored_bytes(&self) -> usize {
        self.inline.iter().map(InlineTable::stored_bytes).sum::<usize>() + self.long.stored_bytes()
    }

    #[cfg(test)]
    fn inline_dense(&self, len: usize) -> Option<&[u8]> {
        match &self.inline[len].slots {
            InlineSlots::Compact { dense, .. } => Some(dense),
            InlineSlots::Raw(_) => None,
        }
    }

    pub(crate) fn encode(&self, w: &mut ByteWriter) {
        w.u8(self.compacted as u8);
        w.u64(self.word_count as u64);
        w.u64(self.total_len as u64);
        for t in self.inline.iter().skip(1) {
            w.u64(t.capacity as u64);
            w.u64(t.count as u64);
            match &t.slots {
                InlineSlots::Raw(raw) => w.bytes(raw),
                InlineSlots::Compact { occupancy, dense } => {
                    occupancy.encode(w);
                    w.bytes(dense);
                }
            }
        }
        w.u64(self.long.capacity as u64);
        w.u64(self.long.count as u64);
        match &self.long.slots {
            OffsetSlots::Raw(raw) => raw.iter().for_each(|&o| w.u32(o)),
            OffsetSlots::Compact(t) => {
                t.occupancy().encode(w);
                t.dense().iter().for_each(|&o| w.u32(o));
            }
        }
        w.u64(self.long.arena.len() as u64);
        w.bytes(&self.long.arena);
    }

    pub(crate) fn decode(
        r: &mut ByteReader<'_>,
        load: LoadFactor,
        beta: usize,
        seed: HashSeed,
        delta: usize,
    ) -> Result<Self> {
        let compacted = match r.u8()? {
            0 => false,
            1 => true,
            other => return Err(Error::Corrupt(format!("exact compaction flag {other}"))),
        };
        let word_count = r.u64()? as usize;
        let total_len = r.u64()? as usize;
        let mut inline = vec![InlineTable::new(0, 0)];
        for width in 1..beta {
            let capacity = r.len_field(0)?;
            let count = r.u64()? as usize;
            if count > capacity || (capacity > 0 && count == capacity) {
                return Err(Error::Corrupt(format!("inline table {width}: {count} of {capacity}")));
            }
            let slots = if compacted {
                let occupancy = RankBitVector::decode(r)?;
                if occupancy.len() != capacity || occupancy.count_ones() != count {
                    return Err(Error::Corrupt(format!("inline table {width} occupancy")));
                }
                let dense = r.take(count * width)?.to_vec();
                InlineSlots::Compact { occupancy, dense }
            } else {
                let raw = r.take(capacity * width)?.to_vec();
                let used = raw.chunks_exact(width).filter(|c| c[0] != 0).count();
                if used != count {
                    return Err(Error::Corrupt(format!("inline table {width} count")));
                }
                InlineSlots::Raw(raw)
            };
            inline.push(InlineTable { width, capacity, count, slots });
        }
        let capacity = r.len_field(0)?;
        let count = r.u64()? as usize;
        if count > capacity || (capacity > 0 && count == capacity) {
            return Err(Error::Corrupt(format!("long table: {count} of {capacity}")));
        }
        let slots = if compacted {
            let occupancy = RankBitVector::decode(r)?;
            r.require(count * 4)?;
            let dense = (0..count).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
            OffsetSlots::Compact(CompactedTable::from_parts(occupancy, dense)?)
        } else {
            r.require(capacity * 4)?;
            OffsetSlots::Raw((0..capacity).map(|_| r.u32()).collect::<Result<Vec<_>>>()?)
        };
        let arena_len = r.len_field(1)?;
        let arena = r.take(arena_len)?.to_vec();
        let long = LongTable { capacity, count, slots, arena };
        let offsets: Vec<u32> = match &long.slots {
            OffsetSlots::Raw(raw) => raw.iter().copied().filter(|&o| o != EMPTY_OFFSET).collect(),
            OffsetSlots::Compact(t) => t.dense().to_vec(),
        };
        if offsets.len() != count || !offsets_valid(&long.arena, &offsets) {
            return Err(Error::Corrupt("long-word offsets".into()));
        }
        let dict = ExactDictionary {
            beta,
            load,
            seed,
            delta,
            inline,
            long,
            word_count,
            total_len,
            compacted,
        };
        let (d, n) = dict.words().fold((0, 0), |(d, n), w| (d + 1, n + w.len()));
        if d != word_count || n != total_len {
            return Err(Error::Corrupt("exact dictionary totals".into()));
        }
        Ok(dict)
    }
}

fn offsets_valid(arena: &[u8], offsets: &[u32]) -> bool {
    let mut starts = HashSet::new();
    let mut pos = 0usize;
    while pos < arena.len() {
        starts.insert(pos as u32);
        let mut len = 0usize;
        let mut shift = 0;
        loop {
            let Some(&b) = arena.get(pos) else { return false };
            pos += 1;
            if shift > 28 {
                return false;
            }
            len |= ((b & 0x7F) as usize) << shift;
            if b & 0x80 == 0 {
                break;
            }
            shift += 7;
        }
        pos += len;
    }
    pos == arena.len() && starts.len() == offsets.len() && offsets.iter().all(|o| starts.contains(o))
}
