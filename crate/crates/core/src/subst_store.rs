//! Substitution stores.
//!
//! A level-1 store maps every one-wildcard pattern `u φ v` of a dictionary
//! word `u c v` to the character `c`. A level-2 store maps every
//! two-wildcard pattern of a word to the character under the leftmost
//! wildcard. Both are a single linear-probing table of characters: entries
//! of the same pattern share a bucket and form one probe run, so a lookup
//! collects every character from the bucket up to the next empty slot.
//!
//! With signatures each entry also carries 4 bits derived from its pattern
//! under an independent seed, and a lookup keeps only the characters whose
//! signature matches. Two slots then pack into 3 bytes:
//!
//! ```text
//! byte 0: char of the even slot
//! byte 1: low nibble = signature of the even slot, high nibble = odd slot
//! byte 2: char of the odd slot
//! ```
//!
//! Without signatures a slot is one byte. A character byte of 0 marks an
//! empty slot. A lookup that walks past more than `sigma` occupied slots
//! gives up and returns the whole dictionary alphabet.

use std::collections::HashMap;

use crate::codec::{ByteReader, ByteWriter};
use crate::config::{within_insert_ceiling, LoadFactor};
use crate::error::{Error, Result};
use crate::hashing::{signature_of, HashContext, HashSeed, HashValue, EditOp, WILDCARD, WILDCARD_VALUE};
use crate::succinct::{probe_run, RankBitVector};

/// Set of byte values, used for the dictionary alphabet.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Alphabet {
    bits: [u64; 4],
}

impl Alphabet {
    pub fn from_words<'a, I: IntoIterator<Item = &'a [u8]>>(words: I) -> Self {
        let mut a = Alphabet::default();
        for w in words {
            a.extend(w);
        }
        a
    }

    #[inline]
    pub fn insert(&mut self, c: u8) {
        self.bits[(c >> 6) as usize] |= 1 << (c & 63);
    }

    pub fn extend(&mut self, w: &[u8]) {
        for &c in w {
            self.insert(c);
        }
    }

    #[inline]
    pub fn contains(&self, c: u8) -> bool {
        self.bits[(c >> 6) as usize] >> (c & 63) & 1 == 1
    }

    /// Alphabet size `sigma`.
    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits == [0; 4]
    }

    /// Characters in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..=255u8).filter(|&c| self.contains(c))
    }

    pub(crate) fn encode(&self, w: &mut ByteWriter) {
        for b in self.bits {
            w.u64(b);
        }
    }

    pub(crate) fn decode(r: &mut ByteReader<'_>) -> Result<Self> {
        let mut bits = [0u64; 4];
        for b in &mut bits {
            *b = r.u64()?;
        }
        let a = Alphabet { bits };
        if a.contains(0) {
            return Err(Error::Corrupt("alphabet contains byte 0".into()));
        }
        Ok(a)
    }
}

/// Bucket hash and signature of one wildcard pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WildcardKeyHashes {
    pub bucket: HashValue,
    pub sig: u8,
}

impl WildcardKeyHashes {
    /// From the pattern's hashes under the bucket and signature seeds.
    pub fn new(bucket: HashValue, sig_hash: HashValue) -> Self {
        WildcardKeyHashes {
            bucket,
            sig: signature_of(sig_hash),
        }
    }

    /// Hashes a pattern buffer directly; wildcards are `WILDCARD` bytes.
    pub fn of_pattern(pattern: &[u8], seeds: SeedPair) -> Self {
        Self::new(
            crate::hashing::poly_hash(pattern, seeds.bucket),
            crate::hashing::poly_hash(pattern, seeds.signature),
        )
    }
}

/// The two independent polynomial bases of an index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedPair {
    pub bucket: HashSeed,
    pub signature: HashSeed,
}

/// Outcome of one substitution-list lookup.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ListProbe {
    /// Occupied slots visited.
    pub scanned: usize,
    /// The walk exceeded `sigma` slots and the alphabet was returned.
    pub capped: bool,
}

/// Number of store entries a word contributes at `level`.
pub fn entries_for_length(level: u8, len: usize) -> usize {
    match level {
        1 => len,
        2 => len * len.saturating_sub(1) / 2,
        _ => unreachable!("level {level}"),
    }
}

#[inline]
fn packed_len(slots: usize, signatures: bool) -> usize {
    if signatures {
        slots.div_ceil(2) * 3
    } else {
        slots
    }
}

#[inline]
fn slot_char(buf: &[u8], i: usize, signatures: bool) -> u8 {
    if signatures {
        buf[(i / 2) * 3 + if i.is_multiple_of(2) { 0 } else { 2 }]
    } else {
        buf[i]
    }
}

#[inline]
fn slot_sig(buf: &[u8], i: usize) -> u8 {
    let b = buf[(i / 2) * 3 + 1];
    if i.is_multiple_of(2) {
        b & 0xF
    } else {
        b >> 4
    }
}

#[inline]
fn set_slot(buf: &mut [u8], i: usize, c: u8, sig: u8, signatures: bool) {
    if signatures {
        let base = (i / 2) * 3;
        if i.is_multiple_of(2) {
            buf[base] = c;
            buf[base + 1] = (buf[base + 1] & 0xF0) | (sig & 0xF);
        } else {
            buf[base + 2] = c;
            buf[base + 1] = (buf[base + 1] & 0x0F) | (sig << 4);
        }
    } else {
        buf[i] = c;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum StoreSlots {
    Raw(Vec<u8>),
    Compact { occupancy: RankBitVector, dense: Vec<u8> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstStore {
    level: u8,
    signatures: bool,
    capacity: usize,
    entries: usize,
    seeds: SeedPair,
    alphabet: Alphabet,
    slots: StoreSlots,
}

/// Calls `f(char, bucket_hash, sig_hash)` for every entry `word` contributes
/// at `level`, with O(1) hashing per entry after two O(m) contexts.
fn for_each_entry(word: &[u8], level: u8, seeds: SeedPair, mut f: impl FnMut(u8, HashValue, HashValue)) {
    let cb = HashContext::new(word, seeds.bucket);
    let cs = HashContext::new(word, seeds.signature);
    for i in 0..word.len() {
        let op = EditOp::Substitute { at: i, ch: WILDCARD };
        let (hb, hs) = (cb.edit_hash(op), cs.edit_hash(op));
        match level {
            1 => f(word[i], hb, hs),
            2 => {
                for j in i + 1..word.len() {
                    let old = word[j] as u32;
                    f(
                        word[i],
                        hb.resubstitute(cb.power(j + 1), old, WILDCARD_VALUE),
                        hs.resubstitute(cs.power(j + 1), old, WILDCARD_VALUE),
                    );
                }
            }
            _ => unreachable!("level {level}"),
        }
    }
}

impl SubstStore {
    /// Builds a level-1 or level-2 store over already validated words.
    pub fn build(
        words: &[&[u8]],
        level: u8,
        load: LoadFactor,
        signatures: bool,
        seeds: SeedPair,
    ) -> Result<Self> {
        if !(1..=2).contains(&level) {
            return Err(Error::InvalidConfig(format!("store level {level}")));
        }
        let total: usize = words.iter().map(|w| entries_for_length(level, w.len())).sum();
        let capacity = load.capacity(total);
        let mut store = SubstStore {
            level,
            signatures,
            capacity,
            entries: 0,
            seeds,
            alphabet: Alphabet::from_words(words.iter().copied()),
            slots: StoreSlots::Raw(vec![0; packed_len(capacity, signatures)]),
        };
        for w in words {
            store.insert_unchecked(w);
        }
        debug_assert_eq!(store.entries, total);
        Ok(store)
    }

    fn insert_unchecked(&mut self, word: &[u8]) {
        let StoreSlots::Raw(buf) = &mut self.slots else {
            unreachable!("insert into compacted store")
        };
        let (capacity, signatures) = (self.capacity, self.signatures);
        let mut added = 0;
        for_each_entry(word, self.level, self.seeds, |c, hb, hs| {
            let mut i = hb.bucket(capacity);
            while slot_char(buf, i, signatures) != 0 {
                i += 1;
                if i == capacity {
                    i = 0;
                }
            }
            set_slot(buf, i, c, signature_of(hs), signatures);
            added += 1;
        });
        self.entries += added;
        self.alphabet.extend(word);
    }

    /// Adds the entries of one more word. Fails on a compacted store or when
    /// the table would pass the 0.95 load ceiling.
    pub fn insert_entries(&mut self, word: &[u8]) -> Result<()> {
        self.check_insert(word)?;
        self.insert_unchecked(word);
        Ok(())
    }

    pub fn check_insert(&self, word: &[u8]) -> Result<()> {
        if self.is_compacted() {
            return Err(Error::Unsupported("insert into a compacted substitution store".into()));
        }
        let after = self.entries + entries_for_length(self.level, word.len());
        if !within_insert_ceiling(after, self.capacity) {
            return Err(Error::TableFull(format!(
                "level-{} store would hold {after} of {} slots",
                self.level, self.capacity
            )));
        }
        Ok(())
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn has_signatures(&self) -> bool {
        self.signatures
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Number of stored entries (`n` at level 1, `N` at level 2).
    pub fn entry_count(&self) -> usize {
        self.entries
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn seeds(&self) -> SeedPair {
        self.seeds
    }

    pub fn is_compacted(&self) -> bool {
        matches!(self.slots, StoreSlots::Compact { .. })
    }

    /// Bytes of slot payload plus the occupancy vector if compacted.
    pub fn stored_bytes(&self) -> usize {
        match &self.slots {
            StoreSlots::Raw(buf) => buf.len(),
            StoreSlots::Compact { occupancy, dense } => occupancy.storage_bits() / 8 + dense.len(),
        }
    }

    /// Dense payload length of a compacted store.
    pub fn dense_len(&self) -> Option<usize> {
        match &self.slots {
            StoreSlots::Compact { dense, .. } => Some(dense.len()),
            StoreSlots::Raw(_) => None,
        }
    }

    pub fn key_hashes(&self, pattern: &[u8]) -> WildcardKeyHashes {
        WildcardKeyHashes::of_pattern(pattern, self.seeds)
    }

    /// Candidate characters for a wildcard pattern; a superset of the true
    /// substitution list. Each character appears once.
    pub fn list_query(&self, key: WildcardKeyHashes) -> (Vec<u8>, ListProbe) {
        let mut out = Vec::new();
        let probe = self.list_query_into(key, &mut out);
        (out, probe)
    }

    /// Like [`list_query`](Self::list_query) but appends into `out`
    /// (cleared first).
    pub fn list_query_into(&self, key: WildcardKeyHashes, out: &mut Vec<u8>) -> ListProbe {
        out.clear();
        let sigma = self.alphabet.len();
        let start = key.bucket.bucket(self.capacity);
        let mut seen = Alphabet::default();
        let mut probe = ListProbe::default();
        let mut visit = |c: u8, sig: u8| -> bool {
            probe.scanned += 1;
            if probe.scanned > sigma {
                probe.capped = true;
                return false;
            }
            if (!self.signatures || sig == key.sig) && !seen.contains(c) {
                seen.insert(c);
                out.push(c);
            }
            true
        };
        match &self.slots {
            StoreSlots::Raw(buf) => {
                let mut i = start;
                loop {
                    let c = slot_char(buf, i, self.signatures);
                    if c == 0 {
                        break;
                    }
                    let sig = if self.signatures { slot_sig(buf, i) } else { 0 };
                    if !visit(c, sig) {
                        break;
                    }
                    i += 1;
                    if i == self.capacity {
                        i = 0;
                    }
                }
            }
            StoreSlots::Compact { occupancy, dense } => {
                for d in probe_run(occupancy, start) {
                    let c = slot_char(dense, d, self.signatures);
                    let sig = if self.signatures { slot_sig(dense, d) } else { 0 };
                    if !visit(c, sig) {
                        break;
                    }
                }
            }
        }
        if probe.capped {
            out.clear();
            out.extend(self.alphabet.iter());
        }
        probe
    }

    /// Squeezes out empty slots. Irreversible.
    pub fn compact(&mut self, delta: usize) {
        let StoreSlots::Raw(buf) = &self.slots else { return };
        let sig = self.signatures;
        let occupancy = RankBitVector::build((0..self.capacity).map(|i| slot_char(buf, i, sig) != 0), delta);
        let mut dense = vec![0u8; packed_len(self.entries, sig)];
        let mut d = 0;
        for i in 0..self.capacity {
            let c = slot_char(buf, i, sig);
            if c != 0 {
                let s = if sig { slot_sig(buf, i) } else { 0 };
                set_slot(&mut dense, d, c, s, sig);
                d += 1;
            }
        }
        self.slots = StoreSlots::Compact { occupancy, dense };
    }

    pub(crate) fn encode(&self, w: &mut ByteWriter) {
        w.u8(self.level);
        w.u8(self.signatures as u8 | (self.is_compacted() as u8) << 1);
        w.u64(self.capacity as u64);
        w.u64(self.entries as u64);
        self.alphabet.encode(w);
        match &self.slots {
            StoreSlots::Raw(buf) => w.bytes(buf),
            StoreSlots::Compact { occupancy, dense } => {
                occupancy.encode(w);
                w.bytes(dense);
            }
        }
    }

    pub(crate) fn decode(r: &mut ByteReader<'_>, seeds: SeedPair) -> Result<Self> {
        let level = r.u8()?;
        if !(1..=2).contains(&level) {
            return Err(Error::Corrupt(format!("store level {level}")));
        }
        let flags = r.u8()?;
        if flags & !0b11 != 0 {
            return Err(Error::Corrupt(format!("store flags {flags:#x}")));
        }
        let signatures = flags & 1 == 1;
        let compacted = flags & 2 == 2;
        let capacity = r.len_field(0)?;
        let entries = r.u64()? as usize;
        if capacity == 0 || entries >= capacity {
            return Err(Error::Corrupt(format!("store holds {entries} of {capacity} slots")));
        }
        let alphabet = Alphabet::decode(r)?;
        let (slots, payload) = if compacted {
            let occupancy = RankBitVector::decode(r)?;
            if occupancy.len() != capacity || occupancy.count_ones() != entries {
                return Err(Error::Corrupt("store occupancy".into()));
            }
            let dense = r.take(packed_len(entries, signatures))?.to_vec();
            let payload = dense.clone();
            (StoreSlots::Compact { occupancy, dense }, (payload, entries))
        } else {
            let buf = r.take(packed_len(capacity, signatures))?.to_vec();
            let payload = buf.clone();
            (StoreSlots::Raw(buf), (payload, capacity))
        };
        let (buf, slots_n) = payload;
        let used = (0..slots_n).filter(|&i| slot_char(&buf, i, signatures) != 0).count();
        if used != entries || (compacted && used != slots_n) {
            return Err(Error::Corrupt("store entry count".into()));
        }
        if (0..slots_n).any(|i| {
            let c = slot_char(&buf, i, signatures);
            c != 0 && !alphabet.contains(c)
        }) {
            return Err(Error::Corrupt("store character outside alphabet".into()));
        }
        Ok(SubstStore {
            level,
            signatures,
            capacity,
            entries,
            seeds,
            alphabet,
            slots,
        })
    }
}

/// Distribution of true substitution-list sizes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ListHistogram {
    /// list size -> number of entries sitting in lists of that size
    pub entries_by_size: std::collections::BTreeMap<usize, usize>,
    pub total_entries: usize,
}

impl ListHistogram {
    /// Percentage of entries in lists of exactly `size` elements.
    pub fn percent(&self, size: usize) -> f64 {
        self.share(|s| s == size)
    }

    /// Percentage of entries in lists of at least `size` elements.
    pub fn percent_at_least(&self, size: usize) -> f64 {
        self.share(|s| s >= size)
    }

    fn share(&self, pick: impl Fn(usize) -> bool) -> f64 {
        if self.total_entries == 0 {
            return 0.0;
        }
        let hit: usize = self.entries_by_size.iter().filter(|(&s, _)| pick(s)).map(|(_, &c)| c).sum();
        100.0 * hit as f64 / self.total_entries as f64
    }

    /// Rows for sizes 1..=5 and a final `>= 6` bucket.
    pub fn table_rows(&self) -> Vec<(String, f64)> {
        let mut rows: Vec<(String, f64)> = (1..=5).map(|s| (s.to_string(), self.percent(s))).collect();
        rows.push((">=6".to_string(), self.percent_at_least(6)));
        rows
    }
}

/// Groups every entry `words` would contribute at `level` by its exact
/// pattern. Patterns are identified by the pair of full 32-bit hashes under
/// both seeds, a 64-bit fingerprint; distinct patterns merging is possible
/// in principle but vanishingly rare at dictionary scale.
pub fn list_histogram(words: &[&[u8]], level: u8, seeds: SeedPair) -> ListHistogram {
    let mut lists: HashMap<u64, usize> = HashMap::new();
    for w in words {
        for_each_entry(w, level, seeds, |_, hb, hs| {
            *lists.entry((hb.get() as u64) << 32 | hs.get() as u64).or_default() += 1;
        });
    }
    let mut hist = ListHistogram::default();
    for &size in lists.values() {
        *hist.entries_by_size.entry(size).or_default() += size;
        hist.total_entries += size;
    }
    hist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hashing::poly_hash;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::{BTreeSet, HashMap};

    fn seeds() -> SeedPair {
        SeedPair {
            bucket: HashSeed::new(2_166_136_261).unwrap(),
            signature: HashSeed::new(16_777_619).unwrap(),
        }
    }

    fn store(words: &[&[u8]], level: u8, sig: bool) -> SubstStore {
        SubstStore::build(words, level, LoadFactor::default(), sig, seeds()).unwrap()
    }

    fn with_wildcards(w: &[u8], at: &[usize]) -> Vec<u8> {
        let mut p = w.to_vec();
        for &i in at {
            p[i] = WILDCARD;
        }
        p
    }

    /// Brute-force substitution lists: pattern -> characters.
    fn true_lists(words: &[&[u8]], level: u8) -> HashMap<Vec<u8>, BTreeSet<u8>> {
        let mut lists: HashMap<Vec<u8>, BTreeSet<u8>> = HashMap::new();
        for w in words {
            for i in 0..w.len() {
                if level == 1 {
                    lists.entry(with_wildcards(w, &[i])).or_default().insert(w[i]);
                } else {
                    for j in i + 1..w.len() {
                        lists.entry(with_wildcards(w, &[i, j])).or_default().insert(w[i]);
                    }
                }
            }
        }
        lists
    }

    #[test]
    fn alabama_level_one() {
        let s = store(&[b"ALABAMA"], 1, true);
        assert_eq!(s.entry_count(), 7);
        let (list, _) = s.list_query(s.key_hashes(b"ALABA\0A"));
        assert!(list.contains(&b'M'));
    }

    #[test]
    fn alabama_level_two() {
        let s = store(&[b"ALABAMA"], 2, true);
        assert_eq!(s.entry_count(), 21);
        let (list, _) = s.list_query(s.key_hashes(b"A\0ABA\0A"));
        assert!(list.contains(&b'L'));
    }

    #[test]
    fn shared_pattern_collects_both() {
        let s = store(&[b"ab", b"cb"], 1, true);
        let (list, _) = s.list_query(s.key_hashes(b"\0b"));
        assert!(list.contains(&b'a') && list.contains(&b'c'));
    }

    #[test]
    fn empty_store() {
        let s = store(&[], 1, true);
        assert_eq!(s.capacity(), 1);
        let (list, probe) = s.list_query(s.key_hashes(b"\0bc"));
        assert!(list.is_empty());
        assert_eq!(probe.scanned, 0);
        let mut c = s.clone();
        c.compact(4);
        assert_eq!(c.dense_len(), Some(0));
        assert!(c.list_query(c.key_hashes(b"\0")).0.is_empty());
    }

    #[test]
    fn cap_returns_alphabet() {
        // every "xb" for x in a 20-letter alphabet: the "φb" list alone fills
        // 20 slots, and the run through it grows past sigma
        let words: Vec<Vec<u8>> = (b'a'..b'a' + 20).map(|c| vec![c, b'b']).collect();
        let refs: Vec<&[u8]> = words.iter().map(|w| w.as_slice()).collect();
        for sig in [false, true] {
            let s = store(&refs, 1, sig);
            assert_eq!(s.alphabet().len(), 20);
            let (mut list, probe) = s.list_query(s.key_hashes(b"\0b"));
            list.sort();
            let expected: Vec<u8> = (b'a'..b'a' + 20).collect();
            assert_eq!(list, expected);
            if probe.capped {
                assert_eq!(probe.scanned, 21);
            }
        }
    }

    #[test]
    fn packed_layout_is_bit_exact() {
        let mut buf = vec![0u8; packed_len(4, true)];
        assert_eq!(buf.len(), 6);
        set_slot(&mut buf, 0, b'x', 0x3, true);
        set_slot(&mut buf, 1, b'y', 0xA, true);
        set_slot(&mut buf, 3, b'z', 0xF, true);
        assert_eq!(buf, [b'x', 0xA3, b'y', 0, 0xF0, b'z']);
        assert_eq!(slot_sig(&buf, 1), 0xA);
        assert_eq!(slot_char(&buf, 2, true), 0);
        assert_eq!(packed_len(5, true), 9);
        assert_eq!(packed_len(5, false), 5);
    }

    #[test]
    fn signatures_match_pattern_hashes() {
        let words: Vec<&[u8]> = vec![b"hello", b"help", b"yellow"];
        let s = store(&words, 1, true);
        let StoreSlots::Raw(buf) = &s.slots else { panic!() };
        let mut stored: Vec<(u8, u8)> = (0..s.capacity())
            .filter(|&i| slot_char(buf, i, true) != 0)
            .map(|i| (slot_char(buf, i, true), slot_sig(buf, i)))
            .collect();
        let mut expected: Vec<(u8, u8)> = Vec::new();
        for w in &words {
            for i in 0..w.len() {
                let p = with_wildcards(w, &[i]);
                expected.push((w[i], signature_of(poly_hash(&p, seeds().signature))));
            }
        }
        stored.sort();
        expected.sort();
        assert_eq!(stored, expected);
    }

    #[test]
    fn completeness_and_compaction_equivalence() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for round in 0..20 {
            let sigma = rng.random_range(2..=6u8);
            let words: Vec<Vec<u8>> = (0..rng.random_range(1..60))
                .map(|_| {
                    let len = rng.random_range(1..=6);
                    (0..len).map(|_| b'a' + rng.random_range(0..sigma)).collect()
                })
                .collect();
            let words = crate::exact_dict::prepare_words(words.iter().map(|w| w.as_slice())).unwrap();
            for level in [1u8, 2] {
                for sig in [false, true] {
                    let s = store(&words, level, sig);
                    let expected_entries: usize = words.iter().map(|w| entries_for_length(level, w.len())).sum();
                    assert_eq!(s.entry_count(), expected_entries);
                    let mut c = s.clone();
                    c.compact(4);
                    if sig {
                        assert_eq!(c.dense_len(), Some(expected_entries.div_ceil(2) * 3));
                    }
                    for (pattern, chars) in true_lists(&words, level) {
                        let key = s.key_hashes(&pattern);
                        let (got, _) = s.list_query(key);
                        for ch in &chars {
                            assert!(got.contains(ch), "round {round} level {level} missing {ch}");
                        }
                        assert_eq!(c.list_query(key), s.list_query(key));
                    }
                }
            }
        }
    }

    #[test]
    fn compaction_differential_random_keys() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let words: Vec<Vec<u8>> = (0..800)
            .map(|_| (0..rng.random_range(2..10)).map(|_| rng.random_range(b'a'..=b'h')).collect())
            .collect();
        let words = crate::exact_dict::prepare_words(words.iter().map(|w| w.as_slice())).unwrap();
        for sig in [false, true] {
            let s = store(&words, 1, sig);
            let mut c = s.clone();
            c.compact(4);
            for _ in 0..10_000 {
                let key = WildcardKeyHashes::new(HashValue::new(rng.random()), HashValue::new(rng.random()));
                assert_eq!(s.list_query(key), c.list_query(key));
            }
        }
    }

    #[test]
    fn incremental_entries() {
        let mut s = store(&[b"zzzzzzzzzzzzzzzzzzzz"], 1, true);
        s.insert_entries(b"abc").unwrap();
        assert_eq!(s.entry_count(), 23);
        let mut s2 = store(&[b"zzzzzzzzzzzzzzzzzzzz"], 2, true);
        let before = s2.entry_count();
        s2.insert_entries(b"abcd").unwrap();
        assert_eq!(s2.entry_count() - before, 6);
        let (list, _) = s2.list_query(s2.key_hashes(b"\0b\0d"));
        assert!(list.contains(&b'a'));
        // a store built over one 3-letter word has capacity 5 and no headroom
        let mut tight = store(&[b"abc"], 1, false);
        assert!(matches!(tight.insert_entries(b"xyz"), Err(Error::TableFull(_))));
        tight.compact(4);
        assert!(matches!(tight.insert_entries(b"x"), Err(Error::Unsupported(_))));
    }

    #[test]
    fn histogram_fixtures() {
        let h = list_histogram(&[b"ALABAMA"], 1, seeds());
        assert_eq!(h.total_entries, 7);
        assert_eq!(h.percent(1), 100.0);
        let h = list_histogram(&[b"ab", b"cb"], 1, seeds());
        assert_eq!(h.total_entries, 4);
        assert_eq!(h.percent(1), 50.0);
        assert_eq!(h.percent(2), 50.0);
        let sum: f64 = h.table_rows().iter().map(|(_, p)| p).sum();
        assert!((sum - 100.0).abs() < 1e-9);
    }

    #[test]
    fn codec_round_trip() {
        let words: Vec<&[u8]> = vec![b"alpha", b"beta", b"gamma", b"delta"];
        for level in [1, 2] {
            for sig in [false, true] {
                let mut s = store(&words, level, sig);
                for compact in [false, true] {
                    if compact {
                        s.compact(4);
                    }
                    let mut w = ByteWriter::default();
                    s.encode(&mut w);
                    let bytes = w.into_inner();
                    let mut r = ByteReader::new(&bytes);
                    assert_eq!(SubstStore::decode(&mut r, seeds()).unwrap(), s);
                    assert!(r.is_empty());
                }
            }
        }
    }
}
