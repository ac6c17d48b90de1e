//! Rank-supporting bit vector and hash-table compaction.
//!
//! The bit vector stores one 32-bit partial count followed by `delta` 32-bit
//! data words, repeated. Partial count `b` holds the number of ones in the
//! first `b * delta` data words, so `rank1` reads one count and popcounts at
//! most `delta` words.
//!
//! Compaction turns a finished linear-probing table into an occupancy vector
//! plus a dense array of the non-empty slots in slot order. The slot at index
//! `i` then lives at `dense[rank1(i)]`, and a probe run starting at `i` is the
//! `scan_ones(i)` dense entries that follow (wrapping like the table did).

use crate::codec::{ByteReader, ByteWriter};
use crate::error::{Error, Result};

pub const DEFAULT_DELTA: usize = 4;

/// Population count without the hardware instruction. Must agree with
/// `u32::count_ones`.
pub fn popcount_portable(mut x: u32) -> u32 {
    x = x - ((x >> 1) & 0x5555_5555);
    x = (x & 0x3333_3333) + ((x >> 2) & 0x3333_3333);
    x = (x + (x >> 4)) & 0x0F0F_0F0F;
    x.wrapping_mul(0x0101_0101) >> 24
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankBitVector {
    n_bits: usize,
    delta: usize,
    storage: Vec<u32>,
    ones: usize,
}

impl RankBitVector {
    /// Builds the interleaved structure from a sequence of bits.
    pub fn build<I: IntoIterator<Item = bool>>(bits: I, delta: usize) -> Self {
        assert!(delta >= 1, "delta must be at least 1");
        let mut words: Vec<u32> = Vec::new();
        let mut n_bits = 0usize;
        for bit in bits {
            if n_bits.is_multiple_of(32) {
                words.push(0);
            }
            if bit {
                *words.last_mut().unwrap() |= 1 << (n_bits % 32);
            }
            n_bits += 1;
        }
        Self::from_words(&words, n_bits, delta)
    }

    fn from_words(words: &[u32], n_bits: usize, delta: usize) -> Self {
        let blocks = words.len().div_ceil(delta);
        let mut storage = Vec::with_capacity(blocks * (delta + 1));
        let mut ones = 0usize;
        for b in 0..blocks {
            storage.push(ones as u32);
            for k in 0..delta {
                let w = words.get(b * delta + k).copied().unwrap_or(0);
                ones += w.count_ones() as usize;
                storage.push(w);
            }
        }
        RankBitVector {
            n_bits,
            delta,
            storage,
            ones,
        }
    }

    pub fn len(&self) -> usize {
        self.n_bits
    }

    pub fn is_empty(&self) -> bool {
        self.n_bits == 0
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    /// Size of the interleaved storage in bits.
    pub fn storage_bits(&self) -> usize {
        self.storage.len() * 32
    }

    #[inline]
    fn word(&self, w: usize) -> u32 {
        let block = w / self.delta;
        self.storage[block * (self.delta + 1) + 1 + w % self.delta]
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.n_bits);
        (self.word(i / 32) >> (i % 32)) & 1 == 1
    }

    /// Number of ones in positions `[0, i)`.
    pub fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.n_bits, "rank position {i} beyond {}", self.n_bits);
        if i == self.n_bits {
            return self.ones;
        }
        let per_block = 32 * self.delta;
        let base = (i / per_block) * (self.delta + 1);
        let within = i % per_block;
        let mut count = self.storage[base] as usize;
        let full = within / 32;
        for k in 0..full {
            count += self.storage[base + 1 + k].count_ones() as usize;
        }
        let rem = within % 32;
        if rem > 0 {
            let mask = (1u32 << rem) - 1;
            count += (self.storage[base + 1 + full] & mask).count_ones() as usize;
        }
        count
    }

    /// Length of the run of set bits starting at `i`, wrapping past the end.
    /// Saturates at `len()` when every bit is set.
    pub fn scan_ones(&self, i: usize) -> usize {
        assert!(i < self.n_bits, "scan position {i} beyond {}", self.n_bits);
        let mut run = 0usize;
        let mut pos = i;
        while run < self.n_bits {
            let avail = (32 - pos % 32).min(self.n_bits - pos);
            let bits = self.word(pos / 32) >> (pos % 32);
            let t = (bits.trailing_ones() as usize).min(avail);
            run += t;
            if t < avail {
                break;
            }
            pos += t;
            if pos == self.n_bits {
                pos = 0;
            }
        }
        run.min(self.n_bits)
    }

    pub(crate) fn encode(&self, w: &mut ByteWriter) {
        w.u64(self.n_bits as u64);
        w.u8(self.delta as u8);
        for &word in &self.storage {
            w.u32(word);
        }
    }

    pub(crate) fn decode(r: &mut ByteReader<'_>) -> Result<Self> {
        let n_bits = r.u64()? as usize;
        let delta = r.u8()? as usize;
        if delta == 0 {
            return Err(Error::Corrupt("bit vector with delta 0".into()));
        }
        let blocks = n_bits.div_ceil(32).div_ceil(delta);
        let count = blocks
            .checked_mul(delta + 1)
            .ok_or_else(|| Error::Corrupt("bit vector size overflow".into()))?;
        r.require(count.saturating_mul(4))?;
        let mut data = Vec::with_capacity(blocks * delta);
        for _ in 0..blocks {
            let _partial = r.u32()?;
            for _ in 0..delta {
                data.push(r.u32()?);
            }
        }
        let tail_bits = n_bits % 32;
        let last_used = n_bits.div_ceil(32);
        if data.iter().skip(last_used).any(|&w| w != 0)
            || (tail_bits > 0 && data[last_used - 1] >> tail_bits != 0)
        {
            return Err(Error::Corrupt("bits set past the end of a bit vector".into()));
        }
        data.truncate(last_used);
        // Partial counts are recomputed rather than trusted.
        Ok(Self::from_words(&data, n_bits, delta))
    }
}

/// A linear-probing table with its empty slots squeezed out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactedTable<T> {
    occupancy: RankBitVector,
    dense: Vec<T>,
}

/// Compacts a finished table. `is_empty` identifies vacant slots.
pub fn compact_table<T: Clone>(
    slots: &[T],
    is_empty: impl Fn(&T) -> bool,
    delta: usize,
) -> CompactedTable<T> {
    let occupancy = RankBitVector::build(slots.iter().map(|s| !is_empty(s)), delta);
    let dense = slots.iter().filter(|s| !is_empty(s)).cloned().collect();
    CompactedTable { occupancy, dense }
}

impl<T> CompactedTable<T> {
    pub fn from_parts(occupancy: RankBitVector, dense: Vec<T>) -> Result<Self> {
        if occupancy.count_ones() != dense.len() {
            return Err(Error::Corrupt(format!(
                "occupancy has {} ones but {} dense slots",
                occupancy.count_ones(),
                dense.len()
            )));
        }
        Ok(CompactedTable { occupancy, dense })
    }

    pub fn occupancy(&self) -> &RankBitVector {
        &self.occupancy
    }

    pub fn dense(&self) -> &[T] {
        &self.dense
    }

    /// Number of slots of the original table.
    pub fn capacity(&self) -> usize {
        self.occupancy.len()
    }

    pub fn get(&self, slot: usize) -> Option<&T> {
        self.occupancy
            .get(slot)
            .then(|| &self.dense[self.occupancy.rank1(slot)])
    }

    /// Entries of the probe run that starts at `slot`, in probe order.
    pub fn run(&self, slot: usize) -> impl Iterator<Item = &T> + '_ {
        probe_run(&self.occupancy, slot).map(move |d| &self.dense[d])
    }
}

/// Dense indices of the probe run starting at `slot`.
pub(crate) fn probe_run(occ: &RankBitVector, slot: usize) -> impl Iterator<Item = usize> {
    let (start, len) = if occ.is_empty() || !occ.get(slot) {
        (0, 0)
    } else {
        (occ.rank1(slot), occ.scan_ones(slot))
    };
    let total = occ.count_ones().max(1);
    (0..len).map(move |k| (start + k) % total)
}
