//! Polynomial string hashing modulo the prime `2^32 - 5`.
//!
//! A word `x[0..m]` hashes to `sum(val(x[i]) * r^(i+1)) mod P`. After an
//! `O(m)` preprocessing step ([`HashContext`]) the hash of any string at
//! distance one from `x` is available in constant time, which is what the
//! substitution stores and the query engine lean on.
//!
//! Byte `0` never occurs in dictionary words. Inside patterns it encodes the
//! wildcard, which hashes as the out-of-band value [`WILDCARD_VALUE`].

use rand::Rng;

/// The hashing modulus, the largest prime below `2^32`.
pub const MODULUS: u32 = 4_294_967_291;

/// Byte used to mark a wildcard inside a pattern buffer.
pub const WILDCARD: u8 = 0;

/// Hash contribution of a wildcard. Lies outside the byte range so a
/// wildcard pattern never equals a real word by construction.
pub const WILDCARD_VALUE: u32 = 257;

const P: u64 = MODULUS as u64;

/// Numeric value of a pattern byte.
#[inline]
pub fn symbol_value(b: u8) -> u32 {
    if b == WILDCARD {
        WILDCARD_VALUE
    } else {
        b as u32
    }
}

/// A hash value, always `< MODULUS`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HashValue(u32);

impl HashValue {
    /// Wraps a raw value, reducing it modulo `P`.
    pub fn new(v: u32) -> Self {
        HashValue(v % MODULUS)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Hash of the string obtained by replacing a symbol of value `old` by
    /// one of value `new` at a position of weight `power`.
    #[inline]
    pub fn resubstitute(self, power: u32, old: u32, new: u32) -> HashValue {
        let delta = sub_mod(new % MODULUS, old % MODULUS);
        HashValue(add_mod(self.0, mul_mod(delta, power)))
    }

    /// Bucket index in a table of `t` slots.
    #[inline]
    pub fn bucket(self, t: usize) -> usize {
        debug_assert!(t > 0);
        self.0 as usize % t
    }
}

/// Polynomial base, in `[1, P - 2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HashSeed(u32);

impl HashSeed {
    /// Returns `None` when `r` lies outside `[1, P - 2]`.
    pub fn new(r: u32) -> Option<Self> {
        (1..=MODULUS - 2).contains(&r).then_some(HashSeed(r))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        HashSeed(rng.random_range(1..=MODULUS - 2))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32) -> u32 {
    ((a as u64 * b as u64) % P) as u32
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32) -> u32 {
    ((a as u64 + b as u64) % P) as u32
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32) -> u32 {
    ((a as u64 + P - b as u64) % P) as u32
}

fn pow_mod(mut base: u32, mut exp: u64) -> u32 {
    let mut acc = 1u32;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// `sum(val(x[i]) * r^(i+1)) mod P`, with wildcard bytes valued 257.
pub fn poly_hash(x: &[u8], seed: HashSeed) -> HashValue {
    let r = seed.get();
    let mut power = 1u32;
    let mut acc = 0u32;
    for &b in x {
        power = mul_mod(power, r);
        acc = add_mod(acc, mul_mod(symbol_value(b), power));
    }
    HashValue(acc)
}

/// Low 4 bits of a hash computed under the signature seed.
#[inline]
pub fn signature_of(sig_hash: HashValue) -> u8 {
    (sig_hash.0 & 0xF) as u8
}

/// A single edit applied to a string. Positions are 0-based.
///
/// `Insert { at }` places the new symbol before `word[at]`, so `at` ranges
/// over `0..=m`. A `ch` of [`WILDCARD`] inserts or substitutes a wildcard.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EditOp {
    Identity,
    Substitute { at: usize, ch: u8 },
    Delete { at: usize },
    Insert { at: usize, ch: u8 },
}

impl EditOp {
    /// Whether the op addresses a valid position of a length-`m` word.
    pub fn is_valid_for(&self, m: usize) -> bool {
        match *self {
            EditOp::Identity => true,
            EditOp::Substitute { at, .. } | EditOp::Delete { at } => at < m,
            EditOp::Insert { at, .. } => at <= m,
        }
    }

    /// Materializes the edited string. Linear time; the reference path.
    pub fn apply(&self, word: &[u8]) -> Vec<u8> {
        let mut out = word.to_vec();
        match *self {
            EditOp::Identity => {}
            EditOp::Substitute { at, ch } => out[at] = ch,
            EditOp::Delete { at } => {
                out.remove(at);
            }
            EditOp::Insert { at, ch } => out.insert(at, ch),
        }
        out
    }

    pub fn length_after(&self, m: usize) -> usize {
        match self {
            EditOp::Identity | EditOp::Substitute { .. } => m,
            EditOp::Delete { .. } => m - 1,
            EditOp::Insert { .. } => m + 1,
        }
    }
}

/// Per-string preprocessing for constant-time distance-one rehashing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HashContext {
    word: Vec<u8>,
    seed: HashSeed,
    /// `prefix[j]` is the hash of `word[..j]`.
    prefix: Vec<u32>,
    /// `powers[j] = r^j` for `j` in `0..=m+2`.
    powers: Vec<u32>,
    inv_r: u32,
}

impl HashContext {
    pub fn new(word: &[u8], seed: HashSeed) -> Self {
        let m = word.len();
        let r = seed.get();
        let mut powers = Vec::with_capacity(m + 3);
        powers.push(1u32);
        for j in 0..m + 2 {
            powers.push(mul_mod(powers[j], r));
        }
        let mut prefix = Vec::with_capacity(m + 1);
        prefix.push(0u32);
        for (i, &b) in word.iter().enumerate() {
            prefix.push(add_mod(prefix[i], mul_mod(symbol_value(b), powers[i + 1])));
        }
        HashContext {
            word: word.to_vec(),
            seed,
            prefix,
            powers,
            inv_r: pow_mod(r, P - 2),
        }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn seed(&self) -> HashSeed {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn prefix_hashes(&self) -> &[u32] {
        &self.prefix
    }

    /// `r^j`, defined for `j <= m + 2`.
    #[inline]
    pub fn power(&self, j: usize) -> u32 {
        self.powers[j]
    }

    pub fn inv_r(&self) -> u32 {
        self.inv_r
    }

    #[inline]
    pub fn total(&self) -> HashValue {
        HashValue(self.prefix[self.word.len()])
    }

    /// Hash of `op.apply(word)` in O(1).
    ///
    /// Panics (in debug builds) when the op is out of range for the word.
    pub fn edit_hash(&self, op: EditOp) -> HashValue {
        debug_assert!(op.is_valid_for(self.len()), "{op:?} out of range");
        let h = self.prefix[self.word.len()];
        match op {
            EditOp::Identity => HashValue(h),
            EditOp::Substitute { at, ch } => HashValue(h).resubstitute(
                self.powers[at + 1],
                symbol_value(self.word[at]),
                symbol_value(ch),
            ),
            EditOp::Delete { at } => {
                let tail = sub_mod(h, self.prefix[at + 1]);
                HashValue(add_mod(self.prefix[at], mul_mod(tail, self.inv_r)))
            }
            EditOp::Insert { at, ch } => {
                let tail = sub_mod(h, self.prefix[at]);
                let inserted = mul_mod(symbol_value(ch), self.powers[at + 1]);
                HashValue(add_mod(
                    add_mod(self.prefix[at], inserted),
                    mul_mod(tail, self.seed.get()),
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed(r: u32) -> HashSeed {
        HashSeed::new(r).unwrap()
    }

    // Direct evaluation with u128 arithmetic, independent of the mod helpers.
    fn direct(x: &[u8], r: u32) -> u32 {
        let p = MODULUS as u128;
        let mut acc = 0u128;
        let mut pw = 1u128;
        for &b in x {
            pw = pw * r as u128 % p;
            acc = (acc + symbol_value(b) as u128 * pw) % p;
        }
        acc as u32
    }

    #[test]
    fn poly_hash_examples() {
        assert_eq!(poly_hash(b"", seed(10)).get(), 0);
        assert_eq!(poly_hash(&[3, 1, 2], seed(10)).get(), 2130);
        assert_eq!(direct(&[3, 1, 2], 10), 2130);
        for c in [1u8, 7, 255] {
            let r = 123_456_789;
            assert_eq!(poly_hash(&[c], seed(r)).get(), mul_mod(c as u32, r));
        }
    }

    #[test]
    fn seed_range() {
        assert!(HashSeed::new(0).is_none());
        assert!(HashSeed::new(MODULUS - 1).is_none());
        assert!(HashSeed::new(MODULUS - 2).is_some());
        assert!(HashSeed::new(1).is_some());
    }

    #[test]
    fn context_examples() {
        let ctx = HashContext::new(&[3, 1, 2], seed(10));
        assert_eq!(ctx.prefix_hashes(), &[0, 30, 130, 2130]);
        assert_eq!(ctx.power(0), 1);
        assert_eq!(ctx.power(5), 100_000);
        assert_eq!(mul_mod(ctx.inv_r(), 10), 1);

        let empty = HashContext::new(b"", seed(10));
        assert_eq!(empty.prefix_hashes(), &[0]);
        assert_eq!(empty.total().get(), 0);

        let s = seed(987_654_321);
        let c1 = HashContext::new(b"ALABAMA", s);
        assert_eq!(c1.total(), poly_hash(b"ALABAMA", s));
        assert_eq!(c1, HashContext::new(b"ALABAMA", s));
    }

    #[test]
    fn edit_hash_examples() {
        let ctx = HashContext::new(&[3, 1, 2], seed(10));
        assert_eq!(ctx.edit_hash(EditOp::Substitute { at: 1, ch: 5 }).get(), 2530);
        assert_eq!(ctx.edit_hash(EditOp::Delete { at: 1 }).get(), 230);
        assert_eq!(ctx.edit_hash(EditOp::Insert { at: 1, ch: 7 }).get(), 21730);
        assert_eq!(direct(&[3, 5, 2], 10), 2530);
        assert_eq!(direct(&[3, 2], 10), 230);
        assert_eq!(direct(&[3, 7, 1, 2], 10), 21730);
        assert_eq!(ctx.edit_hash(EditOp::Identity).get(), 2130);
    }

    #[test]
    fn wildcard_edits() {
        let s = seed(31_337);
        let ctx = HashContext::new(b"ALABAMA", s);
        let h = ctx.edit_hash(EditOp::Substitute { at: 5, ch: WILDCARD });
        assert_eq!(h.get(), direct(b"ALABA\0A", 31_337));
        let h = ctx.edit_hash(EditOp::Insert { at: 7, ch: WILDCARD });
        assert_eq!(h.get(), direct(b"ALABAMA\0", 31_337));
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature_of(HashValue::new(0)), 0);
        assert_eq!(signature_of(HashValue::new(16)), 0);
        assert_eq!(signature_of(HashValue::new(2130)), 2);
    }

    fn all_ops(m: usize, alphabet: &[u8]) -> Vec<EditOp> {
        let mut ops = vec![EditOp::Identity];
        for at in 0..m {
            ops.push(EditOp::Delete { at });
            for &ch in alphabet {
                ops.push(EditOp::Substitute { at, ch });
            }
        }
        for at in 0..=m {
            for &ch in alphabet {
                ops.push(EditOp::Insert { at, ch });
            }
        }
        ops
    }

    #[test]
    fn exhaustive_small_alphabet() {
        let s = seed(2_654_435_761);
        let alphabet = [1u8, 2, 3];
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut mismatches = 0usize;
        for _len in 1..=8 {
            let mut next = Vec::with_capacity(words.len() * 3);
            for w in &words {
                for &c in &alphabet {
                    let mut v = w.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            for w in &next {
                let ctx = HashContext::new(w, s);
                for op in all_ops(w.len(), &alphabet) {
                    if ctx.edit_hash(op) != poly_hash(&op.apply(w), s) {
                        mismatches += 1;
                    }
                }
            }
            words = next;
        }
        assert_eq!(mismatches, 0);
    }

    proptest::proptest! {
        #[test]
        fn hash_below_modulus(x in proptest::collection::vec(0u8..=255, 0..64), r in 1u32..=MODULUS - 2) {
            let h = poly_hash(&x, seed(r));
            proptest::prop_assert!(h.get() < MODULUS);
            proptest::prop_assert_eq!(h.get(), direct(&x, r));
        }
    }
}
