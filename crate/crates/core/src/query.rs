//! Candidate enumeration and checking.
//!
//! A query for `x` with bound `k` walks every wildcard pattern reachable from
//! `x` with at most `k` edits, where a substituted or inserted character is a
//! wildcard. Patterns without wildcards are looked up directly in the exact
//! dictionary; one-wildcard patterns ask the level-1 store which characters
//! to try; two-wildcard patterns ask the level-2 store for the leftmost
//! wildcard, then the level-1 store for the other. Every filled-in candidate
//! is verified by exact membership, so the stores may over-report freely.
//!
//! Each pattern is described as a base edit on `x` followed by a second edit
//! on the result. Descriptors are enumerated grouped by base edit, so the
//! engine prepares one hash context per base edit (O(m)) and then gets every
//! pattern hash in O(1) and every candidate buffer in O(1) amortized edits.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::hashing::{symbol_value, EditOp, HashContext, HashValue, WILDCARD, WILDCARD_VALUE};
use crate::index::Index;
use crate::subst_store::{SubstStore, WildcardKeyHashes};

/// Edit-script shape of a pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternClass {
    Exact,
    Del,
    Sub,
    Ins,
    DelDel,
    DelSub,
    DelIns,
    SubSub,
    SubIns,
    InsIns,
}

/// One wildcard pattern derived from the query string.
///
/// Positions are 0-based on the query `x`; insertion positions are gaps in
/// `0..=m` (gap `g` sits before `x[g]`). Pairs are:
/// `DelDel(i, j)` with `i < j`; `DelSub(deleted, substituted)`;
/// `DelIns(deleted, gap)`; `SubSub(i, j)` with `i < j`;
/// `SubIns(substituted, gap)`; `InsIns(g1, g2)` with `g1 <= g2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternDescriptor {
    pub class: PatternClass,
    pub first: usize,
    pub second: usize,
}

impl PatternDescriptor {
    fn new(class: PatternClass, first: usize, second: usize) -> Self {
        PatternDescriptor { class, first, second }
    }

    pub fn wildcards(&self) -> usize {
        use PatternClass::*;
        match self.class {
            Exact | Del | DelDel => 0,
            Sub | Ins | DelSub | DelIns => 1,
            SubSub | SubIns | InsIns => 2,
        }
    }

    /// Number of edits in the script.
    pub fn cost(&self) -> usize {
        use PatternClass::*;
        match self.class {
            Exact => 0,
            Del | Sub | Ins => 1,
            _ => 2,
        }
    }

    pub fn pattern_len(&self, m: usize) -> usize {
        use PatternClass::*;
        match self.class {
            Exact | Sub | SubSub | DelIns => m,
            Del | DelSub => m - 1,
            Ins | SubIns => m + 1,
            DelDel => m - 2,
            InsIns => m + 2,
        }
    }

    /// The base edit on `x` and the follow-up edit on its result.
    pub fn steps(&self) -> (EditOp, EditOp) {
        use PatternClass::*;
        let (a, b) = (self.first, self.second);
        let sub = |at| EditOp::Substitute { at, ch: WILDCARD };
        let ins = |at| EditOp::Insert { at, ch: WILDCARD };
        match self.class {
            Exact => (EditOp::Identity, EditOp::Identity),
            Del => (EditOp::Identity, EditOp::Delete { at: a }),
            Sub => (EditOp::Identity, sub(a)),
            Ins => (EditOp::Identity, ins(a)),
            DelDel => (EditOp::Delete { at: a }, EditOp::Delete { at: b - 1 }),
            DelSub => (EditOp::Delete { at: a }, sub(if b < a { b } else { b - 1 })),
            DelIns => (EditOp::Delete { at: a }, ins(if b <= a { b } else { b - 1 })),
            SubSub => (sub(a), sub(b)),
            SubIns => (sub(a), ins(b)),
            InsIns => (ins(a), ins(b + 1)),
        }
    }

    /// Materializes the pattern, wildcards as `WILDCARD` bytes.
    pub fn materialize(&self, x: &[u8]) -> Vec<u8> {
        let (base, next) = self.steps();
        next.apply(&base.apply(x))
    }

    /// Wildcard positions in the materialized pattern, ascending.
    pub fn wildcard_positions(&self) -> Wildcards {
        let (base, next) = self.steps();
        let carried = match base {
            EditOp::Substitute { at, .. } | EditOp::Insert { at, .. } => Some(at),
            _ => None,
        };
        match next {
            EditOp::Identity => carried.map_or(Wildcards::None, Wildcards::One),
            EditOp::Delete { at } => match carried {
                None => Wildcards::None,
                Some(p) => Wildcards::One(if p > at { p - 1 } else { p }),
            },
            EditOp::Substitute { at, .. } => match carried {
                None => Wildcards::One(at),
                Some(p) => Wildcards::Two(p.min(at), p.max(at)),
            },
            EditOp::Insert { at, .. } => match carried {
                None => Wildcards::One(at),
                Some(p) => {
                    let p = if p >= at { p + 1 } else { p };
                    Wildcards::Two(p.min(at), p.max(at))
                }
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wildcards {
    None,
    One(usize),
    Two(usize, usize),
}

/// All patterns at cost 1..=k for a query of length `m`, grouped by base
/// edit. Each distinct pattern shape appears exactly once:
///
/// * k = 1: `m` Del, `m` Sub, `m + 1` Ins.
/// * k = 2 adds `C(m,2)` DelDel, `(m-1)^2` DelSub, `m(m-1)` DelIns,
///   `C(m,2)` SubSub, `m^2` SubIns and `C(m+2,2)` InsIns.
///
/// Redundant scripts are dropped: deleting next to an insertion or
/// substitution at the same spot is a single substitution or two adjacent
/// wildcards, which another class already covers.
pub fn enumerate_patterns(m: usize, k: u8) -> Vec<PatternDescriptor> {
    use PatternClass::*;
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    out.extend((0..m).map(|i| PatternDescriptor::new(Del, i, 0)));
    out.extend((0..m).map(|i| PatternDescriptor::new(Sub, i, 0)));
    out.extend((0..=m).map(|g| PatternDescriptor::new(Ins, g, 0)));
    if k < 2 {
        return out;
    }
    for d in 0..m {
        out.extend((d + 1..m).map(|j| PatternDescriptor::new(DelDel, d, j)));
        // an adjacent deleted/substituted pair is one wildcard replacing two
        // characters; keep it once, as "delete left, substitute right"
        out.extend(
            (0..m)
                .filter(|&s| s != d && s + 1 != d)
                .map(|s| PatternDescriptor::new(DelSub, d, s)),
        );
        out.extend(
            (0..=m)
                .filter(|&g| g != d && g != d + 1)
                .map(|g| PatternDescriptor::new(DelIns, d, g)),
        );
    }
    for s in 0..m {
        out.extend((s + 1..m).map(|j| PatternDescriptor::new(SubSub, s, j)));
        out.extend(
            (0..=m)
                .filter(|&g| g != s + 1)
                .map(|g| PatternDescriptor::new(SubIns, s, g)),
        );
    }
    for g1 in 0..=m {
        out.extend((g1..=m).map(|g2| PatternDescriptor::new(InsIns, g1, g2)));
    }
    out
}

/// Scratch string kept equal to `op.apply(base)`. Moving a deletion,
/// insertion or substitution one position to the right, or changing the
/// inserted/substituted character in place, touches at most two bytes;
/// any other transition rebuilds in linear time.
#[derive(Clone, Debug, Default)]
pub struct CandidateBuffer {
    base: Vec<u8>,
    buf: Vec<u8>,
    op: Option<EditOp>,
    rebuilds: usize,
}

impl CandidateBuffer {
    pub fn new(base: &[u8]) -> Self {
        let mut cb = CandidateBuffer::default();
        cb.reset(base);
        cb
    }

    /// Points the buffer at a new base string, reusing the allocations.
    pub fn reset(&mut self, base: &[u8]) {
        self.base.clear();
        self.base.extend_from_slice(base);
        self.op = None;
    }

    pub fn base(&self) -> &[u8] {
        &self.base
    }

    /// Linear-time rebuilds so far.
    pub fn rebuilds(&self) -> usize {
        self.rebuilds
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.buf
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [u8] {
        &mut self.buf
    }

    pub fn apply(&mut self, op: EditOp) -> &[u8] {
        use EditOp::*;
        let stepped = match (self.op, op) {
            (Some(Substitute { at: p, .. }), Substitute { at, ch }) => {
                self.buf[p] = self.base[p];
                self.buf[at] = ch;
                true
            }
            (Some(Delete { at: p }), Delete { at }) if at == p + 1 => {
                self.buf[p] = self.base[p];
                true
            }
            (Some(Delete { at: p }), Delete { at }) if at == p => true,
            (Some(Insert { at: p, .. }), Insert { at, ch }) if at == p + 1 => {
                self.buf[p] = self.base[p];
                self.buf[at] = ch;
                true
            }
            (Some(Insert { at: p, .. }), Insert { at, ch }) if at == p => {
                self.buf[at] = ch;
                true
            }
            (Some(Identity), Identity) => true,
            _ => false,
        };
        if !stepped {
            self.rebuilds += 1;
            self.buf.clear();
            match op {
                Identity => self.buf.extend_from_slice(&self.base),
                Substitute { at, ch } => {
                    self.buf.extend_from_slice(&self.base);
                    self.buf[at] = ch;
                }
                Delete { at } => {
                    self.buf.extend_from_slice(&self.base[..at]);
                    self.buf.extend_from_slice(&self.base[at + 1..]);
                }
                Insert { at, ch } => {
                    self.buf.extend_from_slice(&self.base[..at]);
                    self.buf.push(ch);
                    self.buf.extend_from_slice(&self.base[at..]);
                }
            }
        }
        self.op = Some(op);
        &self.buf
    }
}

/// Work counters of one query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryStats {
    /// Substitution-list lookups, both levels.
    pub lists_probed: usize,
    /// Occupied store slots walked by those lookups.
    pub slots_scanned: usize,
    /// Fully materialized candidate strings.
    pub candidates: usize,
    /// Candidates checked against an existing exact table. Candidates of a
    /// length with no stored word are rejected without probing.
    pub exact_probes: usize,
    /// Lookups that walked past `sigma` slots and fell back to the alphabet.
    pub cap_activations: usize,
}

impl std::ops::AddAssign for QueryStats {
    fn add_assign(&mut self, o: Self) {
        self.lists_probed += o.lists_probed;
        self.slots_scanned += o.slots_scanned;
        self.candidates += o.candidates;
        self.exact_probes += o.exact_probes;
        self.cap_activations += o.cap_activations;
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryResult {
    /// Matching dictionary words, sorted, without duplicates.
    pub matches: Vec<Vec<u8>>,
    pub stats: QueryStats,
}

struct Engine<'a> {
    index: &'a Index,
    stats: QueryStats,
    found: HashSet<Vec<u8>>,
    // powers of both seeds, reaching every position of a pattern
    pow_b: &'a HashContext,
    pow_s: &'a HashContext,
    outer: Vec<u8>,
    inner: Vec<u8>,
}

impl Engine<'_> {
    fn check(&mut self, cand: &[u8], h: HashValue) {
        self.stats.candidates += 1;
        let exact = self.index.exact();
        if !exact.has_table_for(cand.len()) {
            return;
        }
        self.stats.exact_probes += 1;
        if !self.found.contains(cand) && exact.contains_hashed(cand, h) {
            self.found.insert(cand.to_vec());
        }
    }

    fn lookup(&mut self, store: &SubstStore, hb: HashValue, hs: HashValue, out: &mut Vec<u8>) {
        let probe = store.list_query_into(WildcardKeyHashes::new(hb, hs), out);
        self.stats.lists_probed += 1;
        self.stats.slots_scanned += probe.scanned;
        self.stats.cap_activations += probe.capped as usize;
    }

    /// Fills the wildcards of `pattern` from the stores and checks every
    /// completion. Wildcard bytes are restored before returning.
    fn resolve(&mut self, pattern: &mut [u8], wild: Wildcards, hb: HashValue, hs: HashValue) {
        match wild {
            Wildcards::None => self.check(pattern, hb),
            Wildcards::One(p) => {
                let store = self.index.store1().expect("level-1 store");
                let mut chars = std::mem::take(&mut self.inner);
                self.lookup(store, hb, hs, &mut chars);
                let power = self.pow_b.power(p + 1);
                for &c in &chars {
                    pattern[p] = c;
                    self.check(pattern, hb.resubstitute(power, WILDCARD_VALUE, symbol_value(c)));
                }
                pattern[p] = WILDCARD;
                self.inner = chars;
            }
            Wildcards::Two(p1, p2) => {
                let level2 = self.index.store2().expect("level-2 store");
                let level1 = self.index.store1().expect("level-1 store");
                let mut firsts = std::mem::take(&mut self.outer);
                let mut seconds = std::mem::take(&mut self.inner);
                self.lookup(level2, hb, hs, &mut firsts);
                let (pb1, ps1) = (self.pow_b.power(p1 + 1), self.pow_s.power(p1 + 1));
                let pb2 = self.pow_b.power(p2 + 1);
                for &c1 in &firsts {
                    pattern[p1] = c1;
                    let v1 = symbol_value(c1);
                    let hb1 = hb.resubstitute(pb1, WILDCARD_VALUE, v1);
                    let hs1 = hs.resubstitute(ps1, WILDCARD_VALUE, v1);
                    self.lookup(level1, hb1, hs1, &mut seconds);
                    for &c2 in &seconds {
                        pattern[p2] = c2;
                        self.check(pattern, hb1.resubstitute(pb2, WILDCARD_VALUE, symbol_value(c2)));
                    }
                    pattern[p2] = WILDCARD;
                }
                pattern[p1] = WILDCARD;
                self.outer = firsts;
                self.inner = seconds;
            }
        }
    }
}

/// All dictionary words within edit distance `k` of `x`.
pub fn query(index: &Index, x: &[u8], k: u8) -> Result<QueryResult> {
    if x.contains(&0) {
        return Err(Error::InvalidPattern);
    }
    if k > index.config().errors {
        return Err(Error::Unsupported(format!(
            "k = {k} on an index built for {} error(s)",
            index.config().errors
        )));
    }
    let seeds = index.seeds();
    let base_b = HashContext::new(x, seeds.bucket);
    let base_s = HashContext::new(x, seeds.signature);
    // Patterns reach length m + 2, so weights up to r^(m+2) are needed;
    // the base contexts carry exactly that many powers.
    let mut engine = Engine {
        index,
        stats: QueryStats::default(),
        found: HashSet::new(),
        pow_b: &base_b,
        pow_s: &base_s,
        outer: Vec::new(),
        inner: Vec::new(),
    };
    engine.check(x, base_b.total());

    let mut current_base = EditOp::Identity;
    let mut ctx_b = base_b.clone();
    let mut ctx_s = base_s.clone();
    let mut buffer = CandidateBuffer::new(x);
    for desc in enumerate_patterns(x.len(), k) {
        let (base, next) = desc.steps();
        if base != current_base {
            let y = base.apply(x);
            ctx_b = HashContext::new(&y, seeds.bucket);
            ctx_s = HashContext::new(&y, seeds.signature);
            buffer.reset(&y);
            current_base = base;
        }
        let hb = ctx_b.edit_hash(next);
        let hs = ctx_s.edit_hash(next);
        buffer.apply(next);
        engine.resolve(buffer.as_mut_slice(), desc.wildcard_positions(), hb, hs);
    }

    let mut matches: Vec<Vec<u8>> = engine.found.into_iter().collect();
    matches.sort();
    Ok(QueryResult {
        matches,
        stats: engine.stats,
    })
}
