//! Reference implementations used as ground truth and for comparison: a
//! plain dynamic-programming edit distance, a linear-scan query, and the
//! two-piece partition heuristic for substitution errors.

use std::collections::HashMap;

/// Unit-cost Levenshtein distance over a full `(|a|+1) x (|b|+1)` table.
pub fn levenshtein(a: &[u8], b: &[u8]) -> usize {
    let cols = b.len() + 1;
    let mut d = vec![0usize; (a.len() + 1) * cols];
    for i in 0..=a.len() {
        d[i * cols] = i;
    }
    for j in 0..=b.len() {
        d[j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[(i - 1) * cols + j - 1] + (a[i - 1] != b[j - 1]) as usize;
            let del = d[(i - 1) * cols + j] + 1;
            let ins = d[i * cols + j - 1] + 1;
            d[i * cols + j] = sub.min(del).min(ins);
        }
    }
    d[a.len() * cols + b.len()]
}

/// Every word within distance `k` of `x`, sorted and deduplicated.
pub fn oracle_query<'a, I>(words: I, x: &[u8], k: usize) -> Vec<Vec<u8>>
where
    I: IntoIterator<Item = &'a [u8]>,
{
    let mut out: Vec<Vec<u8>> = words
        .into_iter()
        // the length gap is a lower bound on the distance
        .filter(|w| w.len().abs_diff(x.len()) <= k && levenshtein(w, x) <= k)
        .map(<[u8]>::to_vec)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Splits `w` into a prefix of `floor(n/2)` and a suffix of `ceil(n/2)` bytes.
pub fn split_halves(w: &[u8]) -> (&[u8], &[u8]) {
    w.split_at(w.len() / 2)
}

/// Words listed under their prefix and under their suffix. The two maps are
/// separate, so a prefix never matches a suffix piece. Empty pieces are not
/// indexed.
#[derive(Clone, Debug, Default)]
pub struct PartitionIndex {
    words: Vec<Vec<u8>>,
    prefixes: HashMap<Vec<u8>, Vec<u32>>,
    suffixes: HashMap<Vec<u8>, Vec<u32>>,
}

impl PartitionIndex {
    pub fn word(&self, id: u32) -> &[u8] {
        &self.words[id as usize]
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Lengths of every piece list, prefixes first.
    pub fn list_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.prefixes.values().chain(self.suffixes.values()).map(Vec::len)
    }
}

pub fn build_partition_index<'a, I>(words: I) -> PartitionIndex
where
    I: IntoIterator<Item = &'a [u8]>,
{
    let mut pidx = PartitionIndex::default();
    for w in words {
        let id = pidx.words.len() as u32;
        let (p, s) = split_halves(w);
        if !p.is_empty() {
            pidx.prefixes.entry(p.to_vec()).or_default().push(id);
        }
        if !s.is_empty() {
            pidx.suffixes.entry(s.to_vec()).or_default().push(id);
        }
        pidx.words.push(w.to_vec());
    }
    pidx
}

/// Concatenated candidate lists of the two pieces of `x`; unverified.
pub fn partition_query(pidx: &PartitionIndex, x: &[u8]) -> Vec<u32> {
    let (p, s) = split_halves(x);
    let mut out = Vec::new();
    if let Some(l) = pidx.prefixes.get(p) {
        out.extend_from_slice(l);
    }
    if let Some(l) = pidx.suffixes.get(s) {
        out.extend_from_slice(l);
    }
    out
}

/// Words among the candidates that are within Hamming distance `k` of `x`.
pub fn partition_matches(pidx: &PartitionIndex, x: &[u8], k: usize) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = partition_query(pidx, x)
        .into_iter()
        .map(|id| pidx.word(id))
        .filter(|w| w.len() == x.len() && w.iter().zip(x).filter(|(a, b)| a != b).count() <= k)
        .map(<[u8]>::to_vec)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Average and maximal candidate-list size over `queries`; `(0.0, 0)` when
/// there are none.
pub fn partition_stats<'a, I>(pidx: &PartitionIndex, queries: I) -> (f64, usize)
where
    I: IntoIterator<Item = &'a [u8]>,
{
    let (mut total, mut max, mut n) = (0usize, 0usize, 0usize);
    for q in queries {
        let c = partition_query(pidx, q).len();
        total += c;
        max = max.max(c);
        n += 1;
    }
    if n == 0 {
        (0.0, 0)
    } else {
        (total as f64 / n as f64, max)
    }
}
