//! Seeded random-edit query generation shared by benchmarks and verification.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hashing::EditOp;
use crate::subst_store::Alphabet;

/// Applies one uniformly chosen edit (insert, delete or substitute) at a
/// uniform position. Inserted and substituted characters come from
/// `alphabet`; a substitution never keeps the original character. Kinds that
/// cannot apply (deleting from an empty word, substituting over a
/// one-letter alphabet) are redrawn.
pub fn random_edit<R: Rng + ?Sized>(rng: &mut R, w: &[u8], alphabet: &[u8]) -> Vec<u8> {
    assert!(!alphabet.is_empty(), "empty alphabet");
    loop {
        let op = match rng.random_range(0..3) {
            0 => EditOp::Insert {
                at: rng.random_range(0..=w.len()),
                ch: *alphabet.choose(rng).expect("non-empty"),
            },
            1 if !w.is_empty() => EditOp::Delete {
                at: rng.random_range(0..w.len()),
            },
            2 if !w.is_empty() => {
                let at = rng.random_range(0..w.len());
                let others: Vec<u8> = alphabet.iter().copied().filter(|&c| c != w[at]).collect();
                match others.choose(rng) {
                    Some(&ch) => EditOp::Substitute { at, ch },
                    None => continue,
                }
            }
            _ => continue,
        };
        return op.apply(w);
    }
}

/// A uniformly chosen word with `edits` independent random edits applied,
/// so its source word lies within distance `edits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedQuery {
    pub source: usize,
    pub pattern: Vec<u8>,
}

/// `count` queries drawn deterministically from `seed`.
pub fn generate_queries(words: &[&[u8]], count: usize, edits: u8, seed: u64) -> Vec<GeneratedQuery> {
    if words.is_empty() {
        return Vec::new();
    }
    let alphabet: Vec<u8> = Alphabet::from_words(words.iter().copied()).iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let source = rng.random_range(0..words.len());
            let mut pattern = words[source].to_vec();
            for _ in 0..edits {
                pattern = random_edit(&mut rng, &pattern, &alphabet);
            }
            GeneratedQuery { source, pattern }
        })
        .collect()
}
