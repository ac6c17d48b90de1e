use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::BuildConfig;
use crate::error::{Error, Result};
use crate::exact_dict::{prepare_words, ExactDictionary};
use crate::hashing::HashSeed;
use crate::query::{self, QueryResult};
use crate::subst_store::{SeedPair, SubstStore};

/// Exact dictionary plus the substitution stores needed for queries up to
/// `config.errors` edits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Index {
    config: BuildConfig,
    seeds: SeedPair,
    exact: ExactDictionary,
    store1: Option<SubstStore>,
    store2: Option<SubstStore>,
}

/// Payload bytes per component.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SizeReport {
    pub exact: usize,
    pub store1: usize,
    pub store2: usize,
}

impl SizeReport {
    pub fn total(&self) -> usize {
        self.exact + self.store1 + self.store2
    }
}

/// Draws the two polynomial bases from `rng_seed`; they are always distinct.
pub fn derive_seeds(rng_seed: u64) -> SeedPair {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let bucket = HashSeed::random(&mut rng);
    let mut signature = HashSeed::random(&mut rng);
    while signature == bucket {
        signature = HashSeed::random(&mut rng);
    }
    SeedPair { bucket, signature }
}

/// Builds an index over `words`; duplicates are dropped, empty words and
/// words containing a zero byte are rejected.
pub fn build_index<'a, I>(words: I, config: &BuildConfig) -> Result<Index>
where
    I: IntoIterator<Item = &'a [u8]>,
{
    config.validate()?;
    let words = prepare_words(words)?;
    let seeds = derive_seeds(config.rng_seed);
    let exact = ExactDictionary::build_prepared(
        &words,
        config.load_factor,
        config.beta,
        seeds.bucket,
        config.delta,
    )?;
    let store = |level: u8| -> Result<Option<SubstStore>> {
        if config.errors < level {
            return Ok(None);
        }
        SubstStore::build(&words, level, config.load_factor, config.use_signatures, seeds).map(Some)
    };
    let mut index = Index {
        config: config.clone(),
        seeds,
        exact,
        store1: store(1)?,
        store2: store(2)?,
    };
    if config.compact {
        index.compact();
    }
    Ok(index)
}

impl Index {
    pub fn build<'a, I>(words: I, config: &BuildConfig) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [u8]>,
    {
        build_index(words, config)
    }

    pub(crate) fn from_parts(
        config: BuildConfig,
        seeds: SeedPair,
        exact: ExactDictionary,
        store1: Option<SubstStore>,
        store2: Option<SubstStore>,
    ) -> Result<Self> {
        if store1.is_some() != (config.errors >= 1) || store2.is_some() != (config.errors >= 2) {
            return Err(Error::Corrupt("store set does not match error level".into()));
        }
        for (s, level) in [(&store1, 1u8), (&store2, 2)] {
            if let Some(s) = s {
                if s.level() != level
                    || s.has_signatures() != config.use_signatures
                    || s.is_compacted() != config.compact
                {
                    return Err(Error::Corrupt(format!("level-{level} store header")));
                }
            }
        }
        if exact.is_compacted() != config.compact {
            return Err(Error::Corrupt("exact dictionary compaction flag".into()));
        }
        Ok(Index { config, seeds, exact, store1, store2 })
    }

    pub fn config(&self) -> &BuildConfig {
        &self.config
    }

    pub fn seeds(&self) -> SeedPair {
        self.seeds
    }

    pub fn exact(&self) -> &ExactDictionary {
        &self.exact
    }

    pub fn store1(&self) -> Option<&SubstStore> {
        self.store1.as_ref()
    }

    pub fn store2(&self) -> Option<&SubstStore> {
        self.store2.as_ref()
    }

    pub fn word_count(&self) -> usize {
        self.exact.word_count()
    }

    pub fn is_compacted(&self) -> bool {
        self.config.compact
    }

    pub fn contains(&self, w: &[u8]) -> bool {
        self.exact.contains(w)
    }

    /// Exact membership; the final filter every query candidate passes.
    pub fn check_candidate(&self, w: &[u8]) -> bool {
        !w.is_empty() && !w.contains(&0) && self.exact.contains(w)
    }

    /// Adds one word to every table. Returns false if it was already
    /// present. Nothing is modified when any table would pass its ceiling.
    pub fn insert(&mut self, w: &[u8]) -> Result<bool> {
        if self.config.compact {
            return Err(Error::Unsupported("insert into a compacted index".into()));
        }
        if self.exact.contains(w) {
            return Ok(false);
        }
        self.exact.check_insert(w)?;
        for s in [&self.store1, &self.store2].into_iter().flatten() {
            s.check_insert(w)?;
        }
        self.exact.insert(w)?;
        for s in [&mut self.store1, &mut self.store2].into_iter().flatten() {
            s.insert_entries(w)?;
        }
        Ok(true)
    }

    /// Replaces every table by its compacted form. Irreversible; later
    /// inserts fail.
    pub fn compact(&mut self) {
        self.exact.compact();
        for s in [&mut self.store1, &mut self.store2].into_iter().flatten() {
            s.compact(self.config.delta);
        }
        self.config.compact = true;
    }

    pub fn query(&self, x: &[u8], k: u8) -> Result<QueryResult> {
        query::query(self, x, k)
    }

    pub fn sizes(&self) -> SizeReport {
        SizeReport {
            exact: self.exact.stored_bytes(),
            store1: self.store1.as_ref().map_or(0, |s| s.stored_bytes()),
            store2: self.store2.as_ref().map_or(0, |s| s.stored_bytes()),
        }
    }
}
