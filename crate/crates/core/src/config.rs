use crate::error::{Error, Result};
use crate::succinct::DEFAULT_DELTA;

pub const DEFAULT_BETA: usize = 16;
pub const MIN_LOAD: f64 = 0.2;
pub const MAX_LOAD: f64 = 0.95;

/// Load factor kept as a rational so capacity arithmetic is exact and
/// identical on every platform: `t = ceil(E * den / num)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LoadFactor {
    num: u16,
    den: u16,
}

impl LoadFactor {
    pub fn new(num: u16, den: u16) -> Result<Self> {
        if den == 0 || num == 0 {
            return Err(Error::InvalidConfig(format!("load factor {num}/{den}")));
        }
        let lf = LoadFactor { num, den };
        let v = lf.as_f64();
        if !(MIN_LOAD - 1e-12..=MAX_LOAD + 1e-12).contains(&v) {
            return Err(Error::InvalidConfig(format!(
                "load factor {v} outside [{MIN_LOAD}, {MAX_LOAD}]"
            )));
        }
        Ok(lf)
    }

    /// Rounds to the nearest thousandth.
    pub fn from_f64(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidConfig(format!("load factor {alpha}")));
        }
        let num = (alpha * 1000.0).round();
        if !(1.0..=1000.0).contains(&num) {
            return Err(Error::InvalidConfig(format!("load factor {alpha}")));
        }
        Self::new(num as u16, 1000)
    }

    pub fn num(self) -> u16 {
        self.num
    }

    pub fn den(self) -> u16 {
        self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Slots for `entries` keys; always leaves at least one slot empty.
    pub fn capacity(self, entries: usize) -> usize {
        let scaled = (entries as u128 * self.den as u128).div_ceil(self.num as u128) as usize;
        scaled.max(entries + 1)
    }
}

impl Default for LoadFactor {
    fn default() -> Self {
        LoadFactor { num: 7, den: 10 }
    }
}

/// Whether a table of `capacity` slots may hold `entries` after an
/// incremental insert: load at most 0.95 and one slot left empty.
pub fn within_insert_ceiling(entries: usize, capacity: usize) -> bool {
    entries < capacity && (entries as u128) * 20 <= (capacity as u128) * 19
}

/// Build parameters of an [`Index`](crate::Index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildConfig {
    /// Highest supported query distance, 0 to 2.
    pub errors: u8,
    pub load_factor: LoadFactor,
    pub use_signatures: bool,
    pub compact: bool,
    /// Words shorter than this are stored inline.
    pub beta: usize,
    /// Data words per partial count in rank bit vectors.
    pub delta: usize,
    /// Seeds both polynomial bases.
    pub rng_seed: u64,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            errors: 1,
            load_factor: LoadFactor::default(),
            use_signatures: true,
            compact: false,
            beta: DEFAULT_BETA,
            delta: DEFAULT_DELTA,
            rng_seed: 0x5eed,
        }
    }
}

impl BuildConfig {
    pub fn validate(&self) -> Result<()> {
        if self.errors > 2 {
            return Err(Error::InvalidConfig(format!(
                "errors must be 0, 1 or 2 (got {})",
                self.errors
            )));
        }
        LoadFactor::new(self.load_factor.num, self.load_factor.den)?;
        if !(1..=255).contains(&self.beta) {
            return Err(Error::InvalidConfig(format!("beta {} outside 1..=255", self.beta)));
        }
        if !(1..=255).contains(&self.delta) {
            return Err(Error::InvalidConfig(format!("delta {} outside 1..=255", self.delta)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capacity_rules() {
        let lf = LoadFactor::from_f64(0.7).unwrap();
        assert_eq!(lf.capacity(0), 1);
        assert_eq!(lf.capacity(7), 10);
        assert_eq!(lf.capacity(8), 12);
        assert_eq!(lf.capacity(70_000), 100_000);
        let tight = LoadFactor::from_f64(0.95).unwrap();
        assert_eq!(tight.capacity(1), 2);
        assert_eq!(tight.capacity(19), 20);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(LoadFactor::from_f64(0.1).is_err());
        assert!(LoadFactor::from_f64(0.99).is_err());
        assert!(LoadFactor::from_f64(f64::NAN).is_err());
        assert!(LoadFactor::from_f64(0.3).is_ok());
        let cfg = BuildConfig { errors: 3, ..Default::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn insert_ceiling() {
        assert!(within_insert_ceiling(95, 100));
        assert!(!within_insert_ceiling(96, 100));
        assert!(!within_insert_ceiling(1, 1));
    }
}
