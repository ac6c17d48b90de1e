//! Compact approximate string dictionary.
//!
//! An [`Index`] stores a set of byte strings and reports every stored word
//! within edit distance `k <= 2` of a query. It consists of an exact
//! dictionary for membership tests and one or two substitution stores that
//! tell the query engine which characters can fill a wildcard position.
//!
//! ```
//! use editdict::{BuildConfig, Index};
//!
//! let words: Vec<&[u8]> = vec![b"ALABAMA", b"ALASKA"];
//! let cfg = BuildConfig { errors: 2, ..Default::default() };
//! let index = Index::build(words, &cfg).unwrap();
//! let hits = index.query(b"AXABAYA", 2).unwrap();
//! assert_eq!(hits.matches, vec![b"ALABAMA".to_vec()]);
//! ```

mod codec;

pub mod baseline;
pub mod config;
pub mod error;
pub mod exact_dict;
pub mod hashing;
pub mod index;
pub mod io;
pub mod query;
pub mod subst_store;
pub mod succinct;
pub mod workload;

pub use config::{BuildConfig, LoadFactor};
pub use error::{Error, Result};
pub use index::{build_index, Index, SizeReport};
pub use query::{QueryResult, QueryStats};
