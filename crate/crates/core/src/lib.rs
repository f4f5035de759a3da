//! Strongly possible keys and functional dependencies over tables with
//! NULLs, with exact g3 (rows to remove) and g5 (rows to add) measures.
//!
//! ```
//! use spapprox::gen::fixture;
//! use spapprox::spkey::{check_spkey, g3_spkey, g5_spkey};
//!
//! let t = fixture("table2").unwrap();
//! let key = t.schema().all();
//! assert!(!check_spkey(&t, &key)?.holds);
//! assert_eq!(g3_spkey(&t, &key)?.value.to_string(), "1/2");
//! assert_eq!(g5_spkey(&t, &key)?.value.to_string(), "1/4");
//! # Ok::<(), spapprox::error::Error>(())
//! ```
//!
//! Keys are decided by bipartite matching in polynomial time. FDs and key
//! systems go through an exact backtracking search bounded by
//! [`measure::SearchLimits`]. [`oracle`] recomputes everything by brute
//! force for small tables and [`certify`] re-checks certificates.

pub mod certify;
pub mod constraint;
pub mod domains;
pub mod error;
pub mod gen;
pub mod keysystem;
pub mod matching;
pub mod measure;
pub mod ops;
pub mod oracle;
pub(crate) mod search;
pub mod spfd;
pub mod spkey;
pub mod table;

// The guide's Rust snippets run as doc-tests from here.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/worlds.md")]
    mod worlds {}
    #[doc = include_str!("../../../book/src/library.md")]
    mod library {}
    #[doc = include_str!("../../../book/src/algorithms.md")]
    mod algorithms {}
}
