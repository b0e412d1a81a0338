//! Exact computations with finite groupoids: classifying spaces as
//! truncated semi-simplicial sets, integral homology via Smith normal form,
//! principal bundles over finite ordered simplicial complexes in cocycle
//! form, and the structural checks tying them together (contractibility of
//! the universal total object, Morita invariance of the homology of the
//! classifying space, concordance classification of bundles).
//!
//! Everything is integer-exact and deterministic: ids are sorted
//! lexicographically, matrices are diagonalized over arbitrary-precision
//! integers, and identical inputs produce byte-identical reports.

pub mod bundles;
pub mod classifying;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod groupoid;
pub mod simplicial;

pub use error::{Error, Result};
