//! Exact enumeration of rooted labeled trees on `{0,..,n}` refined by the
//! size of the maximal decreasing subtree.
//!
//! The refinement counts are computed by five independent routes — brute
//! force over all `(n+1)^n` trees, a Stirling-number expansion, inclusion-
//! exclusion over function images, a decomposition into local minimum trees,
//! and an inverse-matrix identity — and the crate carries the machinery to
//! cross-verify them all exactly: arbitrary-precision counts ([`counting`]),
//! the tree model and enumeration oracle ([`trees`]), equinumerous function
//! families with explicit bijections ([`maps`]), exact Pascal-matrix linear
//! algebra ([`linalg`]), and truncated bivariate generating functions over
//! rationals ([`series`]).

pub mod counting;
pub mod error;
pub mod linalg;
pub mod maps;
pub mod series;
pub mod trees;

pub use error::{Error, Result};
