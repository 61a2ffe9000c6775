//! Exact, brute-force-backed order theory at desk scale: finite posets and
//! their dimension, products of chains and the uniqueness of their canonical
//! realizer pair, amalgamation analysis with the six-point counterexample,
//! staged construction of a generic permutation with its two-dimensional
//! poset reduct, and monomorphic/interval decomposition machinery with class
//! profiles.
//!
//! Every numeric claim is produced by exhaustive search within documented
//! bounds; wherever a faster route exists it is cross-checked against the
//! blunt enumeration in the test suite.

pub mod amalg;
pub mod classes;
pub mod cli;
pub mod decomp;
pub mod dimension;
pub mod error;
pub mod generic;
pub mod products;
pub mod relcore;

pub use error::{Error, Result};
