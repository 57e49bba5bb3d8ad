//! Markov chains from combinatorial Hopf algebras.
//!
//! The power maps Ψ^a = m^\[a\]∘Δ^\[a\] of a graded connected Hopf algebra, read
//! in a suitable basis and normalized by a^{-n}, are transition matrices of
//! natural "break into a pieces and reassemble" Markov chains: inverse riffle
//! shuffling on the free associative algebra, binomial rock-breaking on
//! symmetric functions, edge-deletion walks on graphs and simplicial
//! complexes. This crate builds those chains in exact rational arithmetic,
//! constructs their full left/right eigenbases, and exposes the closed-form
//! eigenfunctions, stationary and quasi-stationary distributions, absorption
//! probabilities, and samplers.
//!
//! Everything exact stays exact: matrix entries, eigenvector coefficients,
//! and probabilities are `BigRational`s; floating point only appears in
//! Monte-Carlo summary statistics.

pub mod absorb;
pub mod acceptance;
pub mod chain;
pub mod emit;
pub mod error;
pub mod gens;
pub mod hopf;
pub mod instances;
pub mod linalg;
pub mod lyndon;
pub mod ratio;
pub mod shuffle;
pub mod spectral;

pub use error::{HopfError, Result};
pub use gens::{AlgebraKind, BasisElt, GeneratorId, LinComb, Partition};
pub use ratio::Rat;

/// Library version embedded into every emitted artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
