//! Finite-model workbench for (topological) universal algebra.
//!
//! Algebraic theories and finite models are written in a small DSL (see
//! [`syntax`]) and every construction is checked by exhaustive computation:
//! kernel pairs and quotients, regular factorizations, clones of term
//! operations and Maltsev/protomodularity witnesses, finite topological
//! algebras, semidirect products and split points, and instance harnesses for
//! the five, split-five, nine and Barr-Kock lemmas.
//!
//! Exhaustive searches run on the rayon pool when the `parallel` feature is
//! enabled (the default) and fall back to plain iterators otherwise. Results
//! are identical either way: every search reports the first witness in a fixed
//! order.

pub mod algebra;
pub mod congruence;
pub mod corpus;
mod error;
mod exec;
pub mod group;
pub mod lemmas;
pub mod semidirect;
pub mod sets;
pub mod syntax;
pub mod topalg;
pub mod topology;
mod verdict;
pub mod witness;

pub use algebra::{FiniteAlgebra, Homomorphism};
pub use congruence::{BinaryRelation, Congruence};
pub use corpus::Registry;
pub use error::{Error, Result};
pub use sets::Subset;
pub use syntax::{Declaration, Equation, Signature, Term, Theory};
pub use topology::FiniteTopology;
pub use verdict::Verdict;
