//! A workbench for finite commutative residuated lattices.
//!
//! The crate revolves around [`FiniteAlgebra`]: a finite commutative
//! residuated lattice (optionally with an involution) given by its order
//! matrix, fusion table and neutral element.  Everything else is derived and
//! re-checked: the residual, the lattice operations, classification flags,
//! deductive filters and their congruences, the standard constructions
//! (Sugihara chains, lexicographic chain sums, reflections, rigorous
//! extensions), homomorphism search, and the structural decompositions that
//! invert the constructions.
//!
//! All operations are pure; algebras are immutable after validation.

pub mod algebra;
pub mod classify;
pub mod construct;
pub mod corpus;
pub mod filter;
pub mod iso;
pub mod morphism;
pub mod set;
pub mod structure;
pub mod term;

pub use algebra::{Elem, FiniteAlgebra, RawAlgebra, ValidateError};
pub use classify::{classify, negative_cone, ClassificationReport, Flag};
pub use morphism::Homomorphism;
pub use set::ElemSet;
pub use term::Term;
