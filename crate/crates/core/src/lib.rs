//! Markov logic over infinite Herbrand domains.
//!
//! Weighted first-order programs are compiled to weighted clauses, grounded
//! lazily over the (possibly infinite) Herbrand base, and turned into the
//! local conditional distributions of a Gibbsian specification. On top of that
//! the crate offers a uniqueness check based on per-atom interaction sums, a
//! single-site Gibbs sampler with boundary conditions, and a Herbrand
//! truncation procedure for unsatisfiability and entailment of hard
//! knowledge bases.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub mod gibbs;
pub mod herbrand;
pub mod logic;
pub mod sampler;
pub mod sat;
pub mod uniqueness;

pub use error::{Error, Result};
pub use gibbs::{build_volume, conditional, hamiltonian, BoundaryAssignment, ConditionalDistribution, Volume};
pub use herbrand::{AtomId, DeterminacyReport, GroundClause, Herbrand, TermId};
pub use logic::{parse_formula, parse_program, CompileOptions, Formula, Program, Weight, WeightedClause};
