//! Semantic equivalence checking for STRIPS PDDL problems.
//!
//! Problems are turned into attributed scene graphs, their goals are
//! completed with every proposition that holds in all reachable goal states,
//! and the resulting graphs are compared up to object renaming. The crate
//! also carries the three benchmark domains (Blocks World, Gripper and a
//! simplified Floor Tile), planners used to decide solvability, and a
//! procedural problem generator with text rendering.
//!
//! Everything here is pure computation and builds without `std`
//! (`default-features = false`); file formats and the command line live in
//! the `pddleq` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod equivalence;
pub mod fixtures;
pub mod fullspec;
pub mod gen;
pub mod graph;
pub mod pddl;
pub mod planning;
mod sexpr;

pub use fixtures::DomainId;
pub use pddl::{DomainModel, ParseError, ProblemModel, Proposition};
