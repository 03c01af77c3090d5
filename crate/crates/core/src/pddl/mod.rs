//! STRIPS subset of PDDL: domain and problem models, parsing, canonical
//! serialization and extraction of problems from free-form text.

mod extract;
mod model;
mod parse;
mod write;

pub use extract::{extract_problem, NotParseable};
pub use model::{
    ActionSchema, DomainModel, LiftedAtom, PredicateSchema, ProblemModel, Proposition,
    Requirement,
};
pub use parse::{parse_domain, parse_problem};
pub use write::serialize_problem;

use alloc::string::String;

/// Errors raised while reading domain or problem text.
///
/// Offsets are byte offsets into the text that was handed to the parser.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { message: String, offset: usize },
    #[error("unsupported feature `{token}` at offset {offset}")]
    UnsupportedFeature { token: String, offset: usize },
    #[error("predicate `{predicate}` takes {expected} argument(s) but {found} given at offset {offset}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
        offset: usize,
    },
    #[error("unknown predicate `{predicate}` at offset {offset}")]
    UnknownPredicate { predicate: String, offset: usize },
    #[error("unknown object `{object}` at offset {offset}")]
    UnknownObject { object: String, offset: usize },
    #[error("unknown variable `{variable}` at offset {offset}")]
    UnknownVariable { variable: String, offset: usize },
    #[error("duplicate declaration of `{name}` at offset {offset}")]
    Duplicate { name: String, offset: usize },
    #[error("problem is written for domain `{found}` but domain `{expected}` was supplied")]
    DomainMismatch { expected: String, found: String },
}
