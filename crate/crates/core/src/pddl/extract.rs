use alloc::string::String;

use super::model::{DomainModel, ProblemModel};
use super::{parse_problem, ParseError};
use crate::sexpr;

/// No `(define (problem ...))` span in the text could be parsed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no parseable problem found ({candidates} candidate span(s){})", last_error_suffix(.last_error))]
pub struct NotParseable {
    pub candidates: usize,
    /// Problem definitions whose parentheses never close.
    pub unbalanced: usize,
    /// Error from the last candidate tried, if there was one.
    pub last_error: Option<ParseError>,
}

fn last_error_suffix(e: &Option<ParseError>) -> String {
    match e {
        Some(e) => alloc::format!("; last error: {e}"),
        None => String::new(),
    }
}

/// Pulls a problem out of free-form text such as a chat response with
/// prose and code fences.
///
/// Candidate spans are balanced parenthesised regions that start with
/// `(define (problem`; they are tried left to right and the first that
/// parses wins.
pub fn extract_problem(
    raw: &str,
    domain: &DomainModel,
    relax_typing: bool,
) -> Result<ProblemModel, NotParseable> {
    let (spans, unbalanced) = sexpr::problem_spans(raw);
    let mut last_error = None;
    for &(start, end) in &spans {
        match parse_problem(&raw[start..end], domain, relax_typing) {
            Ok(p) => return Ok(p),
            Err(e) => last_error = Some(e),
        }
    }
    Err(NotParseable {
        candidates: spans.len(),
        unbalanced,
        last_error,
    })
}
