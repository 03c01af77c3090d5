//! Minimal s-expression reader used by the PDDL front end.
//!
//! Atoms are lowercased on read; `;` starts a comment that runs to the end
//! of the line. Every node remembers the byte offset where it starts so that
//! parse errors can point back into the source.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::pddl::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum SExpr {
    Atom { text: String, offset: usize },
    List { items: Vec<SExpr>, offset: usize },
}

impl SExpr {
    pub(crate) fn offset(&self) -> usize {
        match self {
            SExpr::Atom { offset, .. } | SExpr::List { offset, .. } => *offset,
        }
    }

    pub(crate) fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom { text, .. } => Some(text),
            SExpr::List { .. } => None,
        }
    }

    pub(crate) fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List { items, .. } => Some(items),
            SExpr::Atom { .. } => None,
        }
    }

    /// Head atom of a list, if the list is non-empty and starts with an atom.
    pub(crate) fn head(&self) -> Option<&str> {
        self.as_list().and_then(|items| items.first()).and_then(SExpr::as_atom)
    }

    /// Short rendering for error messages.
    pub(crate) fn describe(&self) -> String {
        match self {
            SExpr::Atom { text, .. } => text.clone(),
            SExpr::List { items, .. } => match items.first().and_then(SExpr::as_atom) {
                Some(head) => alloc::format!("({head} ...)"),
                None => "(...)".to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token<'a> {
    Open(usize),
    Close(usize),
    Atom(&'a str, usize),
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
        } else if b == b';' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
        } else if b == b'(' {
            tokens.push(Token::Open(i));
            i += 1;
        } else if b == b')' {
            tokens.push(Token::Close(i));
            i += 1;
        } else {
            let start = i;
            while i < bytes.len() {
                let c = bytes[i];
                if c.is_ascii_whitespace() || c == b'(' || c == b')' || c == b';' {
                    break;
                }
                // Multi-byte UTF-8 sequences never contain ASCII bytes, so
                // stopping on ASCII delimiters keeps `start..i` on char
                // boundaries.
                i += 1;
            }
            tokens.push(Token::Atom(&text[start..i], start));
        }
    }
    tokens
}

/// Reads exactly one s-expression spanning the whole input.
pub(crate) fn parse_one(text: &str) -> Result<SExpr, ParseError> {
    let tokens = tokenize(text);
    let mut pos = 0;
    let expr = match tokens.first() {
        None => {
            return Err(ParseError::Syntax {
                message: "empty input".to_string(),
                offset: 0,
            })
        }
        Some(_) => read(&tokens, &mut pos, text.len())?,
    };
    if let Some(extra) = tokens.get(pos) {
        let offset = match *extra {
            Token::Open(o) | Token::Close(o) | Token::Atom(_, o) => o,
        };
        return Err(ParseError::Syntax {
            message: "unexpected trailing input".to_string(),
            offset,
        });
    }
    Ok(expr)
}

fn read(tokens: &[Token<'_>], pos: &mut usize, end: usize) -> Result<SExpr, ParseError> {
    match tokens.get(*pos) {
        None => Err(ParseError::Syntax {
            message: "unexpected end of input".to_string(),
            offset: end,
        }),
        Some(Token::Close(offset)) => Err(ParseError::Syntax {
            message: "unbalanced `)`".to_string(),
            offset: *offset,
        }),
        Some(Token::Atom(text, offset)) => {
            *pos += 1;
            Ok(SExpr::Atom {
                text: text.to_lowercase(),
                offset: *offset,
            })
        }
        Some(Token::Open(offset)) => {
            let offset = *offset;
            *pos += 1;
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => {
                        return Err(ParseError::Syntax {
                            message: "missing `)`".to_string(),
                            offset,
                        })
                    }
                    Some(Token::Close(_)) => {
                        *pos += 1;
                        return Ok(SExpr::List { items, offset });
                    }
                    Some(_) => items.push(read(tokens, pos, end)?),
                }
            }
        }
    }
}

/// Byte ranges of balanced parenthesised spans that open with
/// `(define (problem`, in order of their opening parenthesis.
///
/// Comments are respected while matching parentheses, so a `)` inside a
/// `;` comment does not close a span.
pub(crate) fn problem_spans(text: &str) -> (Vec<(usize, usize)>, usize) {
    let tokens = tokenize(text);
    let mut spans = Vec::new();
    let mut unbalanced = 0;
    for (i, tok) in tokens.iter().enumerate() {
        let Token::Open(start) = *tok else { continue };
        let opens_problem = matches!(tokens.get(i + 1), Some(Token::Atom(a, _)) if a.eq_ignore_ascii_case("define"))
            && matches!(tokens.get(i + 2), Some(Token::Open(_)))
            && matches!(tokens.get(i + 3), Some(Token::Atom(a, _)) if a.eq_ignore_ascii_case("problem"));
        if !opens_problem {
            continue;
        }
        let mut depth = 0usize;
        let found = spans.len();
        for tok in &tokens[i..] {
            match *tok {
                Token::Open(_) => depth += 1,
                Token::Close(close) => {
                    depth -= 1;
                    if depth == 0 {
                        spans.push((start, close + 1));
                        break;
                    }
                }
                Token::Atom(..) => {}
            }
        }
        if spans.len() == found {
            unbalanced += 1;
        }
    }
    (spans, unbalanced)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_and_lowercases() {
        let e = parse_one("(Define (Domain X) ; comment )\n (:predicates))").unwrap();
        let items = e.as_list().unwrap();
        assert_eq!(items[0].as_atom(), Some("define"));
        assert_eq!(items[1].head(), Some("domain"));
        assert_eq!(items[2].head(), Some(":predicates"));
    }

    #[test]
    fn reports_offsets() {
        let err = parse_one("(a (b c)").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                message: "missing `)`".into(),
                offset: 0
            }
        );
        let err = parse_one("(a) b").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 4, .. }));
        let err = parse_one(")").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 0, .. }));
    }

    #[test]
    fn finds_problem_spans() {
        let text = "noise (define (problem a)) more (define (domain d)) (DEFINE (PROBLEM b) (x))";
        let (spans, unbalanced) = problem_spans(text);
        assert_eq!(unbalanced, 0);
        assert_eq!(spans.len(), 2);
        assert_eq!(&text[spans[0].0..spans[0].1], "(define (problem a))");
        assert_eq!(&text[spans[1].0..spans[1].1], "(DEFINE (PROBLEM b) (x))");
    }

    #[test]
    fn unbalanced_problem_span_is_skipped() {
        assert_eq!(problem_spans("(define (problem a) (:objects"), (vec![], 1));
    }
}
