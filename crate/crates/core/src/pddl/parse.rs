use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::model::{
    ActionSchema, DomainModel, LiftedAtom, PredicateSchema, ProblemModel, Proposition,
    Requirement,
};
use super::ParseError;
use crate::sexpr::{self, SExpr};

const CONNECTIVES: &[&str] = &[
    "not", "or", "imply", "exists", "forall", "when", "=", "increase", "decrease", "assign",
    "preference", "either",
];

fn syntax(message: impl Into<String>, offset: usize) -> ParseError {
    ParseError::Syntax {
        message: message.into(),
        offset,
    }
}

fn unsupported(token: impl Into<String>, offset: usize) -> ParseError {
    ParseError::UnsupportedFeature {
        token: token.into(),
        offset,
    }
}

fn expect_list<'a>(e: &'a SExpr, what: &str) -> Result<&'a [SExpr], ParseError> {
    e.as_list()
        .ok_or_else(|| syntax(alloc::format!("expected {what}, found `{}`", e.describe()), e.offset()))
}

fn expect_atom<'a>(e: &'a SExpr, what: &str) -> Result<&'a str, ParseError> {
    e.as_atom()
        .ok_or_else(|| syntax(alloc::format!("expected {what}, found `{}`", e.describe()), e.offset()))
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty() && !s.starts_with('?') && !s.starts_with(':') && s != "-"
}

/// Splits `(define (<kind> NAME) rest...)` and returns `(NAME, rest)`.
fn define_header<'a>(root: &'a SExpr, kind: &str) -> Result<(&'a str, &'a [SExpr]), ParseError> {
    let items = expect_list(root, "`(define ...)`")?;
    match items.first().and_then(SExpr::as_atom) {
        Some("define") => {}
        _ => return Err(syntax("expected `define`", root.offset())),
    }
    let header = items
        .get(1)
        .ok_or_else(|| syntax(alloc::format!("missing `({kind} ...)` header"), root.offset()))?;
    let header_items = expect_list(header, "definition header")?;
    match header_items.first().and_then(SExpr::as_atom) {
        Some(k) if k == kind => {}
        _ => {
            return Err(syntax(
                alloc::format!("expected `({kind} NAME)`, found `{}`", header.describe()),
                header.offset(),
            ))
        }
    }
    if header_items.len() != 2 {
        return Err(syntax(alloc::format!("expected `({kind} NAME)`"), header.offset()));
    }
    let name = expect_atom(&header_items[1], "a name")?;
    if !is_identifier(name) {
        return Err(syntax(alloc::format!("invalid name `{name}`"), header_items[1].offset()));
    }
    Ok((name, &items[2..]))
}

/// Parses a domain definition restricted to `:strips`.
pub fn parse_domain(text: &str) -> Result<DomainModel, ParseError> {
    let root = sexpr::parse_one(text)?;
    let (name, sections) = define_header(&root, "domain")?;

    let mut requirements = BTreeSet::new();
    let mut predicates: Vec<PredicateSchema> = Vec::new();
    let mut action_exprs = Vec::new();
    let mut seen_sections = BTreeSet::new();

    for section in sections {
        let items = expect_list(section, "a domain section")?;
        let Some(head) = items.first().and_then(SExpr::as_atom) else {
            return Err(syntax("expected a section keyword", section.offset()));
        };
        if head != ":action" && !seen_sections.insert(head) {
            return Err(ParseError::Duplicate {
                name: head.to_string(),
                offset: section.offset(),
            });
        }
        match head {
            ":requirements" => {
                for r in &items[1..] {
                    let flag = expect_atom(r, "a requirement flag")?;
                    match flag {
                        ":strips" => {
                            requirements.insert(Requirement::Strips);
                        }
                        _ => return Err(unsupported(flag, r.offset())),
                    }
                }
            }
            ":predicates" => {
                for p in &items[1..] {
                    let schema = parse_predicate_schema(p)?;
                    if predicates.iter().any(|q| q.name == schema.name) {
                        return Err(ParseError::Duplicate {
                            name: schema.name,
                            offset: p.offset(),
                        });
                    }
                    predicates.push(schema);
                }
            }
            ":action" => action_exprs.push(section),
            other if other.starts_with(':') => return Err(unsupported(other, section.offset())),
            other => {
                return Err(syntax(
                    alloc::format!("unexpected domain section `{other}`"),
                    section.offset(),
                ))
            }
        }
    }

    let arities: BTreeMap<&str, usize> =
        predicates.iter().map(|p| (p.name.as_str(), p.arity())).collect();
    let mut actions: Vec<ActionSchema> = Vec::new();
    for expr in action_exprs {
        let action = parse_action(expr, &arities)?;
        if actions.iter().any(|a| a.name == action.name) {
            return Err(ParseError::Duplicate {
                name: action.name,
                offset: expr.offset(),
            });
        }
        actions.push(action);
    }

    Ok(DomainModel {
        name: name.to_string(),
        requirements,
        predicates,
        actions,
    })
}

fn parse_predicate_schema(e: &SExpr) -> Result<PredicateSchema, ParseError> {
    let items = expect_list(e, "a predicate declaration")?;
    let name = items
        .first()
        .ok_or_else(|| syntax("empty predicate declaration", e.offset()))
        .and_then(|n| expect_atom(n, "a predicate name"))?;
    if !is_identifier(name) {
        return Err(syntax(alloc::format!("invalid predicate name `{name}`"), e.offset()));
    }
    let mut parameter_names = Vec::new();
    for p in &items[1..] {
        let v = expect_atom(p, "a parameter")?;
        if v == "-" {
            return Err(unsupported(":typing", p.offset()));
        }
        if !v.starts_with('?') {
            return Err(syntax(alloc::format!("expected a variable, found `{v}`"), p.offset()));
        }
        parameter_names.push(v.to_string());
    }
    Ok(PredicateSchema {
        name: name.to_string(),
        parameter_names,
    })
}

fn parse_action(e: &SExpr, arities: &BTreeMap<&str, usize>) -> Result<ActionSchema, ParseError> {
    let items = expect_list(e, "an action")?;
    let name = items
        .get(1)
        .ok_or_else(|| syntax("missing action name", e.offset()))
        .and_then(|n| expect_atom(n, "an action name"))?;
    if !is_identifier(name) {
        return Err(syntax(alloc::format!("invalid action name `{name}`"), items[1].offset()));
    }

    let mut parameters: Vec<String> = Vec::new();
    let mut precondition = None;
    let mut effect = None;
    let mut rest = &items[2..];
    while let Some((key_expr, tail)) = rest.split_first() {
        let key = expect_atom(key_expr, "an action keyword")?;
        let value = tail
            .first()
            .ok_or_else(|| syntax(alloc::format!("missing value for `{key}`"), key_expr.offset()))?;
        match key {
            ":parameters" => {
                for p in expect_list(value, "a parameter list")? {
                    let v = expect_atom(p, "a parameter")?;
                    if v == "-" {
                        return Err(unsupported(":typing", p.offset()));
                    }
                    if !v.starts_with('?') {
                        return Err(syntax(alloc::format!("expected a variable, found `{v}`"), p.offset()));
                    }
                    if parameters.iter().any(|q| q == v) {
                        return Err(ParseError::Duplicate {
                            name: v.to_string(),
                            offset: p.offset(),
                        });
                    }
                    parameters.push(v.to_string());
                }
            }
            ":precondition" => precondition = Some(value),
            ":effect" => effect = Some(value),
            other => return Err(unsupported(other, key_expr.offset())),
        }
        rest = &tail[1..];
    }

    let mut preconditions = Vec::new();
    if let Some(pre) = precondition {
        collect_conjunction(pre, &mut |atom| {
            preconditions.push(lift_atom(atom, &parameters, arities)?);
            Ok(())
        })?;
    }

    let mut add_effects = Vec::new();
    let mut del_effects = Vec::new();
    if let Some(eff) = effect {
        collect_effects(eff, &mut |atom, negated| {
            let lifted = lift_atom(atom, &parameters, arities)?;
            if negated {
                del_effects.push(lifted);
            } else {
                add_effects.push(lifted);
            }
            Ok(())
        })?;
    }
    if let Some(both) = add_effects.iter().find(|a| del_effects.contains(a)) {
        return Err(syntax(
            alloc::format!("`{}` is both added and deleted", both.predicate),
            e.offset(),
        ));
    }

    Ok(ActionSchema {
        name: name.to_string(),
        parameters,
        preconditions,
        add_effects,
        del_effects,
    })
}

/// Walks `()`, an atom, or a (possibly nested) `and` of atoms.
fn collect_conjunction(
    e: &SExpr,
    on_atom: &mut dyn FnMut(&SExpr) -> Result<(), ParseError>,
) -> Result<(), ParseError> {
    let items = expect_list(e, "a condition")?;
    match items.first() {
        None => Ok(()),
        Some(head) => match head.as_atom() {
            Some("and") => {
                for item in &items[1..] {
                    collect_conjunction(item, on_atom)?;
                }
                Ok(())
            }
            Some(c) if CONNECTIVES.contains(&c) => Err(unsupported(c, head.offset())),
            _ => on_atom(e),
        },
    }
}

fn collect_effects(
    e: &SExpr,
    on_atom: &mut dyn FnMut(&SExpr, bool) -> Result<(), ParseError>,
) -> Result<(), ParseError> {
    let items = expect_list(e, "an effect")?;
    match items.first() {
        None => Ok(()),
        Some(head) => match head.as_atom() {
            Some("and") => {
                for item in &items[1..] {
                    collect_effects(item, on_atom)?;
                }
                Ok(())
            }
            Some("not") => {
                if items.len() != 2 {
                    return Err(syntax("`not` takes exactly one atom", e.offset()));
                }
                let inner = &items[1];
                match inner.head() {
                    Some(c) if c == "and" || CONNECTIVES.contains(&c) => {
                        Err(unsupported(c, inner.offset()))
                    }
                    _ => on_atom(inner, true),
                }
            }
            Some(c) if CONNECTIVES.contains(&c) => Err(unsupported(c, head.offset())),
            _ => on_atom(e, false),
        },
    }
}

fn check_arity(
    predicate: &str,
    found: usize,
    offset: usize,
    arities: &BTreeMap<&str, usize>,
) -> Result<(), ParseError> {
    match arities.get(predicate) {
        None => Err(ParseError::UnknownPredicate {
            predicate: predicate.to_string(),
            offset,
        }),
        Some(&expected) if expected != found => Err(ParseError::ArityMismatch {
            predicate: predicate.to_string(),
            expected,
            found,
            offset,
        }),
        Some(_) => Ok(()),
    }
}

fn lift_atom(
    e: &SExpr,
    parameters: &[String],
    arities: &BTreeMap<&str, usize>,
) -> Result<LiftedAtom, ParseError> {
    let items = expect_list(e, "an atom")?;
    let predicate = expect_atom(&items[0], "a predicate name")?;
    check_arity(predicate, items.len() - 1, e.offset(), arities)?;
    let mut args = Vec::with_capacity(items.len() - 1);
    for a in &items[1..] {
        let v = expect_atom(a, "an argument")?;
        if !v.starts_with('?') {
            // Domain constants are not part of the supported subset.
            return Err(unsupported(v, a.offset()));
        }
        let idx = parameters.iter().position(|p| p == v).ok_or_else(|| ParseError::UnknownVariable {
            variable: v.to_string(),
            offset: a.offset(),
        })?;
        args.push(idx);
    }
    Ok(LiftedAtom {
        predicate: predicate.to_string(),
        args,
    })
}

/// Parses a problem against `domain`.
///
/// With `relax_typing`, `name - type` annotations in `:objects` and a
/// `:typing` requirement flag are dropped instead of rejected.
pub fn parse_problem(
    text: &str,
    domain: &DomainModel,
    relax_typing: bool,
) -> Result<ProblemModel, ParseError> {
    let root = sexpr::parse_one(text)?;
    let (name, sections) = define_header(&root, "problem")?;

    let mut by_head: BTreeMap<&str, &SExpr> = BTreeMap::new();
    for section in sections {
        let items = expect_list(section, "a problem section")?;
        let Some(head) = items.first().and_then(SExpr::as_atom) else {
            return Err(syntax("expected a section keyword", section.offset()));
        };
        match head {
            ":domain" | ":requirements" | ":objects" | ":init" | ":goal" => {
                if by_head.insert(head, section).is_some() {
                    return Err(ParseError::Duplicate {
                        name: head.to_string(),
                        offset: section.offset(),
                    });
                }
            }
            other if other.starts_with(':') => return Err(unsupported(other, section.offset())),
            other => {
                return Err(syntax(
                    alloc::format!("unexpected problem section `{other}`"),
                    section.offset(),
                ))
            }
        }
    }

    let domain_section = by_head
        .get(":domain")
        .ok_or_else(|| syntax("missing `(:domain ...)`", root.offset()))?;
    let domain_items = expect_list(domain_section, "a domain reference")?;
    if domain_items.len() != 2 {
        return Err(syntax("expected `(:domain NAME)`", domain_section.offset()));
    }
    let domain_name = expect_atom(&domain_items[1], "a domain name")?;
    if domain_name != domain.name {
        return Err(ParseError::DomainMismatch {
            expected: domain.name.clone(),
            found: domain_name.to_string(),
        });
    }

    if let Some(req) = by_head.get(":requirements") {
        for r in &expect_list(req, "requirements")?[1..] {
            let flag = expect_atom(r, "a requirement flag")?;
            match flag {
                ":strips" => {}
                ":typing" if relax_typing => {}
                _ => return Err(unsupported(flag, r.offset())),
            }
        }
    }

    let mut objects: Vec<String> = Vec::new();
    if let Some(section) = by_head.get(":objects") {
        let items = &expect_list(section, "objects")?[1..];
        let mut i = 0;
        while i < items.len() {
            let tok = expect_atom(&items[i], "an object name")?;
            if tok == "-" {
                if !relax_typing {
                    return Err(unsupported(":typing", items[i].offset()));
                }
                let ty = items
                    .get(i + 1)
                    .ok_or_else(|| syntax("missing type after `-`", items[i].offset()))?;
                expect_atom(ty, "a type name")?;
                i += 2;
                continue;
            }
            if !is_identifier(tok) {
                return Err(syntax(alloc::format!("invalid object name `{tok}`"), items[i].offset()));
            }
            if objects.iter().any(|o| o == tok) {
                return Err(ParseError::Duplicate {
                    name: tok.to_string(),
                    offset: items[i].offset(),
                });
            }
            objects.push(tok.to_string());
            i += 1;
        }
    }

    let arities = domain.arities();
    let object_set: BTreeSet<&str> = objects.iter().map(String::as_str).collect();

    let mut init = BTreeSet::new();
    if let Some(section) = by_head.get(":init") {
        for atom in &expect_list(section, "initial facts")?[1..] {
            if let Some(head) = atom.head() {
                if head == "and" || CONNECTIVES.contains(&head) {
                    return Err(unsupported(head, atom.offset()));
                }
            }
            init.insert(ground_atom(atom, &arities, &object_set)?);
        }
    }

    let goal_section = by_head
        .get(":goal")
        .ok_or_else(|| syntax("missing `(:goal ...)`", root.offset()))?;
    let goal_items = expect_list(goal_section, "a goal")?;
    if goal_items.len() != 2 {
        return Err(syntax("`:goal` takes exactly one formula", goal_section.offset()));
    }
    let mut goal = BTreeSet::new();
    let formula = &goal_items[1];
    match formula.head() {
        Some("and") => {
            for atom in &formula.as_list().unwrap_or(&[])[1..] {
                if let Some(head) = atom.head() {
                    if head == "and" || CONNECTIVES.contains(&head) {
                        return Err(unsupported(head, atom.offset()));
                    }
                }
                goal.insert(ground_atom(atom, &arities, &object_set)?);
            }
        }
        Some(c) if CONNECTIVES.contains(&c) => return Err(unsupported(c, formula.offset())),
        _ => {
            goal.insert(ground_atom(formula, &arities, &object_set)?);
        }
    }

    Ok(ProblemModel {
        name: name.to_string(),
        domain_name: domain_name.to_string(),
        objects,
        init,
        goal,
    })
}

fn ground_atom(
    e: &SExpr,
    arities: &BTreeMap<&str, usize>,
    objects: &BTreeSet<&str>,
) -> Result<Proposition, ParseError> {
    let items = expect_list(e, "an atom")?;
    let first = items.first().ok_or_else(|| syntax("empty atom", e.offset()))?;
    let predicate = expect_atom(first, "a predicate name")?;
    check_arity(predicate, items.len() - 1, e.offset(), arities)?;
    let mut arguments = Vec::with_capacity(items.len() - 1);
    for a in &items[1..] {
        let name = expect_atom(a, "an object name")?;
        if !objects.contains(name) {
            return Err(ParseError::UnknownObject {
                object: name.to_string(),
                offset: a.offset(),
            });
        }
        arguments.push(name.to_string());
    }
    Ok(Proposition {
        predicate: predicate.to_string(),
        arguments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, DomainId};

    const APPENDIX_F: &str = "(define (problem equal_towers_to_equal_towers_5)
        (:domain blocksworld)
        (:requirements :strips)
        (:objects b1 b2 b3 b4 b5)
        (:init (arm-empty) (clear b5) (on b2 b1) (on b3 b2) (on b4 b3) (on b5 b4) (on-table b1))
        (:goal (and (arm-empty) (on-table b1) (on b2 b1) (on b3 b2) (on b4 b3) (on b5 b4) (clear b5))))";

    #[test]
    fn minimal_domain() {
        let d = parse_domain("(define (domain d) (:requirements :strips) (:predicates (p ?x)) )")
            .unwrap();
        assert_eq!(d.name, "d");
        assert_eq!(d.predicates.len(), 1);
        assert_eq!(d.predicates[0].arity(), 1);
        assert!(d.actions.is_empty());
    }

    #[test]
    fn typed_domain_is_rejected() {
        let text = fixtures::domain_text(DomainId::Gripper)
            .replacen("(:predicates", "(:types room ball)\n  (:predicates", 1);
        let err = parse_domain(&text).unwrap_err();
        assert!(matches!(err, ParseError::UnsupportedFeature { ref token, .. } if token == ":types"), "{err:?}");
    }

    #[test]
    fn domain_rejects_non_strips_constructs() {
        let neg = "(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) :precondition (not (p ?x)) :effect (p ?x)))";
        assert!(matches!(parse_domain(neg), Err(ParseError::UnsupportedFeature { ref token, .. }) if token == "not"));
        let req = "(define (domain d) (:requirements :strips :typing) (:predicates (p ?x)))";
        assert!(matches!(parse_domain(req), Err(ParseError::UnsupportedFeature { ref token, .. }) if token == ":typing"));
        let unbound = "(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) :effect (p ?y)))";
        assert!(matches!(parse_domain(unbound), Err(ParseError::UnknownVariable { .. })));
        let arity = "(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) :effect (p ?x ?x)))";
        assert!(matches!(parse_domain(arity), Err(ParseError::ArityMismatch { expected: 1, found: 2, .. })));
    }

    #[test]
    fn appendix_f_counts() {
        let d = fixtures::domain(DomainId::BlocksWorld);
        let p = parse_problem(APPENDIX_F, &d, false).unwrap();
        assert_eq!(p.name, "equal_towers_to_equal_towers_5");
        assert_eq!(p.objects.len(), 5);
        assert_eq!(p.init.len(), 7);
        assert_eq!(p.goal.len(), 7);
    }

    #[test]
    fn empty_goal_and_single_atom_goal() {
        let d = fixtures::domain(DomainId::BlocksWorld);
        let p = parse_problem(
            "(define (problem p) (:domain blocksworld) (:objects a) (:init (arm-empty)) (:goal (and)))",
            &d,
            false,
        )
        .unwrap();
        assert!(p.goal.is_empty());
        let p = parse_problem(
            "(define (problem p) (:domain blocksworld) (:objects a) (:init) (:goal (clear a)))",
            &d,
            false,
        )
        .unwrap();
        assert_eq!(p.goal.len(), 1);
    }

    #[test]
    fn typing_relaxation() {
        let d = fixtures::domain(DomainId::BlocksWorld);
        let text = "(define (problem p) (:domain blocksworld) (:objects b1 - block) (:init (on-table b1)) (:goal (and (on-table b1))))";
        assert!(matches!(
            parse_problem(text, &d, false),
            Err(ParseError::UnsupportedFeature { ref token, .. }) if token == ":typing"
        ));
        let p = parse_problem(text, &d, true).unwrap();
        assert_eq!(p.objects, ["b1"]);
    }

    #[test]
    fn problem_errors() {
        let d = fixtures::domain(DomainId::BlocksWorld);
        let wrap = |body: &str| alloc::format!("(define (problem p) (:domain blocksworld) (:objects a b) {body})");
        let cases: &[(&str, fn(&ParseError) -> bool)] = &[
            ("(:init (on a)) (:goal (and))", |e| matches!(e, ParseError::ArityMismatch { .. })),
            ("(:init (stacked a)) (:goal (and))", |e| matches!(e, ParseError::UnknownPredicate { .. })),
            ("(:init (clear c)) (:goal (and))", |e| matches!(e, ParseError::UnknownObject { .. })),
            ("(:init) (:goal (or (clear a) (clear b)))", |e| matches!(e, ParseError::UnsupportedFeature { .. })),
            ("(:init) (:goal (and (not (clear a))))", |e| matches!(e, ParseError::UnsupportedFeature { .. })),
            ("(:init) (:goal (and (and (clear a))))", |e| matches!(e, ParseError::UnsupportedFeature { .. })),
            ("(:init)", |e| matches!(e, ParseError::Syntax { .. })),
            ("(:init) (:goal (and)) (:metric minimize (total-cost))", |e| matches!(e, ParseError::UnsupportedFeature { .. })),
        ];
        for (body, check) in cases {
            let err = parse_problem(&wrap(body), &d, false).unwrap_err();
            assert!(check(&err), "{body}: {err:?}");
        }
        let mismatch = "(define (problem p) (:domain gripper) (:objects a) (:init) (:goal (and)))";
        assert!(matches!(parse_problem(mismatch, &d, false), Err(ParseError::DomainMismatch { .. })));
    }

    #[test]
    fn duplicates_are_merged() {
        let d = fixtures::domain(DomainId::BlocksWorld);
        let p = parse_problem(
            "(define (problem p) (:domain blocksworld) (:objects a) (:init (clear a) (CLEAR A)) (:goal (and (clear a) (clear a))))",
            &d,
            false,
        )
        .unwrap();
        assert_eq!(p.init.len(), 1);
        assert_eq!(p.goal.len(), 1);
    }

    #[test]
    fn case_insensitive() {
        let d = fixtures::domain(DomainId::BlocksWorld);
        let lower = parse_problem(APPENDIX_F, &d, false).unwrap();
        let upper = parse_problem(&APPENDIX_F.to_uppercase(), &d, false).unwrap();
        assert_eq!(lower, upper);
    }
}
