use alloc::string::String;
use core::fmt::Write;

use super::model::ProblemModel;

/// Renders `problem` as canonical PDDL text.
///
/// Objects keep their declaration order; init and goal propositions are
/// written one per line in sorted order. Parsing the output against the
/// same domain gives back an equal model.
pub fn serialize_problem(problem: &ProblemModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (problem {})", problem.name);
    let _ = writeln!(out, "  (:domain {})", problem.domain_name);
    out.push_str("  (:requirements :strips)\n");
    out.push_str("  (:objects");
    for o in &problem.objects {
        out.push(' ');
        out.push_str(o);
    }
    out.push_str(")\n");
    out.push_str("  (:init");
    for p in &problem.init {
        let _ = write!(out, "\n    {p}");
    }
    out.push_str(")\n");
    if problem.goal.is_empty() {
        out.push_str("  (:goal (and))\n");
    } else {
        out.push_str("  (:goal (and");
        for p in &problem.goal {
            let _ = write!(out, "\n    {p}");
        }
        out.push_str("))\n");
    }
    out.push_str(")\n");
    out
}
