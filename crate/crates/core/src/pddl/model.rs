use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Requirement flags accepted by the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Requirement {
    Strips,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateSchema {
    pub name: String,
    /// Parameter names as written (with the leading `?`); only the count
    /// carries meaning.
    pub parameter_names: Vec<String>,
}

impl PredicateSchema {
    pub fn arity(&self) -> usize {
        self.parameter_names.len()
    }
}

/// An atom inside an action schema. Arguments index into the schema's
/// parameter list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LiftedAtom {
    pub predicate: String,
    pub args: Vec<usize>,
}

impl LiftedAtom {
    pub fn ground(&self, arguments: &[String]) -> Proposition {
        Proposition {
            predicate: self.predicate.clone(),
            arguments: self.args.iter().map(|&i| arguments[i].clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub parameters: Vec<String>,
    pub preconditions: Vec<LiftedAtom>,
    pub add_effects: Vec<LiftedAtom>,
    pub del_effects: Vec<LiftedAtom>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainModel {
    pub name: String,
    pub requirements: BTreeSet<Requirement>,
    pub predicates: Vec<PredicateSchema>,
    pub actions: Vec<ActionSchema>,
}

impl DomainModel {
    pub fn predicate(&self, name: &str) -> Option<&PredicateSchema> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn action(&self, name: &str) -> Option<&ActionSchema> {
        self.actions.iter().find(|a| a.name == name)
    }

    /// Predicates that no action adds or deletes.
    pub fn static_predicates(&self) -> BTreeSet<&str> {
        let mut fluent = BTreeSet::new();
        for a in &self.actions {
            for atom in a.add_effects.iter().chain(&a.del_effects) {
                fluent.insert(atom.predicate.as_str());
            }
        }
        self.predicates
            .iter()
            .map(|p| p.name.as_str())
            .filter(|p| !fluent.contains(p))
            .collect()
    }

    /// Predicates that appear in at least one precondition.
    pub fn precondition_predicates(&self) -> BTreeSet<&str> {
        self.actions
            .iter()
            .flat_map(|a| a.preconditions.iter().map(|p| p.predicate.as_str()))
            .collect()
    }

    pub(crate) fn arities(&self) -> BTreeMap<&str, usize> {
        self.predicates.iter().map(|p| (p.name.as_str(), p.arity())).collect()
    }
}

/// A predicate applied to concrete objects.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Proposition {
    pub predicate: String,
    pub arguments: Vec<String>,
}

impl Proposition {
    pub fn new<P, I, S>(predicate: P, arguments: I) -> Self
    where
        P: Into<String>,
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Proposition {
            predicate: predicate.into(),
            arguments: arguments.into_iter().map(Into::into).collect(),
        }
    }

    /// Applies an object renaming; names missing from the map are kept.
    pub fn renamed(&self, map: &BTreeMap<String, String>) -> Proposition {
        Proposition {
            predicate: self.predicate.clone(),
            arguments: self
                .arguments
                .iter()
                .map(|a| map.get(a).cloned().unwrap_or_else(|| a.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.arguments {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

/// Builds a [`Proposition`] from string literals: `prop!("on", "b1", "b2")`.
#[macro_export]
macro_rules! prop {
    ($pred:expr $(, $arg:expr)* $(,)?) => {{
        let args: &[&str] = &[$($arg),*];
        $crate::pddl::Proposition::new($pred, args.iter().copied())
    }};
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemModel {
    pub name: String,
    pub domain_name: String,
    /// Declared objects, in declaration order.
    pub objects: Vec<String>,
    pub init: BTreeSet<Proposition>,
    pub goal: BTreeSet<Proposition>,
}

impl ProblemModel {
    /// Uniformly renames objects (in declarations, init and goal).
    pub fn renamed(&self, map: &BTreeMap<String, String>) -> ProblemModel {
        ProblemModel {
            name: self.name.clone(),
            domain_name: self.domain_name.clone(),
            objects: self
                .objects
                .iter()
                .map(|o| map.get(o).cloned().unwrap_or_else(|| o.clone()))
                .collect(),
            init: self.init.iter().map(|p| p.renamed(map)).collect(),
            goal: self.goal.iter().map(|p| p.renamed(map)).collect(),
        }
    }

    pub fn with_goal(&self, goal: BTreeSet<Proposition>) -> ProblemModel {
        ProblemModel {
            goal,
            ..self.clone()
        }
    }

    /// `|init| + |goal|`, the size measure used for dataset statistics.
    pub fn num_propositions(&self) -> usize {
        self.init.len() + self.goal.len()
    }
}
