//! Equivalence of two problems over the same domain.
//!
//! Cheap graph tests settle most pairs. The remaining pairs have their
//! goals completed with [`fullspec`](crate::fullspec) and are compared
//! either as whole problem graphs (objects keep their identity across init
//! and goal) or as separate init and goal scenes (goal objects act as
//! placeholders).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use core::fmt;
use core::time::Duration;

use crate::fullspec::{self, FullSpecError};
use crate::graph::{is_isomorphic, join, to_scene_graphs, SceneGraph};
use crate::pddl::{DomainModel, ProblemModel, Proposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EquivalenceMode {
    pub is_placeholder: bool,
}

impl EquivalenceMode {
    pub const IDENTITY: EquivalenceMode = EquivalenceMode { is_placeholder: false };
    pub const PLACEHOLDER: EquivalenceMode = EquivalenceMode { is_placeholder: true };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EquivalenceOptions {
    /// Skip the early exits and always complete both goals.
    pub force_slow_path: bool,
}

/// Which test decided a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DecisionPath {
    FastObjectCount,
    FastInitMismatch,
    FastProblemIso,
    PlaceholderScenes,
    IdentityProblemGraph,
}

impl DecisionPath {
    pub fn as_str(self) -> &'static str {
        match self {
            DecisionPath::FastObjectCount => "fast-object-count",
            DecisionPath::FastInitMismatch => "fast-init-mismatch",
            DecisionPath::FastProblemIso => "fast-problem-iso",
            DecisionPath::PlaceholderScenes => "placeholder-scenes",
            DecisionPath::IdentityProblemGraph => "identity-problem-graph",
        }
    }
}

impl fmt::Display for DecisionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceVerdict {
    pub equal: bool,
    pub path: DecisionPath,
    /// Set when a goal could not be completed (for instance because it is
    /// contradictory).
    pub diagnostic: Option<String>,
    /// Wall-clock time; zero when built without `std`.
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EquivalenceError {
    #[error("problems use different domains (`{0}` and `{1}`)")]
    DomainMismatch(String, String),
    #[error("no goal completion rules for domain `{0}`")]
    UnknownDomain(String),
}

/// The early decision, if one of the cheap tests applies.
fn fast_check(ia: &SceneGraph, ga: &SceneGraph, ib: &SceneGraph, gb: &SceneGraph) -> Option<(bool, DecisionPath)> {
    if ia.num_objects() != ib.num_objects() {
        return Some((false, DecisionPath::FastObjectCount));
    }
    if !is_isomorphic(ia, ib) {
        return Some((false, DecisionPath::FastInitMismatch));
    }
    if ga.num_propositions() == gb.num_propositions() {
        let pa = join(ia, ga).expect("scenes of one problem share objects");
        let pb = join(ib, gb).expect("scenes of one problem share objects");
        if is_isomorphic(&pa, &pb) {
            return Some((true, DecisionPath::FastProblemIso));
        }
    }
    None
}

/// Whether the pair can be decided without completing goals: object counts
/// differ, initial scenes differ, or the problem graphs already match.
pub fn can_do_fast(ia: &SceneGraph, ga: &SceneGraph, ib: &SceneGraph, gb: &SceneGraph) -> bool {
    fast_check(ia, ga, ib, gb).is_some()
}

/// The verdict of the early tests; only meaningful when [`can_do_fast`]
/// holds (returns `false` otherwise).
pub fn fast_equivalent(ia: &SceneGraph, ga: &SceneGraph, ib: &SceneGraph, gb: &SceneGraph) -> bool {
    fast_check(ia, ga, ib, gb).is_some_and(|(equal, _)| equal)
}

pub fn equivalent(
    a: &ProblemModel,
    b: &ProblemModel,
    mode: EquivalenceMode,
) -> Result<EquivalenceVerdict, EquivalenceError> {
    equivalent_with(a, b, mode, &EquivalenceOptions::default())
}

pub fn equivalent_with(
    a: &ProblemModel,
    b: &ProblemModel,
    mode: EquivalenceMode,
    options: &EquivalenceOptions,
) -> Result<EquivalenceVerdict, EquivalenceError> {
    #[cfg(feature = "std")]
    let started = std::time::Instant::now();
    let mut verdict = decide(a, b, mode, options)?;
    #[cfg(feature = "std")]
    {
        verdict.elapsed = started.elapsed();
    }
    #[cfg(not(feature = "std"))]
    {
        verdict.elapsed = Duration::ZERO;
    }
    Ok(verdict)
}

fn decide(
    a: &ProblemModel,
    b: &ProblemModel,
    mode: EquivalenceMode,
    options: &EquivalenceOptions,
) -> Result<EquivalenceVerdict, EquivalenceError> {
    if a.domain_name != b.domain_name {
        return Err(EquivalenceError::DomainMismatch(a.domain_name.clone(), b.domain_name.clone()));
    }
    let verdict = |equal, path, diagnostic| EquivalenceVerdict {
        equal,
        path,
        diagnostic,
        elapsed: Duration::ZERO,
    };
    let (ia, ga) = to_scene_graphs(a);
    let (ib, gb) = to_scene_graphs(b);
    if !options.force_slow_path {
        if let Some((equal, path)) = fast_check(&ia, &ga, &ib, &gb) {
            return Ok(verdict(equal, path, None));
        }
    }

    let path = if mode.is_placeholder {
        DecisionPath::PlaceholderScenes
    } else {
        DecisionPath::IdentityProblemGraph
    };
    let compare = |ga: &SceneGraph, gb: &SceneGraph| -> bool {
        if mode.is_placeholder {
            is_isomorphic(&ia, &ib) && is_isomorphic(ga, gb)
        } else {
            let pa = join(&ia, ga).expect("scenes of one problem share objects");
            let pb = join(&ib, gb).expect("scenes of one problem share objects");
            is_isomorphic(&pa, &pb)
        }
    };

    let fa = fullspec::fully_specify(&a.domain_name, &ia, &ga);
    let fb = fullspec::fully_specify(&b.domain_name, &ib, &gb);
    match (fa, fb) {
        (Err(FullSpecError::UnknownDomain(d)), _) | (_, Err(FullSpecError::UnknownDomain(d))) => {
            Err(EquivalenceError::UnknownDomain(d))
        }
        (Ok(fa), Ok(fb)) => Ok(verdict(compare(&fa.scene(), &fb.scene()), path, None)),
        // Two unsatisfiable specifications have no goal states to compare;
        // they are treated as equal only when written identically up to
        // renaming.
        (Err(ea), Err(eb)) => Ok(verdict(
            compare(&ga, &gb),
            path,
            Some(alloc::format!("first problem: {ea}; second problem: {eb}")),
        )),
        (Err(e), Ok(_)) => Ok(verdict(false, path, Some(alloc::format!("first problem: {e}")))),
        (Ok(_), Err(e)) => Ok(verdict(false, path, Some(alloc::format!("second problem: {e}")))),
    }
}

/// Reference decision by exhaustive search: goals are completed with
/// [`fullspec::fully_specify_oracle`] and every object bijection is tried.
/// Exponential in both the object count and the state space; meant for
/// checking [`equivalent`] on small instances.
pub fn equivalent_oracle(
    domain: &DomainModel,
    a: &ProblemModel,
    b: &ProblemModel,
    mode: EquivalenceMode,
    max_states: usize,
) -> Result<bool, fullspec::OracleError> {
    if a.objects.len() != b.objects.len() {
        return Ok(false);
    }
    let (ga, gb) = match (
        fullspec::fully_specify_oracle(domain, a, max_states),
        fullspec::fully_specify_oracle(domain, b, max_states),
    ) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(fullspec::OracleError::NoReachableGoalState), Err(fullspec::OracleError::NoReachableGoalState)) => {
            (a.goal.clone(), b.goal.clone())
        }
        (Err(e @ fullspec::OracleError::StateSpaceExceeded { .. }), _)
        | (_, Err(e @ fullspec::OracleError::StateSpaceExceeded { .. })) => return Err(e),
        _ => return Ok(false),
    };
    let maps = |x: &BTreeSet<Proposition>, y: &BTreeSet<Proposition>, f: &BTreeMap<String, String>| {
        x.len() == y.len() && x.iter().all(|p| y.contains(&p.renamed(f)))
    };
    let mut init_ok = false;
    let mut goal_ok = false;
    let mut both_ok = false;
    for_each_bijection(&a.objects, &b.objects, &mut |f| {
        let i = maps(&a.init, &b.init, f);
        let g = maps(&ga, &gb, f);
        init_ok |= i;
        goal_ok |= g;
        both_ok |= i && g;
        if mode.is_placeholder {
            init_ok && goal_ok
        } else {
            both_ok
        }
    });
    Ok(if mode.is_placeholder { init_ok && goal_ok } else { both_ok })
}

/// Calls `visit` with every bijection from `from` onto `to` until it
/// returns `true`.
fn for_each_bijection(from: &[String], to: &[String], visit: &mut dyn FnMut(&BTreeMap<String, String>) -> bool) {
    fn go(
        from: &[String],
        to: &[String],
        used: &mut [bool],
        map: &mut BTreeMap<String, String>,
        visit: &mut dyn FnMut(&BTreeMap<String, String>) -> bool,
    ) -> bool {
        let Some(x) = from.get(map.len()) else {
            return visit(map);
        };
        for (j, y) in to.iter().enumerate() {
            if used[j] {
                continue;
            }
            used[j] = true;
            map.insert(x.clone(), y.clone());
            let done = go(from, to, used, map, visit);
            map.remove(x);
            used[j] = false;
            if done {
                return true;
            }
        }
        false
    }
    let mut used = alloc::vec![false; to.len()];
    go(from, to, &mut used, &mut BTreeMap::new(), visit);
}

impl EquivalenceVerdict {
    pub fn summary(&self) -> String {
        let word = if self.equal { "equivalent" } else { "not equivalent" };
        match &self.diagnostic {
            Some(d) => alloc::format!("{word} ({}; {d})", self.path),
            None => alloc::format!("{word} ({})", self.path),
        }
        .to_string()
    }
}
