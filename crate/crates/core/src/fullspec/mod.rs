//! Goal completion: the propositions that hold in every reachable state
//! satisfying a goal.
//!
//! Each bundled domain has a rule system that computes the completion
//! directly. [`fully_specify_oracle`] computes the same set by exhaustive
//! search and is meant for testing the rules on small instances.

mod blocksworld;
mod floortile;
mod gripper;

pub(crate) use blocksworld::{completion as blocksworld_completion, validate_init as blocksworld_init_check};
pub(crate) use gripper::{demands as gripper_demands, Place as GripperPlace, World as GripperWorld};

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::fixtures::DomainId;
use crate::graph::{Scene, SceneGraph};
use crate::pddl::{DomainModel, ProblemModel, Proposition};
use crate::planning::ground::GroundTask;
use crate::planning::search::{explore, CapExceeded};

/// Default cap on the number of states the oracle may visit.
pub const DEFAULT_MAX_STATES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FullSpecError {
    #[error("no full-specification rules for domain `{0}`")]
    UnknownDomain(String),
    /// No reachable state satisfies the goal.
    #[error("inconsistent goal: {0}")]
    InconsistentGoal(String),
    /// The initial state is not a well-formed state of the domain, so the
    /// rules do not apply.
    #[error("malformed initial state: {0}")]
    InvalidInit(String),
}

/// A goal scene plus the propositions it implicitly fixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullySpecifiedGoal {
    pub base: SceneGraph,
    /// Propositions true in every reachable goal state but absent from
    /// `base`.
    pub added: BTreeSet<Proposition>,
}

impl FullySpecifiedGoal {
    /// Stated and inferred propositions together.
    pub fn propositions(&self) -> BTreeSet<Proposition> {
        let mut all = self.base.propositions();
        all.extend(self.added.iter().cloned());
        all
    }

    /// The completed goal as a scene graph.
    pub fn scene(&self) -> SceneGraph {
        let objects: Vec<String> = self.base.object_names().map(str::to_string).collect();
        SceneGraph::new(Scene::Goal, &objects, &self.propositions())
    }
}

/// Completes `goal` (over the same objects as `init`) for one of the
/// bundled domains, named as in its PDDL file.
pub fn fully_specify(
    domain: &str,
    init: &SceneGraph,
    goal: &SceneGraph,
) -> Result<FullySpecifiedGoal, FullSpecError> {
    let id = DomainId::from_name(domain).ok_or_else(|| FullSpecError::UnknownDomain(domain.to_string()))?;
    let objects: Vec<String> = init.object_names().map(str::to_string).collect();
    let stated = goal.propositions();
    let added = complete(id, &objects, &init.propositions(), &stated)?;
    Ok(FullySpecifiedGoal {
        base: goal.clone(),
        added,
    })
}

/// Rule-based completion on plain proposition sets. Returns only the
/// propositions missing from `goal`.
pub fn complete(
    domain: DomainId,
    objects: &[String],
    init: &BTreeSet<Proposition>,
    goal: &BTreeSet<Proposition>,
) -> Result<BTreeSet<Proposition>, FullSpecError> {
    let mut full = goal.clone();
    // Each rule system is exact in one pass; looping just makes the fixed
    // point explicit.
    loop {
        let more = match domain {
            DomainId::BlocksWorld => blocksworld::forced(objects, init, &full)?,
            DomainId::Gripper => gripper::forced(objects, init, &full)?,
            DomainId::FloorTile => floortile::forced(objects, init, &full)?,
        };
        let before = full.len();
        full.extend(more);
        if full.len() == before {
            break;
        }
    }
    Ok(full.difference(goal).cloned().collect())
}

/// Convenience wrapper over a whole problem.
pub fn fully_specify_problem(
    domain: DomainId,
    problem: &ProblemModel,
) -> Result<BTreeSet<Proposition>, FullSpecError> {
    complete(domain, &problem.objects, &problem.init, &problem.goal)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("more than {cap} reachable states")]
    StateSpaceExceeded { cap: usize },
    #[error("no reachable state satisfies the goal")]
    NoReachableGoalState,
}

/// Intersection of all reachable states that satisfy the goal, found by
/// breadth-first enumeration of the state space.
pub fn fully_specify_oracle(
    domain: &DomainModel,
    problem: &ProblemModel,
    max_states: usize,
) -> Result<BTreeSet<Proposition>, OracleError> {
    let task = GroundTask::new(problem, domain);
    let mut meet: Option<Vec<u64>> = None;
    explore(&task, max_states, |state| {
        if task.satisfies_goal(state) {
            match &mut meet {
                None => meet = Some(state.to_vec()),
                Some(m) => m.iter_mut().zip(state).for_each(|(a, b)| *a &= b),
            }
        }
    })
    .map_err(|CapExceeded { cap }| OracleError::StateSpaceExceeded { cap })?;
    meet.map(|m| task.propositions(&m))
        .ok_or(OracleError::NoReachableGoalState)
}

/// Shorthand used by the rule modules.
fn props_with<'a>(
    set: &'a BTreeSet<Proposition>,
    predicate: &'a str,
) -> impl Iterator<Item = &'a Proposition> + 'a {
    set.iter().filter(move |p| p.predicate == predicate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::to_scene_graphs;
    use crate::prop;

    fn problem(objects: &[&str], init: &[Proposition], goal: &[Proposition]) -> ProblemModel {
        ProblemModel {
            name: "p".into(),
            domain_name: "blocksworld".into(),
            objects: objects.iter().map(|s| s.to_string()).collect(),
            init: init.iter().cloned().collect(),
            goal: goal.iter().cloned().collect(),
        }
    }

    #[test]
    fn two_block_tower() {
        let p = problem(
            &["b1", "b2"],
            &[prop!("arm-empty"), prop!("on-table", "b1"), prop!("on", "b2", "b1"), prop!("clear", "b2")],
            &[prop!("on", "b2", "b1")],
        );
        let (i, g) = to_scene_graphs(&p);
        let full = fully_specify("blocksworld", &i, &g).unwrap();
        let expected: BTreeSet<_> = [prop!("on-table", "b1"), prop!("clear", "b2"), prop!("arm-empty")].into_iter().collect();
        assert_eq!(full.added, expected);
        let d = fixtures::domain(DomainId::BlocksWorld);
        assert_eq!(fully_specify_oracle(&d, &p, 1000).unwrap(), full.propositions());
    }

    #[test]
    fn open_placement_adds_nothing() {
        let p = problem(
            &["b1", "b2", "b3"],
            &[
                prop!("arm-empty"),
                prop!("on", "b1", "b2"),
                prop!("on-table", "b2"),
                prop!("clear", "b1"),
                prop!("on-table", "b3"),
                prop!("clear", "b3"),
            ],
            &[prop!("on", "b3", "b1")],
        );
        assert!(fully_specify_problem(DomainId::BlocksWorld, &p).unwrap().is_empty());
    }

    #[test]
    fn unknown_domain() {
        let p = problem(&[], &[], &[]);
        let (i, g) = to_scene_graphs(&p);
        assert!(matches!(fully_specify("logistics", &i, &g), Err(FullSpecError::UnknownDomain(_))));
    }

    #[test]
    fn oracle_errors() {
        let d = fixtures::domain(DomainId::BlocksWorld);
        let init = [prop!("arm-empty"), prop!("on-table", "a"), prop!("clear", "a"), prop!("on-table", "b"), prop!("clear", "b")];
        let p = problem(&["a", "b"], &init, &[prop!("on", "a", "a")]);
        assert_eq!(fully_specify_oracle(&d, &p, 1000), Err(OracleError::NoReachableGoalState));
        let p = problem(&["a", "b"], &init, &[]);
        assert_eq!(fully_specify_oracle(&d, &p, 2), Err(OracleError::StateSpaceExceeded { cap: 2 }));
    }
}
