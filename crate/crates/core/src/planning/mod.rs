//! States, ground actions, the transition function, plan validation and
//! the planners used to decide solvability.

mod blocksworld;
mod floortile;
pub mod ground;
mod gripper;
pub mod search;

pub use blocksworld::plan_blocksworld;
pub use floortile::{plan_floortile, DEFAULT_NODE_BUDGET};
pub use gripper::plan_gripper;

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::fixtures::DomainId;
use crate::pddl::{DomainModel, ProblemModel, Proposition};

/// Set of true propositions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct WorldState {
    pub true_propositions: BTreeSet<Proposition>,
}

impl WorldState {
    pub fn new(props: impl IntoIterator<Item = Proposition>) -> WorldState {
        WorldState {
            true_propositions: props.into_iter().collect(),
        }
    }

    pub fn contains(&self, p: &Proposition) -> bool {
        self.true_propositions.contains(p)
    }

    pub fn satisfies(&self, goal: &BTreeSet<Proposition>) -> bool {
        goal.is_subset(&self.true_propositions)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAction {
    pub schema: String,
    pub arguments: Vec<String>,
}

impl GroundAction {
    pub fn new<'a>(schema: &str, arguments: impl IntoIterator<Item = &'a str>) -> GroundAction {
        GroundAction {
            schema: schema.to_string(),
            arguments: arguments.into_iter().map(str::to_string).collect(),
        }
    }
}

impl fmt::Display for GroundAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.schema)?;
        for a in &self.arguments {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Plan {
    pub steps: Vec<GroundAction>,
}

impl Plan {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// One `(name arg ...)` per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }

    /// Reads the format written by [`Plan::to_text`]. Blank lines and `;`
    /// comments are skipped; names are lowercased.
    pub fn parse(text: &str) -> Result<Plan, PlanParseError> {
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split(';').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let inner = line
                .strip_prefix('(')
                .and_then(|l| l.strip_suffix(')'))
                .ok_or(PlanParseError { line: i + 1 })?;
            let mut words = inner.split_whitespace().map(str::to_lowercase);
            let schema = words.next().ok_or(PlanParseError { line: i + 1 })?;
            if inner.contains(['(', ')']) {
                return Err(PlanParseError { line: i + 1 });
            }
            steps.push(GroundAction {
                schema,
                arguments: words.collect(),
            });
        }
        Ok(Plan { steps })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: expected `(action arg ...)`")]
pub struct PlanParseError {
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ApplyError {
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("`{action}` takes {expected} argument(s), {found} given")]
    ArgumentCount {
        action: String,
        expected: usize,
        found: usize,
    },
    #[error("precondition {missing} of {action} does not hold")]
    PreconditionViolated {
        action: GroundAction,
        missing: Proposition,
    },
}

/// γ(s, a) = (s − del(a)) ∪ add(a).
pub fn apply(
    state: &WorldState,
    action: &GroundAction,
    domain: &DomainModel,
) -> Result<WorldState, ApplyError> {
    let schema = domain
        .action(&action.schema)
        .ok_or_else(|| ApplyError::UnknownAction(action.schema.clone()))?;
    if schema.parameters.len() != action.arguments.len() {
        return Err(ApplyError::ArgumentCount {
            action: action.schema.clone(),
            expected: schema.parameters.len(),
            found: action.arguments.len(),
        });
    }
    for pre in &schema.preconditions {
        let p = pre.ground(&action.arguments);
        if !state.contains(&p) {
            return Err(ApplyError::PreconditionViolated {
                action: action.clone(),
                missing: p,
            });
        }
    }
    let mut next = state.true_propositions.clone();
    for d in &schema.del_effects {
        next.remove(&d.ground(&action.arguments));
    }
    for a in &schema.add_effects {
        next.insert(a.ground(&action.arguments));
    }
    Ok(WorldState {
        true_propositions: next,
    })
}

/// State constraints that hold on top of the action schemas. In Floor Tile
/// a tile carries at most one colour: painting never removes a colour, so
/// a second colour on the same tile is not a reachable world.
pub fn admissible(domain_name: &str, state: &WorldState) -> bool {
    if domain_name != DomainId::FloorTile.name() {
        return true;
    }
    let mut painted = BTreeSet::new();
    state
        .true_propositions
        .iter()
        .filter(|p| p.predicate == "painted" && p.arguments.len() == 2)
        .all(|p| painted.insert(&p.arguments[0]))
}

/// Result of replaying a plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanValidation {
    pub valid: bool,
    /// Zero-based index of the first failing step; `Some(plan.len())` when
    /// every step applies but the goal is not reached.
    pub failed_step: Option<usize>,
    pub diagnostic: Option<String>,
}

/// Replays `plan` from the initial state and checks that every step is
/// applicable and the final state contains the goal.
pub fn validate_plan(problem: &ProblemModel, plan: &Plan, domain: &DomainModel) -> PlanValidation {
    let fail = |step: usize, msg: String| PlanValidation {
        valid: false,
        failed_step: Some(step),
        diagnostic: Some(msg),
    };
    let declared: BTreeSet<&str> = problem.objects.iter().map(String::as_str).collect();
    let mut state = WorldState::new(problem.init.iter().cloned());
    if !admissible(&domain.name, &state) {
        return fail(0, "initial state violates the domain's state constraints".to_string());
    }
    for (i, step) in plan.steps.iter().enumerate() {
        if let Some(bad) = step.arguments.iter().find(|a| !declared.contains(a.as_str())) {
            return fail(i, alloc::format!("step {}: {step} uses undeclared object `{bad}`", i + 1));
        }
        state = match apply(&state, step, domain) {
            Ok(s) => s,
            Err(e) => return fail(i, alloc::format!("step {}: {e}", i + 1)),
        };
        if !admissible(&domain.name, &state) {
            return fail(i, alloc::format!("step {}: {step} paints an already painted tile", i + 1));
        }
    }
    if let Some(missing) = problem.goal.iter().find(|g| !state.contains(g)) {
        return fail(plan.len(), alloc::format!("goal proposition {missing} does not hold after the plan"));
    }
    PlanValidation {
        valid: true,
        failed_step: None,
        diagnostic: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanError {
    #[error("unsolvable: {0}")]
    Unsolvable(String),
    #[error("search budget of {budget} expanded states exhausted")]
    BudgetExceeded { budget: usize },
    /// The initial state is not a well-formed state of the domain, which
    /// the constructive planners rely on.
    #[error("malformed initial state: {0}")]
    MalformedInit(String),
}

/// Outcome of a solvability check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solvability {
    Solvable(Plan),
    Unsolvable(String),
    /// Search gave up before deciding.
    Unknown(String),
}

impl Solvability {
    pub fn is_solvable(&self) -> bool {
        matches!(self, Solvability::Solvable(_))
    }
}

/// Decides solvability with the planner for the problem's domain and
/// checks any plan found with [`validate_plan`]. Domains other than the
/// bundled three fall back to breadth-first search.
pub fn is_solvable(problem: &ProblemModel, domain: &DomainModel, node_budget: usize) -> Solvability {
    let outcome = if WorldState::new(problem.init.iter().cloned()).satisfies(&problem.goal)
        && admissible(&domain.name, &WorldState::new(problem.init.iter().cloned()))
    {
        Ok(Plan::default())
    } else {
        match DomainId::from_name(&domain.name) {
            Some(DomainId::BlocksWorld) => {
                plan_blocksworld(problem).or_else(|e| fallback_search(problem, domain, node_budget, e))
            }
            Some(DomainId::Gripper) => {
                plan_gripper(problem).or_else(|e| fallback_search(problem, domain, node_budget, e))
            }
            Some(DomainId::FloorTile) => plan_floortile(problem, domain, node_budget),
            None => search::plan(problem, domain, node_budget),
        }
    };
    match outcome {
        Ok(plan) => {
            let check = validate_plan(problem, &plan, domain);
            if check.valid {
                Solvability::Solvable(plan)
            } else {
                Solvability::Unsolvable(alloc::format!(
                    "planner produced an invalid plan: {}",
                    check.diagnostic.unwrap_or_default()
                ))
            }
        }
        Err(PlanError::BudgetExceeded { budget }) => {
            Solvability::Unknown(alloc::format!("no decision within {budget} expanded states"))
        }
        Err(e) => Solvability::Unsolvable(e.to_string()),
    }
}

/// The constructive planners assume a well-formed initial state. When the
/// init itself is malformed they defer to search instead of guessing.
fn fallback_search(
    problem: &ProblemModel,
    domain: &DomainModel,
    node_budget: usize,
    err: PlanError,
) -> Result<Plan, PlanError> {
    match err {
        PlanError::MalformedInit(_) => search::plan(problem, domain, node_budget),
        other => Err(other),
    }
}
