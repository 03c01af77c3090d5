//! Procedural problem generation.
//!
//! A problem is built from an initial-state task and a goal task of the same
//! domain. Tasks are parameterised by named integer sizes (`blocks`,
//! `towers`, `rooms`, `balls`, `grippers`, `carried`, `rows`, `cols`,
//! `robots`, `colors`); whatever randomness a task needs (tower heights,
//! ball distributions) comes from a ChaCha stream seeded by the caller, so
//! generation is deterministic in `(configs, seed)`.
//!
//! Objects are named `b1..bn` (numbered bottom-up, tower by tower),
//! `room*`/`ball*`/`gripper*`, and `robot*`/`tile*`/`color*`. Tiles are
//! numbered row-major from the top-left corner, except for the `rings` layout
//! which numbers them ring by ring from the outside in.

mod blocksworld;
mod floortile;
mod gripper;
mod text;

pub use text::{render_text, Abstraction};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fixtures::{self, DomainId};
use crate::planning::{is_solvable, Solvability};
use crate::ProblemModel;

/// Node budget used when certifying solvability of a generated problem.
pub const CERTIFY_BUDGET: usize = 1_000_000;

/// The generator's task catalogue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Task {
    // Blocks World
    Stacked,
    Unstacked,
    HoldingOne,
    Staircase,
    EqualTowers,
    Towers,
    BlocksSwap,
    Invert,
    // Gripper
    OneRoom,
    EvenlyDistributed,
    Distribute,
    RoomsSwap,
    MoveToMax,
    MoveToMin,
    Pickup,
    DropAndPickup,
    Juggle,
    // Floor Tile
    Grid,
    Rings,
    DisconnectedRows,
    PaintRings,
    PaintAll,
    PaintX,
    OneColorPerTile,
    Checkerboard,
}

/// Which side of a problem a task may describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Usage {
    Both,
    InitOnly,
    GoalOnly,
    /// The goal is computed from the realised initial state; the task pairs
    /// only with itself.
    Tied,
}

impl Task {
    pub const ALL: [Task; 25] = [
        Task::Stacked,
        Task::Unstacked,
        Task::HoldingOne,
        Task::Staircase,
        Task::EqualTowers,
        Task::Towers,
        Task::BlocksSwap,
        Task::Invert,
        Task::OneRoom,
        Task::EvenlyDistributed,
        Task::Distribute,
        Task::RoomsSwap,
        Task::MoveToMax,
        Task::MoveToMin,
        Task::Pickup,
        Task::DropAndPickup,
        Task::Juggle,
        Task::Grid,
        Task::Rings,
        Task::DisconnectedRows,
        Task::PaintRings,
        Task::PaintAll,
        Task::PaintX,
        Task::OneColorPerTile,
        Task::Checkerboard,
    ];

    pub fn domain(self) -> DomainId {
        use Task::*;
        match self {
            Stacked | Unstacked | HoldingOne | Staircase | EqualTowers | Towers | BlocksSwap | Invert => {
                DomainId::BlocksWorld
            }
            OneRoom | EvenlyDistributed | Distribute | RoomsSwap | MoveToMax | MoveToMin | Pickup
            | DropAndPickup | Juggle => DomainId::Gripper,
            Grid | Rings | DisconnectedRows | PaintRings | PaintAll | PaintX | OneColorPerTile
            | Checkerboard => DomainId::FloorTile,
        }
    }

    /// Task name as used in problem names and manifests. `swap` exists in
    /// two domains, so the name alone is ambiguous; see [`Task::lookup`].
    pub fn name(self) -> &'static str {
        use Task::*;
        match self {
            Stacked => "stacked",
            Unstacked => "unstacked",
            HoldingOne => "holding_one",
            Staircase => "staircase",
            EqualTowers => "equal_towers",
            Towers => "towers",
            BlocksSwap | RoomsSwap => "swap",
            Invert => "invert",
            OneRoom => "one_room",
            EvenlyDistributed => "evenly_distributed",
            Distribute => "distribute",
            MoveToMax => "move_to_max",
            MoveToMin => "move_to_min",
            Pickup => "pickup",
            DropAndPickup => "drop_and_pickup",
            Juggle => "juggle",
            Grid => "grid",
            Rings => "rings",
            DisconnectedRows => "disconnected_rows",
            PaintRings => "paint_rings",
            PaintAll => "paint_all",
            PaintX => "paint_x",
            OneColorPerTile => "one_color_per_tile",
            Checkerboard => "checkerboard",
        }
    }

    pub fn lookup(domain: DomainId, name: &str) -> Option<Task> {
        Task::ALL.iter().copied().find(|t| t.domain() == domain && t.name() == name)
    }

    pub fn usage(self) -> Usage {
        use Task::*;
        match self {
            BlocksSwap | Invert | RoomsSwap | Juggle | DisconnectedRows => Usage::Tied,
            Grid | Rings => Usage::InitOnly,
            MoveToMax | MoveToMin | Pickup | DropAndPickup | PaintRings | PaintAll | PaintX
            | OneColorPerTile | Checkerboard => Usage::GoalOnly,
            _ => Usage::Both,
        }
    }

    pub fn can_init(self) -> bool {
        self.usage() != Usage::GoalOnly
    }

    pub fn can_goal(self) -> bool {
        self.usage() != Usage::InitOnly
    }

    /// Whether `init` and `goal` form a valid pairing.
    pub fn compatible(init: Task, goal: Task) -> bool {
        if init.domain() != goal.domain() || !init.can_init() || !goal.can_goal() {
            return false;
        }
        match (init.usage(), goal.usage()) {
            (Usage::Tied, _) | (_, Usage::Tied) => init == goal,
            _ => true,
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Init,
    Goal,
    Tied,
}

impl FromStr for Role {
    type Err = GenError;
    fn from_str(s: &str) -> Result<Role, GenError> {
        match s {
            "init" => Ok(Role::Init),
            "goal" => Ok(Role::Goal),
            "tied" => Ok(Role::Tied),
            _ => Err(GenError::IncompatibleConfigs(format!("unknown role `{s}`"))),
        }
    }
}

/// One side of a generation request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskConfig {
    pub domain: DomainId,
    pub task: Task,
    pub role: Role,
    pub size: BTreeMap<String, u32>,
}

impl TaskConfig {
    pub fn new(task: Task, role: Role) -> TaskConfig {
        TaskConfig {
            domain: task.domain(),
            task,
            role,
            size: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: u32) -> TaskConfig {
        self.size.insert(key.to_string(), value);
        self
    }

    pub fn get(&self, key: &str) -> Option<u32> {
        self.size.get(key).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("incompatible task configurations: {0}")]
    IncompatibleConfigs(String),
    #[error("generation failed: {0}")]
    GenerationFailed(String),
}

pub(crate) fn failed(msg: impl Into<String>) -> GenError {
    GenError::GenerationFailed(msg.into())
}

/// Size parameters visible to a task: its own map, falling back to the other
/// side's.
pub(crate) struct Sizes<'a> {
    own: &'a TaskConfig,
    other: &'a TaskConfig,
}

impl Sizes<'_> {
    pub(crate) fn get(&self, key: &str) -> Option<u32> {
        self.own.get(key).or_else(|| self.other.get(key))
    }

    pub(crate) fn require(&self, key: &str) -> Result<usize, GenError> {
        self.get(key)
            .map(|v| v as usize)
            .ok_or_else(|| GenError::IncompatibleConfigs(format!("missing size parameter `{key}`")))
    }

    pub(crate) fn or(&self, key: &str, default: u32) -> usize {
        self.get(key).unwrap_or(default) as usize
    }
}

/// Keys describing the object universe; both sides must agree on them.
const SHARED_KEYS: [&str; 8] = ["blocks", "rooms", "balls", "grippers", "rows", "cols", "robots", "colors"];

fn check_configs(init: &TaskConfig, goal: &TaskConfig) -> Result<(), GenError> {
    let bad = |m: String| Err(GenError::IncompatibleConfigs(m));
    if init.domain != init.task.domain() || goal.domain != goal.task.domain() {
        return bad(format!("task does not belong to the declared domain"));
    }
    if init.domain != goal.domain {
        return bad(format!("{} and {} are different domains", init.domain, goal.domain));
    }
    if !Task::compatible(init.task, goal.task) {
        return bad(format!("`{}` cannot be paired with `{}`", init.task, goal.task));
    }
    if init.role == Role::Goal || goal.role == Role::Init {
        return bad(format!("configuration roles are swapped"));
    }
    for key in SHARED_KEYS {
        if let (Some(a), Some(b)) = (init.get(key), goal.get(key)) {
            if a != b {
                return bad(format!("`{key}` is {a} for the initial state but {b} for the goal"));
            }
        }
    }
    Ok(())
}

/// Builds a problem from an initial-state task and a goal task and certifies
/// that it is solvable.
pub fn generate_problem(init_cfg: &TaskConfig, goal_cfg: &TaskConfig, seed: u64) -> Result<ProblemModel, GenError> {
    check_configs(init_cfg, goal_cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let init_sizes = Sizes {
        own: init_cfg,
        other: goal_cfg,
    };
    let goal_sizes = Sizes {
        own: goal_cfg,
        other: init_cfg,
    };
    let (objects, init, goal) = match init_cfg.domain {
        DomainId::BlocksWorld => blocksworld::generate(init_cfg.task, goal_cfg.task, &init_sizes, &goal_sizes, &mut rng)?,
        DomainId::Gripper => gripper::generate(init_cfg.task, goal_cfg.task, &init_sizes, &goal_sizes, &mut rng)?,
        DomainId::FloorTile => floortile::generate(init_cfg.task, goal_cfg.task, &init_sizes, &goal_sizes)?,
    };
    let problem = ProblemModel {
        name: format!("{}_to_{}_{}", init_cfg.task, goal_cfg.task, objects.len()),
        domain_name: init_cfg.domain.name().to_string(),
        objects,
        init,
        goal,
    };
    match is_solvable(&problem, &fixtures::domain(init_cfg.domain), CERTIFY_BUDGET) {
        Solvability::Solvable(_) => Ok(problem),
        Solvability::Unsolvable(why) => Err(failed(format!("generated problem is unsolvable: {why}"))),
        Solvability::Unknown(why) => Err(failed(format!("solvability undecided: {why}"))),
    }
}

/// Splits `total` into `parts` positive integers, uniformly over
/// compositions.
pub(crate) fn composition(total: usize, parts: usize, rng: &mut ChaCha8Rng) -> Result<alloc::vec::Vec<usize>, GenError> {
    if parts == 0 || parts > total {
        return Err(failed(format!("cannot split {total} into {parts} non-empty parts")));
    }
    // Choose parts-1 distinct cut points among total-1 gaps.
    let mut cuts: alloc::vec::Vec<usize> = (1..total).collect();
    for i in 0..parts - 1 {
        let j = rng.gen_range(i..cuts.len());
        cuts.swap(i, j);
    }
    let mut chosen: alloc::vec::Vec<usize> = cuts[..parts - 1].to_vec();
    chosen.sort_unstable();
    let mut out = alloc::vec::Vec::with_capacity(parts);
    let mut prev = 0;
    for c in chosen.into_iter().chain(core::iter::once(total)) {
        out.push(c - prev);
        prev = c;
    }
    Ok(out)
}

pub(crate) fn names(prefix: &str, n: usize) -> alloc::vec::Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_counts() {
        let per = |d| Task::ALL.iter().filter(|t| t.domain() == d).count();
        assert_eq!(per(DomainId::BlocksWorld), 8);
        assert_eq!(per(DomainId::Gripper), 9);
        assert_eq!(per(DomainId::FloorTile), 8);
        for t in Task::ALL {
            assert_eq!(Task::lookup(t.domain(), t.name()), Some(t));
        }
    }

    #[test]
    fn tied_tasks_pair_only_with_themselves() {
        assert!(Task::compatible(Task::Invert, Task::Invert));
        assert!(!Task::compatible(Task::Invert, Task::Stacked));
        assert!(!Task::compatible(Task::Stacked, Task::Invert));
        assert!(!Task::compatible(Task::PaintAll, Task::Grid));
        assert!(!Task::compatible(Task::Grid, Task::Stacked));
        assert!(Task::compatible(Task::Grid, Task::Checkerboard));
    }

    #[test]
    fn compositions_sum_and_are_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for total in 1..12 {
            for parts in 1..=total {
                let c = composition(total, parts, &mut rng).unwrap();
                assert_eq!(c.len(), parts);
                assert_eq!(c.iter().sum::<usize>(), total);
                assert!(c.iter().all(|&h| h > 0));
            }
        }
        assert!(composition(2, 3, &mut rng).is_err());
    }

    #[test]
    fn shared_sizes_must_agree() {
        let a = TaskConfig::new(Task::Stacked, Role::Init).with("blocks", 3);
        let b = TaskConfig::new(Task::Unstacked, Role::Goal).with("blocks", 4);
        assert!(matches!(generate_problem(&a, &b, 0), Err(GenError::IncompatibleConfigs(_))));
    }
}
