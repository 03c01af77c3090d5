//! Generator coverage, worked examples and text rendering.

use std::collections::BTreeMap;

use pddleq_core::equivalence::{equivalent, EquivalenceMode};
use pddleq_core::fixtures::{self, DomainId};
use pddleq_core::fullspec::{complete, fully_specify_oracle};
use pddleq_core::gen::{generate_problem, render_text, Abstraction, GenError, Role, Task, TaskConfig, Usage};
use pddleq_core::pddl::parse_problem;
use pddleq_core::pddl::serialize_problem;
use pddleq_core::planning::{is_solvable, validate_plan, Solvability};

const APPENDIX_F: &str = "(define (problem equal_towers_to_equal_towers_5)
    (:domain blocksworld)
    (:requirements :strips)
    (:objects b1 b2 b3 b4 b5)
    (:init (arm-empty) (clear b5) (on b2 b1) (on b3 b2) (on b4 b3) (on b5 b4) (on-table b1))
    (:goal (and (arm-empty) (on-table b1) (on b2 b1) (on b3 b2) (on b4 b3) (on b5 b4) (clear b5))))";

fn cfgs(init: Task, goal: Task, sizes: &[(&str, u32)]) -> (TaskConfig, TaskConfig) {
    let (ri, rg) = if init.usage() == Usage::Tied {
        (Role::Tied, Role::Tied)
    } else {
        (Role::Init, Role::Goal)
    };
    let mut a = TaskConfig::new(init, ri);
    let mut b = TaskConfig::new(goal, rg);
    for (k, v) in sizes {
        a = a.with(k, *v);
        b = b.with(k, *v);
    }
    (a, b)
}

/// Sizes that every task of the domain accepts.
fn default_sizes(domain: DomainId) -> Vec<(&'static str, u32)> {
    match domain {
        DomainId::BlocksWorld => vec![("blocks", 6), ("towers", 2)],
        DomainId::Gripper => vec![("rooms", 2), ("balls", 2), ("grippers", 2), ("carried", 1)],
        DomainId::FloorTile => vec![("rows", 2), ("cols", 2), ("colors", 4), ("robots", 2)],
    }
}

#[test]
fn appendix_f_generation_and_text() {
    let (i, g) = cfgs(Task::EqualTowers, Task::EqualTowers, &[("blocks", 5), ("towers", 1)]);
    let p = generate_problem(&i, &g, 0).unwrap();
    let d = fixtures::domain(DomainId::BlocksWorld);
    let reference = parse_problem(APPENDIX_F, &d, false).unwrap();
    assert_eq!(p, reference);
    assert_eq!(p.num_propositions(), 14);

    let explicit = render_text(&p, &i, &g, Abstraction::Explicit, Abstraction::Explicit);
    assert_eq!(
        explicit,
        "You have 5 blocks, b1 through b5. Your arm is empty. b1 is on the table. b2 is on b1. \
         b3 is on b2. b4 is on b3. b5 is on b4. b5 is clear. Your goal is to have the following: \
         Your arm should be empty. b1 should be on the table. b2 should be on b1. b3 should be on b2. \
         b4 should be on b3. b5 should be on b4. b5 should be clear."
    );
    let abstract_ = render_text(&p, &i, &g, Abstraction::Abstract, Abstraction::Abstract);
    assert_eq!(
        abstract_,
        "You have 5 blocks, b1 through b5, stacked into 1 towers of equal heights, and your arm is empty. \
         Your goal is to stack the blocks into 1 towers of equal heights."
    );
}

#[test]
fn every_task_is_producible() {
    let mut covered = BTreeMap::new();
    for init in Task::ALL.into_iter().filter(|t| t.can_init()) {
        for goal in Task::ALL.into_iter().filter(|t| Task::compatible(init, *t)) {
            let sizes = default_sizes(init.domain());
            let (i, g) = cfgs(init, goal, &sizes);
            let p = generate_problem(&i, &g, 11).unwrap_or_else(|e| panic!("{init} -> {goal}: {e}"));
            *covered.entry((init.domain(), init.name())).or_insert(0) += 1;
            *covered.entry((goal.domain(), goal.name())).or_insert(0) += 1;
            for im in [Abstraction::Abstract, Abstraction::Explicit] {
                for gm in [Abstraction::Abstract, Abstraction::Explicit] {
                    let text = render_text(&p, &i, &g, im, gm);
                    assert!(text.contains("Your goal is to"), "{text}");
                }
            }
        }
    }
    assert_eq!(covered.len(), 25);
}

#[test]
fn generated_problems_are_certified() {
    for init in Task::ALL.into_iter().filter(|t| t.can_init()) {
        for goal in Task::ALL.into_iter().filter(|t| Task::compatible(init, *t)) {
            let domain = fixtures::domain(init.domain());
            let (i, g) = cfgs(init, goal, &default_sizes(init.domain()));
            let p = generate_problem(&i, &g, 5).unwrap();
            let text = serialize_problem(&p);
            let back = parse_problem(&text, &domain, false).unwrap();
            assert_eq!(back, p);
            match is_solvable(&p, &domain, 100_000) {
                Solvability::Solvable(plan) => assert!(validate_plan(&p, &plan, &domain).valid),
                other => panic!("{}: {other:?}", p.name),
            }
            for mode in [EquivalenceMode::IDENTITY, EquivalenceMode::PLACEHOLDER] {
                assert!(equivalent(&p, &p, mode).unwrap().equal);
            }
        }
    }
}

#[test]
fn rules_match_oracle_on_small_generated_instances() {
    let sizes: [(DomainId, Vec<(&str, u32)>); 3] = [
        (DomainId::BlocksWorld, vec![("blocks", 5), ("towers", 2)]),
        (DomainId::Gripper, vec![("rooms", 3), ("balls", 3), ("grippers", 2), ("carried", 1)]),
        (DomainId::FloorTile, vec![("rows", 2), ("cols", 3), ("colors", 2), ("robots", 1)]),
    ];
    for (domain_id, sz) in sizes {
        let domain = fixtures::domain(domain_id);
        for init in Task::ALL.into_iter().filter(|t| t.domain() == domain_id && t.can_init()) {
            for goal in Task::ALL.into_iter().filter(|t| Task::compatible(init, *t)) {
                let (i, g) = cfgs(init, goal, &sz);
                let Ok(p) = generate_problem(&i, &g, 1) else { continue };
                let oracle = fully_specify_oracle(&domain, &p, 1_000_000).unwrap();
                let mut rules = p.goal.clone();
                rules.extend(complete(domain_id, &p.objects, &p.init, &p.goal).unwrap());
                assert_eq!(rules, oracle, "{}", p.name);
            }
        }
    }
}

#[test]
fn degenerate_swap() {
    let (i, g) = cfgs(Task::BlocksSwap, Task::BlocksSwap, &[("blocks", 2)]);
    let p = generate_problem(&i, &g, 0).unwrap();
    assert_eq!(p.init, p.goal);
}

#[test]
fn gripper_evenly_distributed() {
    let (i, g) = cfgs(Task::EvenlyDistributed, Task::OneRoom, &[("rooms", 2), ("balls", 4)]);
    let p = generate_problem(&i, &g, 0).unwrap();
    for room in ["room1", "room2"] {
        let n = p.init.iter().filter(|q| q.predicate == "at" && q.arguments[1] == room).count();
        assert_eq!(n, 2);
    }
}

#[test]
fn gripper_abstract_text() {
    let (i, g) = cfgs(Task::OneRoom, Task::OneRoom, &[("rooms", 2), ("balls", 2), ("grippers", 2), ("carried", 1)]);
    let p = generate_problem(&i, &g, 0).unwrap();
    assert_eq!(
        render_text(&p, &i, &g, Abstraction::Abstract, Abstraction::Abstract),
        "You have 2 rooms, 2 balls, and 2 grippers. 1 balls are distributed across the same number of \
         grippers, and the rest are in the first room. The robby is in the first room. Your goal is to \
         gather all balls into one room."
    );
    assert!(render_text(&p, &i, &g, Abstraction::Abstract, Abstraction::Explicit).ends_with(
        "Your goal is to have the following: gripper1 should be free. gripper2 should be free. \
         ball1 should be at room1. ball2 should be at room1."
    ));
}

#[test]
fn floortile_text() {
    let (i, g) = cfgs(Task::Grid, Task::PaintAll, &[("rows", 1), ("cols", 2), ("colors", 2), ("robots", 1)]);
    let p = generate_problem(&i, &g, 0).unwrap();
    assert_eq!(
        render_text(&p, &i, &g, Abstraction::Abstract, Abstraction::Abstract),
        "You have 1 robots, 2 colors, and 2 unpainted tiles arranged in a grid with 1 rows and 2 columns. \
         The first robot is at the top-left corner, and has the first color. All colors are available. \
         Your goal is to paint all the tiles with the same color."
    );
    assert_eq!(
        render_text(&p, &i, &g, Abstraction::Explicit, Abstraction::Explicit),
        "You have 1 robot. You have 2 tiles. You have 2 colors. Tile tile2 is to the right of tile tile1. \
         The robot robot1 has color color1. The robot robot1 is at tile tile1. Color color1 is available. \
         Color color2 is available. Your goal is to have the following: Tile tile1 should be painted with \
         color color1. Tile tile2 should be painted with color color1."
    );
}

#[test]
fn staircase_needs_a_triangular_count() {
    let (i, g) = cfgs(Task::Staircase, Task::Stacked, &[("blocks", 5)]);
    assert!(matches!(generate_problem(&i, &g, 0), Err(GenError::GenerationFailed(_))));
    let (i, g) = cfgs(Task::Staircase, Task::Stacked, &[("blocks", 6)]);
    assert!(generate_problem(&i, &g, 0).is_ok());
}

#[test]
fn generation_is_deterministic() {
    let (i, g) = cfgs(Task::Towers, Task::Towers, &[("blocks", 9), ("towers", 3)]);
    let a = generate_problem(&i, &g, 42).unwrap();
    let b = generate_problem(&i, &g, 42).unwrap();
    assert_eq!(serialize_problem(&a), serialize_problem(&b));
}

#[test]
fn incompatible_pairs_are_rejected() {
    let (i, g) = cfgs(Task::Stacked, Task::OneRoom, &[("blocks", 3)]);
    assert!(matches!(generate_problem(&i, &g, 0), Err(GenError::IncompatibleConfigs(_))));
    let (i, g) = cfgs(Task::Grid, Task::DisconnectedRows, &[("rows", 2), ("cols", 2)]);
    assert!(matches!(generate_problem(&i, &g, 0), Err(GenError::IncompatibleConfigs(_))));
}
