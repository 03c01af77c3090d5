//! The constructive planners against breadth-first search.

mod common;

use std::collections::BTreeSet;

use common::*;
use pddleq_core::fixtures::{self, DomainId};
use pddleq_core::planning::search::{breadth_first, SearchOutcome};
use pddleq_core::planning::ground::GroundTask;
use pddleq_core::planning::{plan_blocksworld, plan_floortile, plan_gripper, validate_plan, PlanError};
use pddleq_core::{ProblemModel, Proposition};

fn check(domain: DomainId, p: &ProblemModel) {
    let d = fixtures::domain(domain);
    let planned = match domain {
        DomainId::BlocksWorld => plan_blocksworld(p),
        DomainId::Gripper => plan_gripper(p),
        DomainId::FloorTile => plan_floortile(p, &d, 100_000),
    };
    let searched = breadth_first(&GroundTask::new(p, &d), 100_000);
    match (&planned, &searched) {
        (Ok(plan), SearchOutcome::Found(_)) => {
            let v = validate_plan(p, plan, &d);
            assert!(v.valid, "{:?} {:?}", v.diagnostic, p);
        }
        (Err(PlanError::Unsolvable(_)), SearchOutcome::Exhausted) => {}
        other => panic!("disagreement on {p:?}: {other:?}"),
    }
}

fn goals(states: &[BTreeSet<Proposition>], preds: &[&str], stride: usize) -> Vec<BTreeSet<Proposition>> {
    let mut all: Vec<_> = goal_subsets(states, preds).into_iter().step_by(stride).collect();
    // Mix facts of two states to get inconsistent goals too.
    for (i, s) in states.iter().enumerate().step_by(3) {
        let t = &states[(i * 7 + 1) % states.len()];
        all.push(s.iter().take(2).chain(t.iter().rev().take(2)).cloned().collect());
    }
    all
}

#[test]
fn blocksworld_agrees_with_search() {
    for n in 1..=4 {
        let (blocks, table) = bw_table(n);
        let states = reachable(DomainId::BlocksWorld, &blocks, &table);
        let gs = goals(&states, &["on", "on-table", "clear", "holding", "arm-empty"], if n == 4 { 23 } else { 3 });
        for init in states.iter().step_by(if n == 4 { 17 } else { 1 }) {
            for g in &gs {
                check(DomainId::BlocksWorld, &problem(DomainId::BlocksWorld, &blocks, init, g));
            }
        }
    }
}

#[test]
fn gripper_agrees_with_search() {
    for rooms in 1..=3 {
        for balls in 0..=3 {
            for grippers in 0..=2 {
                if rooms * balls * (grippers + 1) > 18 {
                    continue;
                }
                let (objects, states) = gripper_inits(rooms, balls, grippers);
                let gs = goals(&states, &["at-robby", "at", "carry", "free"], 5);
                for init in states.iter().step_by(5) {
                    for g in &gs {
                        check(DomainId::Gripper, &problem(DomainId::Gripper, &objects, init, g));
                    }
                }
            }
        }
    }
}

#[test]
fn floortile_agrees_with_search() {
    let layouts: [(usize, usize, &[(usize, Option<usize>)]); 6] = [
        (1, 2, &[(0, Some(0))]),
        (1, 3, &[(1, Some(1))]),
        (2, 2, &[(0, Some(0))]),
        (2, 2, &[(0, Some(0)), (3, Some(1))]),
        (2, 2, &[(1, None), (2, Some(0))]),
        (1, 3, &[(0, Some(0)), (2, Some(1))]),
    ];
    for (rows, cols, robots) in layouts {
        for available in [&[0, 1][..], &[0], &[1], &[]] {
            for painted in [&[][..], &[(0, 1)], &[(1, 0)]] {
                let (objects, init) = floor(rows, cols, 2, robots, available, painted);
                let states = reachable(DomainId::FloorTile, &objects, &init);
                let mut gs = goals(&states, &["painted", "robot-at", "robot-has"], 7);
                // Paint goals that no reachable state of a lone robot shows.
                let tiles = names("tile", rows * cols);
                for c in ["color1", "color2"] {
                    gs.push(tiles.iter().map(|t| pddleq_core::prop!("painted", t, c)).collect());
                }
                for g in &gs {
                    check(DomainId::FloorTile, &problem(DomainId::FloorTile, &objects, &init, g));
                }
            }
        }
    }
}
