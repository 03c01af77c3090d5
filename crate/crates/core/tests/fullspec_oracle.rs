//! Rule-based goal completion against exhaustive reachability.

mod common;

use std::collections::BTreeSet;

use common::*;
use pddleq_core::fixtures::{self, DomainId};
use pddleq_core::fullspec::{complete, fully_specify_oracle, FullSpecError, OracleError};
use pddleq_core::Proposition;

/// Compares rules and oracle on one instance; returns a description of any
/// disagreement.
fn compare(domain: DomainId, objects: &[String], init: &BTreeSet<Proposition>, goal: &BTreeSet<Proposition>) -> Option<String> {
    let d = fixtures::domain(domain);
    let p = problem(domain, objects, init, goal);
    let oracle = fully_specify_oracle(&d, &p, 1_000_000);
    let rules = complete(domain, objects, init, goal);
    match (rules, oracle) {
        (Ok(added), Ok(expected)) => {
            let mut got = goal.clone();
            got.extend(added.iter().cloned());
            if got != expected {
                return Some(format!(
                    "init {init:?}\ngoal {goal:?}\nrules   {got:?}\noracle  {expected:?}"
                ));
            }
            let again = complete(domain, objects, init, &got).unwrap();
            if !again.is_empty() {
                return Some(format!("not idempotent: {goal:?} then {again:?}"));
            }
            None
        }
        (Err(FullSpecError::InconsistentGoal(_)), Err(OracleError::NoReachableGoalState)) => None,
        (r, o) => Some(format!("init {init:?}\ngoal {goal:?}\nrules {r:?}\noracle {o:?}")),
    }
}

fn run(domain: DomainId, objects: &[String], inits: &[BTreeSet<Proposition>], goals: &BTreeSet<BTreeSet<Proposition>>) -> usize {
    let mut checked = 0;
    for init in inits {
        for goal in goals {
            if let Some(msg) = compare(domain, objects, init, goal) {
                panic!("{domain}: {msg}");
            }
            checked += 1;
        }
    }
    checked
}

#[test]
fn blocksworld_up_to_four_blocks() {
    for n in 1..=4 {
        let (blocks, table) = bw_table(n);
        let states = reachable(DomainId::BlocksWorld, &blocks, &table);
        let goals = goal_subsets(&states, &["on", "on-table", "clear", "holding", "arm-empty"]);
        // Every Blocks World state reaches every other one, so one init
        // (plus a holding one) covers the space.
        let holding = states.iter().find(|s| s.iter().any(|p| p.predicate == "holding")).unwrap().clone();
        let inits = [table.clone(), holding];
        let goals: BTreeSet<_> = if n == 4 { goals.into_iter().step_by(7).collect() } else { goals };
        run(DomainId::BlocksWorld, &blocks, &inits, &goals);
    }
}

#[test]
fn blocksworld_inconsistent_goals() {
    let (blocks, table) = bw_table(3);
    let states = reachable(DomainId::BlocksWorld, &blocks, &table);
    let mut goals = BTreeSet::new();
    for (i, a) in states.iter().enumerate() {
        for b in states.iter().skip(i + 1).step_by(5) {
            let pa: Vec<&Proposition> = a.iter().collect();
            let pb: Vec<&Proposition> = b.iter().collect();
            goals.insert([pa[0].clone(), pb[pb.len() - 1].clone(), pa[pa.len() / 2].clone()].into_iter().collect());
        }
    }
    run(DomainId::BlocksWorld, &blocks, &[table], &goals);
}

#[test]
fn gripper_small() {
    for rooms in 1..=2 {
        for balls in 0..=2 {
            for grippers in 0..=2 {
                let (objects, states) = gripper_inits(rooms, balls, grippers);
                let goals = goal_subsets(&states, &["at-robby", "at", "carry", "free", "room"]);
                let inits: Vec<_> = states.iter().step_by(3).cloned().collect();
                run(DomainId::Gripper, &objects, &inits, &goals);
            }
        }
    }
}

#[test]
fn floortile_small() {
    let layouts: &[(usize, usize)] = &[(1, 1), (1, 2), (2, 1), (2, 2)];
    for &(rows, cols) in layouts {
        for colors in 1..=2 {
            let avail_sets: Vec<Vec<usize>> = if colors == 1 {
                vec![vec![], vec![0]]
            } else {
                vec![vec![], vec![0], vec![1], vec![0, 1]]
            };
            for available in &avail_sets {
                for start_color in [None, Some(0), Some(colors - 1)] {
                    for painted in [vec![], vec![(0, colors - 1)]] {
                        let robots = [(0, start_color)];
                        let (objects, init) = floor(rows, cols, colors, &robots, available, &painted);
                        let states = reachable(DomainId::FloorTile, &objects, &init);
                        let goals = goal_subsets(&states, &["painted", "robot-at", "robot-has"]);
                        run(DomainId::FloorTile, &objects, &[init.clone()], &goals);
                    }
                }
            }
        }
    }
}

#[test]
fn floortile_two_robots() {
    for available in [vec![0], vec![1], vec![0, 1]] {
        let robots = [(0, Some(0)), (3, Some(1))];
        let (objects, init) = floor(2, 2, 2, &robots, &available, &[]);
        let states = reachable(DomainId::FloorTile, &objects, &init);
        let goals = goal_subsets(&states, &["painted", "robot-has"]);
        let goals: BTreeSet<_> = goals.into_iter().step_by(3).collect();
        run(DomainId::FloorTile, &objects, &[init], &goals);
    }
}

#[test]
fn floortile_disconnected_rows() {
    // Two 1x2 rows with no vertical links: each robot keeps to its row.
    let (objects, mut init) = floor(2, 2, 2, &[(0, Some(0)), (2, Some(0))], &[1], &[]);
    init.retain(|p| p.predicate != "up");
    let states = reachable(DomainId::FloorTile, &objects, &init);
    let goals = goal_subsets(&states, &["painted", "robot-has"]);
    run(DomainId::FloorTile, &objects, &[init], &goals);
}
