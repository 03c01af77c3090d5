//! Small-instance enumerators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use pddleq_core::fixtures::{self, DomainId};
use pddleq_core::planning::ground::GroundTask;
use pddleq_core::planning::search::explore;
use pddleq_core::{prop, ProblemModel, Proposition};

pub fn problem(domain: DomainId, objects: &[String], init: &BTreeSet<Proposition>, goal: &BTreeSet<Proposition>) -> ProblemModel {
    ProblemModel {
        name: "t".into(),
        domain_name: domain.name().into(),
        objects: objects.to_vec(),
        init: init.clone(),
        goal: goal.clone(),
    }
}

/// Every state reachable from `init`.
pub fn reachable(domain: DomainId, objects: &[String], init: &BTreeSet<Proposition>) -> Vec<BTreeSet<Proposition>> {
    let d = fixtures::domain(domain);
    let p = problem(domain, objects, init, &BTreeSet::new());
    let task = GroundTask::new(&p, &d);
    let mut out = Vec::new();
    explore(&task, 1_000_000, |s| out.push(task.propositions(s))).expect("small state space");
    out
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Blocks on the table, arm empty.
pub fn bw_table(n: usize) -> (Vec<String>, BTreeSet<Proposition>) {
    let blocks = names("b", n);
    let mut init = BTreeSet::from([prop!("arm-empty")]);
    for b in &blocks {
        init.insert(prop!("on-table", b));
        init.insert(prop!("clear", b));
    }
    (blocks, init)
}

/// Gripper initial states: robby and balls in room1, grippers free, plus
/// every state reachable from there.
pub fn gripper_inits(rooms: usize, balls: usize, grippers: usize) -> (Vec<String>, Vec<BTreeSet<Proposition>>) {
    let r = names("room", rooms);
    let b = names("ball", balls);
    let g = names("gripper", grippers);
    let mut init = BTreeSet::new();
    for x in &r {
        init.insert(prop!("room", x));
    }
    for x in &b {
        init.insert(prop!("ball", x));
        init.insert(prop!("at", x, &r[0]));
    }
    for x in &g {
        init.insert(prop!("gripper", x));
        init.insert(prop!("free", x));
    }
    init.insert(prop!("at-robby", &r[0]));
    let objects: Vec<String> = r.into_iter().chain(b).chain(g).collect();
    let states = reachable(DomainId::Gripper, &objects, &init);
    (objects, states)
}

/// A rows x cols grid with one robot per entry of `robots` (tile index,
/// colour index or none), the given available colours and painted tiles.
pub fn floor(
    rows: usize,
    cols: usize,
    colors: usize,
    robots: &[(usize, Option<usize>)],
    available: &[usize],
    painted: &[(usize, usize)],
) -> (Vec<String>, BTreeSet<Proposition>) {
    let tiles = names("tile", rows * cols);
    let cs = names("color", colors);
    let rs = names("robot", robots.len());
    let mut init = BTreeSet::new();
    for r in 0..rows {
        for c in 0..cols {
            let t = &tiles[r * cols + c];
            if r > 0 {
                init.insert(prop!("up", t, &tiles[(r - 1) * cols + c]));
            }
            if c > 0 {
                init.insert(prop!("right", t, &tiles[r * cols + c - 1]));
            }
        }
    }
    for (i, (tile, color)) in robots.iter().enumerate() {
        init.insert(prop!("robot-at", &rs[i], &tiles[*tile]));
        if let Some(c) = color {
            init.insert(prop!("robot-has", &rs[i], &cs[*c]));
        }
    }
    for &a in available {
        init.insert(prop!("available-color", &cs[a]));
    }
    for &(t, c) in painted {
        init.insert(prop!("painted", &tiles[t], &cs[c]));
    }
    let objects = rs.into_iter().chain(tiles).chain(cs).collect();
    (objects, init)
}

/// All subsets of `facts` (which must be small).
pub fn subsets(facts: &[Proposition]) -> impl Iterator<Item = BTreeSet<Proposition>> + '_ {
    assert!(facts.len() <= 16);
    (0u32..1 << facts.len()).map(move |mask| {
        facts
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect()
    })
}

/// Distinct goals drawn as subsets of the given states, restricted to
/// facts of the listed predicates.
pub fn goal_subsets(states: &[BTreeSet<Proposition>], predicates: &[&str]) -> BTreeSet<BTreeSet<Proposition>> {
    let mut out = BTreeSet::new();
    for s in states {
        let facts: Vec<Proposition> = s.iter().filter(|p| predicates.contains(&p.predicate.as_str())).cloned().collect();
        out.extend(subsets(&facts));
    }
    out
}
