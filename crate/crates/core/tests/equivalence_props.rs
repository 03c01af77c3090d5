//! `equivalent` against the brute-force reference and its algebraic
//! properties.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use pddleq_core::equivalence::{equivalent, equivalent_oracle, equivalent_with, EquivalenceMode, EquivalenceOptions};
use pddleq_core::fixtures::{self, DomainId};
use pddleq_core::{ProblemModel, Proposition};
use proptest::prelude::*;

const MODES: [EquivalenceMode; 2] = [EquivalenceMode::IDENTITY, EquivalenceMode::PLACEHOLDER];

struct Space {
    domain: DomainId,
    objects: Vec<String>,
    states: Vec<BTreeSet<Proposition>>,
    fluents: &'static [&'static str],
}

fn spaces() -> Vec<Space> {
    let (blocks, table) = bw_table(3);
    let (gobjects, gstates) = gripper_inits(2, 2, 1);
    let (fobjects, finit) = floor(1, 3, 2, &[(0, Some(0))], &[0, 1], &[]);
    vec![
        Space {
            domain: DomainId::BlocksWorld,
            states: reachable(DomainId::BlocksWorld, &blocks, &table),
            objects: blocks,
            fluents: &["on", "on-table", "clear", "holding", "arm-empty"],
        },
        Space {
            domain: DomainId::Gripper,
            objects: gobjects,
            states: gstates,
            fluents: &["at-robby", "at", "carry", "free"],
        },
        Space {
            domain: DomainId::FloorTile,
            states: reachable(DomainId::FloorTile, &fobjects, &finit),
            objects: fobjects,
            fluents: &["painted", "robot-at", "robot-has"],
        },
    ]
}

/// A problem whose init is state `i` and whose goal is the facts of state
/// `j` selected by `mask`.
fn pick(space: &Space, i: usize, j: usize, mask: u32) -> ProblemModel {
    let init = &space.states[i % space.states.len()];
    let src: Vec<&Proposition> = space.states[j % space.states.len()]
        .iter()
        .filter(|p| space.fluents.contains(&p.predicate.as_str()))
        .collect();
    let goal = src.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, p)| (*p).clone()).collect();
    problem(space.domain, &space.objects, init, &goal)
}

fn shuffle(p: &ProblemModel, seed: u64) -> ProblemModel {
    let mut targets = p.objects.clone();
    let n = targets.len();
    let mut s = seed;
    for i in (1..n).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        targets.swap(i, (s >> 33) as usize % (i + 1));
    }
    let map: BTreeMap<String, String> = p.objects.iter().cloned().zip(targets).collect();
    p.renamed(&map)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn agrees_with_reference(d in 0usize..3, i in any::<usize>(), j in any::<usize>(), k in any::<usize>(), l in any::<usize>(), m1 in any::<u32>(), m2 in any::<u32>(), rename in any::<u64>()) {
        let spaces = spaces();
        let space = &spaces[d];
        let domain = fixtures::domain(space.domain);
        let a = pick(space, i, j, m1);
        let b = shuffle(&pick(space, if rename % 3 == 0 { i } else { k }, l, m2), rename);
        for mode in MODES {
            let got = equivalent(&a, &b, mode).unwrap().equal;
            let want = equivalent_oracle(&domain, &a, &b, mode, 1_000_000).unwrap();
            prop_assert_eq!(got, want, "{:?}\n{:?}\n{:?}", mode, a, b);
            let slow = equivalent_with(&a, &b, mode, &EquivalenceOptions { force_slow_path: true }).unwrap().equal;
            prop_assert_eq!(slow, want);
        }
    }

    #[test]
    fn reflexive_symmetric_and_renaming_invariant(d in 0usize..3, i in any::<usize>(), j in any::<usize>(), k in any::<usize>(), m1 in any::<u32>(), m2 in any::<u32>(), seed in any::<u64>()) {
        let spaces = spaces();
        let space = &spaces[d];
        let a = pick(space, i, j, m1);
        let b = pick(space, i, k, m2);
        for mode in MODES {
            prop_assert!(equivalent(&a, &a, mode).unwrap().equal);
            prop_assert!(equivalent(&a, &shuffle(&a, seed), mode).unwrap().equal);
            let ab = equivalent(&a, &b, mode).unwrap().equal;
            prop_assert_eq!(ab, equivalent(&b, &a, mode).unwrap().equal);
            prop_assert_eq!(ab, equivalent(&shuffle(&a, seed), &b, mode).unwrap().equal);
        }
        // Identity equivalence is the finer relation.
        if equivalent(&a, &b, EquivalenceMode::IDENTITY).unwrap().equal {
            prop_assert!(equivalent(&a, &b, EquivalenceMode::PLACEHOLDER).unwrap().equal);
        }
    }
}

#[test]
fn transitive_on_a_goal_family() {
    let spaces = spaces();
    let space = &spaces[0];
    let problems: Vec<ProblemModel> = (0..40).map(|k| pick(space, 0, k * 7, (k as u32).wrapping_mul(2654435761))).collect();
    for mode in MODES {
        let eq: Vec<Vec<bool>> = problems
            .iter()
            .map(|a| problems.iter().map(|b| equivalent(a, b, mode).unwrap().equal).collect())
            .collect();
        for x in 0..problems.len() {
            for y in 0..problems.len() {
                for z in 0..problems.len() {
                    if eq[x][y] && eq[y][z] {
                        assert!(eq[x][z], "{x} {y} {z}");
                    }
                }
            }
        }
    }
}
