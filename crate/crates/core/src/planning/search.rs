//! Breadth-first forward search over a grounded task.

use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::hash::BuildHasher;

use hashbrown::hash_table::{Entry, HashTable};
use hashbrown::DefaultHashBuilder;

use super::ground::{get, GroundTask};
use super::{Plan, PlanError};
use crate::pddl::{DomainModel, ProblemModel};

/// Deduplicating store of fixed-width bit states.
struct StateStore {
    words: usize,
    data: Vec<u64>,
    table: HashTable<u32>,
    hasher: DefaultHashBuilder,
}

impl StateStore {
    fn new(words: usize) -> StateStore {
        StateStore {
            words,
            data: Vec::new(),
            table: HashTable::new(),
            hasher: DefaultHashBuilder::default(),
        }
    }

    fn len(&self) -> usize {
        self.data.len() / self.words
    }

    fn get(&self, id: u32) -> &[u64] {
        let start = id as usize * self.words;
        &self.data[start..start + self.words]
    }

    /// Inserts `state`; returns its id and whether it was new.
    fn insert(&mut self, state: &[u64]) -> (u32, bool) {
        let words = self.words;
        let hash = self.hasher.hash_one(state);
        let data = &self.data;
        let hasher = &self.hasher;
        let entry = self.table.entry(
            hash,
            |&id| &data[id as usize * words..(id as usize + 1) * words] == state,
            |&id| hasher.hash_one(&data[id as usize * words..(id as usize + 1) * words]),
        );
        match entry {
            Entry::Occupied(e) => (*e.get(), false),
            Entry::Vacant(e) => {
                let id = (data.len() / words) as u32;
                e.insert(id);
                self.data.extend_from_slice(state);
                (id, true)
            }
        }
    }
}

/// Why exploration stopped short.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CapExceeded {
    pub cap: usize,
}

/// Visits every state reachable from the initial state (respecting state
/// constraints). Fails once more than `cap` distinct states are seen.
pub fn explore(
    task: &GroundTask,
    cap: usize,
    mut visit: impl FnMut(&[u64]),
) -> Result<usize, CapExceeded> {
    if !task.init_admissible() {
        return Ok(0);
    }
    let mut store = StateStore::new(task.words);
    store.insert(&task.init);
    let mut next = 0u32;
    let mut buf = Vec::with_capacity(task.words);
    while (next as usize) < store.len() {
        let state: Vec<u64> = store.get(next).to_vec();
        next += 1;
        visit(&state);
        for op in &task.ops {
            if !task.applicable(&state, op) || !task.successor(&state, op, &mut buf) {
                continue;
            }
            store.insert(&buf);
            if store.len() > cap {
                return Err(CapExceeded { cap });
            }
        }
    }
    Ok(store.len())
}

/// Result of a bounded breadth-first search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// Operator indices of a shortest plan.
    Found(Vec<usize>),
    /// Every reachable state was expanded without meeting the goal.
    Exhausted,
    BudgetExceeded,
}

/// Breadth-first search expanding at most `budget` states.
///
/// Operators that only add facts which are neither goal facts nor used by
/// any precondition (and delete nothing) are skipped: dropping them from
/// any plan leaves a valid plan, and with one-colour-per-tile constraints
/// they can only block later steps.
pub fn breadth_first(task: &GroundTask, budget: usize) -> SearchOutcome {
    if !task.init_admissible() {
        return SearchOutcome::Exhausted;
    }
    let Some(goal) = &task.goal else {
        return SearchOutcome::Exhausted;
    };
    if task.satisfies_goal(&task.init) {
        return SearchOutcome::Found(Vec::new());
    }
    let mut needed = alloc::vec![false; task.facts.len()];
    for op in &task.ops {
        for &p in &op.pre {
            needed[p] = true;
        }
    }
    for &g in goal {
        needed[g] = true;
    }
    let ops: Vec<usize> = (0..task.ops.len())
        .filter(|&i| {
            let op = &task.ops[i];
            !op.del.is_empty() || op.add.iter().any(|&a| needed[a])
        })
        .collect();

    let mut store = StateStore::new(task.words);
    let mut parent: Vec<(u32, u32)> = Vec::new();
    store.insert(&task.init);
    parent.push((u32::MAX, u32::MAX));
    let mut queue = VecDeque::from([0u32]);
    let mut expanded = 0usize;
    let mut buf = Vec::with_capacity(task.words);
    while let Some(id) = queue.pop_front() {
        if expanded == budget {
            return SearchOutcome::BudgetExceeded;
        }
        expanded += 1;
        let state: Vec<u64> = store.get(id).to_vec();
        for &oi in &ops {
            let op = &task.ops[oi];
            if !task.applicable(&state, op) || !task.successor(&state, op, &mut buf) {
                continue;
            }
            let (child, fresh) = store.insert(&buf);
            if !fresh {
                continue;
            }
            parent.push((id, oi as u32));
            if goal.iter().all(|&g| get(&buf, g)) {
                let mut path = Vec::new();
                let mut cur = child;
                while cur != 0 {
                    let (p, op) = parent[cur as usize];
                    path.push(op as usize);
                    cur = p;
                }
                path.reverse();
                return SearchOutcome::Found(path);
            }
            queue.push_back(child);
        }
    }
    SearchOutcome::Exhausted
}

/// Plans by grounding and breadth-first search.
pub fn plan(problem: &ProblemModel, domain: &DomainModel, budget: usize) -> Result<Plan, PlanError> {
    let task = GroundTask::new(problem, domain);
    match breadth_first(&task, budget) {
        SearchOutcome::Found(path) => Ok(Plan {
            steps: path.into_iter().map(|i| task.ops[i].action.clone()).collect(),
        }),
        SearchOutcome::Exhausted => Err(PlanError::Unsolvable(
            "no reachable state satisfies the goal".into(),
        )),
        SearchOutcome::BudgetExceeded => Err(PlanError::BudgetExceeded { budget }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, DomainId};
    use crate::planning::validate_plan;
    use crate::prop;

    fn two_blocks(goal: &[crate::pddl::Proposition]) -> ProblemModel {
        ProblemModel {
            name: "p".into(),
            domain_name: "blocksworld".into(),
            objects: alloc::vec!["a".into(), "b".into()],
            init: [prop!("arm-empty"), prop!("on-table", "a"), prop!("on", "b", "a"), prop!("clear", "b")]
                .into_iter()
                .collect(),
            goal: goal.iter().cloned().collect(),
        }
    }

    #[test]
    fn finds_shortest_plan() {
        let d = fixtures::domain(DomainId::BlocksWorld);
        let p = two_blocks(&[prop!("on", "a", "b")]);
        let plan = plan(&p, &d, 1000).unwrap();
        assert_eq!(plan.len(), 4);
        assert!(validate_plan(&p, &plan, &d).valid);
    }

    #[test]
    fn unsolvable_and_budget() {
        let d = fixtures::domain(DomainId::BlocksWorld);
        let p = two_blocks(&[prop!("on", "a", "a")]);
        assert!(matches!(super::plan(&p, &d, 1000), Err(PlanError::Unsolvable(_))));
        let p = two_blocks(&[prop!("on", "a", "b")]);
        assert!(matches!(super::plan(&p, &d, 1), Err(PlanError::BudgetExceeded { budget: 1 })));
    }

    #[test]
    fn explore_counts_two_block_states() {
        let d = fixtures::domain(DomainId::BlocksWorld);
        let task = GroundTask::new(&two_blocks(&[]), &d);
        // a on b, b on a, both on table, holding a, holding b.
        assert_eq!(explore(&task, 100, |_| {}), Ok(5));
        assert_eq!(explore(&task, 3, |_| {}), Err(CapExceeded { cap: 3 }));
    }
}
