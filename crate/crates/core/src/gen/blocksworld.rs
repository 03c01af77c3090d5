use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use super::{composition, failed, names, GenError, Sizes, Task};
use crate::{prop, Proposition};

/// A Blocks World state: towers bottom-first and the held block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Layout {
    pub towers: Vec<Vec<String>>,
    pub held: Option<String>,
}

impl Layout {
    pub(crate) fn propositions(&self) -> BTreeSet<Proposition> {
        let mut out = BTreeSet::new();
        for tower in &self.towers {
            out.insert(prop!("on-table", &tower[0]));
            for w in tower.windows(2) {
                out.insert(prop!("on", &w[1], &w[0]));
            }
            out.insert(prop!("clear", tower.last().unwrap()));
        }
        match &self.held {
            Some(b) => out.insert(prop!("holding", b)),
            None => out.insert(prop!("arm-empty")),
        };
        out
    }

    /// Reads a complete state back into towers (ordered by bottom block).
    pub(crate) fn read(props: &BTreeSet<Proposition>) -> Layout {
        let mut towers = Vec::new();
        for p in props.iter().filter(|p| p.predicate == "on-table") {
            let mut tower = vec![p.arguments[0].clone()];
            while let Some(next) = props
                .iter()
                .find(|q| q.predicate == "on" && q.arguments[1] == *tower.last().unwrap())
            {
                if tower.contains(&next.arguments[0]) {
                    break;
                }
                tower.push(next.arguments[0].clone());
            }
            towers.push(tower);
        }
        let held = props.iter().find(|p| p.predicate == "holding").map(|p| p.arguments[0].clone());
        Layout { towers, held }
    }

    pub(crate) fn heights(&self) -> Vec<usize> {
        self.towers.iter().map(Vec::len).collect()
    }
}

/// Tower heights (and whether a block is held) for a non-tied task.
fn shape(task: Task, sizes: &Sizes<'_>, rng: &mut ChaCha8Rng) -> Result<(Vec<usize>, bool), GenError> {
    let n = sizes.require("blocks")?;
    if n == 0 {
        return Err(failed("at least one block is needed"));
    }
    Ok(match task {
        Task::Stacked => (vec![n], false),
        Task::Unstacked => (vec![1; n], false),
        Task::HoldingOne => (vec![1; n - 1], true),
        Task::Staircase => {
            let mut k = 0;
            while k * (k + 1) / 2 < n {
                k += 1;
            }
            if k * (k + 1) / 2 != n {
                return Err(failed(format!("{n} blocks do not form a staircase")));
            }
            ((1..=k).collect(), false)
        }
        Task::EqualTowers => {
            let t = sizes.or("towers", 1);
            if t == 0 || n % t != 0 {
                return Err(failed(format!("{n} blocks cannot form {t} towers of equal height")));
            }
            (vec![n / t; t], false)
        }
        Task::Towers | Task::Invert => (composition(n, sizes.or("towers", 2).min(n), rng)?, false),
        Task::BlocksSwap => (composition(n, 2, rng)?, false),
        _ => unreachable!("not a Blocks World task"),
    })
}

fn assign(heights: &[usize], held: bool, blocks: &[String]) -> Layout {
    let mut it = blocks.iter().cloned();
    let towers = heights.iter().map(|&h| it.by_ref().take(h).collect()).collect();
    Layout {
        towers,
        held: if held { it.next() } else { None },
    }
}

type Generated = (Vec<String>, BTreeSet<Proposition>, BTreeSet<Proposition>);

pub(super) fn generate(
    init_task: Task,
    goal_task: Task,
    init_sizes: &Sizes<'_>,
    goal_sizes: &Sizes<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<Generated, GenError> {
    let (heights, held) = shape(init_task, init_sizes, rng)?;
    let blocks = names("b", heights.iter().sum::<usize>() + held as usize);
    let init = assign(&heights, held, &blocks);
    let goal = match goal_task {
        Task::BlocksSwap => {
            let mut towers = init.towers.clone();
            let (a, b) = (towers[0][0].clone(), towers[1][0].clone());
            towers[0][0] = b;
            towers[1][0] = a;
            Layout { towers, held: None }
        }
        Task::Invert => Layout {
            towers: init.towers.iter().map(|t| t.iter().rev().cloned().collect()).collect(),
            held: None,
        },
        _ => {
            let (heights, held) = shape(goal_task, goal_sizes, rng)?;
            if heights.iter().sum::<usize>() + held as usize != blocks.len() {
                return Err(GenError::IncompatibleConfigs(format!(
                    "goal needs a different number of blocks than the {} available",
                    blocks.len()
                )));
            }
            assign(&heights, held, &blocks)
        }
    };
    Ok((blocks, init.propositions(), goal.propositions()))
}
