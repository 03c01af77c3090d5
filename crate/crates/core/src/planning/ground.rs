//! Grounding of a problem into fact and operator indices, restricted to
//! what relaxed reachability from the initial state can touch.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::HashMap;

use super::GroundAction;
use crate::fixtures::DomainId;
use crate::pddl::{ActionSchema, DomainModel, LiftedAtom, ProblemModel, Proposition};

#[derive(Debug, Clone)]
pub struct GroundOp {
    pub action: GroundAction,
    pub pre: Vec<usize>,
    pub add: Vec<usize>,
    pub del: Vec<usize>,
    /// Facts that must be false after the operator fires (state
    /// constraints such as one colour per tile).
    pub forbid: Vec<usize>,
}

/// A problem as bit-indexed facts and operators.
#[derive(Debug, Clone)]
pub struct GroundTask {
    pub facts: Vec<Proposition>,
    pub ops: Vec<GroundOp>,
    pub init: Vec<u64>,
    /// `None` when some goal fact can never become true.
    pub goal: Option<Vec<usize>>,
    pub words: usize,
    init_admissible: bool,
    index: HashMap<Proposition, usize>,
}

impl GroundTask {
    pub fn new(problem: &ProblemModel, domain: &DomainModel) -> GroundTask {
        let reachable = relaxed_closure(problem, domain);
        let facts: Vec<Proposition> = reachable.facts.into_iter().collect();
        let index: HashMap<Proposition, usize> =
            facts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let words = facts.len().div_ceil(64).max(1);

        let groups = mutex_groups(domain, &facts);
        let mut group_of: Vec<Option<usize>> = alloc::vec![None; facts.len()];
        for (g, members) in groups.iter().enumerate() {
            for &m in members {
                group_of[m] = Some(g);
            }
        }

        let ops = reachable
            .ops
            .into_iter()
            .map(|(schema, args)| {
                let ids = |atoms: &[LiftedAtom]| -> Vec<usize> {
                    let mut v: Vec<usize> = atoms
                        .iter()
                        .filter_map(|a| index.get(&a.ground(&args)).copied())
                        .collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                };
                let pre = ids(&schema.preconditions);
                let add = ids(&schema.add_effects);
                let del: Vec<usize> = ids(&schema.del_effects)
                    .into_iter()
                    .filter(|d| add.binary_search(d).is_err())
                    .collect();
                let mut forbid: Vec<usize> = add
                    .iter()
                    .filter_map(|&a| group_of[a])
                    .flat_map(|g| groups[g].iter().copied())
                    .filter(|f| add.binary_search(f).is_err())
                    .collect();
                forbid.sort_unstable();
                forbid.dedup();
                GroundOp {
                    action: GroundAction {
                        schema: schema.name.clone(),
                        arguments: args,
                    },
                    pre,
                    add,
                    del,
                    forbid,
                }
            })
            .collect();

        let mut init = alloc::vec![0u64; words];
        for p in &problem.init {
            set(&mut init, index[p]);
        }
        let goal = problem.goal.iter().map(|g| index.get(g).copied()).collect();
        let init_admissible = groups
            .iter()
            .all(|g| g.iter().filter(|&&f| get(&init, f)).count() <= 1);

        GroundTask {
            facts,
            ops,
            init,
            goal,
            words,
            init_admissible,
            index,
        }
    }

    pub fn fact_id(&self, p: &Proposition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn init_admissible(&self) -> bool {
        self.init_admissible
    }

    pub fn applicable(&self, state: &[u64], op: &GroundOp) -> bool {
        op.pre.iter().all(|&f| get(state, f))
    }

    /// Successor of `state` under `op`, or `None` if it breaks a state
    /// constraint. Assumes the operator is applicable.
    pub fn successor(&self, state: &[u64], op: &GroundOp, out: &mut Vec<u64>) -> bool {
        out.clear();
        out.extend_from_slice(state);
        for &d in &op.del {
            clear(out, d);
        }
        for &a in &op.add {
            set(out, a);
        }
        op.forbid.iter().all(|&f| !get(out, f))
    }

    pub fn satisfies_goal(&self, state: &[u64]) -> bool {
        match &self.goal {
            Some(g) => g.iter().all(|&f| get(state, f)),
            None => false,
        }
    }

    pub fn propositions(&self, state: &[u64]) -> BTreeSet<Proposition> {
        (0..self.facts.len())
            .filter(|&f| get(state, f))
            .map(|f| self.facts[f].clone())
            .collect()
    }
}

pub fn get(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

pub fn set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

pub fn clear(bits: &mut [u64], i: usize) {
    bits[i / 64] &= !(1 << (i % 64));
}

/// Groups of facts of which at most one may hold.
fn mutex_groups(domain: &DomainModel, facts: &[Proposition]) -> Vec<Vec<usize>> {
    if DomainId::from_name(&domain.name) != Some(DomainId::FloorTile) {
        return Vec::new();
    }
    let mut by_tile: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, f) in facts.iter().enumerate() {
        if f.predicate == "painted" && f.arguments.len() == 2 {
            by_tile.entry(&f.arguments[0]).or_default().push(i);
        }
    }
    by_tile.into_values().filter(|g| g.len() > 1).collect()
}

struct Closure<'d> {
    facts: BTreeSet<Proposition>,
    ops: Vec<(&'d ActionSchema, Vec<String>)>,
}

/// Facts and operators reachable when delete effects are ignored.
fn relaxed_closure<'d>(problem: &ProblemModel, domain: &'d DomainModel) -> Closure<'d> {
    let mut facts: BTreeSet<Proposition> = problem.init.clone();
    loop {
        let mut by_pred: BTreeMap<&str, Vec<&[String]>> = BTreeMap::new();
        for f in &facts {
            by_pred.entry(&f.predicate).or_default().push(&f.arguments);
        }
        let mut ops = Vec::new();
        for schema in &domain.actions {
            let mut order: Vec<&LiftedAtom> = schema.preconditions.iter().collect();
            // Bind through selective atoms first.
            order.sort_by_key(|a| by_pred.get(a.predicate.as_str()).map_or(0, Vec::len));
            let mut binding: Vec<Option<&str>> = alloc::vec![None; schema.parameters.len()];
            let mut found = Vec::new();
            bind(&order, &by_pred, &problem.objects, &mut binding, &mut found);
            found.sort();
            found.dedup();
            ops.extend(found.into_iter().map(|args| (schema, args)));
        }
        let before = facts.len();
        for (schema, args) in &ops {
            for a in &schema.add_effects {
                facts.insert(a.ground(args));
            }
        }
        if facts.len() == before {
            return Closure { facts, ops };
        }
    }
}

fn bind<'a>(
    atoms: &[&LiftedAtom],
    by_pred: &BTreeMap<&str, Vec<&'a [String]>>,
    objects: &'a [String],
    binding: &mut Vec<Option<&'a str>>,
    out: &mut Vec<Vec<String>>,
) {
    let Some((atom, rest)) = atoms.split_first() else {
        // Parameters that no precondition mentions range over all objects.
        if let Some(free) = binding.iter().position(Option::is_none) {
            for o in objects {
                binding[free] = Some(o);
                bind(atoms, by_pred, objects, binding, out);
            }
            binding[free] = None;
        } else {
            out.push(binding.iter().map(|b| String::from(b.unwrap_or_default())).collect());
        }
        return;
    };
    let Some(candidates) = by_pred.get(atom.predicate.as_str()) else {
        return;
    };
    for args in candidates {
        let saved: Vec<Option<&str>> = atom.args.iter().map(|&p| binding[p]).collect();
        let mut ok = true;
        for (slot, &param) in atom.args.iter().enumerate() {
            match binding[param] {
                Some(v) if v != args[slot] => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => binding[param] = Some(&args[slot]),
            }
        }
        if ok {
            bind(rest, by_pred, objects, binding, out);
        }
        for (&param, old) in atom.args.iter().zip(saved) {
            binding[param] = old;
        }
    }
}
