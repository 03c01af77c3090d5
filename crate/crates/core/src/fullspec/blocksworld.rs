use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::FullSpecError;
use crate::pddl::Proposition;
use crate::prop;

/// What a block rests on, or what rests on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Link<'a> {
    Unknown,
    /// `on-table` below, `clear` above.
    Open,
    Block(&'a str),
    Held,
}

/// Support relations stated by a set of propositions.
struct Layout<'a> {
    below: BTreeMap<&'a str, Link<'a>>,
    above: BTreeMap<&'a str, Link<'a>>,
    held: Option<&'a str>,
    arm_empty: bool,
}

fn conflict(msg: String) -> FullSpecError {
    FullSpecError::InconsistentGoal(msg)
}

impl<'a> Layout<'a> {
    fn read(objects: &'a [String], props: &'a BTreeSet<Proposition>) -> Result<Layout<'a>, String> {
        let mut below: BTreeMap<&str, Link> = objects.iter().map(|o| (o.as_str(), Link::Unknown)).collect();
        let mut above = below.clone();
        let mut held = None;
        let mut arm_empty = false;

        fn put<'a>(
            map: &mut BTreeMap<&'a str, Link<'a>>,
            block: &'a str,
            link: Link<'a>,
            side: &str,
        ) -> Result<(), String> {
            let slot = map.get_mut(block).ok_or_else(|| alloc::format!("`{block}` is not a declared block"))?;
            match *slot {
                Link::Unknown => {
                    *slot = link;
                    Ok(())
                }
                old if old == link => Ok(()),
                old => Err(alloc::format!("{block} has two things {side} it ({old:?} and {link:?})")),
            }
        }

        for p in props {
            let a = |i: usize| p.arguments[i].as_str();
            match p.predicate.as_str() {
                "on" => {
                    if a(0) == a(1) {
                        return Err(alloc::format!("{p} puts a block on itself"));
                    }
                    put(&mut below, a(0), Link::Block(a(1)), "below")?;
                    put(&mut above, a(1), Link::Block(a(0)), "above")?;
                }
                "on-table" => put(&mut below, a(0), Link::Open, "below")?,
                "clear" => put(&mut above, a(0), Link::Open, "above")?,
                "holding" => {
                    if held.is_some_and(|h| h != a(0)) {
                        return Err("the arm holds two blocks".into());
                    }
                    held = Some(a(0));
                    put(&mut below, a(0), Link::Held, "below")?;
                    put(&mut above, a(0), Link::Held, "above")?;
                }
                "arm-empty" => arm_empty = true,
                other => return Err(alloc::format!("unexpected predicate `{other}`")),
            }
        }
        if arm_empty && held.is_some() {
            return Err("the arm is both empty and holding a block".into());
        }
        let layout = Layout {
            below,
            above,
            held,
            arm_empty,
        };
        // Following `on` downwards from any block must terminate.
        for &start in layout.below.keys() {
            let mut cur = start;
            for _ in 0..=objects.len() {
                match layout.below[cur] {
                    Link::Block(next) => cur = next,
                    _ => break,
                }
                if cur == start {
                    return Err(alloc::format!("blocks stacked in a cycle through {start}"));
                }
            }
        }
        Ok(layout)
    }

    /// Towers as (bottom, top) pairs, including single blocks.
    fn chains(&self) -> Vec<(&'a str, &'a str)> {
        self.below
            .iter()
            .filter(|(_, l)| !matches!(l, Link::Block(_)))
            .map(|(&bottom, _)| {
                let mut top = bottom;
                while let Link::Block(next) = self.above[top] {
                    top = next;
                }
                (bottom, top)
            })
            .collect()
    }
}

/// Checks that `init` describes exactly one well-formed state.
pub(crate) fn validate_init(objects: &[String], init: &BTreeSet<Proposition>) -> Result<(), FullSpecError> {
    let layout = Layout::read(objects, init).map_err(FullSpecError::InvalidInit)?;
    for o in objects {
        if layout.below[o.as_str()] == Link::Unknown || layout.above[o.as_str()] == Link::Unknown {
            return Err(FullSpecError::InvalidInit(alloc::format!("position of {o} is not fully described")));
        }
    }
    if !layout.arm_empty && layout.held.is_none() {
        return Err(FullSpecError::InvalidInit("the arm is neither empty nor holding".into()));
    }
    Ok(())
}

/// A goal state that satisfies `goal`: unknown bottoms go on the table,
/// unknown tops stay clear and the arm is empty unless the goal says
/// otherwise. Returns chains bottom-first, plus the held block.
pub(crate) fn completion(
    objects: &[String],
    goal: &BTreeSet<Proposition>,
) -> Result<(Vec<Vec<String>>, Option<String>), FullSpecError> {
    let layout = Layout::read(objects, goal).map_err(conflict)?;
    let mut towers = Vec::new();
    for (bottom, _) in layout.chains() {
        if layout.below[bottom] == Link::Held {
            continue;
        }
        let mut tower = alloc::vec![String::from(bottom)];
        let mut cur = bottom;
        while let Link::Block(next) = layout.above[cur] {
            tower.push(String::from(next));
            cur = next;
        }
        towers.push(tower);
    }
    Ok((towers, layout.held.map(String::from)))
}

pub(super) fn forced(
    objects: &[String],
    init: &BTreeSet<Proposition>,
    goal: &BTreeSet<Proposition>,
) -> Result<BTreeSet<Proposition>, FullSpecError> {
    validate_init(objects, init)?;
    let layout = Layout::read(objects, goal).map_err(conflict)?;
    let chains = layout.chains();
    let arm_free = !layout.arm_empty && layout.held.is_none();
    let bottom_open = |b: &str| layout.below[b] == Link::Unknown;
    let top_open = |t: &str| layout.above[t] == Link::Unknown;
    // A lone block with nothing said about it could be the one in hand.
    let may_be_held = |&(b, t): &(&str, &str)| arm_free && b == t && bottom_open(b) && top_open(t);

    let mut out = BTreeSet::new();
    for (i, chain) in chains.iter().enumerate() {
        let (bottom, top) = *chain;
        let others = || chains.iter().enumerate().filter(move |(j, _)| *j != i).map(|(_, c)| c);
        if bottom_open(bottom) && !may_be_held(chain) && !others().any(|&(_, t)| top_open(t)) {
            out.insert(prop!("on-table", bottom));
        }
        if top_open(top) && !may_be_held(chain) && !others().any(|&(b, _)| bottom_open(b)) {
            out.insert(prop!("clear", top));
        }
    }
    if arm_free && !chains.iter().any(may_be_held) {
        out.insert(prop!("arm-empty"));
    }
    Ok(out)
}
