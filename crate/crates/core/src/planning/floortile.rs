use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{search, GroundAction, Plan, PlanError};
use crate::pddl::{DomainModel, ProblemModel};

/// Default number of states breadth-first search may expand.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// Plans constructively where it can and falls back to breadth-first search.
///
/// Robots never block one another and no precondition mentions `painted`,
/// so paint goals are independent: each is handed to the robot that can
/// reach a neighbouring tile most cheaply with the right colour. A paint goal
/// no robot can ever serve makes the problem unsolvable outright. Unusual
/// shapes (malformed init, robot-has goals that compete with painting) go to
/// search. [`PlanError::BudgetExceeded`] means the search stopped early, not
/// that the problem is unsolvable.
pub fn plan_floortile(problem: &ProblemModel, domain: &DomainModel, node_budget: usize) -> Result<Plan, PlanError> {
    match constructive(problem) {
        Ok(plan) => Ok(plan),
        Err(Attempt::Unsolvable(why)) => Err(PlanError::Unsolvable(why)),
        Err(Attempt::GiveUp) => search::plan(problem, domain, node_budget),
    }
}

enum Attempt {
    Unsolvable(String),
    GiveUp,
}

/// Move or paint direction from one tile to a neighbour, named after the
/// action that performs it.
type Step<'a> = (&'a str, &'static str);

struct Floor<'a> {
    steps: BTreeMap<&'a str, Vec<Step<'a>>>,
    position: BTreeMap<&'a str, &'a str>,
    color: BTreeMap<&'a str, &'a str>,
    available: BTreeSet<&'a str>,
    painted: BTreeMap<&'a str, &'a str>,
}

impl<'a> Floor<'a> {
    fn read(problem: &'a ProblemModel) -> Result<Floor<'a>, Attempt> {
        let mut f = Floor {
            steps: BTreeMap::new(),
            position: BTreeMap::new(),
            color: BTreeMap::new(),
            available: BTreeSet::new(),
            painted: BTreeMap::new(),
        };
        for p in &problem.init {
            let a = |i: usize| p.arguments[i].as_str();
            let fresh = match (p.predicate.as_str(), p.arguments.len()) {
                // up(y, x): y is above x.
                ("up", 2) => {
                    f.steps.entry(a(1)).or_default().push((a(0), "up"));
                    f.steps.entry(a(0)).or_default().push((a(1), "down"));
                    true
                }
                // right(y, x): y is right of x.
                ("right", 2) => {
                    f.steps.entry(a(1)).or_default().push((a(0), "right"));
                    f.steps.entry(a(0)).or_default().push((a(1), "left"));
                    true
                }
                ("robot-at", 2) => f.position.insert(a(0), a(1)).is_none(),
                ("robot-has", 2) => f.color.insert(a(0), a(1)).is_none(),
                ("painted", 2) => f.painted.insert(a(0), a(1)).is_none(),
                ("available-color", 1) => f.available.insert(a(0)),
                _ => false,
            };
            if !fresh {
                return Err(Attempt::GiveUp);
            }
        }
        if f.color.keys().any(|r| !f.position.contains_key(r)) {
            return Err(Attempt::GiveUp);
        }
        Ok(f)
    }

    /// Shortest move sequence from `from` to any tile satisfying `done`.
    fn route(&self, from: &'a str, done: impl Fn(&'a str) -> bool) -> Option<(&'a str, Vec<(&'a str, Step<'a>)>)> {
        let mut back: BTreeMap<&str, Option<(&str, &'static str)>> = BTreeMap::new();
        back.insert(from, None);
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            if done(x) {
                let mut path = Vec::new();
                let mut cur = x;
                while let Some(Some((prev, dir))) = back.get(cur) {
                    path.push((*prev, (cur, *dir)));
                    cur = prev;
                }
                path.reverse();
                return Some((x, path));
            }
            for &(y, dir) in self.steps.get(x).into_iter().flatten() {
                if !back.contains_key(y) {
                    back.insert(y, Some((x, dir)));
                    queue.push_back(y);
                }
            }
        }
        None
    }
}

fn constructive(problem: &ProblemModel) -> Result<Plan, Attempt> {
    let mut f = Floor::read(problem)?;
    let unsolvable = |m: String| Err(Attempt::Unsolvable(m));
    let mut paint: BTreeMap<&str, &str> = BTreeMap::new();
    let mut park: BTreeMap<&str, &str> = BTreeMap::new();
    let mut keep: BTreeMap<&str, &str> = BTreeMap::new();
    for g in &problem.goal {
        let a = |i: usize| g.arguments[i].as_str();
        match (g.predicate.as_str(), g.arguments.len()) {
            ("up" | "right" | "available-color", _) => {
                if !problem.init.contains(g) {
                    return unsolvable(format!("{g} is static and false initially"));
                }
            }
            ("painted", 2) => {
                if let Some(&c) = f.painted.get(a(0)).filter(|&&c| c != a(1)) {
                    return unsolvable(format!("{} is already painted {c}", a(0)));
                }
                if paint.insert(a(0), a(1)).is_some() {
                    return unsolvable(format!("{} cannot take two colours", a(0)));
                }
            }
            ("robot-at", 2) if park.insert(a(0), a(1)).is_none() => {}
            ("robot-has", 2) if keep.insert(a(0), a(1)).is_none() => {}
            _ => return Err(Attempt::GiveUp),
        }
    }
    if park.keys().chain(keep.keys()).any(|r| !f.position.contains_key(r)) {
        return Err(Attempt::GiveUp);
    }

    let robots: Vec<&str> = f.position.keys().copied().collect();
    // Robots only gain reach by moving and colours by switching to available
    // ones, so a paint goal nobody could serve from the start never becomes
    // servable.
    for (&tile, &want) in &paint {
        let next_to = |x: &str| f.steps.get(x).is_some_and(|s| s.iter().any(|&(y, _)| y == tile));
        let servable = robots.iter().any(|&r| {
            f.color.get(r).is_some_and(|&has| has == want || f.available.contains(want))
                && f.route(f.position[r], next_to).is_some()
        });
        if f.painted.get(tile) != Some(&want) && !servable {
            return unsolvable(format!("no robot can paint {tile} {want}"));
        }
    }
    // Colours that cannot be switched to are only held initially; use them
    // before anyone switches away.
    let mut order: Vec<(&str, &str)> = paint.iter().map(|(&t, &c)| (t, c)).collect();
    order.sort_by_key(|&(_, c)| f.available.contains(c));

    let mut steps = Vec::new();
    for (tile, want) in order {
        if f.painted.get(tile) == Some(&want) {
            continue;
        }
        let mut best: Option<(usize, &str, &str, Vec<(&str, Step<'_>)>)> = None;
        for &r in &robots {
            let Some(&has) = f.color.get(r) else { continue };
            if has != want && !f.available.contains(want) {
                continue;
            }
            // A robot that must end with a colour it could not get back
            // keeps that colour throughout.
            if has != want && keep.get(r).is_some_and(|&k| k == has && !f.available.contains(k)) {
                continue;
            }
            let next_to = |x: &str| f.steps.get(x).is_some_and(|s| s.iter().any(|&(y, _)| y == tile));
            if let Some((at, path)) = f.route(f.position[r], next_to) {
                let cost = path.len() + usize::from(has != want);
                if best.as_ref().is_none_or(|b| cost < b.0) {
                    best = Some((cost, r, at, path));
                }
            }
        }
        let Some((_, r, at, path)) = best else {
            return Err(Attempt::GiveUp);
        };
        for (from, (to, dir)) in path {
            steps.push(GroundAction::new(dir, [r, from, to]));
        }
        f.position.insert(r, at);
        let has = f.color[r];
        if has != want {
            steps.push(GroundAction::new("change-color", [r, has, want]));
            f.color.insert(r, want);
        }
        let dir = f.steps[at].iter().find(|&&(y, _)| y == tile).map(|&(_, d)| d).unwrap_or("up");
        steps.push(GroundAction::new(&format!("paint-{dir}"), [r, tile, at, want]));
        f.painted.insert(tile, want);
    }

    for (&r, &target) in &park {
        let Some((_, path)) = f.route(f.position[r], |x| x == target) else {
            return unsolvable(format!("{r} cannot reach {target}"));
        };
        for (from, (to, dir)) in path {
            steps.push(GroundAction::new(dir, [r, from, to]));
        }
        f.position.insert(r, target);
    }
    for (&r, &want) in &keep {
        match f.color.get(r) {
            Some(&has) if has == want => {}
            Some(&has) if f.available.contains(want) => {
                steps.push(GroundAction::new("change-color", [r, has, want]));
                f.color.insert(r, want);
            }
            _ => return Err(Attempt::GiveUp),
        }
    }
    Ok(Plan { steps })
}
