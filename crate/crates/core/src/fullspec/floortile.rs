use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::FullSpecError;
use crate::pddl::Proposition;
use crate::prop;

/// Static layout and initial robot data of a Floor Tile problem.
struct Floor<'a> {
    robots: BTreeSet<&'a str>,
    available: BTreeSet<&'a str>,
    neighbours: BTreeMap<&'a str, BTreeSet<&'a str>>,
    position: BTreeMap<&'a str, &'a str>,
    initial_color: BTreeMap<&'a str, &'a str>,
    painted: BTreeMap<&'a str, &'a str>,
}

impl<'a> Floor<'a> {
    fn read(init: &'a BTreeSet<Proposition>) -> Result<Floor<'a>, FullSpecError> {
        let bad = |m: String| FullSpecError::InvalidInit(m);
        let mut robots = BTreeSet::new();
        let mut tiles = BTreeSet::new();
        let mut colors = BTreeSet::new();
        let mut available = BTreeSet::new();
        let mut neighbours: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        let mut position = BTreeMap::new();
        let mut initial_color = BTreeMap::new();
        let mut painted = BTreeMap::new();
        for p in init {
            let a = |i: usize| p.arguments[i].as_str();
            match p.predicate.as_str() {
                "robot-at" => {
                    robots.insert(a(0));
                    tiles.insert(a(1));
                    if position.insert(a(0), a(1)).is_some() {
                        return Err(bad(alloc::format!("{} stands on two tiles", a(0))));
                    }
                }
                "robot-has" => {
                    robots.insert(a(0));
                    colors.insert(a(1));
                    if initial_color.insert(a(0), a(1)).is_some() {
                        return Err(bad(alloc::format!("{} has two colours", a(0))));
                    }
                }
                "up" | "right" => {
                    tiles.insert(a(0));
                    tiles.insert(a(1));
                    neighbours.entry(a(0)).or_default().insert(a(1));
                    neighbours.entry(a(1)).or_default().insert(a(0));
                }
                "painted" => {
                    tiles.insert(a(0));
                    colors.insert(a(1));
                    if painted.insert(a(0), a(1)).is_some() {
                        return Err(bad(alloc::format!("{} carries two colours", a(0))));
                    }
                }
                "available-color" => {
                    colors.insert(a(0));
                    available.insert(a(0));
                }
                other => return Err(bad(alloc::format!("unexpected predicate `{other}`"))),
            }
        }
        if !robots.is_disjoint(&tiles) || !robots.is_disjoint(&colors) || !tiles.is_disjoint(&colors) {
            return Err(bad("an object plays two roles".into()));
        }
        if let Some(r) = robots.iter().find(|r| !position.contains_key(*r)) {
            return Err(bad(alloc::format!("{r} is not on any tile")));
        }
        Ok(Floor {
            robots,
            available,
            neighbours,
            position,
            initial_color,
            painted,
        })
    }

    /// Tiles a robot can walk to.
    fn region(&self, robot: &str) -> BTreeSet<&'a str> {
        let start = self.position[robot];
        let mut seen = BTreeSet::from([start]);
        let mut stack = alloc::vec![start];
        while let Some(t) = stack.pop() {
            for &n in self.neighbours.get(t).into_iter().flatten() {
                if seen.insert(n) {
                    stack.push(n);
                }
            }
        }
        seen
    }

    fn can_reach_to_paint(&self, region: &BTreeSet<&str>, tile: &str) -> bool {
        self.neighbours
            .get(tile)
            .is_some_and(|ns| ns.iter().any(|n| region.contains(n)))
    }
}

struct Robot<'a> {
    region: BTreeSet<&'a str>,
    start_color: Option<&'a str>,
}

pub(super) fn forced(
    _objects: &[String],
    init: &BTreeSet<Proposition>,
    goal: &BTreeSet<Proposition>,
) -> Result<BTreeSet<Proposition>, FullSpecError> {
    let floor = Floor::read(init)?;
    let bad = |m: String| FullSpecError::InconsistentGoal(m);
    let robots: BTreeMap<&str, Robot> = floor
        .robots
        .iter()
        .map(|&r| {
            (
                r,
                Robot {
                    region: floor.region(r),
                    start_color: floor.initial_color.get(r).copied(),
                },
            )
        })
        .collect();

    let mut goal_at: BTreeMap<&str, &str> = BTreeMap::new();
    let mut goal_has: BTreeMap<&str, &str> = BTreeMap::new();
    let mut goal_paint: BTreeMap<&str, &str> = BTreeMap::new();
    for p in goal {
        let a = |i: usize| p.arguments[i].as_str();
        match p.predicate.as_str() {
            "up" | "right" | "available-color" => {
                if !init.contains(p) {
                    return Err(bad(alloc::format!("{p} is static and false initially")));
                }
            }
            "robot-at" => {
                let robot = robots.get(a(0)).ok_or_else(|| bad(alloc::format!("{p}: not a robot")))?;
                if !robot.region.contains(a(1)) {
                    return Err(bad(alloc::format!("{} cannot reach {}", a(0), a(1))));
                }
                if goal_at.insert(a(0), a(1)).is_some() {
                    return Err(bad(alloc::format!("{} on two tiles", a(0))));
                }
            }
            "robot-has" => {
                let robot = robots.get(a(0)).ok_or_else(|| bad(alloc::format!("{p}: not a robot")))?;
                let Some(c0) = robot.start_color else {
                    return Err(bad(alloc::format!("{} never holds a colour", a(0))));
                };
                if a(1) != c0 && !floor.available.contains(a(1)) {
                    return Err(bad(alloc::format!("{} cannot obtain {}", a(0), a(1))));
                }
                if goal_has.insert(a(0), a(1)).is_some() {
                    return Err(bad(alloc::format!("{} holds two colours", a(0))));
                }
            }
            "painted" => {
                if let Some(&old) = floor.painted.get(a(0)) {
                    if old != a(1) {
                        return Err(bad(alloc::format!("{} is already painted {old}", a(0))));
                    }
                }
                if goal_paint.insert(a(0), a(1)).is_some() {
                    return Err(bad(alloc::format!("{} painted two colours", a(0))));
                }
            }
            other => return Err(bad(alloc::format!("unexpected predicate `{other}`"))),
        }
    }

    // Colours a robot may paint with. Ending on a start colour that cannot
    // be fetched again means the robot never switched.
    let palette = |r: &str, pinned: Option<&str>| -> BTreeSet<&str> {
        let Some(c0) = robots[r].start_color else {
            return BTreeSet::new();
        };
        let mut out = BTreeSet::from([c0]);
        if pinned != Some(c0) || floor.available.contains(c0) {
            out.extend(floor.available.iter().copied());
        }
        out
    };
    let feasible = |pinned: &BTreeMap<&str, &str>| -> Result<(), String> {
        for (&tile, &colour) in &goal_paint {
            if floor.painted.get(tile) == Some(&colour) {
                continue;
            }
            let ok = robots.iter().any(|(&r, robot)| {
                palette(r, pinned.get(r).copied()).contains(colour) && floor.can_reach_to_paint(&robot.region, tile)
            });
            if !ok {
                return Err(alloc::format!("no robot can paint {tile} with {colour}"));
            }
        }
        Ok(())
    };
    feasible(&goal_has).map_err(bad)?;

    let mut out = BTreeSet::new();
    for p in init {
        if matches!(p.predicate.as_str(), "up" | "right" | "available-color" | "painted") {
            out.insert(p.clone());
        }
    }
    for (&r, robot) in &robots {
        if !goal_at.contains_key(r) && robot.region.len() == 1 {
            out.insert(prop!("robot-at", r, floor.position[r]));
        }
        let (Some(c0), false) = (robot.start_color, goal_has.contains_key(r)) else {
            continue;
        };
        let others: Vec<&str> = floor.available.iter().copied().filter(|&c| c != c0).collect();
        match others[..] {
            [] => {
                out.insert(prop!("robot-has", r, c0));
            }
            [only] => {
                let mut pinned = goal_has.clone();
                pinned.insert(r, c0);
                if feasible(&pinned).is_err() {
                    out.insert(prop!("robot-has", r, only));
                }
            }
            _ => {}
        }
    }
    Ok(out)
}
