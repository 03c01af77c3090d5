use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;

use super::{props_with, FullSpecError};
use crate::pddl::Proposition;
use crate::prop;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Place<'a> {
    Room(&'a str),
    Gripper(&'a str),
}

/// A well-formed Gripper state.
#[derive(Debug, Clone)]
pub(crate) struct World<'a> {
    pub rooms: BTreeSet<&'a str>,
    pub balls: BTreeSet<&'a str>,
    pub grippers: BTreeSet<&'a str>,
    pub robby: &'a str,
    pub place: BTreeMap<&'a str, Place<'a>>,
}

impl<'a> World<'a> {
    pub(crate) fn read(init: &'a BTreeSet<Proposition>) -> Result<World<'a>, FullSpecError> {
        let bad = |m: String| FullSpecError::InvalidInit(m);
        fn kind<'a>(init: &'a BTreeSet<Proposition>, k: &str) -> BTreeSet<&'a str> {
            init.iter().filter(|p| p.predicate == k).map(|p| p.arguments[0].as_str()).collect()
        }
        let rooms = kind(init, "room");
        let balls = kind(init, "ball");
        let grippers = kind(init, "gripper");
        if !rooms.is_disjoint(&balls) || !rooms.is_disjoint(&grippers) || !balls.is_disjoint(&grippers) {
            return Err(bad("an object has two kinds".into()));
        }

        let robby: alloc::vec::Vec<&str> = props_with(init, "at-robby").map(|p| p.arguments[0].as_str()).collect();
        let [robby] = robby[..] else {
            return Err(bad(alloc::format!("expected one at-robby fact, found {}", robby.len())));
        };
        if !rooms.contains(robby) {
            return Err(bad(alloc::format!("robby is at {robby}, which is not a room")));
        }

        let mut place = BTreeMap::new();
        let mut load: BTreeMap<&str, usize> = BTreeMap::new();
        for p in init {
            let (ball, at) = match p.predicate.as_str() {
                "at" if rooms.contains(p.arguments[1].as_str()) => {
                    (p.arguments[0].as_str(), Place::Room(&p.arguments[1]))
                }
                "carry" if grippers.contains(p.arguments[1].as_str()) => {
                    *load.entry(&p.arguments[1]).or_default() += 1;
                    (p.arguments[0].as_str(), Place::Gripper(&p.arguments[1]))
                }
                "at" | "carry" => return Err(bad(alloc::format!("{p} is not well-typed"))),
                _ => continue,
            };
            if !balls.contains(ball) {
                return Err(bad(alloc::format!("{p} places a non-ball")));
            }
            if place.insert(ball, at).is_some() {
                return Err(bad(alloc::format!("{ball} is in two places")));
            }
        }
        if let Some(b) = balls.iter().find(|b| !place.contains_key(*b)) {
            return Err(bad(alloc::format!("{b} is nowhere")));
        }
        let free: BTreeSet<&str> = props_with(init, "free").map(|p| p.arguments[0].as_str()).collect();
        if !free.is_subset(&grippers) {
            return Err(bad("free applied to a non-gripper".into()));
        }
        for g in &grippers {
            match (free.contains(g), load.get(g).copied().unwrap_or(0)) {
                (true, 0) | (false, 1) => {}
                _ => return Err(bad(alloc::format!("{g} must be either free or carrying one ball"))),
            }
        }
        Ok(World {
            rooms,
            balls,
            grippers,
            robby,
            place,
        })
    }
}

/// Placement demanded by a goal.
pub(crate) struct Demands<'a> {
    pub robby: Option<&'a str>,
    pub place: BTreeMap<&'a str, Place<'a>>,
    pub free: BTreeSet<&'a str>,
    /// Gripper -> ball it must carry.
    pub carries: BTreeMap<&'a str, &'a str>,
}

pub(crate) fn demands<'a>(
    world: &World<'_>,
    init: &BTreeSet<Proposition>,
    goal: &'a BTreeSet<Proposition>,
) -> Result<Demands<'a>, FullSpecError> {
    let bad = |m: String| FullSpecError::InconsistentGoal(m);
    let mut d = Demands {
        robby: None,
        place: BTreeMap::new(),
        free: BTreeSet::new(),
        carries: BTreeMap::new(),
    };
    for p in goal {
        let a = |i: usize| p.arguments[i].as_str();
        match p.predicate.as_str() {
            "room" | "ball" | "gripper" => {
                if !init.contains(p) {
                    return Err(bad(alloc::format!("{p} is static and false initially")));
                }
            }
            "at-robby" => {
                if !world.rooms.contains(a(0)) {
                    return Err(bad(alloc::format!("{p}: not a room")));
                }
                if d.robby.is_some_and(|r| r != a(0)) {
                    return Err(bad("robby in two rooms".into()));
                }
                d.robby = Some(a(0));
            }
            "at" | "carry" => {
                let (ball, at) = if p.predicate == "at" {
                    if !world.rooms.contains(a(1)) {
                        return Err(bad(alloc::format!("{p}: not a room")));
                    }
                    (a(0), Place::Room(a(1)))
                } else {
                    if !world.grippers.contains(a(1)) {
                        return Err(bad(alloc::format!("{p}: not a gripper")));
                    }
                    if d.carries.insert(a(1), a(0)).is_some() {
                        return Err(bad(alloc::format!("{} carries two balls", a(1))));
                    }
                    (a(0), Place::Gripper(a(1)))
                };
                if !world.balls.contains(ball) {
                    return Err(bad(alloc::format!("{p}: not a ball")));
                }
                if d.place.insert(ball, at).is_some() {
                    return Err(bad(alloc::format!("{ball} is in two places")));
                }
            }
            "free" => {
                if !world.grippers.contains(a(0)) {
                    return Err(bad(alloc::format!("{p}: not a gripper")));
                }
                d.free.insert(a(0));
            }
            other => return Err(bad(alloc::format!("unexpected predicate `{other}`"))),
        }
    }
    if let Some(g) = d.free.iter().find(|g| d.carries.contains_key(*g)) {
        return Err(bad(alloc::format!("{g} is both free and carrying")));
    }
    if world.grippers.is_empty() {
        // Nothing can move a ball.
        if let Some((b, _)) = d.place.iter().find(|(b, at)| world.place.get(*b) != Some(*at)) {
            return Err(bad(alloc::format!("{b} cannot be moved without grippers")));
        }
    }
    Ok(d)
}

pub(super) fn forced(
    _objects: &[String],
    init: &BTreeSet<Proposition>,
    goal: &BTreeSet<Proposition>,
) -> Result<BTreeSet<Proposition>, FullSpecError> {
    let world = World::read(init)?;
    let d = demands(&world, init, goal)?;
    let mut out: BTreeSet<Proposition> = init
        .iter()
        .filter(|p| matches!(p.predicate.as_str(), "room" | "ball" | "gripper"))
        .cloned()
        .collect();

    let only_room = match world.rooms.len() {
        1 => world.rooms.first().copied(),
        _ => None,
    };
    if let (None, Some(r)) = (d.robby, only_room) {
        out.insert(prop!("at-robby", r));
    }

    let open_balls: alloc::vec::Vec<&str> = world.balls.iter().copied().filter(|b| !d.place.contains_key(b)).collect();
    let open_grippers: alloc::vec::Vec<&str> = world
        .grippers
        .iter()
        .copied()
        .filter(|g| !d.free.contains(g) && !d.carries.contains_key(g))
        .collect();

    for &b in &open_balls {
        if world.grippers.is_empty() {
            if let Some(Place::Room(r)) = world.place.get(b) {
                out.insert(prop!("at", b, r));
            }
        } else if let (Some(r), true) = (only_room, open_grippers.is_empty()) {
            out.insert(prop!("at", b, r));
        }
    }
    if open_balls.is_empty() {
        for g in open_grippers {
            out.insert(prop!("free", g));
        }
    }
    Ok(out)
}
