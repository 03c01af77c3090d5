use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use super::{composition, failed, names, GenError, Sizes, Task};
use crate::{prop, Proposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Place {
    Room(usize),
    Gripper(usize),
}

struct Universe {
    rooms: Vec<String>,
    balls: Vec<String>,
    grippers: Vec<String>,
}

impl Universe {
    fn facts(&self, places: &[Place]) -> BTreeSet<Proposition> {
        let mut out = BTreeSet::new();
        for (ball, place) in self.balls.iter().zip(places) {
            out.insert(match *place {
                Place::Room(r) => prop!("at", ball, &self.rooms[r]),
                Place::Gripper(g) => prop!("carry", ball, &self.grippers[g]),
            });
        }
        out
    }

    fn free(&self, places: &[Place]) -> impl Iterator<Item = Proposition> + '_ {
        let busy: BTreeSet<usize> = places
            .iter()
            .filter_map(|p| match p {
                Place::Gripper(g) => Some(*g),
                Place::Room(_) => None,
            })
            .collect();
        self.grippers
            .iter()
            .enumerate()
            .filter(move |(i, _)| !busy.contains(i))
            .map(|(_, g)| prop!("free", g))
    }
}

/// Balls per room, rooms in order, summing to `balls`.
fn spread(balls: usize, rooms: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>, GenError> {
    Ok(composition(balls + rooms, rooms, rng)?.into_iter().map(|c| c - 1).collect())
}

fn rooms_from_counts(counts: &[usize]) -> Vec<Place> {
    counts
        .iter()
        .enumerate()
        .flat_map(|(r, &c)| core::iter::repeat(Place::Room(r)).take(c))
        .collect()
}

fn evenly(balls: usize, rooms: usize) -> Result<Vec<Place>, GenError> {
    if balls % rooms != 0 {
        return Err(failed(format!("{balls} balls cannot be spread evenly over {rooms} rooms")));
    }
    Ok(rooms_from_counts(&vec![balls / rooms; rooms]))
}

/// The first `k` balls in the first `k` grippers, the rest in the first room.
fn carried(balls: usize, grippers: usize, k: usize) -> Result<Vec<Place>, GenError> {
    if k > balls.min(grippers) {
        return Err(failed(format!("cannot carry {k} balls with {balls} balls and {grippers} grippers")));
    }
    Ok((0..balls).map(|b| if b < k { Place::Gripper(b) } else { Place::Room(0) }).collect())
}

type Generated = (Vec<String>, BTreeSet<Proposition>, BTreeSet<Proposition>);

pub(super) fn generate(
    init_task: Task,
    goal_task: Task,
    sizes: &Sizes<'_>,
    _goal_sizes: &Sizes<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<Generated, GenError> {
    let (r, b, g) = (sizes.require("rooms")?, sizes.require("balls")?, sizes.or("grippers", 2));
    if r == 0 {
        return Err(failed("at least one room is needed"));
    }
    let u = Universe {
        rooms: names("room", r),
        balls: names("ball", b),
        grippers: names("gripper", g),
    };
    let start = match init_task {
        Task::OneRoom => carried(b, g, sizes.or("carried", 0))?,
        Task::EvenlyDistributed => evenly(b, r)?,
        Task::Distribute => rooms_from_counts(&spread(b, r, rng)?),
        Task::RoomsSwap => {
            if r != 2 {
                return Err(failed("swapping rooms needs exactly two rooms"));
            }
            rooms_from_counts(&spread(b, 2, rng)?)
        }
        Task::Juggle => {
            let k = sizes.or("carried", b.min(g) as u32);
            if k == 0 || g < 2 {
                return Err(failed("juggling needs a carried ball and two grippers"));
            }
            carried(b, g, k)?
        }
        _ => unreachable!("not a Gripper initial task"),
    };

    let mut init = BTreeSet::new();
    for (kind, objs) in [("room", &u.rooms), ("ball", &u.balls), ("gripper", &u.grippers)] {
        init.extend(objs.iter().map(|o| prop!(kind, o)));
    }
    init.insert(prop!("at-robby", &u.rooms[0]));
    init.extend(u.facts(&start));
    init.extend(u.free(&start));

    let in_room = |r: usize| start.iter().filter(|p| **p == Place::Room(r)).count();
    let all_in = |room: usize| vec![Place::Room(room); b];
    let goal_places = match goal_task {
        Task::OneRoom => all_in(0),
        Task::EvenlyDistributed => evenly(b, r)?,
        Task::Distribute => rooms_from_counts(&spread(b, r, rng)?),
        Task::MoveToMax => all_in((0..r).rev().max_by_key(|&i| in_room(i)).unwrap()),
        Task::MoveToMin => all_in((0..r).min_by_key(|&i| in_room(i)).unwrap()),
        Task::RoomsSwap => start
            .iter()
            .map(|p| match p {
                Place::Room(i) => Place::Room(1 - i),
                other => *other,
            })
            .collect(),
        Task::Pickup => {
            if b > g {
                return Err(failed(format!("{b} balls cannot all be held by {g} grippers")));
            }
            (0..b).map(Place::Gripper).collect()
        }
        Task::DropAndPickup => {
            let mut next = 0;
            let mut out = Vec::with_capacity(b);
            for p in &start {
                out.push(match p {
                    Place::Gripper(_) => Place::Room(0),
                    Place::Room(_) => {
                        next += 1;
                        Place::Gripper(next - 1)
                    }
                });
            }
            if next > g {
                return Err(failed(format!("{next} balls cannot all be held by {g} grippers")));
            }
            out
        }
        Task::Juggle => {
            let mut goal = BTreeSet::new();
            for (ball, p) in u.balls.iter().zip(&start) {
                if let Place::Gripper(i) = p {
                    goal.insert(prop!("carry", ball, &u.grippers[(i + 1) % g]));
                }
            }
            return Ok((objects(&u), init, goal));
        }
        _ => unreachable!("not a Gripper goal task"),
    };
    let mut goal = u.facts(&goal_places);
    goal.extend(u.free(&goal_places));
    Ok((objects(&u), init, goal))
}

fn objects(u: &Universe) -> Vec<String> {
    u.rooms.iter().chain(&u.balls).chain(&u.grippers).cloned().collect()
}
