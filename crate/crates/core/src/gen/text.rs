//! Natural-language descriptions of generated problems.
//!
//! Explicit mode states every proposition as its own sentence; abstract mode
//! describes the task that produced the state. The Blocks World sentences,
//! the Gripper goal sentences and the Floor Tile explicit sentences follow
//! published examples word for word; the remaining phrasings are this
//! crate's own.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::blocksworld::Layout;
use super::{Task, TaskConfig};
use crate::fixtures::DomainId;
use crate::{ProblemModel, Proposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Abstraction {
    Abstract,
    Explicit,
}

impl Abstraction {
    pub fn as_str(self) -> &'static str {
        match self {
            Abstraction::Abstract => "abstract",
            Abstraction::Explicit => "explicit",
        }
    }
}

/// Describes `problem`, which must have been generated from `init_cfg` and
/// `goal_cfg`.
pub fn render_text(
    problem: &ProblemModel,
    init_cfg: &TaskConfig,
    goal_cfg: &TaskConfig,
    init_mode: Abstraction,
    goal_mode: Abstraction,
) -> String {
    let mut out = match init_cfg.domain {
        DomainId::BlocksWorld => blocksworld_init(problem, init_cfg.task, init_mode),
        DomainId::Gripper => gripper_init(problem, init_cfg.task, init_mode),
        DomainId::FloorTile => floortile_init(problem, init_cfg, goal_cfg, init_mode),
    };
    out.push_str(" Your goal is to ");
    match goal_mode {
        Abstraction::Explicit => {
            out.push_str("have the following: ");
            out.push_str(&sentences(init_cfg.domain, &problem.goal, true).join(" "));
        }
        Abstraction::Abstract => {
            out.push_str(&goal_phrase(problem, goal_cfg.task));
            out.push('.');
        }
    }
    out
}

fn list(items: &[usize]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn ordinal(n: usize) -> String {
    const WORDS: [&str; 10] = [
        "first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth", "tenth",
    ];
    WORDS.get(n.wrapping_sub(1)).map_or_else(|| format!("{n}th"), |w| w.to_string())
}

fn count(props: &BTreeSet<Proposition>, predicate: &str) -> usize {
    props.iter().filter(|p| p.predicate == predicate).count()
}

fn blocksworld_init(problem: &ProblemModel, task: Task, mode: Abstraction) -> String {
    let n = problem.objects.len();
    let mut out = match n {
        0 => "You have no blocks".to_string(),
        1 => format!("You have 1 block, {}", problem.objects[0]),
        _ => format!("You have {n} blocks, {} through {}", problem.objects[0], problem.objects[n - 1]),
    };
    match mode {
        Abstraction::Explicit => {
            out.push_str(". ");
            out.push_str(&sentences(DomainId::BlocksWorld, &problem.init, false).join(" "));
        }
        Abstraction::Abstract => {
            let heights = Layout::read(&problem.init).heights();
            let t = heights.len();
            let phrase = match task {
                Task::Stacked => "stacked into a single tower, and your arm is empty".to_string(),
                Task::Unstacked => "each placed separately on the table, and your arm is empty".to_string(),
                Task::HoldingOne => {
                    "all placed separately on the table except one, which your arm is holding".to_string()
                }
                Task::Staircase => {
                    format!("stacked into {t} towers of incrementing heights {}, and your arm is empty", list(&heights))
                }
                Task::EqualTowers => format!("stacked into {t} towers of equal heights, and your arm is empty"),
                _ => format!("stacked into {t} towers of heights {}, and your arm is empty", list(&heights)),
            };
            let _ = write!(out, ", {phrase}.");
        }
    }
    out
}

fn gripper_init(problem: &ProblemModel, task: Task, mode: Abstraction) -> String {
    let init = &problem.init;
    let mut out = format!(
        "You have {} rooms, {} balls, and {} grippers.",
        count(init, "room"),
        count(init, "ball"),
        count(init, "gripper")
    );
    match mode {
        Abstraction::Explicit => {
            out.push(' ');
            out.push_str(&sentences(DomainId::Gripper, init, false).join(" "));
        }
        Abstraction::Abstract => {
            let carried = count(init, "carry");
            let body = match task {
                Task::EvenlyDistributed => "The balls are evenly distributed across the rooms.".to_string(),
                Task::Distribute | Task::RoomsSwap => {
                    format!("The rooms hold {} balls respectively.", list(&room_counts(init)))
                }
                _ if carried == 0 => "All balls are in the first room.".to_string(),
                _ => format!(
                    "{carried} balls are distributed across the same number of grippers, and the rest are in the first room."
                ),
            };
            let _ = write!(out, " {body} The robby is in the first room.");
        }
    }
    out
}

/// Balls per room, rooms in name order.
fn room_counts(props: &BTreeSet<Proposition>) -> Vec<usize> {
    let rooms: Vec<&str> = props
        .iter()
        .filter(|p| p.predicate == "room")
        .map(|p| p.arguments[0].as_str())
        .collect();
    rooms
        .iter()
        .map(|r| props.iter().filter(|p| p.predicate == "at" && p.arguments[1] == *r).count())
        .collect()
}

fn plural(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("{n} {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

fn floortile_init(problem: &ProblemModel, init_cfg: &TaskConfig, goal_cfg: &TaskConfig, mode: Abstraction) -> String {
    let kind = |prefix: &str| problem.objects.iter().filter(|o| o.starts_with(prefix)).count();
    let (robots, tiles, colors) = (kind("robot"), kind("tile"), kind("color"));
    if mode == Abstraction::Explicit {
        return format!(
            "You have {}. You have {}. You have {}. {}",
            plural(robots, "robot"),
            plural(tiles, "tile"),
            plural(colors, "color"),
            sentences(DomainId::FloorTile, &problem.init, false).join(" ")
        );
    }
    let size = |k: &str| init_cfg.get(k).or_else(|| goal_cfg.get(k)).unwrap_or(0) as usize;
    let (rows, cols) = (size("rows"), size("cols"));
    let mut out = format!("You have {robots} robots, {colors} colors, and {tiles} unpainted tiles ");
    if init_cfg.task == Task::DisconnectedRows {
        let _ = write!(
            out,
            "arranged in {rows} rows of {cols} tiles, with no connections between rows. \
             Each robot is at the left end of its own row, and has the first color."
        );
    } else {
        let _ = write!(out, "arranged in a grid with {rows} rows and {cols} columns");
        if init_cfg.task == Task::Rings {
            let _ = write!(
                out,
                ", forming {} concentric rings numbered from the outside in",
                rows.min(cols).div_ceil(2)
            );
        }
        out.push('.');
        const CORNERS: [&str; 4] = ["top-left", "bottom-right", "top-right", "bottom-left"];
        for (i, corner) in CORNERS.iter().enumerate().take(robots) {
            let _ = write!(
                out,
                " The {} robot is at the {corner} corner, and has the {} color.",
                ordinal(i + 1),
                ordinal(i % colors.max(1) + 1)
            );
        }
    }
    out.push_str(" All colors are available.");
    out
}

fn goal_phrase(problem: &ProblemModel, task: Task) -> String {
    let layout = || Layout::read(&problem.goal).heights();
    match task {
        Task::Stacked => "stack all the blocks into a single tower".into(),
        Task::Unstacked => "place every block separately on the table, with your arm empty".into(),
        Task::HoldingOne => "place all blocks but one separately on the table, and hold the last one".into(),
        Task::Staircase => {
            let h = layout();
            format!("stack the blocks into {} towers of incrementing heights {}", h.len(), list(&h))
        }
        Task::EqualTowers => format!("stack the blocks into {} towers of equal heights", layout().len()),
        Task::Towers => {
            let h = layout();
            format!("stack the blocks into {} towers of heights {}", h.len(), list(&h))
        }
        Task::BlocksSwap => "swap the base blocks of the two towers, leaving the rest of each tower unchanged".into(),
        Task::Invert => "invert each individual stack of blocks, such that the block that in each tower that was originally on the bottom will be on the top".into(),
        Task::OneRoom => "gather all balls into one room".into(),
        Task::EvenlyDistributed => "distribute the balls evenly across the rooms".into(),
        Task::Distribute => {
            let mut goal = problem.goal.clone();
            goal.extend(problem.init.iter().filter(|p| p.predicate == "room").cloned());
            format!("distribute the balls so that the rooms hold {} balls respectively", list(&room_counts(&goal)))
        }
        Task::RoomsSwap => "swap the balls between the two rooms".into(),
        Task::MoveToMax => "move all balls to the room that started with the most balls".into(),
        Task::MoveToMin => "move all balls to the room that started with the fewest balls".into(),
        Task::Pickup => "pick up all the balls".into(),
        Task::DropAndPickup => {
            "drop all the balls in the first room, and pick up all the balls that started in rooms".into()
        }
        Task::Juggle => "pass each held ball on to the next gripper".into(),
        Task::PaintAll => "paint all the tiles with the same color".into(),
        Task::PaintRings => "paint each concentric ring of tiles, cycling through the colors from the outside in".into(),
        Task::PaintX => "paint an X across the tiles with the first color".into(),
        Task::OneColorPerTile => "paint each tile a different color".into(),
        Task::Checkerboard => "paint the tiles in a checkerboard pattern with two colors".into(),
        Task::DisconnectedRows => "paint both ends of each row with the first color".into(),
        Task::Grid | Task::Rings => "leave the tiles as they are".into(),
    }
}

/// One sentence per proposition, in a reading order suited to the domain.
fn sentences(domain: DomainId, props: &BTreeSet<Proposition>, goal: bool) -> Vec<String> {
    let ordered: Vec<&Proposition> = match domain {
        DomainId::BlocksWorld => blocksworld_order(props),
        DomainId::Gripper => by_predicate(props, &["at-robby", "free", "carry", "at"], goal),
        DomainId::FloorTile => by_predicate(
            props,
            &["up", "right", "robot-has", "robot-at", "available-color", "painted"],
            goal,
        ),
    };
    ordered.into_iter().map(|p| sentence(p, goal)).collect()
}

/// Propositions grouped by the predicate order given, then anything else
/// (type facts are left to the object summary unless they are goals).
fn by_predicate<'a>(props: &'a BTreeSet<Proposition>, order: &[&str], goal: bool) -> Vec<&'a Proposition> {
    let mut out: Vec<&Proposition> = Vec::new();
    for pred in order {
        out.extend(props.iter().filter(|p| p.predicate == *pred));
    }
    out.extend(props.iter().filter(|p| {
        !order.contains(&p.predicate.as_str()) && (goal || !matches!(p.predicate.as_str(), "room" | "ball" | "gripper"))
    }));
    out
}

/// The arm first, then each tower bottom-up ending with its clear top, then
/// whatever is left.
fn blocksworld_order(props: &BTreeSet<Proposition>) -> Vec<&Proposition> {
    let mut seen: BTreeSet<&Proposition> = BTreeSet::new();
    let mut out: Vec<&Proposition> = Vec::new();
    for p in props.iter().filter(|p| p.predicate == "arm-empty" || p.predicate == "holding") {
        seen.insert(p);
        out.push(p);
    }
    for base in props.iter().filter(|p| p.predicate == "on-table") {
        seen.insert(base);
        out.push(base);
        let mut top = &base.arguments[0];
        while let Some(next) = props
            .iter()
            .find(|q| q.predicate == "on" && &q.arguments[1] == top && !seen.contains(q))
        {
            seen.insert(next);
            out.push(next);
            top = &next.arguments[0];
        }
        if let Some(clear) = props.iter().find(|q| q.predicate == "clear" && &q.arguments[0] == top) {
            if seen.insert(clear) {
                out.push(clear);
            }
        }
    }
    out.extend(props.iter().filter(|p| !seen.contains(p)));
    out
}

fn sentence(p: &Proposition, goal: bool) -> String {
    let a = |i: usize| p.arguments.get(i).map_or("", String::as_str);
    let is = if goal { "should be" } else { "is" };
    match (p.predicate.as_str(), goal) {
        ("arm-empty", false) => "Your arm is empty.".into(),
        ("arm-empty", true) => "Your arm should be empty.".into(),
        ("holding", false) => format!("You are holding {}.", a(0)),
        ("holding", true) => format!("You should be holding {}.", a(0)),
        ("on-table", _) => format!("{} {is} on the table.", a(0)),
        ("on", _) => format!("{} {is} on {}.", a(0), a(1)),
        ("clear", _) => format!("{} {is} clear.", a(0)),
        ("at-robby", _) => format!("The robby {is} at {}.", a(0)),
        ("at", _) => format!("{} {is} at {}.", a(0), a(1)),
        ("free", _) => format!("{} {is} free.", a(0)),
        ("carry", false) => format!("{} is carrying {}.", a(1), a(0)),
        ("carry", true) => format!("{} should be carrying {}.", a(1), a(0)),
        ("room" | "ball" | "gripper", _) => format!("{} {is} a {}.", a(0), p.predicate),
        ("up", _) => format!("Tile {} {is} above tile {}.", a(0), a(1)),
        ("right", _) => format!("Tile {} {is} to the right of tile {}.", a(0), a(1)),
        ("robot-has", false) => format!("The robot {} has color {}.", a(0), a(1)),
        ("robot-has", true) => format!("The robot {} should have color {}.", a(0), a(1)),
        ("robot-at", _) => format!("The robot {} {is} at tile {}.", a(0), a(1)),
        ("available-color", _) => format!("Color {} {is} available.", a(0)),
        ("painted", _) => format!("Tile {} {is} painted with color {}.", a(0), a(1)),
        (_, false) => format!("{p} holds."),
        (_, true) => format!("{p} should hold."),
    }
}
