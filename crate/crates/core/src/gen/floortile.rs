use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{failed, names, GenError, Sizes, Task};
use crate::{prop, Proposition};

/// Ring index of a grid cell (0 is the outer ring).
pub(crate) fn ring(rows: usize, cols: usize, r: usize, c: usize) -> usize {
    r.min(c).min(rows - 1 - r).min(cols - 1 - c)
}

/// Cells of the grid in ring order: outer ring first, each ring clockwise
/// from its top-left cell.
fn ring_order(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(rows * cols);
    let (mut top, mut left, mut bottom, mut right) = (0isize, 0isize, rows as isize - 1, cols as isize - 1);
    while top <= bottom && left <= right {
        for c in left..=right {
            out.push((top, c));
        }
        for r in top + 1..=bottom {
            out.push((r, right));
        }
        if top < bottom {
            for c in (left..right).rev() {
                out.push((bottom, c));
            }
        }
        if left < right {
            for r in (top + 1..bottom).rev() {
                out.push((r, left));
            }
        }
        top += 1;
        left += 1;
        bottom -= 1;
        right -= 1;
    }
    out.into_iter().map(|(r, c)| (r as usize, c as usize)).collect()
}

struct Floor {
    cols: usize,
    /// Tile name per cell, row-major.
    tile: Vec<String>,
    robots: Vec<String>,
    colors: Vec<String>,
}

impl Floor {
    fn at(&self, r: usize, c: usize) -> &str {
        &self.tile[r * self.cols + c]
    }
}

type Generated = (Vec<String>, BTreeSet<Proposition>, BTreeSet<Proposition>);

pub(super) fn generate(
    init_task: Task,
    goal_task: Task,
    sizes: &Sizes<'_>,
    _goal_sizes: &Sizes<'_>,
) -> Result<Generated, GenError> {
    let rows = sizes.require("rows")?;
    let cols = sizes.require("cols")?;
    let colors = sizes.or("colors", 2);
    if rows == 0 || cols == 0 || colors == 0 {
        return Err(failed("the grid needs at least one tile and one color"));
    }
    let robots = match init_task {
        Task::DisconnectedRows => {
            if sizes.get("robots").is_some_and(|n| n as usize != rows) {
                return Err(failed("disconnected rows need one robot per row"));
            }
            rows
        }
        _ => sizes.or("robots", 1),
    };
    if robots == 0 || (init_task != Task::DisconnectedRows && robots > 4) {
        return Err(failed(format!("{robots} robots cannot be placed on the corners")));
    }

    let names_in_order = names("tile", rows * cols);
    let mut tile = vec![String::new(); rows * cols];
    let order: Vec<(usize, usize)> = match init_task {
        Task::Rings => ring_order(rows, cols),
        _ => (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).collect(),
    };
    for (name, (r, c)) in names_in_order.iter().zip(order) {
        tile[r * cols + c] = name.clone();
    }
    let floor = Floor {
        cols,
        tile,
        robots: names("robot", robots),
        colors: names("color", colors),
    };

    let mut init = BTreeSet::new();
    for r in 0..rows {
        for c in 0..cols {
            if r > 0 && init_task != Task::DisconnectedRows {
                init.insert(prop!("up", floor.at(r - 1, c), floor.at(r, c)));
            }
            if c > 0 {
                init.insert(prop!("right", floor.at(r, c), floor.at(r, c - 1)));
            }
        }
    }
    let corners = [(0, 0), (rows - 1, cols - 1), (0, cols - 1), (rows - 1, 0)];
    for (i, robot) in floor.robots.iter().enumerate() {
        let (r, c) = if init_task == Task::DisconnectedRows { (i, 0) } else { corners[i] };
        init.insert(prop!("robot-at", robot, floor.at(r, c)));
        let color = if init_task == Task::DisconnectedRows { 0 } else { i % colors };
        init.insert(prop!("robot-has", robot, &floor.colors[color]));
    }
    for c in &floor.colors {
        init.insert(prop!("available-color", c));
    }

    let cells = (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c)));
    let painted: Vec<(&str, usize)> = match goal_task {
        Task::PaintAll => cells.map(|(r, c)| (floor.at(r, c), 0)).collect(),
        Task::PaintRings => cells.map(|(r, c)| (floor.at(r, c), ring(rows, cols, r, c) % colors)).collect(),
        Task::PaintX => {
            if rows != cols {
                return Err(failed("an X needs a square grid"));
            }
            cells
                .filter(|&(r, c)| r == c || r + c == cols - 1)
                .map(|(r, c)| (floor.at(r, c), 0))
                .collect()
        }
        Task::OneColorPerTile => {
            if colors < rows * cols {
                return Err(failed(format!("{colors} colors are too few for {} tiles", rows * cols)));
            }
            names_in_order.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect()
        }
        Task::Checkerboard => {
            if colors < 2 {
                return Err(failed("a checkerboard needs two colors"));
            }
            cells.map(|(r, c)| (floor.at(r, c), (r + c) % 2)).collect()
        }
        Task::DisconnectedRows => {
            if cols < 2 {
                return Err(failed("rows need two ends"));
            }
            (0..rows).flat_map(|r| [(floor.at(r, 0), 0), (floor.at(r, cols - 1), 0)]).collect()
        }
        _ => unreachable!("not a Floor Tile goal task"),
    };
    let goal = painted.into_iter().map(|(t, c)| prop!("painted", t, &floor.colors[c])).collect();

    let objects = floor.robots.iter().chain(&names_in_order).chain(&floor.colors).cloned().collect();
    Ok((objects, init, goal))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_order_covers_every_cell_once() {
        for rows in 1..6 {
            for cols in 1..6 {
                let order = ring_order(rows, cols);
                let set: BTreeSet<_> = order.iter().copied().collect();
                assert_eq!(order.len(), rows * cols);
                assert_eq!(set.len(), rows * cols);
                // Rings never decrease along the order.
                assert!(order.windows(2).all(|w| ring(rows, cols, w[0].0, w[0].1) <= ring(rows, cols, w[1].0, w[1].1)));
            }
        }
        assert_eq!(ring_order(3, 3)[8], (1, 1));
    }
}
