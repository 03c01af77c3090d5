//! The bundled benchmark domains.

use core::fmt;
use core::str::FromStr;

use crate::pddl::{parse_domain, DomainModel};

const BLOCKSWORLD: &str = include_str!("../../../domains/blocksworld.pddl");
const GRIPPER: &str = include_str!("../../../domains/gripper.pddl");
const FLOOR_TILE: &str = include_str!("../../../domains/floor-tile.pddl");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DomainId {
    BlocksWorld,
    Gripper,
    FloorTile,
}

impl DomainId {
    pub const ALL: [DomainId; 3] = [DomainId::BlocksWorld, DomainId::Gripper, DomainId::FloorTile];

    /// The `(domain NAME)` used in the bundled PDDL file.
    pub fn name(self) -> &'static str {
        match self {
            DomainId::BlocksWorld => "blocksworld",
            DomainId::Gripper => "gripper",
            DomainId::FloorTile => "floor-tile",
        }
    }

    /// Looks a domain up by its PDDL name.
    pub fn from_name(name: &str) -> Option<DomainId> {
        DomainId::ALL.into_iter().find(|d| d.name() == name)
    }
}

impl fmt::Display for DomainId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DomainId {
    type Err = UnknownDomain;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DomainId::from_name(&s.to_ascii_lowercase()).ok_or(UnknownDomain)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("not one of the bundled domains (blocksworld, gripper, floor-tile)")]
pub struct UnknownDomain;

/// Source text of a bundled domain file.
pub fn domain_text(id: DomainId) -> &'static str {
    match id {
        DomainId::BlocksWorld => BLOCKSWORLD,
        DomainId::Gripper => GRIPPER,
        DomainId::FloorTile => FLOOR_TILE,
    }
}

/// Parsed bundled domain.
pub fn domain(id: DomainId) -> DomainModel {
    parse_domain(domain_text(id)).expect("bundled domain files parse")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shapes() {
        let expected = [
            (DomainId::BlocksWorld, 5, 4),
            (DomainId::Gripper, 7, 3),
            (DomainId::FloorTile, 6, 9),
        ];
        for (id, preds, actions) in expected {
            let d = domain(id);
            assert_eq!(d.name, id.name());
            assert_eq!(d.predicates.len(), preds, "{id}");
            assert_eq!(d.actions.len(), actions, "{id}");
        }
    }

    #[test]
    fn blocksworld_vocabulary() {
        let d = domain(DomainId::BlocksWorld);
        let mut preds: alloc::vec::Vec<_> = d.predicates.iter().map(|p| p.name.as_str()).collect();
        preds.sort_unstable();
        assert_eq!(preds, ["arm-empty", "clear", "holding", "on", "on-table"]);
        let mut acts: alloc::vec::Vec<_> = d.actions.iter().map(|a| a.name.as_str()).collect();
        acts.sort_unstable();
        assert_eq!(acts, ["pickup", "putdown", "stack", "unstack"]);
    }
}
