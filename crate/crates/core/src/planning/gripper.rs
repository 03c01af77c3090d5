use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::{GroundAction, Plan, PlanError};
use crate::fullspec::{self, FullSpecError, GripperPlace as Place, GripperWorld};
use crate::pddl::ProblemModel;
use crate::DomainId;

/// Builds a plan by emptying every gripper, ferrying misplaced balls in
/// batches of as many grippers as the robot has, then picking up the balls
/// the goal wants carried and parking the robot.
pub fn plan_gripper(problem: &ProblemModel) -> Result<Plan, PlanError> {
    let world = GripperWorld::read(&problem.init).map_err(|e| PlanError::MalformedInit(e.to_string()))?;
    if problem.goal.is_subset(&problem.init) {
        return Ok(Plan::default());
    }
    let mut goal = problem.goal.clone();
    match fullspec::complete(DomainId::Gripper, &problem.objects, &problem.init, &problem.goal) {
        Ok(added) => goal.extend(added),
        Err(FullSpecError::InconsistentGoal(why)) => return Err(PlanError::Unsolvable(why)),
        Err(e) => return Err(PlanError::MalformedInit(e.to_string())),
    }
    let want = fullspec::gripper_demands(&world, &problem.init, &goal).map_err(|e| PlanError::Unsolvable(e.to_string()))?;

    let mut steps = Vec::new();
    let mut robby = world.robby;
    let mut place = world.place.clone();
    fn go<'a>(steps: &mut Vec<GroundAction>, robby: &mut &'a str, to: &'a str) {
        if *robby != to {
            steps.push(GroundAction::new("move", [*robby, to]));
            *robby = to;
        }
    }

    for (ball, at) in place.iter_mut() {
        if let Place::Gripper(g) = *at {
            steps.push(GroundAction::new("drop", [*ball, robby, g]));
            *at = Place::Room(robby);
        }
    }

    let mut trips: BTreeMap<(&str, &str), Vec<&str>> = BTreeMap::new();
    for (&ball, &target) in &want.place {
        if let (Place::Room(dst), Some(&Place::Room(src))) = (target, place.get(ball)) {
            if src != dst {
                trips.entry((src, dst)).or_default().push(ball);
            }
        }
    }
    let grippers: Vec<&str> = world.grippers.iter().copied().collect();
    if !trips.is_empty() && grippers.is_empty() {
        return Err(PlanError::Unsolvable("balls must move but there are no grippers".into()));
    }
    for ((src, dst), balls) in trips {
        for batch in balls.chunks(grippers.len()) {
            go(&mut steps, &mut robby, src);
            for (&b, &g) in batch.iter().zip(&grippers) {
                steps.push(GroundAction::new("pick", [b, src, g]));
            }
            go(&mut steps, &mut robby, dst);
            for (&b, &g) in batch.iter().zip(&grippers) {
                steps.push(GroundAction::new("drop", [b, dst, g]));
                place.insert(b, Place::Room(dst));
            }
        }
    }

    for (&g, &b) in &want.carries {
        let Some(&Place::Room(r)) = place.get(b) else {
            return Err(PlanError::Unsolvable(alloc::format!("{b} is not in any room")));
        };
        go(&mut steps, &mut robby, r);
        steps.push(GroundAction::new("pick", [b, r, g]));
    }
    if let Some(r) = want.robby {
        go(&mut steps, &mut robby, r);
    }
    Ok(Plan { steps })
}
