use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{GroundAction, Plan, PlanError};
use crate::fullspec::{self, FullSpecError};
use crate::pddl::{ProblemModel, Proposition};
use crate::DomainId;

fn step(name: &str, args: &[&str]) -> GroundAction {
    GroundAction::new(name, args.iter().copied())
}

/// Builds a plan by putting every block on the table and then assembling
/// the goal towers bottom-up.
pub fn plan_blocksworld(problem: &ProblemModel) -> Result<Plan, PlanError> {
    let objects = &problem.objects;
    fullspec::blocksworld_init_check(objects, &problem.init).map_err(|e| PlanError::MalformedInit(e.to_string()))?;
    if problem.goal.is_subset(&problem.init) {
        return Ok(Plan::default());
    }
    let mut goal = problem.goal.clone();
    match fullspec::complete(DomainId::BlocksWorld, objects, &problem.init, &problem.goal) {
        Ok(added) => goal.extend(added),
        Err(FullSpecError::InconsistentGoal(why)) => return Err(PlanError::Unsolvable(why)),
        Err(e) => return Err(PlanError::MalformedInit(e.to_string())),
    }
    let (towers, held) = fullspec::blocksworld_completion(objects, &goal).map_err(|e| PlanError::Unsolvable(e.to_string()))?;

    let mut steps = Vec::new();
    let arg = |p: &Proposition, i: usize| p.arguments[i].clone();
    if let Some(h) = problem.init.iter().find(|p| p.predicate == "holding") {
        steps.push(step("putdown", &[&arg(h, 0)]));
    }
    // Current towers, bottom first, ordered by bottom block name.
    let mut current: Vec<Vec<String>> = problem
        .init
        .iter()
        .filter(|p| p.predicate == "on-table")
        .map(|p| {
            let mut tower = alloc::vec![arg(p, 0)];
            while let Some(up) = problem
                .init
                .iter()
                .find(|q| q.predicate == "on" && q.arguments[1] == *tower.last().unwrap())
            {
                tower.push(arg(up, 0));
            }
            tower
        })
        .collect();
    current.sort();
    for tower in &current {
        for pair in tower.windows(2).rev() {
            steps.push(step("unstack", &[&pair[1], &pair[0]]));
            steps.push(step("putdown", &[&pair[1]]));
        }
    }
    for tower in &towers {
        for pair in tower.windows(2) {
            steps.push(step("pickup", &[&pair[1]]));
            steps.push(step("stack", &[&pair[1], &pair[0]]));
        }
    }
    if let Some(h) = held {
        steps.push(step("pickup", &[&h]));
    }
    Ok(Plan { steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::planning::validate_plan;
    use crate::prop;

    fn problem(init: &[Proposition], goal: &[Proposition]) -> ProblemModel {
        ProblemModel {
            name: "p".into(),
            domain_name: "blocksworld".into(),
            objects: ["b1", "b2", "b3"].iter().map(|s| String::from(*s)).collect(),
            init: init.iter().cloned().collect(),
            goal: goal.iter().cloned().collect(),
        }
    }

    fn tower() -> [Proposition; 7] {
        [
            prop!("arm-empty"),
            prop!("on-table", "b1"),
            prop!("on", "b2", "b1"),
            prop!("on", "b3", "b2"),
            prop!("clear", "b3"),
            prop!("on-table", "b3"),
            prop!("clear", "b1"),
        ]
    }

    #[test]
    fn satisfied_goal_gives_empty_plan() {
        let init = &tower()[..5];
        assert!(plan_blocksworld(&problem(init, init)).unwrap().is_empty());
    }

    #[test]
    fn inverts_a_tower() {
        let d = fixtures::domain(DomainId::BlocksWorld);
        let init = &tower()[..5];
        let p = problem(init, &[prop!("on", "b1", "b2"), prop!("on", "b2", "b3")]);
        let plan = plan_blocksworld(&p).unwrap();
        assert!(validate_plan(&p, &plan, &d).valid, "{}", plan.to_text());
        let p = problem(init, &[prop!("holding", "b2")]);
        let plan = plan_blocksworld(&p).unwrap();
        assert!(validate_plan(&p, &plan, &d).valid, "{}", plan.to_text());
    }

    #[test]
    fn block_on_two_blocks_is_unsolvable() {
        let init = &tower()[..5];
        let p = problem(init, &[prop!("on", "b2", "b1"), prop!("on", "b3", "b1")]);
        assert!(matches!(plan_blocksworld(&p), Err(PlanError::Unsolvable(_))));
    }

    #[test]
    fn malformed_init_is_reported() {
        let p = problem(&[prop!("on-table", "b1")], &[prop!("clear", "b1")]);
        assert!(matches!(plan_blocksworld(&p), Err(PlanError::MalformedInit(_))));
    }
}
