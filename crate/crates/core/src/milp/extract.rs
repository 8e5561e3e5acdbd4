use super::{MilpModel, VarKind};
use crate::error::{Error, Result};
use crate::model::{validate_plan, Assignment, FrequencyPlan, RestrictionSets};
use crate::scenario::Scenario;
use crate::solver::Solution;

const INTEGRALITY_TOL: f64 = 1e-6;

/// Decodes a model solution into a plan and checks it against the
/// restrictions the model was built from.
pub fn extract_plan(
    model: &MilpModel,
    solution: &Solution,
    scenario: &Scenario,
    restrictions: &RestrictionSets,
) -> Result<FrequencyPlan> {
    if !solution.status.has_values() {
        return Err(Error::Extraction(format!("solution status is {}", solution.status)));
    }
    if solution.values.len() != model.num_vars() {
        return Err(Error::Extraction(format!(
            "solution has {} values for {} variables",
            solution.values.len(),
            model.num_vars()
        )));
    }
    for (v, &x) in model.variables().iter().zip(&solution.values) {
        if v.kind != VarKind::Continuous && (x - x.round()).abs() > INTEGRALITY_TOL {
            return Err(Error::Extraction(format!("{} = {x} is not integral", v.name)));
        }
    }
    let read = |name: String| -> Result<u32> {
        let x =
            solution.value(model, &name).ok_or_else(|| Error::Extraction(format!("model has no variable {name}")))?;
        let r = x.round();
        if r < 0.0 {
            return Err(Error::Extraction(format!("{name} = {x} is negative")));
        }
        Ok(r as u32)
    };

    let mut plan = FrequencyPlan::new();
    for beam in &scenario.beams {
        let id = beam.id;
        let active = match solution.value(model, &format!("a_{id}")) {
            Some(a) => a >= 0.5,
            None => true,
        };
        let a = if active {
            Assignment::new(read(format!("f_{id}"))?, read(format!("g_{id}"))?, read(format!("b_{id}"))?)
        } else {
            Assignment::inactive()
        };
        plan.set(id, a);
    }
    let violations = validate_plan(&plan, &scenario.grid, restrictions, &scenario.beams)?;
    if let Some(v) = violations.first() {
        return Err(Error::Extraction(format!(
            "decoded plan is invalid ({} violations, first: {v})",
            violations.len()
        )));
    }
    Ok(plan)
}
