use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{Assignment, BeamId, FrequencyPlan};
use crate::error::{Error, Result};

/// One row of a plan file: `beam_id,active,f,g,b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanRecord {
    pub beam_id: BeamId,
    pub active: bool,
    pub f: u32,
    pub g: u32,
    pub b: u32,
}

impl From<(BeamId, Assignment)> for PlanRecord {
    fn from((beam_id, a): (BeamId, Assignment)) -> Self {
        PlanRecord { beam_id, active: a.active, f: a.f, g: a.g, b: a.b }
    }
}

impl PlanRecord {
    pub fn assignment(&self) -> Assignment {
        Assignment { f: self.f, g: self.g, b: self.b, active: self.active }
    }
}

pub fn write_plan_csv<W: Write>(plan: &FrequencyPlan, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (id, a) in plan.iter() {
        w.serialize(PlanRecord::from((id, *a)))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a plan file. Duplicate beam ids are rejected.
pub fn read_plan_csv<R: Read>(input: R) -> Result<FrequencyPlan> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut plan = FrequencyPlan::new();
    for (line, rec) in r.deserialize::<PlanRecord>().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("plan row {}: {e}", line + 1)))?;
        if plan.assignments.insert(rec.beam_id, rec.assignment()).is_some() {
            return Err(Error::Parse(format!("plan lists beam {} twice", rec.beam_id)));
        }
    }
    Ok(plan)
}
