//! JSON scenario documents.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ConstellationGeometry, Scenario, SimParams};
use crate::error::{Error, Result};
use crate::model::{Beam, BeamId, BeamKind, FrequencyGrid, FrequencyPlan, PlanRecord, RestrictionSets, SlotRange};
use crate::power::LinkBudget;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    grid: FrequencyGrid,
    geometry: ConstellationGeometry,
    beams: Vec<BeamDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    restrictions: Option<RestrictionsDoc>,
    sim: SimParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    link: Option<LinkBudget>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    plan: Option<Vec<PlanRecord>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BeamDoc {
    id: BeamId,
    #[serde(default = "user_kind")]
    kind: BeamKind,
    lat: f64,
    lon: f64,
    #[serde(default)]
    demand_bps: f64,
    #[serde(default = "one")]
    min_slots: u32,
    #[serde(default)]
    allowed_rows: Option<SlotRange>,
    #[serde(default)]
    allowed_slots: Option<SlotRange>,
}

fn user_kind() -> BeamKind {
    BeamKind::User
}

fn one() -> u32 {
    1
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RestrictionsDoc {
    #[serde(default)]
    intra: Vec<[BeamId; 2]>,
    #[serde(default)]
    inter: Vec<[BeamId; 2]>,
}

fn schema_error(err: serde_path_to_error::Error<serde_json::Error>) -> Error {
    let path = err.path().to_string();
    let inner = err.into_inner();
    let message = inner.to_string();
    // serde reports a missing field at its parent; point at the field.
    if let Some(rest) = message.strip_prefix("missing field `") {
        if let Some(field) = rest.split('`').next() {
            let full = if path == "." { field.to_string() } else { format!("{path}.{field}") };
            return Error::schema(full, format!("missing field `{field}`"));
        }
    }
    if inner.is_syntax() || inner.is_eof() {
        return Error::Parse(format!("scenario JSON: {message}"));
    }
    Error::schema(path, message)
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ScenarioDoc = serde_path_to_error::deserialize(de).map_err(schema_error)?;
    doc.grid.check()?;
    let grid = doc.grid;
    let beams = doc
        .beams
        .into_iter()
        .map(|b| Beam {
            id: b.id,
            kind: b.kind,
            lat_deg: b.lat,
            lon_deg: b.lon,
            demand_bps: b.demand_bps,
            min_slots: b.min_slots,
            allowed_rows: b.allowed_rows.unwrap_or_else(|| grid.full_rows()),
            allowed_slots: b.allowed_slots.unwrap_or_else(|| grid.full_slots()),
        })
        .collect();
    let restrictions = doc
        .restrictions
        .map(|r| {
            RestrictionSets::from_pairs(
                r.intra.into_iter().map(|[i, j]| (i, j)),
                r.inter.into_iter().map(|[i, j]| (i, j)),
            )
        })
        .transpose()?;
    let plan = doc
        .plan
        .map(|rows| -> Result<FrequencyPlan> {
            let mut plan = FrequencyPlan::new();
            for r in rows {
                if plan.assignments.insert(r.beam_id, r.assignment()).is_some() {
                    return Err(Error::schema("plan", format!("beam {} listed twice", r.beam_id)));
                }
            }
            Ok(plan)
        })
        .transpose()?;
    let scenario = Scenario { grid, beams, geometry: doc.geometry, sim: doc.sim, link: doc.link, restrictions, plan };
    scenario.check()?;
    Ok(scenario)
}

pub fn scenario_to_json(scenario: &Scenario) -> Result<String> {
    let doc = ScenarioDoc {
        grid: scenario.grid,
        geometry: scenario.geometry,
        beams: scenario
            .beams
            .iter()
            .map(|b| BeamDoc {
                id: b.id,
                kind: b.kind,
                lat: b.lat_deg,
                lon: b.lon_deg,
                demand_bps: b.demand_bps,
                min_slots: b.min_slots,
                allowed_rows: Some(b.allowed_rows),
                allowed_slots: Some(b.allowed_slots),
            })
            .collect(),
        restrictions: scenario.restrictions.as_ref().map(|r| RestrictionsDoc {
            intra: r.intra().iter().map(|&(i, j)| [i, j]).collect(),
            inter: r.inter().iter().map(|&(i, j)| [i, j]).collect(),
        }),
        sim: scenario.sim,
        link: scenario.link,
        plan: scenario.plan.as_ref().map(|p| p.iter().map(|(id, a)| PlanRecord::from((id, *a))).collect()),
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario(&text)
}

pub fn save_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, scenario_to_json(scenario)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Assignment;

    const MINIMAL: &str = r#"{
        "grid": {"n_bw": 4, "n_fr": 2, "n_p": 2, "slot_bandwidth_hz": 5e7},
        "geometry": {"n_s": 7, "altitude_km": 8062},
        "beams": [{"id": 1, "lat": 1.0, "lon": 2.0}],
        "sim": {"horizon_min": 60, "step_min": 1, "half_cone_deg": 1.0}
    }"#;

    #[test]
    fn defaults_are_filled_in() {
        let s = parse_scenario(MINIMAL).unwrap();
        let b = &s.beams[0];
        assert_eq!(b.min_slots, 1);
        assert_eq!(b.allowed_rows, SlotRange::new(1, 4));
        assert_eq!(b.allowed_slots, SlotRange::new(1, 4));
        assert_eq!(s.sim.interference_multiplier, 4.0);
        assert_eq!(s.sim.min_elevation_deg, 10.0);
        assert!(s.restrictions.is_none());
    }

    #[test]
    fn save_load_round_trip() {
        let mut s = parse_scenario(MINIMAL).unwrap();
        s.restrictions = Some(RestrictionSets::new());
        s.link = Some(LinkBudget::default());
        s.plan = Some([(1, Assignment::new(2, 3, 2))].into_iter().collect());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        save_scenario(&s, &path).unwrap();
        assert_eq!(load_scenario(&path).unwrap(), s);
    }

    #[test]
    fn missing_field_names_its_path() {
        let text = MINIMAL.replace(r#""n_bw": 4, "#, "");
        match parse_scenario(&text) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "grid.n_bw"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_altitude_is_rejected() {
        let text = MINIMAL.replace("8062", "-5");
        match parse_scenario(&text) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "geometry.altitude_km"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_type_reports_path() {
        let text = MINIMAL.replace(r#""id": 1"#, r#""id": "one""#);
        match parse_scenario(&text) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "beams[0].id"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn restriction_block_is_read() {
        let text = MINIMAL.replace(
            r#""beams": [{"id": 1, "lat": 1.0, "lon": 2.0}]"#,
            r#""beams": [{"id": 1, "lat": 1.0, "lon": 2.0}, {"id": 2, "lat": 1.0, "lon": 2.0}],
               "restrictions": {"intra": [[2, 1]], "inter": []}"#,
        );
        let s = parse_scenario(&text).unwrap();
        assert!(s.restrictions.unwrap().has_intra(1, 2));
    }
}
