//! SVG drawings of a plan: one grid per satellite, rows are grid rows and
//! columns are frequency slots.

use std::fmt::Write;

use beamplan_core::model::{Assignment, Beam, BeamKind, FrequencyGrid, FrequencyPlan};
use beamplan_core::scenario::route_beams;
use beamplan_core::{Result, Scenario};

const CELL_W: u32 = 16;
const CELL_H: u32 = 18;
const LEFT: u32 = 44;
const TOP: u32 = 40;

/// Fill of gateway beams; no user beam gets it.
pub const GATEWAY_COLOR: &str = "#202020";

const PALETTE: [&str; 10] =
    ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"];

pub fn beam_color(beam: &Beam) -> &'static str {
    match beam.kind {
        BeamKind::Gateway => GATEWAY_COLOR,
        BeamKind::User => PALETTE[(beam.id as usize).wrapping_sub(1) % PALETTE.len()],
    }
}

/// One grid with the given placements drawn on it.
pub fn render_grid(title: &str, grid: &FrequencyGrid, placed: &[(&Beam, Assignment)]) -> String {
    let rows = grid.rows();
    let width = LEFT + grid.n_bw * CELL_W + 10;
    let height = TOP + rows * CELL_H + 30;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(s, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(s, r#"<text x="{LEFT}" y="14" font-size="12">{}</text>"#, escape(title));

    let _ = writeln!(s, r##"<g class="axes" stroke="#cccccc" fill="none">"##);
    for g in 1..=rows {
        for f in 1..=grid.n_bw {
            let (x, y) = cell(f, g);
            let _ = writeln!(s, r#"<rect x="{x}" y="{y}" width="{CELL_W}" height="{CELL_H}"/>"#);
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g class="labels" fill="#444444">"##);
    for f in 1..=grid.n_bw {
        let (x, _) = cell(f, 1);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{f}</text>"#, x + CELL_W / 2, TOP - 4);
    }
    for g in 1..=rows {
        let (_, y) = cell(1, g);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">g{g}</text>"#, LEFT - 4, y + CELL_H - 5);
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">frequency slot</text>"#,
        LEFT + grid.n_bw * CELL_W / 2,
        TOP + rows * CELL_H + 20
    );
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g class="beams" stroke="#000000" stroke-width="0.5">"##);
    for (beam, a) in placed {
        if !a.active || a.g < 1 || a.g > rows || a.f < 1 || a.b < 1 {
            continue;
        }
        let (x, y) = cell(a.f, a.g);
        let _ = writeln!(
            s,
            r#"<rect class="beam" data-beam="{}" data-f="{}" data-g="{}" data-b="{}" x="{x}" y="{y}" width="{}" height="{CELL_H}" fill="{}"><title>beam {}</title></rect>"#,
            beam.id,
            a.f,
            a.g,
            a.b,
            a.b * CELL_W,
            beam_color(beam),
            beam.id
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

fn cell(f: u32, g: u32) -> (u32, u32) {
    (LEFT + (f - 1) * CELL_W, TOP + (g - 1) * CELL_H)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One drawing per satellite (1-based), with the beams it serves at the
/// start of the horizon.
pub fn render_plan(plan: &FrequencyPlan, scenario: &Scenario) -> Result<Vec<(u32, String)>> {
    // Only t = 0 is drawn, so later steps must not fail routing.
    let mut start = scenario.clone();
    start.sim.horizon_min = start.sim.step_min;
    let routing = route_beams(&start)?;
    let mut out = Vec::new();
    for sat in 0..scenario.geometry.n_s {
        let placed: Vec<(&Beam, Assignment)> = scenario
            .beams
            .iter()
            .enumerate()
            .filter(|(k, _)| routing.satellite(0, *k) == sat)
            .filter_map(|(_, b)| plan.get(b.id).map(|a| (b, *a)))
            .collect();
        let title = format!("satellite {} at t = 0: {} beams", sat + 1, placed.len());
        out.push((sat + 1, render_grid(&title, &scenario.grid, &placed)));
    }
    Ok(out)
}
