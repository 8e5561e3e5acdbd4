//! Summary of an optimization run.

use std::fmt;
use std::io::Write;

use beamplan_core::Scenario;

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub mode: String,
    pub beams: usize,
    pub satellites: u32,
    pub n_bw: u32,
    pub n_fr: u32,
    pub n_p: u32,
    pub intra_pairs: usize,
    pub inter_pairs: usize,
    pub objective: f64,
    /// Normalized bandwidth of the starting plan.
    pub bw_warm: f64,
    pub bw_final: f64,
    /// Total power of the active beams in W, when power tables exist.
    pub power_warm_w: Option<f64>,
    pub power_final_w: Option<f64>,
    pub iterations: usize,
    pub wall_ms: f64,
}

/// Relative change `(after - before) / before` in percent; `None` when
/// `before` is zero.
pub fn percent_change(before: f64, after: f64) -> Option<f64> {
    (before != 0.0).then(|| 100.0 * (after - before) / before)
}

impl RunReport {
    pub fn new(scenario: &Scenario, mode: &str, intra_pairs: usize, inter_pairs: usize) -> Self {
        RunReport {
            mode: mode.to_string(),
            beams: scenario.beams.len(),
            satellites: scenario.geometry.n_s,
            n_bw: scenario.grid.n_bw,
            n_fr: scenario.grid.n_fr,
            n_p: scenario.grid.n_p,
            intra_pairs,
            inter_pairs,
            objective: 0.0,
            bw_warm: 0.0,
            bw_final: 0.0,
            power_warm_w: None,
            power_final_w: None,
            iterations: 0,
            wall_ms: 0.0,
        }
    }

    pub fn bandwidth_increase_pct(&self) -> Option<f64> {
        percent_change(self.bw_warm, self.bw_final)
    }

    /// Power decrease in percent of the starting power.
    pub fn power_decrease_pct(&self) -> Option<f64> {
        match (self.power_warm_w, self.power_final_w) {
            (Some(w), Some(f)) => percent_change(w, f).map(|p| -p),
            _ => None,
        }
    }

    /// Writes `key,value` rows. Wall time is written only with `timing` so
    /// that repeated runs produce identical files.
    pub fn write_csv<W: Write>(&self, out: W, timing: bool) -> csv::Result<()> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut rows = vec![
            ("mode", self.mode.clone()),
            ("beams", self.beams.to_string()),
            ("satellites", self.satellites.to_string()),
            ("n_bw", self.n_bw.to_string()),
            ("n_fr", self.n_fr.to_string()),
            ("n_p", self.n_p.to_string()),
            ("intra_pairs", self.intra_pairs.to_string()),
            ("inter_pairs", self.inter_pairs.to_string()),
            ("objective", self.objective.to_string()),
            ("bw_warm", self.bw_warm.to_string()),
            ("bw_final", self.bw_final.to_string()),
            ("bw_increase_pct", opt(self.bandwidth_increase_pct())),
            ("power_warm_w", opt(self.power_warm_w)),
            ("power_final_w", opt(self.power_final_w)),
            ("power_decrease_pct", opt(self.power_decrease_pct())),
            ("iterations", self.iterations.to_string()),
        ];
        if timing {
            rows.push(("wall_ms", self.wall_ms.to_string()));
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["key", "value"])?;
        for (k, v) in rows {
            w.write_record([k, v.as_str()])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "scenario: {} beams, {} satellites, grid {} slots x {} reuses x {} polarizations",
            self.beams, self.satellites, self.n_bw, self.n_fr, self.n_p
        )?;
        writeln!(f, "restrictions: {} handover pairs, {} interference pairs", self.intra_pairs, self.inter_pairs)?;
        writeln!(f, "mode: {}, iterations: {}", self.mode, self.iterations)?;
        writeln!(f, "objective: {}", self.objective)?;
        write!(f, "normalized bandwidth: {:.4} -> {:.4}", self.bw_warm, self.bw_final)?;
        if let Some(p) = self.bandwidth_increase_pct() {
            write!(f, " ({p:+.1}%)")?;
        }
        if let (Some(w), Some(p)) = (self.power_warm_w, self.power_final_w) {
            write!(f, "\ntotal power: {w:.3} W -> {p:.3} W")?;
            if let Some(d) = self.power_decrease_pct() {
                write!(f, " ({d:.1}% decrease)")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn increase_from_rounded_table_values() {
        // 0.25 -> 0.41 is a 64% increase.
        let p = percent_change(0.25, 0.41).unwrap();
        assert!((p - 64.0).abs() < 1e-9);
        assert_eq!(percent_change(0.0, 0.3), None);
    }
}
