use super::{FrequencyGrid, FrequencyPlan, ObjectiveWeights};
use crate::error::{Error, Result};
use crate::power::PowerTables;

/// Splits row `g` into `(k, m)` with `g = n_p * k - m`, `k` in `1..=n_fr` and
/// `m` in `0..n_p`.
pub fn decompose_reuse(g: u32, grid: &FrequencyGrid) -> Result<(u32, u32)> {
    if g < 1 || g > grid.rows() {
        return Err(Error::Domain(format!("row {g} outside 1..={}", grid.rows())));
    }
    let n_p = grid.n_p;
    let k = g.div_ceil(n_p);
    Ok((k, n_p * k - g))
}

/// Total slot capacity of the constellation, `n_s * n_bw * n_fr * n_p`.
pub fn total_capacity(grid: &FrequencyGrid, n_s: u32) -> Result<u64> {
    if n_s < 1 {
        return Err(Error::Domain("satellite count must be at least 1".into()));
    }
    Ok(n_s as u64 * grid.n_bw as u64 * grid.rows() as u64)
}

/// Assigned slots over active beams divided by the constellation capacity.
pub fn total_normalized_bandwidth(plan: &FrequencyPlan, grid: &FrequencyGrid, n_s: u32) -> Result<f64> {
    let cap = total_capacity(grid, n_s)?;
    let used: u64 = plan.assignments.values().filter(|a| a.active).map(|a| a.b as u64).sum();
    Ok(used as f64 / cap as f64)
}

/// Plan objective: for each active beam
/// `beta1*b - |beta2|*g - |beta3|*f - |beta4|*P(f, b) + |beta5|`.
/// Inactive beams contribute nothing.
pub fn objective_value(plan: &FrequencyPlan, weights: &ObjectiveWeights, power: Option<&PowerTables>) -> Result<f64> {
    let mut total = 0.0;
    for (id, a) in plan.iter() {
        if !a.active {
            continue;
        }
        let w = weights.for_beam(id);
        let mut term = w.beta1 * a.b as f64 - w.beta2.abs() * a.g as f64 - w.beta3.abs() * a.f as f64;
        if w.beta4 != 0.0 {
            let p = power.and_then(|t| t.lookup(id, a.f, a.b)).ok_or_else(|| {
                Error::Configuration(format!("no power entry for beam {id} at (f = {}, b = {})", a.f, a.b))
            })?;
            term -= w.beta4.abs() * p;
        }
        total += term + w.beta5.abs();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Assignment, BeamWeights};

    fn grid(n_fr: u32, n_p: u32) -> FrequencyGrid {
        FrequencyGrid::new(40, n_fr, n_p, 1.0).unwrap()
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose_reuse(1, &grid(8, 2)).unwrap(), (1, 1));
        assert_eq!(decompose_reuse(4, &grid(8, 2)).unwrap(), (2, 0));
        assert_eq!(decompose_reuse(3, &grid(8, 1)).unwrap(), (3, 0));
        assert!(decompose_reuse(0, &grid(8, 2)).is_err());
        assert!(decompose_reuse(17, &grid(8, 2)).is_err());
    }

    #[test]
    fn decompose_is_a_bijection() {
        for n_p in 1..=2 {
            for n_fr in 1..=32 {
                let gr = grid(n_fr, n_p);
                let mut seen = std::collections::BTreeSet::new();
                for g in 1..=gr.rows() {
                    let (k, m) = decompose_reuse(g, &gr).unwrap();
                    assert!((1..=n_fr).contains(&k) && m < n_p);
                    assert_eq!(n_p * k - m, g);
                    assert!(seen.insert((k, m)));
                }
                assert_eq!(seen.len() as u32, n_fr * n_p);
            }
        }
    }

    #[test]
    fn capacity_and_normalized_bandwidth() {
        let gr = grid(8, 2);
        assert_eq!(total_capacity(&gr, 7).unwrap(), 4480);
        assert!(total_capacity(&gr, 0).is_err());
        let empty: FrequencyPlan = [(1, Assignment::inactive())].into_iter().collect();
        assert_eq!(total_normalized_bandwidth(&empty, &gr, 7).unwrap(), 0.0);
        let one: FrequencyPlan = [(1, Assignment::new(1, 1, 448))].into_iter().collect();
        assert!((total_normalized_bandwidth(&one, &gr, 7).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn objective_examples() {
        let bw = ObjectiveWeights::uniform(BeamWeights::bandwidth());
        let plan: FrequencyPlan =
            [(1, Assignment::new(1, 1, 2)), (2, Assignment::new(1, 2, 3)), (3, Assignment::new(3, 1, 5))]
                .into_iter()
                .collect();
        assert_eq!(objective_value(&plan, &bw, None).unwrap(), 10.0);

        let act = ObjectiveWeights::uniform(BeamWeights { beta5: 1.0, ..Default::default() });
        let mut four = plan.clone();
        four.set(4, Assignment::inactive());
        assert_eq!(objective_value(&four, &act, None).unwrap(), 3.0);

        let mixed = ObjectiveWeights::uniform(BeamWeights { beta1: 1.0, beta3: 1.0, ..Default::default() });
        let single: FrequencyPlan = [(1, Assignment::new(2, 1, 4))].into_iter().collect();
        assert_eq!(objective_value(&single, &mixed, None).unwrap(), 2.0);
    }

    #[test]
    fn missing_power_is_a_configuration_error() {
        let w = ObjectiveWeights::uniform(BeamWeights { beta4: 1.0, ..Default::default() });
        let single: FrequencyPlan = [(1, Assignment::new(2, 1, 4))].into_iter().collect();
        assert!(matches!(objective_value(&single, &w, None), Err(Error::Configuration(_))));
    }
}
