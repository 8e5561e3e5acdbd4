//! Plain-text solutions: one `name value` pair per line, `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write;
use std::path::Path;

use super::{Solution, SolveStats, SolveStatus};
use crate::error::{Error, Result};
use crate::milp::MilpModel;

const CHECK_TOL: f64 = 1e-9;

pub fn write_solution(model: &MilpModel, solution: &Solution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# status {}", solution.status);
    if solution.status.has_values() {
        let _ = writeln!(out, "# objective {}", solution.objective);
    }
    for (v, x) in model.variables().iter().zip(&solution.values) {
        let _ = writeln!(out, "{} {}", v.name, x);
    }
    out
}

/// Reads values by name and checks them against the model. Returns the
/// solution (feasible or infeasible) and the names of violated constraints.
pub fn parse_solution(text: &str, model: &MilpModel) -> Result<(Solution, Vec<String>)> {
    let mut values: HashMap<&str, f64> = HashMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse(format!("line {}: expected `name value`", n + 1)));
        };
        if model.var(name).is_none() {
            return Err(Error::Parse(format!("line {}: unknown variable {name}", n + 1)));
        }
        let x: f64 = value.parse().map_err(|_| Error::Parse(format!("line {}: {value:?} is not a number", n + 1)))?;
        if values.insert(name, x).is_some() {
            return Err(Error::Parse(format!("line {}: {name} assigned twice", n + 1)));
        }
    }
    let mut ordered = Vec::with_capacity(model.num_vars());
    for v in model.variables() {
        match values.get(v.name.as_str()) {
            Some(&x) => ordered.push(x),
            None => return Err(Error::Parse(format!("no value for variable {}", v.name))),
        }
    }
    let violated = model.violations(&ordered, CHECK_TOL);
    let objective = model.objective_value(&ordered);
    let status = if violated.is_empty() { SolveStatus::Feasible } else { SolveStatus::Infeasible };
    Ok((Solution { status, values: ordered, objective, bound: f64::INFINITY, stats: SolveStats::default() }, violated))
}

pub fn import_solution(path: impl AsRef<Path>, model: &MilpModel) -> Result<(Solution, Vec<String>)> {
    parse_solution(&std::fs::read_to_string(path)?, model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{LinExpr, Sense};

    fn model() -> MilpModel {
        let mut m = MilpModel::new();
        let f = m.integer("f_1", 1, 4).unwrap();
        let b = m.integer("b_1", 1, 4).unwrap();
        m.add_constraint("spectrum_1", LinExpr::new().with(f, 1.0).with(b, 1.0), Sense::Le, 5.0);
        m.set_objective(LinExpr::new().with(b, 1.0), 0.0);
        m
    }

    #[test]
    fn feasible_point() {
        let m = model();
        let (sol, bad) = parse_solution("# a comment\nf_1 2\nb_1 3 # trailing\n", &m).unwrap();
        assert_eq!(sol.status, SolveStatus::Feasible);
        assert!(bad.is_empty());
        assert_eq!(sol.objective, 3.0);
    }

    #[test]
    fn missing_variable_is_named() {
        let err = parse_solution("f_1 2\n", &model()).unwrap_err();
        assert!(err.to_string().contains("b_1"), "{err}");
    }

    #[test]
    fn violation_is_named() {
        let (sol, bad) = parse_solution("f_1 3\nb_1 3\n", &model()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
        assert_eq!(bad, vec!["spectrum_1".to_string()]);
    }

    #[test]
    fn bad_tokens() {
        assert!(parse_solution("f_1 two\nb_1 1\n", &model()).is_err());
        assert!(parse_solution("x_9 1\n", &model()).is_err());
    }

    #[test]
    fn write_then_parse() {
        let m = model();
        let (sol, _) = parse_solution("f_1 1\nb_1 4\n", &m).unwrap();
        let text = write_solution(&m, &sol);
        let (again, _) = parse_solution(&text, &m).unwrap();
        assert_eq!(again.values, sol.values);
    }
}
