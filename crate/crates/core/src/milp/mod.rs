//! Linear model IR, the full frequency-assignment formulation, LP-format
//! output and decoding of solutions back into plans.

mod build;
mod extract;
mod lp;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub use build::{build_full_model, MilpConfig};
pub use extract::extract_plan;
pub use lp::emit_lp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Integer,
    Continuous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub kind: VarKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinExpr {
    pub terms: Vec<(VarId, f64)>,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: VarId, coef: f64) -> Self {
        self.add(var, coef);
        self
    }

    /// Adds `coef * var`, merging with an existing term on the same variable.
    pub fn add(&mut self, var: VarId, coef: f64) {
        if let Some(t) = self.terms.iter_mut().find(|t| t.0 == var) {
            t.1 += coef;
        } else {
            self.terms.push((var, coef));
        }
    }

    pub fn eval(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v.0]).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub expr: LinExpr,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn is_satisfied(&self, values: &[f64], tol: f64) -> bool {
        let lhs = self.expr.eval(values);
        match self.sense {
            Sense::Le => lhs <= self.rhs + tol,
            Sense::Ge => lhs >= self.rhs - tol,
            Sense::Eq => (lhs - self.rhs).abs() <= tol,
        }
    }
}

/// Maximization objective `terms + constant`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Objective {
    pub terms: LinExpr,
    pub constant: f64,
}

/// A maximization model over bounded variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MilpModel {
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Objective,
    index: HashMap<String, VarId>,
}

impl MilpModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a variable. Names must be unique and integer bounds finite.
    pub fn add_var(&mut self, name: impl Into<String>, lower: f64, upper: f64, kind: VarKind) -> Result<VarId> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::Build(format!("variable `{name}` declared twice")));
        }
        if kind != VarKind::Continuous && !(lower.is_finite() && upper.is_finite()) {
            return Err(Error::Build(format!("integer variable `{name}` needs finite bounds")));
        }
        let (lower, upper) = match kind {
            VarKind::Binary => (lower.max(0.0), upper.min(1.0)),
            _ => (lower, upper),
        };
        let id = VarId(self.variables.len());
        self.index.insert(name.clone(), id);
        self.variables.push(Variable { name, lower, upper, kind });
        Ok(id)
    }

    pub fn binary(&mut self, name: impl Into<String>) -> Result<VarId> {
        self.add_var(name, 0.0, 1.0, VarKind::Binary)
    }

    pub fn integer(&mut self, name: impl Into<String>, lower: i64, upper: i64) -> Result<VarId> {
        self.add_var(name, lower as f64, upper as f64, VarKind::Integer)
    }

    pub fn add_constraint(&mut self, name: impl Into<String>, expr: LinExpr, sense: Sense, rhs: f64) {
        debug_assert!(expr.terms.iter().all(|(v, _)| v.0 < self.variables.len()));
        self.constraints.push(Constraint { name: name.into(), expr, sense, rhs });
    }

    pub fn set_objective(&mut self, terms: LinExpr, constant: f64) {
        self.objective = Objective { terms, constant };
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn var(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn variable(&self, id: VarId) -> &Variable {
        &self.variables[id.0]
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.terms.eval(values) + self.objective.constant
    }

    /// Names of the constraints and variable bounds violated by `values`.
    pub fn violations(&self, values: &[f64], tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        for (v, &x) in self.variables.iter().zip(values) {
            if x < v.lower - tol || x > v.upper + tol {
                out.push(format!("bound of {}", v.name));
            } else if v.kind != VarKind::Continuous && (x - x.round()).abs() > tol {
                out.push(format!("integrality of {}", v.name));
            }
        }
        for c in &self.constraints {
            if !c.is_satisfied(values, tol) {
                out.push(c.name.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        let mut m = MilpModel::new();
        m.binary("x").unwrap();
        assert!(m.binary("x").is_err());
        assert!(m.add_var("y", 0.0, f64::INFINITY, VarKind::Integer).is_err());
        assert!(m.add_var("y", 0.0, f64::INFINITY, VarKind::Continuous).is_ok());
    }

    #[test]
    fn violations_name_constraints() {
        let mut m = MilpModel::new();
        let f = m.integer("f_1", 1, 4).unwrap();
        let b = m.integer("b_1", 1, 4).unwrap();
        m.add_constraint("spectrum_1", LinExpr::new().with(f, 1.0).with(b, 1.0), Sense::Le, 5.0);
        assert!(m.violations(&[2.0, 3.0], 1e-9).is_empty());
        assert_eq!(m.violations(&[3.0, 3.0], 1e-9), vec!["spectrum_1".to_string()]);
        assert_eq!(m.violations(&[0.0, 1.5], 1e-9).len(), 2);
    }

    #[test]
    fn linexpr_merges_terms() {
        let e = LinExpr::new().with(VarId(0), 1.0).with(VarId(0), 2.0).with(VarId(1), -1.0);
        assert_eq!(e.terms, vec![(VarId(0), 3.0), (VarId(1), -1.0)]);
        assert_eq!(e.eval(&[2.0, 5.0]), 1.0);
    }
}
