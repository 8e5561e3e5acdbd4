use std::fmt::Write;

use super::{LinExpr, MilpModel, VarKind};

const TERMS_PER_LINE: usize = 8;

fn write_terms(out: &mut String, model: &MilpModel, expr: &LinExpr) {
    let mut first = true;
    for (n, &(v, c)) in expr.terms.iter().enumerate() {
        if n > 0 && n % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let name = &model.variable(v).name;
        let (sign, mag) = if c < 0.0 { ("-", -c) } else { ("+", c) };
        if first {
            if sign == "-" {
                out.push_str(" -");
            }
        } else {
            let _ = write!(out, " {sign}");
        }
        if mag == 1.0 {
            let _ = write!(out, " {name}");
        } else {
            let _ = write!(out, " {mag} {name}");
        }
        first = false;
    }
}

/// Renders the model in CPLEX LP format. Variables and constraints appear in
/// insertion order. An objective without terms is written as `obj: 0 x_dummy`
/// with `x_dummy` fixed to zero; a constant objective offset is written as a
/// trailing constant.
pub fn emit_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    out.push_str("\\ beamplan model\n");
    out.push_str("Maximize\n obj:");
    let obj = model.objective();
    let terms: LinExpr = LinExpr { terms: obj.terms.terms.iter().copied().filter(|t| t.1 != 0.0).collect() };
    let dummy = terms.terms.is_empty();
    if dummy {
        out.push_str(" 0 x_dummy");
    } else {
        write_terms(&mut out, model, &terms);
    }
    if obj.constant != 0.0 {
        let sign = if obj.constant < 0.0 { "-" } else { "+" };
        let _ = write!(out, " {sign} {}", obj.constant.abs());
    }
    out.push_str("\nSubject To\n");
    for c in model.constraints() {
        let _ = write!(out, " {}:", c.name);
        if c.expr.terms.is_empty() {
            out.push_str(" 0 x_dummy");
        } else {
            write_terms(&mut out, model, &c.expr);
        }
        let _ = writeln!(out, " {} {}", c.sense, c.rhs);
    }
    out.push_str("Bounds\n");
    for v in model.variables() {
        let binary_full = v.kind == VarKind::Binary && v.lower == 0.0 && v.upper == 1.0;
        if binary_full {
            continue;
        }
        if v.lower == v.upper {
            let _ = writeln!(out, " {} = {}", v.name, v.lower);
            continue;
        }
        let lo = if v.lower == f64::NEG_INFINITY { "-inf".to_string() } else { v.lower.to_string() };
        let hi = if v.upper == f64::INFINITY { "+inf".to_string() } else { v.upper.to_string() };
        let _ = writeln!(out, " {lo} <= {} <= {hi}", v.name);
    }
    if dummy || model.constraints().iter().any(|c| c.expr.terms.is_empty()) {
        out.push_str(" x_dummy = 0\n");
    }
    let section = |out: &mut String, title: &str, kind: VarKind| {
        let names: Vec<&str> = model.variables().iter().filter(|v| v.kind == kind).map(|v| v.name.as_str()).collect();
        if names.is_empty() {
            return;
        }
        let _ = writeln!(out, "{title}");
        for chunk in names.chunks(TERMS_PER_LINE) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    };
    section(&mut out, "Generals", VarKind::Integer);
    section(&mut out, "Binaries", VarKind::Binary);
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::Sense;

    #[test]
    fn single_constraint_layout() {
        let mut m = MilpModel::new();
        let f = m.integer("f_1", 1, 4).unwrap();
        let b = m.integer("b_1", 1, 4).unwrap();
        m.add_constraint("spectrum_1", LinExpr::new().with(f, 1.0).with(b, 1.0), Sense::Le, 5.0);
        m.set_objective(LinExpr::new().with(b, 1.0).with(f, -0.5), 2.0);
        let text = emit_lp(&m);
        let expected = "\\ beamplan model\n\
Maximize\n obj: b_1 - 0.5 f_1 + 2\n\
Subject To\n spectrum_1: f_1 + b_1 <= 5\n\
Bounds\n 1 <= f_1 <= 4\n 1 <= b_1 <= 4\n\
Generals\n f_1 b_1\n\
End\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn empty_objective_uses_dummy() {
        let mut m = MilpModel::new();
        m.binary("x").unwrap();
        let text = emit_lp(&m);
        assert!(text.contains(" obj: 0 x_dummy\n"));
        assert!(text.contains(" x_dummy = 0\n"));
        for h in ["Maximize", "Subject To", "Bounds", "Binaries", "End"] {
            assert!(text.lines().any(|l| l == h), "{h}");
        }
    }

    #[test]
    fn fixed_binary_gets_a_bound() {
        let mut m = MilpModel::new();
        let s = m.add_var("s_1_2", 0.0, 0.0, VarKind::Binary).unwrap();
        m.set_objective(LinExpr::new().with(s, 1.0), 0.0);
        let text = emit_lp(&m);
        assert!(text.contains("Bounds\n s_1_2 = 0\n"));
    }
}
