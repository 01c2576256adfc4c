//! CPLEX-LP-style model writer.
//!
//! Output is deterministic given the model: sections in fixed order, terms in
//! variable order, numbers in shortest round-trip form. Quadratic rows (used
//! by the QCP export) render their product inside brackets, the extension
//! accepted by the mainstream solvers.

use std::fmt::Write as _;

use super::{MipModel, QuadRow, Row, RowSense, Sense};

pub fn export_lp_format(model: &MipModel) -> String {
    let lp = &model.lp;
    let mut out = String::new();
    let _ = writeln!(out, "\\ {}", lp.name);
    out.push_str(match lp.sense {
        Sense::Min => "Minimize\n",
        Sense::Max => "Maximize\n",
    });
    out.push_str(" obj:");
    let mut any = false;
    for (j, v) in lp.vars.iter().enumerate() {
        if v.obj != 0.0 {
            push_term(&mut out, v.obj, &lp.vars[j].name, !any);
            any = true;
        }
    }
    if !any {
        out.push_str(" 0");
    }
    out.push('\n');

    out.push_str("Subject To\n");
    for row in &lp.rows {
        push_row(&mut out, row, lp);
    }
    for q in &lp.quad_rows {
        push_quad_row(&mut out, q, lp);
    }

    out.push_str("Bounds\n");
    for v in &lp.vars {
        if v.lower == f64::NEG_INFINITY && v.upper == f64::INFINITY {
            let _ = writeln!(out, " {} free", v.name);
        } else if v.lower == v.upper {
            let _ = writeln!(out, " {} = {}", v.name, fmt_num(v.lower));
        } else {
            let lo = if v.lower == f64::NEG_INFINITY {
                "-inf".to_string()
            } else {
                fmt_num(v.lower)
            };
            let hi = if v.upper == f64::INFINITY {
                "+inf".to_string()
            } else {
                fmt_num(v.upper)
            };
            let _ = writeln!(out, " {} <= {} <= {}", lo, v.name, hi);
        }
    }

    let binaries: Vec<&str> = model
        .integer
        .iter()
        .enumerate()
        .filter(|&(j, &is_int)| {
            is_int && lp.vars[j].lower >= 0.0 && lp.vars[j].upper <= 1.0
        })
        .map(|(j, _)| lp.vars[j].name.as_str())
        .collect();
    let generals: Vec<&str> = model
        .integer
        .iter()
        .enumerate()
        .filter(|&(j, &is_int)| {
            is_int && !(lp.vars[j].lower >= 0.0 && lp.vars[j].upper <= 1.0)
        })
        .map(|(j, _)| lp.vars[j].name.as_str())
        .collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for chunk in binaries.chunks(12) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    if !generals.is_empty() {
        out.push_str("Generals\n");
        for chunk in generals.chunks(12) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    out
}

fn sense_str(sense: RowSense) -> &'static str {
    match sense {
        RowSense::Le => "<=",
        RowSense::Eq => "=",
        RowSense::Ge => ">=",
    }
}

fn push_row(out: &mut String, row: &Row, lp: &super::LpModel) {
    let _ = write!(out, " {}:", row.name);
    let mut any = false;
    for &(j, c) in &row.coeffs {
        push_term(out, c, &lp.vars[j].name, !any);
        any = true;
    }
    if !any {
        out.push_str(" 0");
    }
    let _ = writeln!(out, " {} {}", sense_str(row.sense), fmt_num(row.rhs));
}

fn push_quad_row(out: &mut String, q: &QuadRow, lp: &super::LpModel) {
    let _ = write!(out, " {}:", q.name);
    let mut any = false;
    for &(j, c) in &q.coeffs {
        push_term(out, c, &lp.vars[j].name, !any);
        any = true;
    }
    let sign = if q.prod_coeff < 0.0 { "-" } else if any { "+" } else { "" };
    let mag = q.prod_coeff.abs();
    let coeff = if mag == 1.0 {
        String::new()
    } else {
        format!("{} ", fmt_num(mag))
    };
    let _ = write!(
        out,
        " {} [ {}{} * {} ]",
        sign, coeff, lp.vars[q.prod.0].name, lp.vars[q.prod.1].name
    );
    let _ = writeln!(out, " {} {}", sense_str(q.sense), fmt_num(q.rhs));
}

fn push_term(out: &mut String, coeff: f64, name: &str, first: bool) {
    if coeff < 0.0 {
        out.push_str(" -");
    } else if !first {
        out.push_str(" +");
    }
    let mag = coeff.abs();
    if mag == 1.0 {
        let _ = write!(out, " {name}");
    } else {
        let _ = write!(out, " {} {name}", fmt_num(mag));
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{LpModel, MipModel, RowSense, Sense};

    #[test]
    fn one_variable_model_is_five_lines() {
        let mut lp = LpModel::new("tiny", Sense::Min);
        lp.add_var("x", 0.0, 1.0, 1.0);
        let text = export_lp_format(&MipModel::from_lp(lp));
        // comment, Minimize, obj, Subject To, Bounds, bound line, End
        assert_eq!(
            text,
            "\\ tiny\nMinimize\n obj: x\nSubject To\nBounds\n 0 <= x <= 1\nEnd\n"
        );
    }

    #[test]
    fn binaries_section_lists_integer_unit_variables() {
        let mut lp = LpModel::new("bin", Sense::Min);
        let a = lp.add_var("u_0", 0.0, 1.0, 0.0);
        let b = lp.add_var("v_0", 0.0, 1.0, 1.0);
        lp.add_row("link", vec![(a, 1.0), (b, -1.0)], RowSense::Le, 0.0);
        let mut mip = MipModel::from_lp(lp);
        mip.mark_integer(a);
        mip.mark_integer(b);
        let text = export_lp_format(&mip);
        assert!(text.contains("Binaries\n u_0 v_0\n"));
        assert!(text.contains(" link: u_0 - v_0 <= 0\n"));
    }

    #[test]
    fn output_is_bit_stable() {
        let build = || {
            let mut lp = LpModel::new("stable", Sense::Max);
            let x = lp.add_var("x", 0.0, 2.5, 1.25);
            let y = lp.add_var("y", 0.0, 1.0, -3.0);
            lp.add_row("r", vec![(x, 0.5), (y, 2.0)], RowSense::Ge, -1.0);
            MipModel::from_lp(lp)
        };
        assert_eq!(export_lp_format(&build()), export_lp_format(&build()));
    }
}
