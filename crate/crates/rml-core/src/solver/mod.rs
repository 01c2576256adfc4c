//! Self-contained LP and MIP solving: a dense bounded-variable primal
//! simplex, best-first branch-and-bound over it, and a CPLEX-LP-style model
//! writer for external cross-checking.
//!
//! Every model in this crate lives on finite variable bounds (everything is
//! in `[0,1]` or `[0, M]`), which keeps the simplex free of unbounded rays in
//! phase 2 except through genuinely unbounded model bugs, which are reported.

mod branch_bound;
mod lp_format;
mod simplex;

pub use branch_bound::solve_mip;
pub use lp_format::export_lp_format;
pub use simplex::solve_lp;

use std::time::Duration;

/// Row comparison sense.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowSense {
    Le,
    Eq,
    Ge,
}

/// Optimization direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Clone, Debug)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub obj: f64,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub name: String,
    /// sparse (variable index, coefficient) pairs, indices strictly increasing
    pub coeffs: Vec<(usize, f64)>,
    pub sense: RowSense,
    pub rhs: f64,
}

/// Row-oriented linear model.
#[derive(Clone, Debug)]
pub struct LpModel {
    pub name: String,
    pub sense: Sense,
    pub vars: Vec<Variable>,
    pub rows: Vec<Row>,
    /// quadratic equality rows used only by the QCP export:
    /// `lin + prod_coeff * (x_a * x_b) = rhs`
    pub quad_rows: Vec<QuadRow>,
}

/// `sum coeffs + prod_coeff * x_a * x_b  (sense)  rhs`; emit-only.
#[derive(Clone, Debug)]
pub struct QuadRow {
    pub name: String,
    pub coeffs: Vec<(usize, f64)>,
    pub prod: (usize, usize),
    pub prod_coeff: f64,
    pub sense: RowSense,
    pub rhs: f64,
}

impl LpModel {
    pub fn new(name: impl Into<String>, sense: Sense) -> Self {
        Self {
            name: name.into(),
            sense,
            vars: Vec::new(),
            rows: Vec::new(),
            quad_rows: Vec::new(),
        }
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: f64, upper: f64, obj: f64) -> usize {
        self.vars.push(Variable {
            name: name.into(),
            lower,
            upper,
            obj,
        });
        self.vars.len() - 1
    }

    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        mut coeffs: Vec<(usize, f64)>,
        sense: RowSense,
        rhs: f64,
    ) -> usize {
        coeffs.sort_unstable_by_key(|&(j, _)| j);
        coeffs.retain(|&(_, c)| c != 0.0);
        self.rows.push(Row {
            name: name.into(),
            coeffs,
            sense,
            rhs,
        });
        self.rows.len() - 1
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Objective value of an assignment.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.vars.iter().zip(x).map(|(v, &xi)| v.obj * xi).sum()
    }

    /// Largest violation of rows and bounds at `x`.
    pub fn feasibility_residual(&self, x: &[f64]) -> f64 {
        let mut res: f64 = 0.0;
        for (v, &xi) in self.vars.iter().zip(x) {
            res = res.max(v.lower - xi).max(xi - v.upper);
        }
        for row in &self.rows {
            let lhs: f64 = row.coeffs.iter().map(|&(j, c)| c * x[j]).sum();
            let viol = match row.sense {
                RowSense::Le => lhs - row.rhs,
                RowSense::Ge => row.rhs - lhs,
                RowSense::Eq => (lhs - row.rhs).abs(),
            };
            res = res.max(viol);
        }
        res
    }
}

/// Linear model plus per-variable integrality marks.
#[derive(Clone, Debug)]
pub struct MipModel {
    pub lp: LpModel,
    pub integer: Vec<bool>,
}

impl MipModel {
    pub fn from_lp(lp: LpModel) -> Self {
        let n = lp.n_vars();
        Self {
            lp,
            integer: vec![false; n],
        }
    }

    pub fn mark_integer(&mut self, var: usize) {
        self.integer[var] = true;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    TimeLimit,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::TimeLimit => "time_limit",
        }
    }
}

/// Result of an LP or MIP solve.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub objective: f64,
    /// primal values, one per model variable (best incumbent for MIPs)
    pub x: Vec<f64>,
    /// LP only: one multiplier per row, nonnegative for binding <= rows of a
    /// minimization and for binding >= rows of a maximization
    pub row_duals: Vec<f64>,
    /// LP only: objective minus the dual prices of each column
    pub reduced_costs: Vec<f64>,
    /// MIP only
    pub node_count: usize,
    pub runtime: Duration,
}

/// Centralized tolerances and limits.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub feas_tol: f64,
    pub int_tol: f64,
    pub gap_tol: f64,
    pub time_limit: Option<Duration>,
    pub iter_limit: usize,
    /// full assignment seeding the MIP incumbent
    pub warm: Option<Vec<f64>>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            feas_tol: 1e-7,
            int_tol: 1e-6,
            gap_tol: 1e-6,
            time_limit: None,
            iter_limit: 200_000,
            warm: None,
        }
    }
}

impl SolverConfig {
    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    pub fn with_warm(mut self, warm: Vec<f64>) -> Self {
        self.warm = Some(warm);
        self
    }
}

/// Writes a failing model next to the temp dir and returns the path; used by
/// error paths so the model can be inspected with an external solver.
pub(crate) fn dump_model(model: &LpModel) -> std::path::PathBuf {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static COUNTER: AtomicUsize = AtomicUsize::new(0);
    let id = COUNTER.fetch_add(1, Ordering::Relaxed);
    let path = std::env::temp_dir().join(format!(
        "rml_dump_{}_{}_{}.lp",
        std::process::id(),
        id,
        model.name.replace(|c: char| !c.is_alphanumeric(), "_")
    ));
    let _ = std::fs::write(&path, export_lp_format_plain(model));
    path
}

fn export_lp_format_plain(model: &LpModel) -> String {
    lp_format::export_lp_format(&MipModel::from_lp(model.clone()))
}
