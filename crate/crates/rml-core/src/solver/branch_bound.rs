//! Best-first branch-and-bound on top of the bounded simplex.
//!
//! Branches on the most-fractional integer variable, explores nodes in bound
//! order with insertion-order tie-breaks, and seeds the incumbent from an
//! optional warm start. When every objective coefficient sits on an integer
//! variable and is itself integral, node bounds are rounded up, which closes
//! covering-style models quickly.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use super::simplex::solve_lp;
use super::{MipModel, Sense, SolveResult, SolveStatus, SolverConfig};
use crate::error::Result;

struct Node {
    /// valid lower bound (internal min sense) for the subtree
    key: f64,
    id: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.id == other.id
    }
}
impl Eq for Node {}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; invert so the smallest bound pops first,
        // oldest node winning ties
        other
            .key
            .total_cmp(&self.key)
            .then_with(|| other.id.cmp(&self.id))
    }
}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn solve_mip(model: &MipModel, config: &SolverConfig) -> Result<SolveResult> {
    let start = Instant::now();
    let n = model.lp.n_vars();
    let sense_factor = match model.lp.sense {
        Sense::Min => 1.0,
        Sense::Max => -1.0,
    };

    // pure LP fast path
    if !model.integer.iter().any(|&b| b) {
        let mut res = solve_lp(&model.lp, config)?;
        res.node_count = 1;
        res.runtime = start.elapsed();
        return Ok(res);
    }

    let integral_objective = objective_is_integral(model);

    let mut incumbent: Option<(f64, Vec<f64>)> = None; // internal min objective
    if let Some(warm) = &config.warm {
        if let Some((obj, x)) = validate_warm(model, warm, config) {
            incumbent = Some((sense_factor * obj, x));
        }
    }

    let mut scratch = model.lp.clone();
    let lp_config = SolverConfig {
        warm: None,
        time_limit: None,
        ..config.clone()
    };

    let mut heap: BinaryHeap<Node> = BinaryHeap::new();
    let mut next_id = 0usize;
    heap.push(Node {
        key: f64::NEG_INFINITY,
        id: next_id,
        lower: model.lp.vars.iter().map(|v| v.lower).collect(),
        upper: model.lp.vars.iter().map(|v| v.upper).collect(),
    });
    next_id += 1;

    let mut node_count = 0usize;
    let mut hit_time_limit = false;
    let mut infeasible_everywhere = true;

    while let Some(node) = heap.pop() {
        if let Some(limit) = config.time_limit {
            if start.elapsed() >= limit {
                hit_time_limit = true;
                break;
            }
        }
        if let Some((ub, _)) = &incumbent {
            if prune(node.key, *ub, integral_objective, config) {
                // best-first: every remaining key is at least this one,
                // so the global gap is closed
                break;
            }
        }

        // solve the node relaxation under its bounds
        for j in 0..n {
            scratch.vars[j].lower = node.lower[j];
            scratch.vars[j].upper = node.upper[j];
        }
        let relax = solve_lp(&scratch, &lp_config)?;
        node_count += 1;
        match relax.status {
            SolveStatus::Infeasible => continue,
            SolveStatus::Unbounded => {
                return Ok(SolveResult {
                    status: SolveStatus::Unbounded,
                    objective: match model.lp.sense {
                        Sense::Min => f64::NEG_INFINITY,
                        Sense::Max => f64::INFINITY,
                    },
                    x: vec![0.0; n],
                    row_duals: Vec::new(),
                    reduced_costs: Vec::new(),
                    node_count,
                    runtime: start.elapsed(),
                });
            }
            _ => {}
        }
        infeasible_everywhere = false;
        let bound = sense_factor * relax.objective;
        if let Some((ub, _)) = &incumbent {
            if prune(bound, *ub, integral_objective, config) {
                continue;
            }
        }

        match most_fractional(model, &relax.x, config.int_tol) {
            None => {
                // integer feasible: round and accept
                let candidate = rounded_candidate(model, &relax.x);
                let obj = sense_factor * model.lp.objective_value(&candidate);
                if incumbent.as_ref().is_none_or(|(ub, _)| obj < *ub) {
                    incumbent = Some((obj, candidate));
                }
            }
            Some(j) => {
                let xj = relax.x[j];
                let mut down = Node {
                    key: bound,
                    id: next_id,
                    lower: node.lower.clone(),
                    upper: node.upper.clone(),
                };
                next_id += 1;
                down.upper[j] = xj.floor();
                let mut up = Node {
                    key: bound,
                    id: next_id,
                    lower: node.lower,
                    upper: node.upper,
                };
                next_id += 1;
                up.lower[j] = xj.ceil();
                heap.push(down);
                heap.push(up);
            }
        }
    }

    let runtime = start.elapsed();
    match incumbent {
        Some((obj_min, x)) => {
            let status = if hit_time_limit {
                SolveStatus::TimeLimit
            } else {
                SolveStatus::Optimal
            };
            Ok(SolveResult {
                status,
                objective: sense_factor * obj_min,
                x,
                row_duals: Vec::new(),
                reduced_costs: Vec::new(),
                node_count,
                runtime,
            })
        }
        None => Ok(SolveResult {
            status: if hit_time_limit {
                SolveStatus::TimeLimit
            } else if infeasible_everywhere || heap.is_empty() {
                SolveStatus::Infeasible
            } else {
                SolveStatus::TimeLimit
            },
            objective: f64::NAN,
            x: vec![0.0; n],
            row_duals: Vec::new(),
            reduced_costs: Vec::new(),
            node_count,
            runtime,
        }),
    }
}

/// Subtree with bound `key` cannot contain anything better than `ub`.
fn prune(key: f64, ub: f64, integral_objective: bool, config: &SolverConfig) -> bool {
    let key_eff = if integral_objective {
        (key - 1e-9).ceil()
    } else {
        key
    };
    key_eff >= ub - config.gap_tol * ub.abs().max(1.0)
}

/// True when the objective is guaranteed integral at integer-feasible points.
fn objective_is_integral(model: &MipModel) -> bool {
    model.lp.vars.iter().enumerate().all(|(j, v)| {
        v.obj == 0.0 || (model.integer[j] && v.obj.fract() == 0.0)
    })
}

fn most_fractional(model: &MipModel, x: &[f64], int_tol: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, &is_int) in model.integer.iter().enumerate() {
        if !is_int {
            continue;
        }
        let frac = (x[j] - x[j].round()).abs();
        if frac <= int_tol {
            continue;
        }
        let score = frac.min(1.0 - frac);
        match best {
            Some((_, s)) if s >= score => {}
            _ => best = Some((j, score)),
        }
    }
    best.map(|(j, _)| j)
}

fn rounded_candidate(model: &MipModel, x: &[f64]) -> Vec<f64> {
    x.iter()
        .enumerate()
        .map(|(j, &v)| if model.integer[j] { v.round() } else { v })
        .collect()
}

/// Accepts a warm assignment only if it is integral and feasible.
fn validate_warm(model: &MipModel, warm: &[f64], config: &SolverConfig) -> Option<(f64, Vec<f64>)> {
    if warm.len() != model.lp.n_vars() {
        return None;
    }
    let mut x = warm.to_vec();
    for (j, &is_int) in model.integer.iter().enumerate() {
        if is_int {
            if (x[j] - x[j].round()).abs() > config.int_tol {
                return None;
            }
            x[j] = x[j].round();
        }
    }
    if model.lp.feasibility_residual(&x) > 1e-6 {
        return None;
    }
    Some((model.lp.objective_value(&x), x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{LpModel, RowSense, Sense};

    #[test]
    fn binary_knapsack_toy() {
        // max x1 + x2 s.t. x1 + x2 <= 1, binary -> 1
        let mut lp = LpModel::new("toy", Sense::Max);
        let a = lp.add_var("x1", 0.0, 1.0, 1.0);
        let b = lp.add_var("x2", 0.0, 1.0, 1.0);
        lp.add_row("cap", vec![(a, 1.0), (b, 1.0)], RowSense::Le, 1.0);
        let mut mip = MipModel::from_lp(lp);
        mip.mark_integer(a);
        mip.mark_integer(b);
        let res = solve_mip(&mip, &SolverConfig::default()).unwrap();
        assert_eq!(res.status, SolveStatus::Optimal);
        assert!((res.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fractional_relaxation_forces_branching() {
        // max 5x + 4y s.t. 6x + 4y <= 10; x + 2y <= 4; x,y integer in [0,10]
        // LP optimum fractional; integer optimum 9 at (1, 1)
        let mut lp = LpModel::new("branch", Sense::Max);
        let x = lp.add_var("x", 0.0, 10.0, 5.0);
        let y = lp.add_var("y", 0.0, 10.0, 4.0);
        lp.add_row("r1", vec![(x, 6.0), (y, 4.0)], RowSense::Le, 10.0);
        lp.add_row("r2", vec![(x, 1.0), (y, 2.0)], RowSense::Le, 4.0);
        let mut mip = MipModel::from_lp(lp);
        mip.mark_integer(x);
        mip.mark_integer(y);
        let res = solve_mip(&mip, &SolverConfig::default()).unwrap();
        assert_eq!(res.status, SolveStatus::Optimal);
        assert!((res.objective - 9.0).abs() < 1e-9);
        assert!((res.x[x] - 1.0).abs() < 1e-9);
        assert!((res.x[y] - 1.0).abs() < 1e-9);
        assert!(res.node_count >= 2);
    }

    #[test]
    fn infeasible_mip() {
        let mut lp = LpModel::new("infeas", Sense::Min);
        let x = lp.add_var("x", 0.0, 1.0, 1.0);
        lp.add_row("hi", vec![(x, 1.0)], RowSense::Ge, 0.5);
        lp.add_row("lo", vec![(x, 1.0)], RowSense::Le, 0.4);
        let mut mip = MipModel::from_lp(lp);
        mip.mark_integer(x);
        let res = solve_mip(&mip, &SolverConfig::default()).unwrap();
        assert_eq!(res.status, SolveStatus::Infeasible);
    }

    #[test]
    fn warm_start_seeds_incumbent() {
        let mut lp = LpModel::new("warm", Sense::Max);
        let x = lp.add_var("x", 0.0, 1.0, 2.0);
        let y = lp.add_var("y", 0.0, 1.0, 3.0);
        lp.add_row("cap", vec![(x, 1.0), (y, 1.0)], RowSense::Le, 1.0);
        let mut mip = MipModel::from_lp(lp);
        mip.mark_integer(x);
        mip.mark_integer(y);
        let config = SolverConfig::default().with_warm(vec![0.0, 1.0]);
        let res = solve_mip(&mip, &config).unwrap();
        assert_eq!(res.status, SolveStatus::Optimal);
        assert!((res.objective - 3.0).abs() < 1e-9);
    }

    #[test]
    fn deterministic_node_counts() {
        let build = || {
            let mut lp = LpModel::new("det", Sense::Max);
            let vars: Vec<usize> = (0..6)
                .map(|j| lp.add_var(format!("x{j}"), 0.0, 1.0, 3.0 + (j as f64) * 0.7))
                .collect();
            lp.add_row(
                "cap",
                vars.iter().map(|&v| (v, 2.0 + v as f64)).collect(),
                RowSense::Le,
                11.0,
            );
            let mut mip = MipModel::from_lp(lp);
            for &v in &vars {
                mip.mark_integer(v);
            }
            mip
        };
        let r1 = solve_mip(&build(), &SolverConfig::default()).unwrap();
        let r2 = solve_mip(&build(), &SolverConfig::default()).unwrap();
        assert_eq!(r1.node_count, r2.node_count);
        assert_eq!(r1.x, r2.x);
        assert_eq!(r1.objective, r2.objective);
    }
}
