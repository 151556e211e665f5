//! Completion-time LP relaxation solved by cutting planes.
//!
//! Variables are completion times `C_j`. The initial system carries the
//! bounds `C_j >= r_j + p_j/2` and one row `C_k - C_j >= 0` per immediate
//! precedence pair. Violated parallel-machine inequalities are added on
//! demand in multiplied form
//!
//! ```text
//!   sum_{j in S} p_j C_j  >=  r * p(S) + p(S)^2 / 2
//! ```
//!
//! which avoids dividing by `p(S)` when all members have zero length.
//! The separation oracle scans, for each distinct release value `r`, the
//! prefixes of the eligible jobs `{j : r_j >= r}` in order of increasing
//! candidate completion time; a most-violated set can always be chosen
//! this way because the marginal effect of adding a job to `S` is
//! `p_j (r + p(S) + p_j/2 - c_j)`, so any positive-length job cheaper
//! than a member of an optimal set belongs to the set as well.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{topological_order, Instance};
use crate::simplex::{self, Problem, Rel, Row};

/// Default absolute separation tolerance on the multiplied form.
pub const DEFAULT_TOL_SEP: f64 = 1e-7;

/// One generated inequality: the release value standing in for
/// `r_min(S)` plus the member set sorted by id. At least one member has
/// `r_j` equal to `r`, so the inequality is exactly the parallel
/// constraint of `S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub r: f64,
    pub set: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    /// Optimal LP completion time per job.
    pub c_star: Vec<f64>,
    /// `sum w_j C*_j`, a lower bound on the optimal schedule cost.
    pub objective: f64,
    pub cuts: Vec<Cut>,
    /// Cutting-plane rounds that added at least one cut.
    pub iterations: usize,
    /// Number of simplex invocations.
    pub lp_solves: usize,
}

/// Violation of a cut against a candidate completion-time vector, in the
/// multiplied form (positive means violated).
pub fn cut_violation(cut: &Cut, c: &[f64], inst: &Instance) -> f64 {
    let p_sum: f64 = cut.set.iter().map(|&j| inst.p(j)).sum();
    let pc_sum: f64 = cut.set.iter().map(|&j| inst.p(j) * c[j]).sum();
    cut.r * p_sum + 0.5 * p_sum * p_sum - pc_sum
}

/// Finds, per distinct release value, the most violated prefix cut.
/// Returns an empty vector iff no subset violates its parallel
/// inequality by more than `tol_sep`.
pub fn separate(c: &[f64], inst: &Instance, tol_sep: f64) -> Vec<Cut> {
    let n = inst.n();
    assert_eq!(c.len(), n, "candidate vector must cover every job");

    let mut release_values: Vec<f64> = (0..n).map(|j| inst.r(j)).collect();
    release_values.sort_by(f64::total_cmp);
    release_values.dedup();

    let mut cuts = Vec::new();
    for &rv in &release_values {
        let mut eligible: Vec<usize> = (0..n).filter(|&j| inst.r(j) >= rv).collect();
        eligible.sort_by(|&a, &b| c[a].total_cmp(&c[b]).then(a.cmp(&b)));

        let mut p_sum = 0.0;
        let mut pc_sum = 0.0;
        let mut seen_rv = false;
        let mut best: Option<(f64, usize)> = None;
        for (idx, &j) in eligible.iter().enumerate() {
            p_sum += inst.p(j);
            pc_sum += inst.p(j) * c[j];
            if inst.r(j) == rv {
                seen_rv = true;
            }
            if seen_rv {
                let v = rv * p_sum + 0.5 * p_sum * p_sum - pc_sum;
                if best.map_or(true, |(bv, _)| v > bv) {
                    best = Some((v, idx + 1));
                }
            }
        }
        if let Some((v, len)) = best {
            if v > tol_sep {
                let mut set = eligible[..len].to_vec();
                set.sort_unstable();
                cuts.push(Cut { r: rv, set });
            }
        }
    }
    cuts
}

fn cut_row(cut: &Cut, inst: &Instance) -> Row {
    let p_sum: f64 = cut.set.iter().map(|&j| inst.p(j)).sum();
    Row {
        coeffs: cut
            .set
            .iter()
            .filter(|&&j| inst.p(j) > 0.0)
            .map(|&j| (j, inst.p(j)))
            .collect(),
        rel: Rel::Ge,
        rhs: cut.r * p_sum + 0.5 * p_sum * p_sum,
    }
}

/// Cutting-plane loop: solve, separate, add all returned cuts, repeat
/// until the oracle is silent. The objective of the final solve is a
/// valid lower bound on the optimal preemptive (hence nonpreemptive)
/// cost. Expects a validated, release-date-normalized instance.
pub fn solve_lp_relaxation(inst: &Instance, tol_sep: f64) -> Result<LpSolution> {
    let n = inst.n();
    if n == 0 {
        return Ok(LpSolution {
            c_star: vec![],
            objective: 0.0,
            cuts: vec![],
            iterations: 0,
            lp_solves: 0,
        });
    }

    let weights: Vec<f64> = (0..n).map(|j| inst.w(j)).collect();
    let bounds: Vec<f64> = (0..n).map(|j| inst.r(j) + inst.p(j) / 2.0).collect();
    let mut rows: Vec<Row> = inst
        .prec
        .iter()
        .map(|&(j, k)| Row {
            coeffs: vec![(k, 1.0), (j, -1.0)],
            rel: Rel::Ge,
            rhs: 0.0,
        })
        .collect();

    let round_limit = 10 * n * n;
    let mut cuts: Vec<Cut> = Vec::new();
    let mut rounds = 0usize;
    let mut lp_solves = 0usize;
    loop {
        let sol = simplex::solve(&Problem {
            minimize: weights.clone(),
            lower_bounds: bounds.clone(),
            rows: rows.clone(),
        })?;
        lp_solves += 1;
        let new_cuts = separate(&sol.x, inst, tol_sep);
        if new_cuts.is_empty() {
            return Ok(LpSolution {
                c_star: sol.x,
                objective: sol.objective,
                cuts,
                iterations: rounds,
                lp_solves,
            });
        }
        rounds += 1;
        if rounds > round_limit {
            return Err(Error::IterationLimit(format!(
                "cutting-plane loop exceeded {round_limit} rounds"
            )));
        }
        for cut in new_cuts {
            rows.push(cut_row(&cut, inst));
            cuts.push(cut);
        }
    }
}

/// Orders jobs by `(C*_j, topological rank, id)` while never placing a
/// job before one of its predecessors. When the LP values respect the
/// precedence rows (the normal case) this is exactly the plain sort;
/// the precedence-aware selection only matters for ties and for
/// sub-tolerance numerical jitter.
pub fn lp_list_order(sol: &LpSolution, inst: &Instance) -> Result<Vec<usize>> {
    let n = inst.n();
    assert_eq!(sol.c_star.len(), n);
    for &(j, k) in &inst.prec {
        let gap = sol.c_star[j] - sol.c_star[k];
        if gap > 1e-6 * sol.c_star[j].abs().max(1.0) {
            return Err(Error::PrecedenceViolation { pred: j, succ: k, gap });
        }
    }

    let topo = topological_order(inst)?;
    let mut rank = vec![0usize; n];
    for (i, &j) in topo.iter().enumerate() {
        rank[j] = i;
    }

    let preds = inst.predecessors();
    let succs = inst.successors();
    let mut indeg: Vec<usize> = preds.iter().map(Vec::len).collect();
    let mut avail: Vec<usize> = (0..n).filter(|&j| indeg[j] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while !avail.is_empty() {
        let &pick = avail
            .iter()
            .min_by(|&&a, &&b| {
                sol.c_star[a]
                    .total_cmp(&sol.c_star[b])
                    .then(rank[a].cmp(&rank[b]))
                    .then(a.cmp(&b))
            })
            .unwrap();
        avail.retain(|&j| j != pick);
        order.push(pick);
        for &s in &succs[pick] {
            indeg[s] -= 1;
            if indeg[s] == 0 {
                avail.push(s);
            }
        }
    }
    debug_assert!(inst.order_extends_prec(&order).is_ok());
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Instance, Job};

    fn inst(jobs: &[(f64, f64, f64)], prec: &[(usize, usize)]) -> Instance {
        Instance::new(
            jobs.iter()
                .enumerate()
                .map(|(id, &(p, r, w))| Job { id, p, r, w })
                .collect(),
            prec.iter().copied(),
        )
    }

    #[test]
    fn separate_finds_joint_cut() {
        let i = inst(&[(2.0, 0.0, 1.0), (1.0, 0.0, 1.0)], &[]);
        let cuts = separate(&[0.0, 0.0], &i, 1e-7);
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].r, 0.0);
        assert_eq!(cuts[0].set, vec![0, 1]);
        assert!((cut_violation(&cuts[0], &[0.0, 0.0], &i) - 4.5).abs() < 1e-12);
    }

    #[test]
    fn separate_silent_on_tight_singleton() {
        let i = inst(&[(2.0, 0.0, 1.0)], &[]);
        assert!(separate(&[1.0], &i, 1e-7).is_empty());
    }

    #[test]
    fn separate_silent_when_all_lengths_zero() {
        let i = inst(&[(0.0, 0.0, 1.0), (0.0, 3.0, 1.0)], &[]);
        assert!(separate(&[0.0, 0.0], &i, 1e-7).is_empty());
    }

    #[test]
    fn lp_single_job() {
        let i = inst(&[(2.0, 0.0, 3.0)], &[]);
        let sol = solve_lp_relaxation(&i, 1e-7).unwrap();
        assert!((sol.c_star[0] - 1.0).abs() < 1e-9);
        assert!((sol.objective - 3.0).abs() < 1e-9);
    }

    #[test]
    fn lp_two_jobs_hand_solution() {
        let i = inst(&[(2.0, 0.0, 1.0), (1.0, 0.0, 2.0)], &[]);
        let sol = solve_lp_relaxation(&i, 1e-7).unwrap();
        assert!((sol.c_star[0] - 2.0).abs() < 1e-9, "C0 = {}", sol.c_star[0]);
        assert!((sol.c_star[1] - 0.5).abs() < 1e-9, "C1 = {}", sol.c_star[1]);
        assert!((sol.objective - 3.0).abs() < 1e-9);
    }

    #[test]
    fn lp_chain_binds_joint_cut() {
        let i = inst(&[(2.0, 0.0, 0.0), (1.0, 0.0, 1.0)], &[(0, 1)]);
        let sol = solve_lp_relaxation(&i, 1e-7).unwrap();
        assert!((sol.c_star[1] - 1.5).abs() < 1e-9, "C1 = {}", sol.c_star[1]);
        assert!(sol.c_star[0] <= sol.c_star[1] + 1e-9);
        // With C1 = 1.5, the joint cut 2*C0 + C1 >= 4.5 forces C0 = 1.5.
        assert!((sol.c_star[0] - 1.5).abs() < 1e-9);
        assert!((sol.objective - 1.5).abs() < 1e-9);
    }

    #[test]
    fn lp_solution_satisfies_retained_cuts_and_bounds() {
        for seed in 0..10u64 {
            let i = crate::instance::generate_random(crate::instance::GenParams {
                n: 7,
                p_max: 9,
                r_max: 14,
                w_max: 6,
                edge_prob: 0.3,
                seed,
            });
            let sol = solve_lp_relaxation(&i, 1e-7).unwrap();
            for cut in &sol.cuts {
                let v = cut_violation(cut, &sol.c_star, &i);
                assert!(v <= 1e-7, "retained cut violated by {v}");
            }
            for j in 0..i.n() {
                if i.p(j) > 0.0 {
                    assert!(sol.c_star[j] >= i.r(j) + i.p(j) / 2.0 - 1e-9);
                }
            }
            for &(j, k) in &i.prec {
                assert!(sol.c_star[j] <= sol.c_star[k] + 1e-9);
            }
        }
    }

    #[test]
    fn lp_solve_is_deterministic() {
        let i = crate::instance::generate_random(crate::instance::GenParams {
            n: 8,
            p_max: 9,
            r_max: 14,
            w_max: 6,
            edge_prob: 0.4,
            seed: 5,
        });
        let a = serde_json::to_string(&solve_lp_relaxation(&i, 1e-7).unwrap()).unwrap();
        let b = serde_json::to_string(&solve_lp_relaxation(&i, 1e-7).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn list_order_follows_lp_values() {
        let i = inst(&[(2.0, 0.0, 1.0), (1.0, 0.0, 2.0)], &[]);
        let sol = solve_lp_relaxation(&i, 1e-7).unwrap();
        assert_eq!(lp_list_order(&sol, &i).unwrap(), vec![1, 0]);
    }

    #[test]
    fn list_order_breaks_ties_topologically() {
        let i = inst(&[(1.0, 0.0, 1.0), (1.0, 0.0, 1.0)], &[(0, 1)]);
        let sol = LpSolution {
            c_star: vec![2.0, 2.0],
            objective: 4.0,
            cuts: vec![],
            iterations: 0,
            lp_solves: 0,
        };
        assert_eq!(lp_list_order(&sol, &i).unwrap(), vec![0, 1]);
    }

    #[test]
    fn list_order_is_argsort_without_prec() {
        let i = inst(&[(1.0, 0.0, 1.0), (1.0, 0.0, 1.0), (1.0, 0.0, 1.0)], &[]);
        let sol = LpSolution {
            c_star: vec![3.0, 1.0, 2.0],
            objective: 6.0,
            cuts: vec![],
            iterations: 0,
            lp_solves: 0,
        };
        assert_eq!(lp_list_order(&sol, &i).unwrap(), vec![1, 2, 0]);
    }

    #[test]
    fn list_order_rejects_gross_precedence_violation() {
        let i = inst(&[(1.0, 0.0, 1.0), (1.0, 0.0, 1.0)], &[(0, 1)]);
        let sol = LpSolution {
            c_star: vec![5.0, 1.0],
            objective: 6.0,
            cuts: vec![],
            iterations: 0,
            lp_solves: 0,
        };
        assert!(matches!(
            lp_list_order(&sol, &i),
            Err(Error::PrecedenceViolation { pred: 0, succ: 1, .. })
        ));
    }
}
