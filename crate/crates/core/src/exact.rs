//! Exhaustive ground truth for small instances: the optimal nonpreemptive
//! schedule by branch and bound over precedence-feasible orders, and the
//! most violated parallel inequality by enumerating every subset.
//!
//! Some optimal schedule is always the earliest-start list schedule of
//! its own completion order, so searching orders is exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;

/// Default job-count limit for [`brute_force_optimum`].
pub const DEFAULT_OPT_LIMIT: usize = 10;
/// Default job-count limit for [`brute_force_separation`].
pub const DEFAULT_SEP_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub cost: f64,
    /// Lexicographically smallest optimal order.
    pub order: Vec<usize>,
    pub nodes_explored: u64,
}

struct OptSearch<'a> {
    inst: &'a Instance,
    preds_mask: Vec<u64>,
    best_cost: f64,
    best_order: Vec<usize>,
    nodes: u64,
    prefix: Vec<usize>,
}

impl OptSearch<'_> {
    fn dfs(&mut self, scheduled: u64, t: f64, acc: f64) {
        self.nodes += 1;
        // Costs only grow, so an accumulated value at the incumbent is dead;
        // pruning at equality keeps the lexicographically first optimum
        // because branches are explored in ascending id order.
        if acc >= self.best_cost {
            return;
        }
        let n = self.inst.n();
        if self.prefix.len() == n {
            self.best_cost = acc;
            self.best_order = self.prefix.clone();
            return;
        }
        for j in 0..n {
            let bit = 1u64 << j;
            if scheduled & bit != 0 || self.preds_mask[j] & !scheduled != 0 {
                continue;
            }
            let start = t.max(self.inst.r(j));
            let completion = start + self.inst.p(j);
            self.prefix.push(j);
            self.dfs(scheduled | bit, completion, acc + self.inst.w(j) * completion);
            self.prefix.pop();
        }
    }
}

/// Minimum total weighted completion time over all precedence-feasible
/// orders, by depth-first search with cost-based pruning.
pub fn brute_force_optimum(inst: &Instance, n_limit: usize) -> Result<ExactResult> {
    let n = inst.n();
    if n > n_limit {
        return Err(Error::TooLarge { n, limit: n_limit });
    }
    let mut preds_mask = vec![0u64; n];
    for &(j, k) in &inst.prec {
        preds_mask[k] |= 1 << j;
    }
    let mut search = OptSearch {
        inst,
        preds_mask,
        best_cost: f64::INFINITY,
        best_order: Vec::new(),
        nodes: 0,
        prefix: Vec::with_capacity(n),
    };
    search.dfs(0, 0.0, 0.0);
    Ok(ExactResult {
        cost: search.best_cost,
        order: search.best_order,
        nodes_explored: search.nodes,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparationWitness {
    /// `r_min(S) * p(S) + p(S)^2/2 - sum p_j c_j`, maximal over subsets.
    pub violation: f64,
    pub set: Vec<usize>,
}

/// Maximizes the parallel-inequality violation over every nonempty
/// subset; `None` when no subset is violated.
pub fn brute_force_separation(
    c: &[f64],
    inst: &Instance,
    n_limit: usize,
) -> Result<Option<SeparationWitness>> {
    let n = inst.n();
    if n > n_limit {
        return Err(Error::TooLarge { n, limit: n_limit });
    }
    assert_eq!(c.len(), n);
    let mut best: Option<(f64, u64)> = None;
    for mask in 1u64..(1u64 << n) {
        let mut r_min = f64::INFINITY;
        let mut p_sum = 0.0;
        let mut pc_sum = 0.0;
        for j in 0..n {
            if mask & (1 << j) != 0 {
                r_min = r_min.min(inst.r(j));
                p_sum += inst.p(j);
                pc_sum += inst.p(j) * c[j];
            }
        }
        let v = r_min * p_sum + 0.5 * p_sum * p_sum - pc_sum;
        if best.map_or(true, |(bv, _)| v > bv) {
            best = Some((v, mask));
        }
    }
    Ok(best.filter(|&(v, _)| v > 0.0).map(|(violation, mask)| {
        SeparationWitness {
            violation,
            set: (0..n).filter(|&j| mask & (1 << j) != 0).collect(),
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_random, GenParams, Instance, Job};
    use crate::lp;

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
    fn single_job_cost() {
        let i = inst(&[(2.0, 0.0, 3.0)], &[]);
        let res = brute_force_optimum(&i, DEFAULT_OPT_LIMIT).unwrap();
        assert_eq!(res.cost, 6.0);
        assert_eq!(res.order, vec![0]);
    }

    #[test]
    fn two_jobs_prefers_short_heavy_first() {
        let i = inst(&[(2.0, 0.0, 1.0), (1.0, 0.0, 2.0)], &[]);
        let res = brute_force_optimum(&i, DEFAULT_OPT_LIMIT).unwrap();
        assert_eq!(res.cost, 5.0);
        assert_eq!(res.order, vec![1, 0]);
    }

    #[test]
    fn chain_forces_single_order() {
        let i = inst(&[(2.0, 0.0, 1.0), (1.0, 0.0, 2.0)], &[(0, 1)]);
        let res = brute_force_optimum(&i, DEFAULT_OPT_LIMIT).unwrap();
        assert_eq!(res.order, vec![0, 1]);
        assert_eq!(res.cost, 2.0 + 2.0 * 3.0);
    }

    #[test]
    fn rejects_oversized_instances() {
        let jobs: Vec<(f64, f64, f64)> = (0..11).map(|_| (1.0, 0.0, 1.0)).collect();
        let i = inst(&jobs, &[]);
        assert!(matches!(
            brute_force_optimum(&i, DEFAULT_OPT_LIMIT),
            Err(Error::TooLarge { n: 11, limit: 10 })
        ));
    }

    #[test]
    fn separation_matches_hand_example() {
        let i = inst(&[(2.0, 0.0, 1.0), (1.0, 0.0, 1.0)], &[]);
        let w = brute_force_separation(&[0.0, 0.0], &i, DEFAULT_SEP_LIMIT)
            .unwrap()
            .unwrap();
        assert!((w.violation - 4.5).abs() < 1e-12);
        assert_eq!(w.set, vec![0, 1]);
    }

    #[test]
    fn separation_none_at_lp_optimum() {
        let i = inst(&[(2.0, 0.0, 1.0), (1.0, 0.0, 2.0)], &[]);
        let sol = lp::solve_lp_relaxation(&i, 1e-7).unwrap();
        let w = brute_force_separation(&sol.c_star, &i, DEFAULT_SEP_LIMIT).unwrap();
        if let Some(w) = w {
            assert!(w.violation <= 1e-6, "violation {}", w.violation);
        }
    }

    #[test]
    fn separation_none_on_tight_singleton() {
        let i = inst(&[(2.0, 0.0, 1.0)], &[]);
        assert_eq!(
            brute_force_separation(&[1.0], &i, DEFAULT_SEP_LIMIT).unwrap(),
            None
        );
    }

    #[test]
    fn prefix_oracle_agrees_with_subset_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for case in 0..40 {
            let n = rng.gen_range(1..=10usize);
            let i = generate_random(GenParams {
                n,
                p_max: 9,
                r_max: 12,
                w_max: 5,
                edge_prob: 0.3,
                seed: rng.gen(),
            });
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..25.0)).collect();
            let brute = brute_force_separation(&c, &i, DEFAULT_SEP_LIMIT).unwrap();
            let cuts = lp::separate(&c, &i, 0.0);
            let sep_max = cuts
                .iter()
                .map(|cut| lp::cut_violation(cut, &c, &i))
                .fold(f64::NEG_INFINITY, f64::max);
            match brute {
                None => assert!(cuts.is_empty(), "case {case}: oracle found spurious cut"),
                Some(w) => {
                    assert!(!cuts.is_empty(), "case {case}: oracle missed violation {}", w.violation);
                    assert!(
                        (sep_max - w.violation).abs() <= 1e-9,
                        "case {case}: prefix max {sep_max} vs subset max {}",
                        w.violation
                    );
                }
            }
        }
    }
}
