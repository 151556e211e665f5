//! Shared helpers for the integration suites: the seeded instance corpus
//! every empirical check runs over, fully solved pipeline rows, and an
//! independent LP route that enumerates every subset constraint up front
//! instead of separating lazily.

#![allow(dead_code)]

use std::sync::OnceLock;

use sched_core::alpha::{self, AlphaProfile, AlphaResult};
use sched_core::exact::{self, ExactResult};
use sched_core::instance::{generate_random, GenParams, Instance};
use sched_core::lp::{self, LpSolution};
use sched_core::schedule::{objective, preemptive_list_schedule, Schedule};
use sched_core::simplex::{self, Problem, Rel};

/// Corpus: n in 2..=8 crossed with edge densities, release spreads and
/// nine repetitions each; 567 instances, zero lengths and zero weights
/// included by construction of the generator.
pub fn corpus_params() -> Vec<GenParams> {
    let mut out = Vec::new();
    let mut seed = 1000u64;
    for n in 2..=8usize {
        for &edge_prob in &[0.0, 0.2, 0.5] {
            for &r_max in &[0u64, 5, 30] {
                for _ in 0..9 {
                    out.push(GenParams {
                        n,
                        p_max: 10,
                        r_max,
                        w_max: 10,
                        edge_prob,
                        seed,
                    });
                    seed += 1;
                }
            }
        }
    }
    out
}

/// One corpus instance pushed through every pipeline stage.
pub struct Row {
    pub params: GenParams,
    pub inst: Instance,
    pub lp: LpSolution,
    pub order: Vec<usize>,
    /// Double-speed preemptive list schedule in LP order.
    pub pmtn: Schedule,
    pub pmtn_cost: f64,
    /// Unit-speed preemptive list schedule in LP order.
    pub speed1: Schedule,
    pub profile: AlphaProfile,
    pub best: AlphaResult,
    pub expected: f64,
    pub opt: ExactResult,
}

fn build_row(params: GenParams) -> Row {
    let inst = generate_random(params);
    let lp = lp::solve_lp_relaxation(&inst, lp::DEFAULT_TOL_SEP)
        .unwrap_or_else(|e| panic!("lp failed on seed {}: {e}", params.seed));
    let order = lp::lp_list_order(&lp, &inst)
        .unwrap_or_else(|e| panic!("order failed on seed {}: {e}", params.seed));
    let pmtn = preemptive_list_schedule(&inst, &order, 2.0).unwrap();
    let pmtn_cost = objective(&pmtn, &inst);
    let speed1 = preemptive_list_schedule(&inst, &order, 1.0).unwrap();
    let profile = AlphaProfile::from_schedule(&inst, &pmtn, &order).unwrap();
    let best = alpha::derandomized_best(&inst, &profile).unwrap();
    let expected = alpha::expected_cost(&inst, &profile).unwrap();
    let opt = exact::brute_force_optimum(&inst, exact::DEFAULT_OPT_LIMIT).unwrap();
    Row {
        params,
        inst,
        lp,
        order,
        pmtn,
        pmtn_cost,
        speed1,
        profile,
        best,
        expected,
        opt,
    }
}

static ROWS: OnceLock<Vec<Row>> = OnceLock::new();

pub fn rows() -> &'static [Row] {
    ROWS.get_or_init(|| corpus_params().into_iter().map(build_row).collect())
}

/// The LP relaxation with all `2^n - 1` subset constraints materialized
/// (using the true minimum release per subset), solved in one shot.
/// Independent of the separation path in everything but the simplex core.
pub fn full_subset_lp_objective(inst: &Instance) -> f64 {
    let n = inst.n();
    assert!(n <= 16, "full enumeration is exponential");
    let mut lp_rows: Vec<simplex::Row> = inst
        .prec
        .iter()
        .map(|&(j, k)| simplex::Row {
            coeffs: vec![(k, 1.0), (j, -1.0)],
            rel: Rel::Ge,
            rhs: 0.0,
        })
        .collect();
    for mask in 1u64..(1u64 << n) {
        let mut r_min = f64::INFINITY;
        let mut p_sum = 0.0;
        let mut coeffs = Vec::new();
        for j in 0..n {
            if mask & (1 << j) != 0 {
                r_min = r_min.min(inst.r(j));
                p_sum += inst.p(j);
                if inst.p(j) > 0.0 {
                    coeffs.push((j, inst.p(j)));
                }
            }
        }
        if p_sum > 0.0 {
            lp_rows.push(simplex::Row {
                coeffs,
                rel: Rel::Ge,
                rhs: r_min * p_sum + 0.5 * p_sum * p_sum,
            });
        }
    }
    let sol = simplex::solve(&Problem {
        minimize: (0..n).map(|j| inst.w(j)).collect(),
        lower_bounds: (0..n).map(|j| inst.r(j) + inst.p(j) / 2.0).collect(),
        rows: lp_rows,
    })
    .expect("full-subset LP solves");
    sol.objective
}
