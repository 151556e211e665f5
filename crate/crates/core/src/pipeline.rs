//! End-to-end composition: validate, normalize, LP lower bound, LP-order
//! double-speed preemptive list schedule, alpha-point conversion, and
//! optionally the exact optimum. `sched bench` drives this over seeded
//! random instances.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alpha::{self, AlphaProfile};
use crate::error::Result;
use crate::exact;
use crate::instance::{self, GenParams, Instance};
use crate::lp;
use crate::report::{
    ratio, AlphaReport, BenchRecord, BenchSummary, ExactReport, LpReport, Ratios, Report,
    ScheduleReport, Timings,
};
use crate::schedule::{objective, preemptive_list_schedule};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaMode {
    /// Derandomized: evaluate every breakpoint and interval midpoint.
    Best,
    /// One draw from the exponential alpha distribution.
    Random { seed: u64 },
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub tol_sep: f64,
    pub alpha: AlphaMode,
    /// Also run the brute-force oracle (fails on instances beyond
    /// `exact_limit` jobs).
    pub exact: bool,
    pub exact_limit: usize,
    /// Measure wall time per stage; off by default so reports are
    /// byte-identical across runs.
    pub timings: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol_sep: lp::DEFAULT_TOL_SEP,
            alpha: AlphaMode::Best,
            exact: false,
            exact_limit: exact::DEFAULT_OPT_LIMIT,
            timings: false,
        }
    }
}

struct Stopwatch {
    enabled: bool,
    last: Instant,
}

impl Stopwatch {
    fn new(enabled: bool) -> Self {
        Stopwatch {
            enabled,
            last: Instant::now(),
        }
    }

    fn lap(&mut self) -> f64 {
        if !self.enabled {
            return 0.0;
        }
        let now = Instant::now();
        let ms = now.duration_since(self.last).as_secs_f64() * 1e3;
        self.last = now;
        ms
    }
}

/// Runs the full pipeline on a raw instance and assembles the report.
pub fn solve_pipeline(raw: &Instance, opts: &SolveOptions) -> Result<Report> {
    instance::validate(raw)?;
    let inst = instance::normalize_release_dates(raw)?;
    let mut watch = Stopwatch::new(opts.timings);
    let mut timings = Timings::default();

    let lp_sol = lp::solve_lp_relaxation(&inst, opts.tol_sep)?;
    timings.lp_ms = watch.lap();

    let order = lp::lp_list_order(&lp_sol, &inst)?;
    let pmtn = preemptive_list_schedule(&inst, &order, 2.0)?;
    let pmtn_cost = objective(&pmtn, &inst);
    timings.pmtn_ms = watch.lap();

    let profile = AlphaProfile::from_schedule(&inst, &pmtn, &order)?;
    let chosen = match opts.alpha {
        AlphaMode::Best => alpha::derandomized_best(&inst, &profile)?,
        AlphaMode::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            alpha::random_alpha_schedule(&inst, &profile, &mut rng)?
        }
    };
    let expected = alpha::expected_cost(&inst, &profile)?;
    let breakpoints = profile.breakpoints();
    timings.alpha_ms = watch.lap();

    let exact_res = if opts.exact {
        let res = exact::brute_force_optimum(&inst, opts.exact_limit)?;
        timings.exact_ms = watch.lap();
        Some(res)
    } else {
        None
    };
    timings.total_ms = timings.lp_ms + timings.pmtn_ms + timings.alpha_ms + timings.exact_ms;

    let ratios = Ratios {
        alg_over_lp: ratio(chosen.cost, lp_sol.objective),
        alg_over_opt: exact_res.as_ref().map(|e| ratio(chosen.cost, e.cost)),
        lp_over_opt: exact_res.as_ref().map(|e| ratio(lp_sol.objective, e.cost)),
    };

    Ok(Report {
        instance: inst,
        lp: LpReport {
            objective: lp_sol.objective,
            c_star: lp_sol.c_star,
            cuts: lp_sol.cuts.len(),
            rounds: lp_sol.iterations,
            lp_solves: lp_sol.lp_solves,
        },
        pmtn: ScheduleReport::new(&pmtn, pmtn_cost),
        alpha: AlphaReport {
            best_alpha: chosen.alpha,
            order: chosen.order,
            segments: chosen
                .schedule
                .segments
                .iter()
                .map(|segs| segs.iter().map(|iv| [iv.start, iv.end]).collect())
                .collect(),
            completions: chosen.schedule.completion_times(),
            cost: chosen.cost,
            expected_cost: expected,
            breakpoints,
        },
        exact: exact_res.map(|e| ExactReport {
            cost: e.cost,
            order: e.order,
            nodes_explored: e.nodes_explored,
        }),
        ratios,
        timings,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct BenchParams {
    pub count: usize,
    pub n: usize,
    pub seed: u64,
    pub p_max: u64,
    pub r_max: u64,
    pub w_max: u64,
    pub edge_prob: f64,
    pub tol_sep: f64,
    pub exact_limit: usize,
    /// Worker threads; records are emitted in instance order regardless.
    pub jobs: usize,
    pub timings: bool,
}

fn bench_one(params: &BenchParams, idx: usize) -> Result<BenchRecord> {
    let seed = params.seed + idx as u64;
    let inst = instance::generate_random(GenParams {
        n: params.n,
        p_max: params.p_max,
        r_max: params.r_max,
        w_max: params.w_max,
        edge_prob: params.edge_prob,
        seed,
    });
    let opts = SolveOptions {
        tol_sep: params.tol_sep,
        alpha: AlphaMode::Best,
        exact: params.n <= params.exact_limit,
        exact_limit: params.exact_limit,
        timings: params.timings,
    };
    let report = solve_pipeline(&inst, &opts)?;
    Ok(BenchRecord {
        instance: idx,
        seed,
        n: params.n,
        lp_bound: report.lp.objective,
        pmtn_cost: report.pmtn.cost,
        alg_cost: report.alpha.cost,
        expected_cost: report.alpha.expected_cost,
        exact_opt: report.exact.as_ref().map(|e| e.cost),
        alg_over_lp: report.ratios.alg_over_lp,
        alg_over_opt: report.ratios.alg_over_opt,
        lp_over_opt: report.ratios.lp_over_opt,
        lp_ms: report.timings.lp_ms,
        pmtn_ms: report.timings.pmtn_ms,
        alpha_ms: report.timings.alpha_ms,
        exact_ms: report.timings.exact_ms,
        total_ms: report.timings.total_ms,
    })
}

/// Sweeps `count` seeded instances. With `jobs > 1` instances are solved
/// in parallel; the output order stays deterministic because records are
/// collected by instance index.
pub fn run_bench(params: &BenchParams) -> Result<(Vec<BenchRecord>, BenchSummary)> {
    let records: Vec<BenchRecord> = if params.jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(params.jobs)
            .build()
            .map_err(|e| crate::error::Error::Value(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..params.count)
                .into_par_iter()
                .map(|idx| bench_one(params, idx))
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        (0..params.count)
            .map(|idx| bench_one(params, idx))
            .collect::<Result<Vec<_>>>()?
    };
    let summary = BenchSummary::from_records(&records);
    Ok((records, summary))
}
