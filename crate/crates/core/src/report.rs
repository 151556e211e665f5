//! Machine-readable reports: the JSON document emitted by `sched solve`
//! and the per-instance CSV rows plus JSON summary emitted by
//! `sched bench`.
//!
//! Reports are deterministic for fixed inputs and seeds: field order is
//! fixed, floats print in shortest round-trip form, and timing fields
//! stay at zero unless timing is explicitly requested.

use serde::{Deserialize, Serialize};

use crate::instance::Instance;
use crate::schedule::Schedule;

/// Empirical ceiling for `alg / lp` and `alg / opt`, the performance
/// ratio `sqrt(e)/(sqrt(e)-1)` truncated to the digits checked by the
/// bench gate.
pub const ALG_RATIO_BOUND: f64 = 2.5414941;
/// Floor for `lp / opt`: the LP bound is at most a factor
/// `(sqrt(e)-1)/sqrt(e)` below the optimum.
pub const LP_OPT_FLOOR: f64 = 0.3934693;
/// Slack applied to the ratio bounds.
pub const RATIO_TOL: f64 = 1e-6;

/// Ratio with a fixed convention for the degenerate all-zero case:
/// `0/0` counts as 1, a positive numerator over zero as infinity.
pub fn ratio(num: f64, den: f64) -> f64 {
    if den.abs() > 1e-12 {
        num / den
    } else if num.abs() <= 1e-12 {
        1.0
    } else {
        f64::INFINITY
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpReport {
    pub objective: f64,
    pub c_star: Vec<f64>,
    pub cuts: usize,
    pub rounds: usize,
    pub lp_solves: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScheduleReport {
    pub speed: f64,
    /// Per job, `[start, end]` pairs.
    pub segments: Vec<Vec<[f64; 2]>>,
    pub completions: Vec<f64>,
    pub cost: f64,
}

impl ScheduleReport {
    pub fn new(sched: &Schedule, cost: f64) -> Self {
        ScheduleReport {
            speed: sched.speed,
            segments: sched
                .segments
                .iter()
                .map(|segs| segs.iter().map(|iv| [iv.start, iv.end]).collect())
                .collect(),
            completions: sched.completion_times(),
            cost,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlphaReport {
    pub best_alpha: f64,
    pub order: Vec<usize>,
    pub segments: Vec<Vec<[f64; 2]>>,
    pub completions: Vec<f64>,
    pub cost: f64,
    pub expected_cost: f64,
    pub breakpoints: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactReport {
    pub cost: f64,
    pub order: Vec<usize>,
    pub nodes_explored: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ratios {
    pub alg_over_lp: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alg_over_opt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp_over_opt: Option<f64>,
}

/// Wall-clock milliseconds per stage; all zero unless timing was
/// requested, keeping default reports byte-identical across runs.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Timings {
    pub lp_ms: f64,
    pub pmtn_ms: f64,
    pub alpha_ms: f64,
    pub exact_ms: f64,
    pub total_ms: f64,
}

/// Full `sched solve` report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    /// The normalized instance that was solved.
    pub instance: Instance,
    pub lp: LpReport,
    pub pmtn: ScheduleReport,
    pub alpha: AlphaReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactReport>,
    pub ratios: Ratios,
    pub timings: Timings,
}

impl Report {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// One `sched bench` row. Serialization order is the CSV column order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: usize,
    pub seed: u64,
    pub n: usize,
    pub lp_bound: f64,
    pub pmtn_cost: f64,
    pub alg_cost: f64,
    pub expected_cost: f64,
    pub exact_opt: Option<f64>,
    pub alg_over_lp: f64,
    pub alg_over_opt: Option<f64>,
    pub lp_over_opt: Option<f64>,
    pub lp_ms: f64,
    pub pmtn_ms: f64,
    pub alpha_ms: f64,
    pub exact_ms: f64,
    pub total_ms: f64,
}

impl BenchRecord {
    /// The empirical guarantee gate: the algorithm never exceeds
    /// `ALG_RATIO_BOUND` times the LP bound, and against the exact
    /// optimum both the algorithm ratio and the LP gap stay within the
    /// proven range.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut problems = Vec::new();
        if !(self.alg_over_lp <= ALG_RATIO_BOUND + RATIO_TOL) {
            problems.push(format!(
                "alg/lp = {} exceeds {ALG_RATIO_BOUND}",
                self.alg_over_lp
            ));
        }
        if let Some(alg_over_opt) = self.alg_over_opt {
            if !(alg_over_opt <= ALG_RATIO_BOUND + RATIO_TOL) {
                problems.push(format!("alg/opt = {alg_over_opt} exceeds {ALG_RATIO_BOUND}"));
            }
        }
        if let Some(lp_over_opt) = self.lp_over_opt {
            if !(lp_over_opt >= LP_OPT_FLOOR - RATIO_TOL) {
                problems.push(format!("lp/opt = {lp_over_opt} below {LP_OPT_FLOOR}"));
            }
            if !(lp_over_opt <= 1.0 + RATIO_TOL) {
                problems.push(format!("lp/opt = {lp_over_opt} above 1"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(format!("instance {} (seed {}): {}", self.instance, self.seed, problems.join("; ")))
        }
    }
}

/// Aggregate over a bench run: max/mean of the checked ratios.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchSummary {
    pub count: usize,
    pub max_alg_over_lp: f64,
    pub mean_alg_over_lp: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_alg_over_opt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_alg_over_opt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_lp_over_opt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_lp_over_opt: Option<f64>,
}

impl BenchSummary {
    pub fn from_records(records: &[BenchRecord]) -> Self {
        let count = records.len();
        let mean = |vals: &[f64]| vals.iter().sum::<f64>() / vals.len().max(1) as f64;
        let alg_lp: Vec<f64> = records.iter().map(|r| r.alg_over_lp).collect();
        let alg_opt: Vec<f64> = records.iter().filter_map(|r| r.alg_over_opt).collect();
        let lp_opt: Vec<f64> = records.iter().filter_map(|r| r.lp_over_opt).collect();
        BenchSummary {
            count,
            max_alg_over_lp: alg_lp.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean_alg_over_lp: mean(&alg_lp),
            max_alg_over_opt: (!alg_opt.is_empty())
                .then(|| alg_opt.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
            mean_alg_over_opt: (!alg_opt.is_empty()).then(|| mean(&alg_opt)),
            min_lp_over_opt: (!lp_opt.is_empty())
                .then(|| lp_opt.iter().copied().fold(f64::INFINITY, f64::min)),
            mean_lp_over_opt: (!lp_opt.is_empty()).then(|| mean(&lp_opt)),
        }
    }
}

/// CSV rows in struct field order, with a header line.
pub fn records_to_csv(records: &[BenchRecord]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().expect("vec writer never fails to flush");
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
