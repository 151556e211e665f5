//! Alpha-point extraction from a preemptive list schedule, conversion to
//! nonpreemptive list schedules, the exponential alpha distribution, the
//! exact expected cost, and the derandomized minimum.
//!
//! The alpha-point of a job is the first instant at which an
//! `alpha`-fraction of its work is done in the source schedule. Sorting
//! jobs by alpha-points and list scheduling them at unit speed converts
//! the preemptive schedule into a nonpreemptive one; drawing alpha from
//! the density `exp(alpha/2) / (2 (sqrt(e) - 1))` on `(0, 1]` bounds the
//! expected cost increase by `sqrt(e)/(sqrt(e)-1)`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::schedule::{
    nonpreemptive_list_schedule, objective, preemptive_list_schedule, Interval, Schedule,
};

/// `sqrt(e)`, derived from `exp(0.5)` so that the distribution helpers
/// cancel exactly at the right endpoint.
pub fn sqrt_e() -> f64 {
    0.5f64.exp()
}

/// The performance ratio `sqrt(e) / (sqrt(e) - 1) ≈ 2.5414940825367853`.
pub fn approx_ratio() -> f64 {
    let s = sqrt_e();
    s / (s - 1.0)
}

/// Density `f(alpha) = exp(alpha/2) / (2 (sqrt(e) - 1))` on `(0, 1]`.
pub fn density(alpha: f64) -> f64 {
    (alpha / 2.0).exp() / (2.0 * (sqrt_e() - 1.0))
}

/// Cumulative distribution `F(alpha) = (exp(alpha/2) - 1) / (sqrt(e) - 1)`.
/// `F(1) == 1` exactly because numerator and denominator coincide.
pub fn cdf(alpha: f64) -> f64 {
    ((alpha / 2.0).exp() - 1.0) / (sqrt_e() - 1.0)
}

/// Inverse-CDF sampling: `alpha = 2 ln(1 + u (sqrt(e) - 1))` clamped into
/// `(0, 1]`; `u = 0` maps to the smallest positive double since alpha
/// must stay positive.
pub fn sample_alpha(u: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&u));
    let a = 2.0 * (1.0 + u * (sqrt_e() - 1.0)).ln();
    if a <= 0.0 {
        f64::from_bits(1)
    } else if a >= 1.0 {
        1.0
    } else {
        a
    }
}

fn schedules_close(a: &Schedule, b: &Schedule, eps: f64) -> bool {
    if a.speed != b.speed || a.segments.len() != b.segments.len() {
        return false;
    }
    a.segments.iter().zip(&b.segments).all(|(sa, sb)| {
        sa.len() == sb.len()
            && sa
                .iter()
                .zip(sb)
                .all(|(x, y)| (x.start - y.start).abs() <= eps && (x.end - y.end).abs() <= eps)
    })
}

/// Piecewise-linear completed-work profile of every job in a preemptive
/// list schedule, for alpha-point queries.
#[derive(Clone, Debug)]
pub struct AlphaProfile {
    speed: f64,
    segments: Vec<Vec<Interval>>,
    completions: Vec<f64>,
    /// Total machine time per job (zero for zero-length jobs).
    totals: Vec<f64>,
    /// Cumulative machine time at the end of each segment.
    cums: Vec<Vec<f64>>,
}

impl AlphaProfile {
    /// Builds the profile, insisting that `sched` is exactly the
    /// preemptive list schedule of `order`: the conversion guarantees
    /// are only claimed for preemptive list schedules, so anything else
    /// is rejected instead of silently accepted.
    pub fn from_schedule(inst: &Instance, sched: &Schedule, order: &[usize]) -> Result<Self> {
        let expect = preemptive_list_schedule(inst, order, sched.speed)?;
        if !schedules_close(&expect, sched, 1e-9) {
            return Err(Error::Value(
                "alpha profile requires the preemptive list schedule of the given order".into(),
            ));
        }
        let completions = sched.completion_times();
        let mut totals = Vec::with_capacity(inst.n());
        let mut cums = Vec::with_capacity(inst.n());
        for segs in &sched.segments {
            let mut cum = Vec::with_capacity(segs.len());
            let mut acc = 0.0;
            for iv in segs {
                acc += iv.len();
                cum.push(acc);
            }
            totals.push(acc);
            cums.push(cum);
        }
        Ok(AlphaProfile {
            speed: sched.speed,
            segments: sched.segments.clone(),
            completions,
            totals,
            cums,
        })
    }

    pub fn n(&self) -> usize {
        self.segments.len()
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// Completion time of the job in the source schedule.
    pub fn completion(&self, j: usize) -> f64 {
        self.completions[j]
    }

    pub fn completions(&self) -> &[f64] {
        &self.completions
    }

    /// `(time, completed fraction)` at every segment boundary of the job,
    /// nondecreasing and ending at 1.
    pub fn boundaries(&self, j: usize) -> Vec<(f64, f64)> {
        if self.totals[j] == 0.0 {
            return vec![(self.completions[j], 1.0)];
        }
        let mut out = Vec::with_capacity(2 * self.segments[j].len());
        let mut prev = 0.0;
        for (iv, &cum) in self.segments[j].iter().zip(&self.cums[j]) {
            out.push((iv.start, prev / self.totals[j]));
            out.push((iv.end, cum / self.totals[j]));
            prev = cum;
        }
        out
    }

    /// Machine time spent on job `j` up to `time`.
    fn work_by(&self, j: usize, time: f64) -> f64 {
        self.segments[j]
            .iter()
            .map(|iv| (iv.end.min(time) - iv.start).max(0.0))
            .sum()
    }

    /// Completed fraction of job `j` at `time` (1 for zero-length jobs
    /// whose event has passed, 0 before it).
    pub fn fraction_at(&self, j: usize, time: f64) -> f64 {
        if self.totals[j] == 0.0 {
            if self.completions[j] <= time {
                1.0
            } else {
                0.0
            }
        } else {
            (self.work_by(j, time) / self.totals[j]).min(1.0)
        }
    }

    /// First instant at which an `alpha`-fraction of the job's work is
    /// done; the event instant for zero-length jobs.
    pub fn alpha_point(&self, j: usize, alpha: f64) -> f64 {
        debug_assert!(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
        if self.totals[j] == 0.0 {
            return self.completions[j];
        }
        let target = if alpha >= 1.0 {
            self.totals[j]
        } else {
            alpha * self.totals[j]
        };
        let mut prev = 0.0;
        for (iv, &cum) in self.segments[j].iter().zip(&self.cums[j]) {
            if target <= cum {
                return if target == cum {
                    iv.end
                } else {
                    iv.start + (target - prev)
                };
            }
            prev = cum;
        }
        self.completions[j]
    }

    /// Fraction of every job processed by the completion time of job `k`.
    pub fn eta_fractions(&self, k: usize) -> Vec<f64> {
        let cutoff = self.completions[k];
        (0..self.n()).map(|j| self.fraction_at(j, cutoff)).collect()
    }

    /// Fractions at which the alpha-point order can change, sorted and
    /// deduplicated, all strictly inside `(0, 1)`.
    ///
    /// These are the completed fractions at interior segment boundaries
    /// (one per preemption) plus, for every zero-length job, the fraction
    /// of each positive job completed at the zero job's event instant:
    /// a constant alpha-point can cross a growing one in the middle of a
    /// segment, which no boundary records.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for j in 0..self.n() {
            if self.totals[j] == 0.0 {
                continue;
            }
            for &cum in &self.cums[j][..self.cums[j].len() - 1] {
                let f = cum / self.totals[j];
                if f > 0.0 && f < 1.0 {
                    out.push(f);
                }
            }
        }
        for z in 0..self.n() {
            if self.totals[z] > 0.0 {
                continue;
            }
            let event = self.completions[z];
            for j in 0..self.n() {
                if self.totals[j] == 0.0 {
                    continue;
                }
                let f = self.fraction_at(j, event);
                if f > 0.0 && f < 1.0 {
                    out.push(f);
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

/// Outcome of list scheduling in order of alpha-points for one alpha.
#[derive(Clone, Debug)]
pub struct AlphaResult {
    pub alpha: f64,
    pub order: Vec<usize>,
    /// Nonpreemptive unit-speed schedule.
    pub schedule: Schedule,
    pub cost: f64,
}

/// Jobs by increasing alpha-point. Ties place zero-length jobs after
/// positive ones at the same instant, then compare source completion,
/// then id; a job is never emitted before an unfinished predecessor,
/// which only matters for degenerate zero-length ties.
pub fn alpha_order(inst: &Instance, profile: &AlphaProfile, alpha: f64) -> Vec<usize> {
    let n = inst.n();
    let keys: Vec<(f64, u8, f64)> = (0..n)
        .map(|j| {
            (
                profile.alpha_point(j, alpha),
                (inst.p(j) == 0.0) as u8,
                profile.completion(j),
            )
        })
        .collect();

    let preds = inst.predecessors();
    let succs = inst.successors();
    let mut indeg: Vec<usize> = preds.iter().map(Vec::len).collect();
    let mut avail: Vec<usize> = (0..n).filter(|&j| indeg[j] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while !avail.is_empty() {
        let &pick = avail
            .iter()
            .min_by(|&&a, &&b| {
                keys[a]
                    .0
                    .total_cmp(&keys[b].0)
                    .then(keys[a].1.cmp(&keys[b].1))
                    .then(keys[a].2.total_cmp(&keys[b].2))
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
    order
}

/// List schedules the alpha-point order on a unit-speed machine.
pub fn alpha_schedule(inst: &Instance, profile: &AlphaProfile, alpha: f64) -> Result<AlphaResult> {
    let order = alpha_order(inst, profile, alpha);
    let schedule = nonpreemptive_list_schedule(inst, &order)?;
    let cost = objective(&schedule, inst);
    Ok(AlphaResult {
        alpha,
        order,
        schedule,
        cost,
    })
}

/// Right-hand side of the completion-time bound for job `k` at `alpha`:
/// `C'_k + sum over {j : eta_j >= alpha} of (1 + (alpha - eta_j)/2) p_j`.
/// A test oracle against realized alpha-schedule completions; the `/2`
/// terms presume the double-speed source schedule.
pub fn lemma2_bound(inst: &Instance, profile: &AlphaProfile, k: usize, alpha: f64) -> f64 {
    debug_assert_eq!(profile.speed(), 2.0, "bound is stated for the double-speed schedule");
    let eta = profile.eta_fractions(k);
    let mut bound = profile.completion(k);
    for j in 0..inst.n() {
        if eta[j] >= alpha {
            bound += (1.0 + (alpha - eta[j]) / 2.0) * inst.p(j);
        }
    }
    bound
}

/// `[0, breakpoints.., 1]`.
fn interval_bounds(profile: &AlphaProfile) -> Vec<f64> {
    let mut bounds = vec![0.0];
    bounds.extend(profile.breakpoints());
    bounds.push(1.0);
    bounds
}

/// Evaluates every breakpoint, every interval midpoint and `alpha = 1`,
/// returning the cheapest result (smallest alpha on ties).
pub fn derandomized_best(inst: &Instance, profile: &AlphaProfile) -> Result<AlphaResult> {
    let bounds = interval_bounds(profile);
    let mut best: Option<AlphaResult> = None;
    for w in bounds.windows(2) {
        for alpha in [(w[0] + w[1]) / 2.0, w[1]] {
            let res = alpha_schedule(inst, profile, alpha)?;
            if best.as_ref().map_or(true, |b| res.cost < b.cost) {
                best = Some(res);
            }
        }
    }
    Ok(best.expect("candidate list is never empty"))
}

/// Exact expected cost of the randomized rule: the order is constant on
/// each open interval between breakpoints, so the expectation is the sum
/// of midpoint costs weighted by the interval masses `F(b) - F(a)`.
pub fn expected_cost(inst: &Instance, profile: &AlphaProfile) -> Result<f64> {
    let bounds = interval_bounds(profile);
    let mut total = 0.0;
    for w in bounds.windows(2) {
        let res = alpha_schedule(inst, profile, (w[0] + w[1]) / 2.0)?;
        total += res.cost * (cdf(w[1]) - cdf(w[0]));
    }
    Ok(total)
}

/// One draw of the randomized conversion.
pub fn random_alpha_schedule<R: Rng>(
    inst: &Instance,
    profile: &AlphaProfile,
    rng: &mut R,
) -> Result<AlphaResult> {
    let u: f64 = rng.gen();
    alpha_schedule(inst, profile, sample_alpha(u))
}
