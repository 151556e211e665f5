//! Schedules on a single machine of a given speed, plus the two list
//! scheduling procedures.
//!
//! A schedule stores per-job half-open processing intervals. Jobs with
//! zero processing time occupy no machine time; their completion is an
//! instantaneous event recorded as a degenerate `[t, t]` interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;

/// Comparison slack for event times derived from input data.
pub const TIME_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    /// Work units processed per unit of time; 2 is the double-speed machine.
    pub speed: f64,
    /// Processing intervals per job id, each sorted and disjoint.
    pub segments: Vec<Vec<Interval>>,
}

impl Schedule {
    pub fn n(&self) -> usize {
        self.segments.len()
    }

    /// End of the job's last interval (the event instant for zero-length jobs).
    pub fn completion_time(&self, j: usize) -> f64 {
        self.segments[j].last().map_or(f64::NAN, |iv| iv.end)
    }

    pub fn completion_times(&self) -> Vec<f64> {
        (0..self.n()).map(|j| self.completion_time(j)).collect()
    }

    pub fn makespan(&self) -> f64 {
        (0..self.n())
            .map(|j| self.completion_time(j))
            .fold(0.0, f64::max)
    }
}

/// Total weighted completion time.
pub fn objective(sched: &Schedule, inst: &Instance) -> f64 {
    (0..inst.n())
        .map(|j| inst.w(j) * sched.completion_time(j))
        .sum()
}

/// Processing-time-weighted average instant each job is worked on:
/// `(s / p_j) * sum over intervals of (end^2 - start^2) / 2`. For a
/// zero-length job this degenerates to its event instant.
pub fn mean_busy_times(sched: &Schedule, inst: &Instance) -> Vec<f64> {
    (0..inst.n())
        .map(|j| {
            if inst.p(j) == 0.0 {
                sched.completion_time(j)
            } else {
                let integral: f64 = sched.segments[j]
                    .iter()
                    .map(|iv| (iv.end * iv.end - iv.start * iv.start) / 2.0)
                    .sum();
                sched.speed / inst.p(j) * integral
            }
        })
        .collect()
}

fn push_merged(segs: &mut Vec<Interval>, start: f64, end: f64) {
    if let Some(last) = segs.last_mut() {
        if (last.end - start).abs() <= TIME_EPS {
            last.end = end;
            return;
        }
    }
    segs.push(Interval { start, end });
}

/// Schedules jobs in the given order, each as early as the release date
/// allows, without preemption on a unit-speed machine. The machine may
/// idle in front of a not-yet-released job.
pub fn nonpreemptive_list_schedule(inst: &Instance, order: &[usize]) -> Result<Schedule> {
    inst.order_extends_prec(order)?;
    let mut segments = vec![Vec::new(); inst.n()];
    let mut t = 0.0f64;
    for &j in order {
        let start = t.max(inst.r(j));
        let end = start + inst.p(j);
        segments[j].push(Interval { start, end });
        t = end;
    }
    Ok(Schedule {
        speed: 1.0,
        segments,
    })
}

/// Event-driven preemptive list scheduling: at every instant the machine
/// runs the first released, incomplete job in the list. A released
/// zero-length job completes instantly once it reaches the head of the
/// list. Expects a release-date-normalized instance so the result is
/// precedence feasible.
pub fn preemptive_list_schedule(inst: &Instance, order: &[usize], speed: f64) -> Result<Schedule> {
    inst.order_extends_prec(order)?;
    if !(speed > 0.0) {
        return Err(Error::Value(format!("machine speed must be positive, got {speed}")));
    }
    let n = inst.n();
    let mut remaining: Vec<f64> = (0..n).map(|j| inst.p(j) / speed).collect();
    let mut done = vec![false; n];
    let mut segments: Vec<Vec<Interval>> = vec![Vec::new(); n];
    let mut completed = 0usize;
    let mut t = 0.0f64;

    while completed < n {
        let head = order
            .iter()
            .copied()
            .find(|&j| !done[j] && inst.r(j) <= t + TIME_EPS);
        let Some(j) = head else {
            // Idle until the next release among incomplete jobs.
            let next = (0..n)
                .filter(|&k| !done[k])
                .map(|k| inst.r(k))
                .fold(f64::INFINITY, f64::min);
            debug_assert!(next.is_finite() && next > t);
            t = next;
            continue;
        };
        if remaining[j] <= 0.0 {
            segments[j].push(Interval { start: t, end: t });
            done[j] = true;
            completed += 1;
            continue;
        }
        let finish = t + remaining[j];
        let next_release = (0..n)
            .filter(|&k| !done[k])
            .map(|k| inst.r(k))
            .filter(|&r| r > t + TIME_EPS)
            .fold(f64::INFINITY, f64::min);
        if finish <= next_release {
            push_merged(&mut segments[j], t, finish);
            remaining[j] = 0.0;
            done[j] = true;
            completed += 1;
            t = finish;
        } else {
            push_merged(&mut segments[j], t, next_release);
            remaining[j] -= next_release - t;
            t = next_release;
        }
    }

    Ok(Schedule { speed, segments })
}

/// A single feasibility defect; violations are data, not errors.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    WrongJobCount { got: usize, want: usize },
    MissingSegments { job: usize },
    BadInterval { job: usize, start: f64, end: f64 },
    IntervalsOutOfOrder { job: usize, at: f64 },
    MachineOverlap { a: usize, b: usize, at: f64 },
    WrongTotalLength { job: usize, got: f64, want: f64 },
    StartsBeforeRelease { job: usize, start: f64, release: f64 },
    PrecedenceOrderViolated { pred: usize, succ: usize },
    PreemptionNotAllowed { job: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::WrongJobCount { got, want } => {
                write!(f, "schedule covers {got} jobs, instance has {want}")
            }
            Violation::MissingSegments { job } => write!(f, "job {job} has no intervals"),
            Violation::BadInterval { job, start, end } => {
                write!(f, "job {job} has malformed interval [{start}, {end})")
            }
            Violation::IntervalsOutOfOrder { job, at } => {
                write!(f, "job {job} intervals overlap or are unsorted near t={at}")
            }
            Violation::MachineOverlap { a, b, at } => {
                write!(f, "jobs {a} and {b} both run near t={at}")
            }
            Violation::WrongTotalLength { job, got, want } => {
                write!(f, "job {job} gets {got} machine time, needs {want}")
            }
            Violation::StartsBeforeRelease { job, start, release } => {
                write!(f, "job {job} starts at {start} before release {release}")
            }
            Violation::PrecedenceOrderViolated { pred, succ } => {
                write!(f, "job {succ} starts before predecessor {pred} completes")
            }
            Violation::PreemptionNotAllowed { job } => {
                write!(f, "job {job} is preempted in a nonpreemptive schedule")
            }
        }
    }
}

/// Verifies every schedule invariant against the instance. With
/// `allow_preemption == false` each job must occupy a single interval.
pub fn check_feasible(sched: &Schedule, inst: &Instance, allow_preemption: bool) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = inst.n();
    if sched.n() != n {
        out.push(Violation::WrongJobCount {
            got: sched.n(),
            want: n,
        });
        return out;
    }

    for j in 0..n {
        let segs = &sched.segments[j];
        if segs.is_empty() {
            out.push(Violation::MissingSegments { job: j });
            continue;
        }
        for iv in segs {
            let zero_ok = inst.p(j) == 0.0 && iv.start == iv.end;
            if !(iv.start.is_finite() && iv.end.is_finite()) || (iv.start >= iv.end && !zero_ok) {
                out.push(Violation::BadInterval {
                    job: j,
                    start: iv.start,
                    end: iv.end,
                });
            }
        }
        for pair in segs.windows(2) {
            if pair[0].end > pair[1].start + TIME_EPS {
                out.push(Violation::IntervalsOutOfOrder {
                    job: j,
                    at: pair[1].start,
                });
            }
        }
        let total: f64 = segs.iter().map(Interval::len).sum();
        let want = inst.p(j) / sched.speed;
        if (total - want).abs() > TIME_EPS {
            out.push(Violation::WrongTotalLength {
                job: j,
                got: total,
                want,
            });
        }
        let first = segs[0].start;
        if first < inst.r(j) - TIME_EPS {
            out.push(Violation::StartsBeforeRelease {
                job: j,
                start: first,
                release: inst.r(j),
            });
        }
        if !allow_preemption && segs.len() > 1 {
            out.push(Violation::PreemptionNotAllowed { job: j });
        }
    }

    // Machine exclusivity over positive-length intervals.
    let mut busy: Vec<(f64, f64, usize)> = Vec::new();
    for j in 0..n {
        for iv in &sched.segments[j] {
            if !iv.is_empty() {
                busy.push((iv.start, iv.end, j));
            }
        }
    }
    busy.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    for pair in busy.windows(2) {
        if pair[0].1 > pair[1].0 + TIME_EPS {
            out.push(Violation::MachineOverlap {
                a: pair[0].2,
                b: pair[1].2,
                at: pair[1].0,
            });
        }
    }

    for &(j, k) in &inst.prec {
        let cj = sched.completion_time(j);
        let start_k = sched.segments[k].first().map_or(f64::NAN, |iv| iv.start);
        if !(cj <= start_k + TIME_EPS) {
            out.push(Violation::PrecedenceOrderViolated { pred: j, succ: k });
        }
    }

    out
}
