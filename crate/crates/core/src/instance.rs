//! Problem instances: jobs with processing times, release dates and weights,
//! plus a precedence DAG stored as immediate pairs.
//!
//! Instances are immutable once built; every operation here is a pure
//! function returning a fresh value or an error.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One job: non-negative processing time `p`, release date `r` and weight `w`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Job {
    pub id: usize,
    pub p: f64,
    pub r: f64,
    pub w: f64,
}

/// A scheduling instance. `prec` holds immediate pairs `(j, k)` meaning
/// `j` must complete before `k` starts; transitive pairs are derived on
/// demand and never stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub jobs: Vec<Job>,
    pub prec: BTreeSet<(usize, usize)>,
}

impl Instance {
    pub fn new(jobs: Vec<Job>, prec: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Instance {
            jobs,
            prec: prec.into_iter().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    pub fn job(&self, id: usize) -> &Job {
        &self.jobs[id]
    }

    pub fn p(&self, id: usize) -> f64 {
        self.jobs[id].p
    }

    pub fn r(&self, id: usize) -> f64 {
        self.jobs[id].r
    }

    pub fn w(&self, id: usize) -> f64 {
        self.jobs[id].w
    }

    /// Immediate predecessors per job.
    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut preds = vec![Vec::new(); self.n()];
        for &(j, k) in &self.prec {
            if k < self.n() {
                preds[k].push(j);
            }
        }
        preds
    }

    /// Immediate successors per job.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut succs = vec![Vec::new(); self.n()];
        for &(j, k) in &self.prec {
            if j < self.n() {
                succs[j].push(k);
            }
        }
        succs
    }

    /// Whether `j` precedes `k` transitively (DFS over immediate pairs).
    pub fn precedes(&self, j: usize, k: usize) -> bool {
        let succs = self.successors();
        let mut seen = vec![false; self.n()];
        let mut stack = vec![j];
        while let Some(v) = stack.pop() {
            for &s in &succs[v] {
                if s == k {
                    return true;
                }
                if !seen[s] {
                    seen[s] = true;
                    stack.push(s);
                }
            }
        }
        false
    }

    /// Checks that `order` is a permutation of `0..n` that puts every
    /// predecessor before its successor.
    pub fn order_extends_prec(&self, order: &[usize]) -> Result<()> {
        let n = self.n();
        if order.len() != n {
            return Err(Error::Value(format!(
                "order has {} entries, instance has {} jobs",
                order.len(),
                n
            )));
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &j) in order.iter().enumerate() {
            if j >= n || pos[j] != usize::MAX {
                return Err(Error::Value(format!("order is not a permutation: entry {j}")));
            }
            pos[j] = i;
        }
        for &(j, k) in &self.prec {
            if pos[j] > pos[k] {
                return Err(Error::OrderViolatesPrecedence { pred: j, succ: k });
            }
        }
        Ok(())
    }
}

/// Checks all instance invariants except release-date monotonicity:
/// ids are exactly `0..n` in order, all fields finite and non-negative,
/// precedence pairs reference existing jobs and form a DAG.
pub fn validate(inst: &Instance) -> Result<()> {
    let n = inst.n();
    for (i, job) in inst.jobs.iter().enumerate() {
        if job.id != i {
            return Err(Error::Value(format!(
                "job ids must be exactly 0..{} in order; found id {} at position {}",
                n, job.id, i
            )));
        }
        for (name, v) in [("p", job.p), ("r", job.r), ("w", job.w)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Value(format!(
                    "job {}: field {} must be finite and non-negative, got {}",
                    i, name, v
                )));
            }
        }
    }
    for &(j, k) in &inst.prec {
        if j >= n || k >= n {
            return Err(Error::Value(format!(
                "precedence pair ({j}, {k}) references an unknown job id"
            )));
        }
    }
    topological_order(inst).map(|_| ())
}

/// Deterministic topological order: Kahn's method, smallest id first among
/// the currently available jobs.
pub fn topological_order(inst: &Instance) -> Result<Vec<usize>> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let n = inst.n();
    for &(j, k) in &inst.prec {
        if j >= n || k >= n {
            return Err(Error::Value(format!(
                "precedence pair ({j}, {k}) references an unknown job id"
            )));
        }
    }
    let succs = inst.successors();
    let mut indegree = vec![0usize; n];
    for &(_, k) in &inst.prec {
        indegree[k] += 1;
    }
    let mut heap: BinaryHeap<Reverse<usize>> = (0..n)
        .filter(|&j| indegree[j] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(j)) = heap.pop() {
        order.push(j);
        for &s in &succs[j] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                heap.push(Reverse(s));
            }
        }
    }
    if order.len() != n {
        let stuck = (0..n).find(|&j| indegree[j] > 0).unwrap_or(0);
        return Err(Error::Cycle(stuck));
    }
    Ok(order)
}

/// Propagates release dates forward so that `j ≺ k` implies `r_j ≤ r_k`.
/// Only the maximum of the immediate predecessors' release dates is pushed;
/// processing times are not added. Idempotent.
pub fn normalize_release_dates(inst: &Instance) -> Result<Instance> {
    let order = topological_order(inst)?;
    let preds = inst.predecessors();
    let mut jobs = inst.jobs.clone();
    for &k in &order {
        for &j in &preds[k] {
            if jobs[j].r > jobs[k].r {
                jobs[k].r = jobs[j].r;
            }
        }
    }
    Ok(Instance {
        jobs,
        prec: inst.prec.clone(),
    })
}

fn fmt_num(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

/// Canonical text form: `jobs n`, one `job` line per id in order, then
/// `prec` pairs sorted lexicographically.
pub fn serialize(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "jobs {}", inst.n());
    for job in &inst.jobs {
        let _ = writeln!(
            out,
            "job {} {} {} {}",
            job.id,
            fmt_num(job.p),
            fmt_num(job.r),
            fmt_num(job.w)
        );
    }
    for &(j, k) in &inst.prec {
        let _ = writeln!(out, "prec {} {}", j, k);
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn take_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let t = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    t.parse::<usize>()
        .map_err(|_| parse_err(line, format!("invalid {what} `{t}`")))
}

fn take_num(tok: Option<&str>, line: usize, what: &str) -> Result<f64> {
    let t = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    let v = t
        .parse::<f64>()
        .map_err(|_| parse_err(line, format!("invalid {what} `{t}`")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("{what} must be finite, got `{t}`")));
    }
    Ok(v)
}

/// Parses the line-oriented instance format. Structural problems (unknown
/// directives, bad numbers, out-of-range or duplicate ids) are reported
/// with their line number; value-level checks are left to [`validate`].
pub fn parse(text: &str) -> Result<Instance> {
    let mut n: Option<usize> = None;
    let mut jobs: Vec<Option<Job>> = Vec::new();
    let mut prec = BTreeSet::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tok = line.split_whitespace();
        let head = tok.next().unwrap();
        match head {
            "jobs" => {
                if n.is_some() {
                    return Err(parse_err(lineno, "duplicate `jobs` line"));
                }
                let count = take_usize(tok.next(), lineno, "job count")?;
                n = Some(count);
                jobs = vec![None; count];
            }
            "job" => {
                let count = n.ok_or_else(|| parse_err(lineno, "`job` before `jobs` header"))?;
                let id = take_usize(tok.next(), lineno, "job id")?;
                if id >= count {
                    return Err(parse_err(lineno, format!("job id {id} out of range 0..{count}")));
                }
                if jobs[id].is_some() {
                    return Err(parse_err(lineno, format!("duplicate job id {id}")));
                }
                let p = take_num(tok.next(), lineno, "processing time")?;
                let r = take_num(tok.next(), lineno, "release date")?;
                let w = take_num(tok.next(), lineno, "weight")?;
                jobs[id] = Some(Job { id, p, r, w });
            }
            "prec" => {
                let count = n.ok_or_else(|| parse_err(lineno, "`prec` before `jobs` header"))?;
                let j = take_usize(tok.next(), lineno, "predecessor id")?;
                let k = take_usize(tok.next(), lineno, "successor id")?;
                if j >= count || k >= count {
                    return Err(parse_err(
                        lineno,
                        format!("prec pair ({j}, {k}) names an unknown job id"),
                    ));
                }
                prec.insert((j, k));
            }
            other => {
                return Err(parse_err(lineno, format!("unknown directive `{other}`")));
            }
        }
        if let Some(extra) = tok.next() {
            return Err(parse_err(lineno, format!("unexpected trailing token `{extra}`")));
        }
    }

    let count = n.ok_or_else(|| parse_err(last_line.max(1), "missing `jobs` header"))?;
    let mut out = Vec::with_capacity(count);
    for (id, slot) in jobs.into_iter().enumerate() {
        out.push(slot.ok_or_else(|| parse_err(last_line.max(1), format!("job {id} never defined")))?);
    }
    Ok(Instance { jobs: out, prec })
}

/// Parameters for [`generate_random`]. Integer fields keep desk-scale
/// arithmetic exact in binary64.
#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    pub n: usize,
    pub p_max: u64,
    pub r_max: u64,
    pub w_max: u64,
    pub edge_prob: f64,
    pub seed: u64,
}

/// Chance that a job gets processing time zero.
const ZERO_P_PROB: f64 = 0.05;

/// Seeded random instance: integer `p in [0, p_max]` (zero with small
/// probability), integer `r in [0, r_max]` and `w in [0, w_max]`, each
/// forward pair `(j, k)` with `j < k` an edge independently with
/// `edge_prob`. The result is release-date normalized. Identical
/// parameters and seed give an identical instance.
pub fn generate_random(params: GenParams) -> Instance {
    assert!(params.n >= 1, "generator needs at least one job");
    assert!(
        (0.0..=1.0).contains(&params.edge_prob),
        "edge_prob must be within [0, 1]"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut jobs = Vec::with_capacity(params.n);
    for id in 0..params.n {
        let zero = rng.gen_bool(ZERO_P_PROB);
        let p = if zero || params.p_max == 0 {
            0
        } else {
            rng.gen_range(1..=params.p_max)
        };
        let r = rng.gen_range(0..=params.r_max);
        let w = rng.gen_range(0..=params.w_max);
        jobs.push(Job {
            id,
            p: p as f64,
            r: r as f64,
            w: w as f64,
        });
    }
    let mut prec = BTreeSet::new();
    for j in 0..params.n {
        for k in j + 1..params.n {
            if rng.gen_bool(params.edge_prob) {
                prec.insert((j, k));
            }
        }
    }
    let inst = Instance { jobs, prec };
    normalize_release_dates(&inst).expect("generated precedence graph is acyclic by construction")
}
