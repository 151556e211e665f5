//! Dense two-phase primal simplex for small minimization LPs with
//! inequality rows and per-variable lower bounds.
//!
//! Variables are shifted by their lower bounds, rows are normalized to a
//! non-negative right-hand side, `<=` rows get a slack and `>=` rows a
//! surplus plus an artificial. Pivoting is Dantzig's rule with smallest
//! column index on ties; after a streak of degenerate pivots the rule
//! falls back to Bland's until progress resumes.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Ge,
    Le,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub rel: Rel,
    pub rhs: f64,
}

#[derive(Clone, Debug)]
pub struct Problem {
    /// Coefficients of the objective to minimize, one per variable.
    pub minimize: Vec<f64>,
    /// Lower bound per variable (finite).
    pub lower_bounds: Vec<f64>,
    pub rows: Vec<Row>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

/// Pivot elements smaller than this are considered unusable.
const PIVOT_EPS: f64 = 1e-11;
/// Reduced costs above `-COST_EPS` count as optimal.
const COST_EPS: f64 = 1e-9;
/// Residual allowed in the phase-1 objective at feasibility.
const FEAS_EPS: f64 = 1e-7;
/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_STREAK: usize = 50;

struct Tableau {
    rows: Vec<Vec<f64>>,
    /// Phase-1 reduced-cost row (sum of artificials).
    z1: Vec<f64>,
    /// Phase-2 reduced-cost row (original objective).
    z2: Vec<f64>,
    basis: Vec<usize>,
    cols: usize,
    art_start: usize,
    pivots: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col];
        debug_assert!(piv.abs() > PIVOT_EPS);
        let inv = 1.0 / piv;
        for v in self.rows[row].iter_mut() {
            *v *= inv;
        }
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let factor = self.rows[i][col];
            if factor != 0.0 {
                for c in 0..=self.cols {
                    self.rows[i][c] -= factor * self.rows[row][c];
                }
            }
        }
        for z in [&mut self.z1, &mut self.z2] {
            let factor = z[col];
            if factor != 0.0 {
                for c in 0..=self.cols {
                    z[c] -= factor * self.rows[row][c];
                }
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    fn entering(&self, phase1: bool, bland: bool, allow_artificial: bool) -> Option<usize> {
        let z = if phase1 { &self.z1 } else { &self.z2 };
        let limit = if allow_artificial { self.cols } else { self.art_start };
        let mut best: Option<(usize, f64)> = None;
        for c in 0..limit {
            let d = z[c];
            if d < -COST_EPS {
                if bland {
                    return Some(c);
                }
                if best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((c, d));
                }
            }
        }
        best.map(|(c, _)| c)
    }

    /// Minimum-ratio leaving row; ties go to the smallest basic variable.
    fn leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.rows.len() {
            let a = self.rows[i][col];
            if a > PIVOT_EPS {
                let ratio = self.rhs(i) / a;
                let better = match best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < br - 1e-12
                            || (ratio <= br + 1e-12 && self.basis[i] < self.basis[bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        best.map(|(i, _)| i)
    }

    fn optimize(&mut self, phase1: bool, allow_artificial: bool) -> Result<()> {
        let max_iters = 10_000 + 200 * (self.rows.len() + self.cols);
        let mut bland = false;
        let mut streak = 0usize;
        for _ in 0..max_iters {
            let Some(col) = self.entering(phase1, bland, allow_artificial) else {
                return Ok(());
            };
            let Some(row) = self.leaving(col) else {
                return Err(Error::Numerical(
                    "no admissible pivot in column; direction unbounded or pivots below 1e-11".into(),
                ));
            };
            let degenerate = self.rhs(row).abs() <= 1e-12;
            self.pivot(row, col);
            if degenerate {
                streak += 1;
                if streak > DEGENERATE_STREAK {
                    bland = true;
                }
            } else {
                streak = 0;
                bland = false;
            }
        }
        Err(Error::IterationLimit(format!(
            "simplex exceeded {max_iters} pivots"
        )))
    }
}

/// Solves `min c·x` subject to the rows and `x_j >= lower_bounds[j]`,
/// returning a basic optimal solution.
pub fn solve(p: &Problem) -> Result<Solution> {
    let n = p.minimize.len();
    assert_eq!(p.lower_bounds.len(), n, "one lower bound per variable");
    for (j, &l) in p.lower_bounds.iter().enumerate() {
        assert!(l.is_finite(), "lower bound of variable {j} must be finite");
    }

    let m = p.rows.len();
    // Shift x = y + l and normalize every row to rhs >= 0.
    let mut dense: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rels: Vec<Rel> = Vec::with_capacity(m);
    let mut rhs: Vec<f64> = Vec::with_capacity(m);
    for row in &p.rows {
        let mut a = vec![0.0; n];
        let mut b = row.rhs;
        for &(j, coef) in &row.coeffs {
            assert!(j < n, "row references variable {j} out of range");
            a[j] += coef;
            b -= coef * p.lower_bounds[j];
        }
        let mut rel = row.rel;
        if b < 0.0 {
            for v in a.iter_mut() {
                *v = -*v;
            }
            b = -b;
            rel = match rel {
                Rel::Ge => Rel::Le,
                Rel::Le => Rel::Ge,
            };
        }
        dense.push(a);
        rels.push(rel);
        rhs.push(b);
    }

    let n_le = rels.iter().filter(|&&r| r == Rel::Le).count();
    let n_ge = m - n_le;
    let slack_start = n;
    let art_start = n + n_le + n_ge;
    let cols = art_start + n_ge;

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack = slack_start;
    let mut art = art_start;
    for i in 0..m {
        let mut r = vec![0.0; cols + 1];
        r[..n].copy_from_slice(&dense[i]);
        r[cols] = rhs[i];
        match rels[i] {
            Rel::Le => {
                r[slack] = 1.0;
                basis.push(slack);
                slack += 1;
            }
            Rel::Ge => {
                r[slack] = -1.0; // surplus
                r[art] = 1.0;
                basis.push(art);
                slack += 1;
                art += 1;
            }
        }
        rows.push(r);
    }

    // Phase-1 reduced costs: minimize the sum of artificials.
    let mut z1 = vec![0.0; cols + 1];
    for (i, r) in rows.iter().enumerate() {
        if basis[i] >= art_start {
            for c in 0..=cols {
                z1[c] -= r[c];
            }
        }
    }
    for c in art_start..cols {
        z1[c] = 0.0;
    }
    // Phase-2 reduced costs: the original objective on shifted variables.
    let mut z2 = vec![0.0; cols + 1];
    z2[..n].copy_from_slice(&p.minimize);

    let mut t = Tableau {
        rows,
        z1,
        z2,
        basis,
        cols,
        art_start,
        pivots: 0,
    };

    if n_ge > 0 {
        t.optimize(true, true)?;
        let infeas = -t.z1[t.cols];
        if infeas.abs() > FEAS_EPS * (1.0 + rhs.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))) {
            return Err(Error::InfeasibleLp);
        }
        // Drive leftover basic artificials out where possible; a row whose
        // non-artificial part is all zero is redundant and can stay put.
        for i in 0..m {
            if t.basis[i] >= t.art_start {
                if let Some(c) = (0..t.art_start).find(|&c| t.rows[i][c].abs() > 1e-9) {
                    t.pivot(i, c);
                }
            }
        }
    }

    t.optimize(false, false)?;

    let mut y = vec![0.0; cols];
    for (i, &b) in t.basis.iter().enumerate() {
        y[b] = t.rhs(i);
    }
    let x: Vec<f64> = (0..n).map(|j| y[j] + p.lower_bounds[j]).collect();
    let objective = p
        .minimize
        .iter()
        .zip(&x)
        .map(|(c, v)| c * v)
        .sum();
    Ok(Solution {
        x,
        objective,
        pivots: t.pivots,
    })
}
