//! Dense two-phase simplex for small reference solves.
//!
//! This is the exactness reference behind the approximate packing-covering
//! solver and the per-draw supremum in the Lipschitz Rademacher estimator.
//! It is deliberately a textbook tableau implementation: variables are
//! nonnegative, rows are `<=` or `>=` with arbitrary right-hand sides,
//! upper bounds are supplied as rows by the caller. Intended for at most a
//! few hundred variables.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const PHASE1_TOL: f64 = 1e-7;
const MAX_PIVOTS: usize = 200_000;

/// Row sense of a constraint `a · x (<=|>=) b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    /// `a · x <= b`
    Le,
    /// `a · x >= b`
    Ge,
}

/// One constraint row in sparse form.
#[derive(Debug, Clone)]
pub struct LpRow {
    /// `(variable, coefficient)` pairs; variables may repeat (summed).
    pub coeffs: Vec<(usize, f64)>,
    /// Sense of the row.
    pub sense: RowSense,
    /// Right-hand side.
    pub rhs: f64,
}

/// Minimization problem over nonnegative variables.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    /// Number of structural variables.
    pub num_vars: usize,
    /// Objective coefficients (minimize `c · x`).
    pub objective: Vec<f64>,
    /// Constraint rows.
    pub rows: Vec<LpRow>,
}

/// Entering-column selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Smallest-index negative reduced cost; immune to cycling.
    Bland,
    /// Most negative reduced cost, ties to the smaller index.
    Dantzig,
}

/// Result of a solve.
#[derive(Debug, Clone)]
pub enum LpOutcome {
    /// Optimum found.
    Optimal {
        /// Objective value at the optimum.
        objective: f64,
        /// Values of the structural variables.
        x: Vec<f64>,
    },
    /// No feasible point exists.
    Infeasible,
    /// Objective unbounded below on the feasible region.
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    cost: Vec<f64>,
    cost_shift: f64,
    basis: Vec<usize>,
    ncols: usize,
    banned: Vec<bool>,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c];
        let inv = 1.0 / piv;
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, &p) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * p;
                }
                row[c] = 0.0;
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            for (v, &p) in self.cost.iter_mut().zip(prow.iter()) {
                *v -= f * p;
            }
            self.cost[c] = 0.0;
            self.cost_shift -= f * prow[self.ncols];
        }
        self.basis[r] = c;
    }

    fn entering(&self, rule: PivotRule) -> Option<usize> {
        match rule {
            PivotRule::Bland => (0..self.ncols)
                .find(|&j| !self.banned[j] && self.cost[j] < -PIVOT_TOL),
            PivotRule::Dantzig => {
                let mut best: Option<(usize, f64)> = None;
                for j in 0..self.ncols {
                    if self.banned[j] {
                        continue;
                    }
                    let c = self.cost[j];
                    if c < -PIVOT_TOL && best.map_or(true, |(_, bc)| c < bc) {
                        best = Some((j, c));
                    }
                }
                best.map(|(j, _)| j)
            }
        }
    }

    fn leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.rows.len() {
            let a = self.rows[i][col];
            if a > PIVOT_TOL {
                let ratio = self.rhs(i) / a;
                let better = match best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < br - PIVOT_TOL
                            || (ratio < br + PIVOT_TOL && self.basis[i] < self.basis[bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        best.map(|(i, _)| i)
    }

    /// Runs simplex iterations until optimal or unbounded.
    fn run(&mut self, rule: PivotRule) -> Result<bool> {
        for _ in 0..MAX_PIVOTS {
            let Some(col) = self.entering(rule) else {
                return Ok(true);
            };
            let Some(row) = self.leaving(col) else {
                return Ok(false); // unbounded
            };
            self.pivot(row, col);
        }
        Err(Error::Cycling)
    }
}

/// Solve a small dense LP by two-phase simplex.
pub fn solve(lp: &LinearProgram, rule: PivotRule) -> Result<LpOutcome> {
    let nv = lp.num_vars;
    if lp.objective.len() != nv {
        return Err(Error::InvalidParameter("objective length mismatch".to_string()));
    }
    let m = lp.rows.len();

    // Dense rows, equilibrated and normalized to rhs >= 0. A `>=` row with
    // nonpositive rhs flips to `<=` so it starts from the slack basis
    // instead of an artificial.
    let mut dense: Vec<(Vec<f64>, RowSense, f64)> = Vec::with_capacity(m);
    for row in &lp.rows {
        let mut a = vec![0.0; nv];
        for &(j, v) in &row.coeffs {
            if j >= nv {
                return Err(Error::InvalidParameter("row references unknown variable".to_string()));
            }
            a[j] += v;
        }
        let mut rhs = row.rhs;
        let scale = a
            .iter()
            .fold(rhs.abs(), |acc, v| acc.max(v.abs()));
        if scale > 0.0 {
            let inv = 1.0 / scale;
            for v in a.iter_mut() {
                *v *= inv;
            }
            rhs *= inv;
        }
        let mut sense = row.sense;
        let flip_to_le = (rhs < 0.0 && sense == RowSense::Le)
            || (rhs <= 0.0 && sense == RowSense::Ge && rhs < 0.0)
            || (rhs == 0.0 && sense == RowSense::Ge);
        let flip_to_ge = rhs < 0.0 && sense == RowSense::Le;
        let _ = flip_to_le;
        let _ = flip_to_ge;
        if rhs < 0.0 || (rhs == 0.0 && sense == RowSense::Ge) {
            for v in a.iter_mut() {
                *v = -*v;
            }
            rhs = -rhs;
            sense = match sense {
                RowSense::Le => RowSense::Ge,
                RowSense::Ge => RowSense::Le,
            };
        }
        dense.push((a, sense, rhs));
    }

    let n_ge = dense.iter().filter(|(_, s, _)| *s == RowSense::Ge).count();
    // columns: structural | one slack/surplus per row | artificials for Ge rows
    let ncols = nv + m + n_ge;
    let mut rows = vec![vec![0.0; ncols + 1]; m];
    let mut basis = vec![0usize; m];
    let mut art_cols: Vec<usize> = Vec::with_capacity(n_ge);
    let mut next_art = nv + m;

    for (i, (a, sense, rhs)) in dense.iter().enumerate() {
        rows[i][..nv].copy_from_slice(a);
        rows[i][ncols] = *rhs;
        match sense {
            RowSense::Le => {
                rows[i][nv + i] = 1.0;
                basis[i] = nv + i;
            }
            RowSense::Ge => {
                rows[i][nv + i] = -1.0;
                rows[i][next_art] = 1.0;
                basis[i] = next_art;
                art_cols.push(next_art);
                next_art += 1;
            }
        }
    }

    let mut t = Tableau {
        rows,
        cost: vec![0.0; ncols + 1],
        cost_shift: 0.0,
        basis,
        ncols,
        banned: vec![false; ncols],
    };

    // Phase 1: minimize the sum of artificials.
    if !art_cols.is_empty() {
        for &c in &art_cols {
            t.cost[c] = 1.0;
        }
        for i in 0..m {
            if art_cols.contains(&t.basis[i]) {
                let row = t.rows[i].clone();
                for (v, &p) in t.cost.iter_mut().zip(row.iter()) {
                    *v -= p;
                }
                t.cost_shift -= row[t.ncols];
            }
        }
        if !t.run(rule)? {
            // Phase 1 objective is bounded below by 0; unbounded is impossible.
            return Err(Error::Cycling);
        }
        let phase1 = -t.cost_shift;
        if phase1 > PHASE1_TOL {
            return Ok(LpOutcome::Infeasible);
        }
        for &c in &art_cols {
            t.banned[c] = true;
        }
        // A basic artificial left at value 0 could be driven positive by
        // later pivots; swap each one for a structural or slack column.
        // Rows with no such column are redundant and stay inert.
        for i in 0..m {
            if t.basis[i] >= nv + m {
                if let Some(c) = (0..nv + m).find(|&c| t.rows[i][c].abs() > PIVOT_TOL) {
                    t.pivot(i, c);
                }
            }
        }
    }

    // Phase 2: the real objective.
    t.cost = vec![0.0; ncols + 1];
    t.cost_shift = 0.0;
    t.cost[..nv].copy_from_slice(&lp.objective);
    for i in 0..m {
        let b = t.basis[i];
        let cb = t.cost[b];
        if cb != 0.0 {
            let row = t.rows[i].clone();
            for (v, &p) in t.cost.iter_mut().zip(row.iter()) {
                *v -= cb * p;
            }
            t.cost[b] = 0.0;
            t.cost_shift -= cb * row[t.ncols];
        }
    }
    if !t.run(rule)? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut x = vec![0.0; nv];
    for i in 0..m {
        if t.basis[i] < nv {
            x[t.basis[i]] = t.rhs(i);
        }
    }
    let objective = lp.objective.iter().zip(x.iter()).map(|(c, v)| c * v).sum();
    Ok(LpOutcome::Optimal { objective, x })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(coeffs: &[(usize, f64)], sense: RowSense, rhs: f64) -> LpRow {
        LpRow { coeffs: coeffs.to_vec(), sense, rhs }
    }

    #[test]
    fn textbook_max_as_min() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 → 36 at (2, 6).
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![-3.0, -5.0],
            rows: vec![
                row(&[(0, 1.0)], RowSense::Le, 4.0),
                row(&[(1, 2.0)], RowSense::Le, 12.0),
                row(&[(0, 3.0), (1, 2.0)], RowSense::Le, 18.0),
            ],
        };
        for rule in [PivotRule::Bland, PivotRule::Dantzig] {
            match solve(&lp, rule).unwrap() {
                LpOutcome::Optimal { objective, x } => {
                    assert!((objective + 36.0).abs() < 1e-9);
                    assert!((x[0] - 2.0).abs() < 1e-9);
                    assert!((x[1] - 6.0).abs() < 1e-9);
                }
                other => panic!("unexpected outcome {other:?}"),
            }
        }
    }

    #[test]
    fn phase1_needed() {
        // min x + y s.t. x + y >= 2, x <= 5 → 2.
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![1.0, 1.0],
            rows: vec![
                row(&[(0, 1.0), (1, 1.0)], RowSense::Ge, 2.0),
                row(&[(0, 1.0)], RowSense::Le, 5.0),
            ],
        };
        match solve(&lp, PivotRule::Bland).unwrap() {
            LpOutcome::Optimal { objective, .. } => assert!((objective - 2.0).abs() < 1e-9),
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn detects_infeasible() {
        // x <= 1 and x >= 2 cannot both hold.
        let lp = LinearProgram {
            num_vars: 1,
            objective: vec![0.0],
            rows: vec![
                row(&[(0, 1.0)], RowSense::Le, 1.0),
                row(&[(0, 1.0)], RowSense::Ge, 2.0),
            ],
        };
        assert!(matches!(solve(&lp, PivotRule::Bland).unwrap(), LpOutcome::Infeasible));
    }

    #[test]
    fn detects_unbounded() {
        // min -x with only x >= 0.
        let lp = LinearProgram {
            num_vars: 1,
            objective: vec![-1.0],
            rows: vec![row(&[(0, 1.0)], RowSense::Ge, 0.0)],
        };
        assert!(matches!(solve(&lp, PivotRule::Bland).unwrap(), LpOutcome::Unbounded));
    }

    #[test]
    fn negative_rhs_normalized() {
        // min y s.t. -x - y <= -3, x <= 2 → y = 1.
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![0.0, 1.0],
            rows: vec![
                row(&[(0, -1.0), (1, -1.0)], RowSense::Le, -3.0),
                row(&[(0, 1.0)], RowSense::Le, 2.0),
            ],
        };
        match solve(&lp, PivotRule::Dantzig).unwrap() {
            LpOutcome::Optimal { objective, .. } => assert!((objective - 1.0).abs() < 1e-9),
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn pivot_rules_agree() {
        // A slightly larger random-ish LP: both rules reach the same optimum.
        let lp = LinearProgram {
            num_vars: 4,
            objective: vec![2.0, 3.0, 1.0, 4.0],
            rows: vec![
                row(&[(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)], RowSense::Ge, 4.0),
                row(&[(0, 2.0), (1, 1.0)], RowSense::Ge, 3.0),
                row(&[(2, 1.0), (3, 2.0)], RowSense::Ge, 2.0),
                row(&[(0, 1.0)], RowSense::Le, 10.0),
                row(&[(1, 1.0)], RowSense::Le, 10.0),
                row(&[(2, 1.0)], RowSense::Le, 10.0),
                row(&[(3, 1.0)], RowSense::Le, 10.0),
            ],
        };
        let a = match solve(&lp, PivotRule::Bland).unwrap() {
            LpOutcome::Optimal { objective, .. } => objective,
            other => panic!("unexpected outcome {other:?}"),
        };
        let b = match solve(&lp, PivotRule::Dantzig).unwrap() {
            LpOutcome::Optimal { objective, .. } => objective,
            other => panic!("unexpected outcome {other:?}"),
        };
        assert!((a - b).abs() < 1e-9);
    }
}
