//! Dense revised simplex for bounded-variable linear programs.
//!
//! Every row gets a slack with `a x + s = b`; the relation is encoded in the
//! slack's bounds. Phase one drives artificials out of an all-slack start,
//! phase two optimizes the real objective. The basis inverse is kept
//! explicitly with product-form updates and rebuilt periodically.

use crate::error::{FrlpError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        LinearProgram {
            sense,
            objective: Vec::new(),
            rows: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
        }
    }

    /// Adds a column and returns its index.
    pub fn add_var(&mut self, cost: f64, lower: f64, upper: f64) -> usize {
        self.objective.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.objective.len() - 1
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> usize {
        self.rows.push(Row { coeffs, relation, rhs });
        self.rows.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    fn check(&self) -> Result<()> {
        let n = self.num_vars();
        for j in 0..n {
            if !self.objective[j].is_finite() || self.lower[j] > self.upper[j] || self.lower[j].is_nan() {
                return Err(FrlpError::InvalidArgument(format!("variable {j}: bad cost or bounds")));
            }
        }
        for (i, r) in self.rows.iter().enumerate() {
            if !r.rhs.is_finite() || r.coeffs.iter().any(|&(j, a)| j >= n || !a.is_finite()) {
                return Err(FrlpError::InvalidArgument(format!("row {i}: bad coefficient or rhs")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub x: Vec<f64>,
    /// Row duals in the problem's own sense: at optimality `c_j - y^T A_j` has
    /// the sign that makes moving off its bound unprofitable.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Status {
    Basic(usize),
    Lower,
    Upper,
    /// Nonbasic free variable parked at zero.
    Zero,
}

struct Tableau {
    m: usize,
    cols: Vec<Vec<(usize, f64)>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    b: Vec<f64>,
    x: Vec<f64>,
    status: Vec<Status>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    iterations: usize,
    degenerate: usize,
    bland: bool,
    since_refactor: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn binv_row(&self, r: usize) -> &[f64] {
        &self.binv[r * self.m..(r + 1) * self.m]
    }

    /// `B^{-1} a` for a sparse column.
    fn ftran(&self, col: &[(usize, f64)]) -> Vec<f64> {
        let m = self.m;
        let mut out = vec![0.0; m];
        for &(i, a) in col {
            for (r, o) in out.iter_mut().enumerate() {
                *o += self.binv[r * m + i] * a;
            }
        }
        out
    }

    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        let mut bmat = vec![0.0; m * m];
        for (k, &j) in self.basis.iter().enumerate() {
            for &(i, a) in &self.cols[j] {
                bmat[i * m + k] = a;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for c in 0..m {
            let p = (c..m)
                .max_by(|&a, &b| bmat[a * m + c].abs().total_cmp(&bmat[b * m + c].abs()))
                .unwrap();
            if bmat[p * m + c].abs() < 1e-12 {
                return Err(FrlpError::NumericalFailure("singular basis".into()));
            }
            if p != c {
                for k in 0..m {
                    bmat.swap(p * m + k, c * m + k);
                    inv.swap(p * m + k, c * m + k);
                }
            }
            let piv = bmat[c * m + c];
            for k in 0..m {
                bmat[c * m + k] /= piv;
                inv[c * m + k] /= piv;
            }
            for r in 0..m {
                if r != c {
                    let f = bmat[r * m + c];
                    if f != 0.0 {
                        for k in 0..m {
                            bmat[r * m + k] -= f * bmat[c * m + k];
                            inv[r * m + k] -= f * inv[c * m + k];
                        }
                    }
                }
            }
        }
        self.binv = inv;
        self.since_refactor = 0;
        self.recompute_basics();
        Ok(())
    }

    fn recompute_basics(&mut self) {
        let mut rhs = self.b.clone();
        for (j, col) in self.cols.iter().enumerate() {
            if !matches!(self.status[j], Status::Basic(_)) && self.x[j] != 0.0 {
                for &(i, a) in col {
                    rhs[i] -= a * self.x[j];
                }
            }
        }
        let m = self.m;
        for r in 0..m {
            let v: f64 = (0..m).map(|i| self.binv[r * m + i] * rhs[i]).sum();
            self.x[self.basis[r]] = v;
        }
    }

    fn duals(&self, cost: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for r in 0..m {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi += cb * self.binv[r * m + i];
                }
            }
        }
        y
    }

    fn reduced(&self, cost: &[f64], y: &[f64], j: usize) -> f64 {
        cost[j] - self.cols[j].iter().map(|&(i, a)| y[i] * a).sum::<f64>()
    }

    /// Minimizes `cost` from the current basic feasible solution.
    fn optimize(&mut self, cost: &[f64], max_iter: usize) -> Result<Outcome> {
        let nvars = self.cols.len();
        let degenerate_limit = 10 * (self.m + nvars);
        loop {
            if self.iterations >= max_iter {
                return Err(FrlpError::NumericalFailure("iteration limit reached".into()));
            }
            if self.since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
            }
            let y = self.duals(cost);
            // pricing
            let mut enter: Option<(usize, f64, f64)> = None; // (var, |d|, direction)
            for j in 0..nvars {
                let dir = match self.status[j] {
                    Status::Basic(_) => continue,
                    _ if self.lower[j] == self.upper[j] => continue,
                    st => {
                        let d = self.reduced(cost, &y, j);
                        match st {
                            Status::Lower if d < -COST_TOL => (d, 1.0),
                            Status::Upper if d > COST_TOL => (d, -1.0),
                            Status::Zero if d.abs() > COST_TOL => (d, -d.signum()),
                            _ => continue,
                        }
                    }
                };
                let score = dir.0.abs();
                if self.bland {
                    enter = Some((j, score, dir.1));
                    break;
                }
                if enter.is_none_or(|(_, s, _)| score > s) {
                    enter = Some((j, score, dir.1));
                }
            }
            let Some((q, _, dir)) = enter else {
                return Ok(Outcome::Optimal);
            };
            let alpha = self.ftran(&self.cols[q]);
            // ratio test: basic r moves by -dir * alpha[r] per unit step
            let mut step = self.upper[q] - self.lower[q];
            let mut leave: Option<(usize, bool)> = None; // (row, hits upper)
            let mut best_piv = 0.0;
            for (r, &a) in alpha.iter().enumerate() {
                if a.abs() < PIVOT_TOL {
                    continue;
                }
                let bv = self.basis[r];
                let rate = -dir * a;
                let (limit, to_upper) = if rate < 0.0 {
                    if self.lower[bv] == f64::NEG_INFINITY {
                        continue;
                    }
                    (((self.x[bv] - self.lower[bv]).max(0.0)) / -rate, false)
                } else {
                    if self.upper[bv] == f64::INFINITY {
                        continue;
                    }
                    (((self.upper[bv] - self.x[bv]).max(0.0)) / rate, true)
                };
                let better = match leave {
                    None => limit < step,
                    Some((lr, _)) => {
                        if limit < step - 1e-12 {
                            true
                        } else if limit <= step + 1e-12 {
                            if self.bland {
                                bv < self.basis[lr]
                            } else {
                                a.abs() > best_piv
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    step = limit;
                    leave = Some((r, to_upper));
                    best_piv = a.abs();
                }
            }
            if step == f64::INFINITY {
                return Ok(Outcome::Unbounded);
            }
            self.iterations += 1;
            if step < 1e-12 {
                self.degenerate += 1;
                if self.degenerate > degenerate_limit && !self.bland {
                    log::debug!("switching to Bland's rule after {} degenerate pivots", self.degenerate);
                    self.bland = true;
                }
            }
            // move
            if step > 0.0 {
                self.x[q] += dir * step;
                for (r, &a) in alpha.iter().enumerate() {
                    let bv = self.basis[r];
                    self.x[bv] -= dir * a * step;
                }
            }
            match leave {
                None => {
                    // bound flip
                    self.status[q] = if dir > 0.0 { Status::Upper } else { Status::Lower };
                    self.x[q] = if dir > 0.0 { self.upper[q] } else { self.lower[q] };
                }
                Some((r, to_upper)) => {
                    let out = self.basis[r];
                    self.status[out] = if to_upper { Status::Upper } else { Status::Lower };
                    self.x[out] = if to_upper { self.upper[out] } else { self.lower[out] };
                    self.basis[r] = q;
                    self.status[q] = Status::Basic(r);
                    self.pivot(r, &alpha);
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, alpha: &[f64]) {
        let m = self.m;
        let piv = alpha[r];
        for k in 0..m {
            self.binv[r * m + k] /= piv;
        }
        let prow: Vec<f64> = self.binv_row(r).to_vec();
        for (i, &a) in alpha.iter().enumerate() {
            if i != r && a != 0.0 {
                for k in 0..m {
                    self.binv[i * m + k] -= a * prow[k];
                }
            }
        }
        self.since_refactor += 1;
    }
}

fn initial_value(lower: f64, upper: f64) -> (f64, Status) {
    if lower.is_finite() {
        (lower, Status::Lower)
    } else if upper.is_finite() {
        (upper, Status::Upper)
    } else {
        (0.0, Status::Zero)
    }
}

/// Solves `lp` to optimality, or reports infeasibility / unboundedness.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    lp.check()?;
    let n = lp.num_vars();
    let m = lp.rows.len();

    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, row) in lp.rows.iter().enumerate() {
        for &(j, a) in &row.coeffs {
            if a != 0.0 {
                cols[j].push((i, a));
            }
        }
    }
    for col in cols.iter_mut() {
        // merge duplicate entries of the same row
        col.sort_by_key(|e| e.0);
        col.dedup_by(|a, b| {
            if a.0 == b.0 {
                b.1 += a.1;
                true
            } else {
                false
            }
        });
    }
    let mut lower = lp.lower.clone();
    let mut upper = lp.upper.clone();
    let mut x = vec![0.0; n];
    let mut status = vec![Status::Lower; n];
    for j in 0..n {
        let (v, s) = initial_value(lower[j], upper[j]);
        x[j] = v;
        status[j] = s;
    }
    let b: Vec<f64> = lp.rows.iter().map(|r| r.rhs).collect();
    let mut activity = vec![0.0; m];
    for j in 0..n {
        for &(i, a) in &cols[j] {
            activity[i] += a * x[j];
        }
    }

    let mut basis = Vec::with_capacity(m);
    let mut artificials = Vec::new();
    for (i, row) in lp.rows.iter().enumerate() {
        let (sl, su) = match row.relation {
            Relation::Le => (0.0, f64::INFINITY),
            Relation::Ge => (f64::NEG_INFINITY, 0.0),
            Relation::Eq => (0.0, 0.0),
        };
        let s = cols.len();
        cols.push(vec![(i, 1.0)]);
        lower.push(sl);
        upper.push(su);
        let r = b[i] - activity[i];
        if r >= sl - FEAS_TOL && r <= su + FEAS_TOL {
            x.push(r);
            status.push(Status::Basic(i));
            basis.push(s);
        } else {
            let (sv, st) = if r < sl { (sl, Status::Lower) } else { (su, Status::Upper) };
            x.push(sv);
            status.push(st);
            basis.push(usize::MAX);
            artificials.push((i, r - sv));
        }
    }
    for &(i, excess) in &artificials {
        let a = cols.len();
        cols.push(vec![(i, excess.signum())]);
        lower.push(0.0);
        upper.push(f64::INFINITY);
        x.push(excess.abs());
        status.push(Status::Basic(i));
        basis[i] = a;
    }
    let total = cols.len();
    let mut binv = vec![0.0; m * m];
    for (i, &j) in basis.iter().enumerate() {
        binv[i * m + i] = 1.0 / cols[j][0].1;
    }
    let mut t = Tableau {
        m,
        cols,
        lower,
        upper,
        b,
        x,
        status,
        basis,
        binv,
        iterations: 0,
        degenerate: 0,
        bland: false,
        since_refactor: 0,
    };
    let max_iter = 200 * (m + total) + 10_000;

    if !artificials.is_empty() {
        let mut cost1 = vec![0.0; total];
        for c in cost1.iter_mut().skip(n + m) {
            *c = 1.0;
        }
        t.optimize(&cost1, max_iter)?;
        t.refactor()?;
        let infeas: f64 = (n + m..total).map(|j| t.x[j]).sum();
        let scale = 1.0 + t.b.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if infeas > 1e-7 * scale {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                objective: f64::NAN,
                x: t.x[..n].to_vec(),
                duals: vec![0.0; m],
                iterations: t.iterations,
            });
        }
        for j in n + m..total {
            t.upper[j] = 0.0;
            if !matches!(t.status[j], Status::Basic(_)) {
                t.x[j] = 0.0;
                t.status[j] = Status::Lower;
            }
        }
        t.degenerate = 0;
        t.bland = false;
    }

    let sign = if lp.sense == Sense::Max { -1.0 } else { 1.0 };
    let mut cost = vec![0.0; total];
    for j in 0..n {
        cost[j] = sign * lp.objective[j];
    }
    let outcome = t.optimize(&cost, max_iter)?;
    if let Outcome::Unbounded = outcome {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            objective: if lp.sense == Sense::Max {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            },
            x: t.x[..n].to_vec(),
            duals: vec![0.0; m],
            iterations: t.iterations,
        });
    }
    t.refactor()?;
    // snap basic values that drifted marginally past their bounds
    for j in 0..total {
        if t.x[j] < t.lower[j] && t.x[j] > t.lower[j] - 1e-9 {
            t.x[j] = t.lower[j];
        }
        if t.x[j] > t.upper[j] && t.x[j] < t.upper[j] + 1e-9 {
            t.x[j] = t.upper[j];
        }
    }
    let y_min = t.duals(&cost);
    let x_out = t.x[..n].to_vec();
    let objective = lp.objective_value(&x_out);
    verify(lp, &t, &cost, &y_min, objective)?;
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective,
        x: x_out,
        duals: y_min.iter().map(|v| sign * v).collect(),
        iterations: t.iterations,
    })
}

/// Primal feasibility, dual feasibility and strong duality checks.
fn verify(lp: &LinearProgram, t: &Tableau, cost: &[f64], y: &[f64], objective: f64) -> Result<()> {
    let n = lp.num_vars();
    for (i, row) in lp.rows.iter().enumerate() {
        let act: f64 = row.coeffs.iter().map(|&(j, a)| a * t.x[j]).sum();
        let viol = match row.relation {
            Relation::Le => act - row.rhs,
            Relation::Ge => row.rhs - act,
            Relation::Eq => (act - row.rhs).abs(),
        };
        if viol > 1e-7 * (1.0 + row.rhs.abs()) {
            return Err(FrlpError::NumericalFailure(format!("row {i} violated by {viol:e}")));
        }
    }
    for j in 0..n {
        if t.x[j] < lp.lower[j] - 1e-7 || t.x[j] > lp.upper[j] + 1e-7 {
            return Err(FrlpError::NumericalFailure(format!("variable {j} outside its bounds")));
        }
    }
    // dual objective in minimization form: y^T b + sum of reduced costs at bounds
    let mut dual_obj: f64 = y.iter().zip(&t.b).map(|(a, b)| a * b).sum();
    for j in 0..t.cols.len() {
        if let Status::Basic(_) = t.status[j] {
            continue;
        }
        let d = t.reduced(cost, y, j);
        let fixed = t.lower[j] == t.upper[j];
        let bad = match t.status[j] {
            _ if fixed => false,
            Status::Lower => d < -1e-6,
            Status::Upper => d > 1e-6,
            Status::Zero => d.abs() > 1e-6,
            Status::Basic(_) => false,
        };
        if bad {
            return Err(FrlpError::NumericalFailure(format!("reduced cost of column {j} has the wrong sign")));
        }
        if d != 0.0 {
            dual_obj += d * t.x[j];
        }
    }
    let primal_min = if lp.sense == Sense::Max { -objective } else { objective };
    if (primal_min - dual_obj).abs() > 1e-6 * (1.0 + objective.abs()) {
        return Err(FrlpError::NumericalFailure(format!(
            "duality gap {:e}",
            (primal_min - dual_obj).abs()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bound_row() {
        let mut lp = LinearProgram::new(Sense::Max);
        let y = lp.add_var(1.0, 0.0, f64::INFINITY);
        lp.add_row(vec![(y, 1.0)], Relation::Le, 1.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 1.0).abs() < 1e-9);
        assert!((s.duals[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fixed_x_covering_row() {
        let f = 3.0;
        let mut lp = LinearProgram::new(Sense::Max);
        let x1 = lp.add_var(0.0, 0.5, 0.5);
        let x2 = lp.add_var(0.0, 0.5, 0.5);
        let y = lp.add_var(f, 0.0, 1.0);
        lp.add_row(vec![(x1, 1.0), (x2, 1.0), (y, -1.0)], Relation::Ge, 0.0);
        let s = solve_lp(&lp).unwrap();
        assert!((s.objective - f).abs() < 1e-9);
    }

    #[test]
    fn classic_two_phase() {
        // min x + y, x + 2y >= 4, 3x + y >= 6 -> (1.6, 1.2), 2.8
        let mut lp = LinearProgram::new(Sense::Min);
        let x = lp.add_var(1.0, 0.0, f64::INFINITY);
        let y = lp.add_var(1.0, 0.0, f64::INFINITY);
        lp.add_row(vec![(x, 1.0), (y, 2.0)], Relation::Ge, 4.0);
        lp.add_row(vec![(x, 3.0), (y, 1.0)], Relation::Ge, 6.0);
        let s = solve_lp(&lp).unwrap();
        assert!((s.objective - 2.8).abs() < 1e-9);
        assert!((s.x[0] - 1.6).abs() < 1e-9 && (s.x[1] - 1.2).abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Sense::Max);
        let x = lp.add_var(1.0, 0.0, 1.0);
        lp.add_row(vec![(x, 1.0)], Relation::Ge, 2.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new(Sense::Max);
        let x = lp.add_var(1.0, 0.0, f64::INFINITY);
        let y = lp.add_var(0.0, 0.0, f64::INFINITY);
        lp.add_row(vec![(x, 1.0), (y, -1.0)], Relation::Le, 1.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_and_free_variable() {
        // max -z, z free, z = x - 3, x in [0, 2] -> x = 0, z = -3, objective 3
        let mut lp = LinearProgram::new(Sense::Max);
        let x = lp.add_var(0.0, 0.0, 2.0);
        let z = lp.add_var(-1.0, f64::NEG_INFINITY, f64::INFINITY);
        lp.add_row(vec![(z, 1.0), (x, -1.0)], Relation::Eq, -3.0);
        let s = solve_lp(&lp).unwrap();
        assert!((s.objective - 3.0).abs() < 1e-9);
        assert!((s.x[z] + 3.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_assignment_lp() {
        // 4x4 assignment relaxation: highly degenerate, optimum is a permutation
        let cost = [[4.0, 1.0, 3.0, 2.0], [2.0, 0.0, 5.0, 3.0], [3.0, 2.0, 2.0, 1.0], [1.0, 4.0, 2.0, 3.0]];
        let mut lp = LinearProgram::new(Sense::Min);
        let mut v = [[0usize; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                v[i][j] = lp.add_var(cost[i][j], 0.0, f64::INFINITY);
            }
        }
        for i in 0..4 {
            lp.add_row((0..4).map(|j| (v[i][j], 1.0)).collect(), Relation::Eq, 1.0);
            lp.add_row((0..4).map(|j| (v[j][i], 1.0)).collect(), Relation::Eq, 1.0);
        }
        let s = solve_lp(&lp).unwrap();
        // brute force over permutations
        let mut best = f64::INFINITY;
        let perms = [
            [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1],
            [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0], [1, 3, 0, 2], [1, 3, 2, 0],
            [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3], [2, 1, 3, 0], [2, 3, 0, 1], [2, 3, 1, 0],
            [3, 0, 1, 2], [3, 0, 2, 1], [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
        ];
        for p in perms {
            best = best.min((0..4).map(|i| cost[i][p[i]]).sum());
        }
        assert!((s.objective - best).abs() < 1e-9);
    }
}
