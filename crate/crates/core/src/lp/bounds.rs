//! Per-demand value functions of the relaxations evaluated at a fixed
//! fractional station vector.

use crate::covering::CutSetFamily;
use crate::error::{FrlpError, Result};
use crate::feasibility::ServiceChecker;
use crate::lp::simplex::{solve_lp, LinearProgram, LpStatus, Relation, Sense};
use crate::network::{Instance, PlacementConstraints, RouteSpec, Variant};
use crate::nodeset::NodeSet;

/// Largest node count for which the tight value function is evaluated.
pub const TIGHT_NODE_CAP: usize = 18;

/// Aggregated value: `sum_q f_q * min(1, min_{S in H_q} sum_{j in S} x_j)`.
pub fn eval_v_agg(instance: &Instance, aggregated: &[CutSetFamily], x: &[f64]) -> f64 {
    instance
        .demands
        .iter()
        .zip(aggregated)
        .map(|(d, fam)| d.volume * fam.min_weight(x).min(1.0))
        .sum()
}

/// Disaggregated value: for each demand the LP `max sum_r z_r` subject to
/// `sum_r z_r <= 1` and `z_r <= sum_{j in S} x_j` for every set of route r.
/// With x fixed the rows only bound single variables, so the optimum is
/// `min(1, sum_r min(1, min_{S in D_r} sum_{j in S} x_j))`.
pub fn eval_v_disagg(instance: &Instance, per_route: &[Vec<CutSetFamily>], x: &[f64]) -> f64 {
    instance
        .demands
        .iter()
        .zip(per_route)
        .map(|(d, families)| {
            let z: f64 = families.iter().map(|f| f.min_weight(x).clamp(0.0, 1.0)).sum();
            d.volume * z.min(1.0)
        })
        .sum()
}

/// Tight value function via column generation over station patterns.
///
/// The servedness of every pattern `beta in {0,1}^N` is tabulated once per
/// demand; each evaluation solves `max sum_i alpha_i f served(beta_i)` subject to
/// `sum_i alpha_i beta_i = x`, `sum_i alpha_i = 1`, `alpha >= 0`.
pub struct TightEvaluator {
    n: usize,
    volumes: Vec<f64>,
    /// `served[q][mask]`, one bit per pattern.
    served: Vec<Vec<bool>>,
}

impl TightEvaluator {
    pub fn new(instance: &Instance, variant: Variant) -> Result<Self> {
        let n = instance.node_count();
        if n > TIGHT_NODE_CAP {
            return Err(FrlpError::DimensionCap {
                what: "the tight value function",
                nodes: n,
                cap: TIGHT_NODE_CAP,
            });
        }
        let checker = ServiceChecker::new(instance, variant)?;
        let size = 1usize << n;
        let mut served = Vec::with_capacity(instance.demands.len());
        for (q, d) in instance.demands.iter().enumerate() {
            let masks: Option<Vec<u64>> = match &d.routes {
                RouteSpec::Covering(sets) => Some(sets.iter().map(mask_of).collect()),
                _ => None,
            };
            let mut table = vec![false; size];
            for mask in 0..size {
                // servedness is monotone: a superset of a served pattern is served
                let mut bits = mask;
                let mut inherited = false;
                while bits != 0 {
                    let low = bits & bits.wrapping_neg();
                    if table[mask ^ low] {
                        inherited = true;
                        break;
                    }
                    bits ^= low;
                }
                table[mask] = inherited
                    || match &masks {
                        Some(ms) => ms.iter().all(|&s| s & mask as u64 != 0),
                        None => checker.is_served(q, &NodeSet::from_mask(n, mask as u64)),
                    };
            }
            served.push(table);
        }
        Ok(TightEvaluator {
            n,
            volumes: instance.demands.iter().map(|d| d.volume).collect(),
            served,
        })
    }

    /// Servedness of demand `q` under the station pattern `mask`.
    pub fn served(&self, q: usize, mask: u64) -> bool {
        self.served[q][mask as usize]
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(FrlpError::InvalidArgument(format!(
                "station vector has {} entries, expected {}",
                x.len(),
                self.n
            )));
        }
        let mut total = 0.0;
        for q in 0..self.volumes.len() {
            total += self.eval_demand(q, x)?;
        }
        Ok(total)
    }

    fn eval_demand(&self, q: usize, x: &[f64]) -> Result<f64> {
        let n = self.n;
        let f = self.volumes[q];
        let table = &self.served[q];
        if f == 0.0 {
            return Ok(0.0);
        }
        // staircase decomposition of x seeds a feasible master
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| x[b].total_cmp(&x[a]).then(a.cmp(&b)));
        let mut columns: Vec<u64> = vec![0];
        let mut mask = 0u64;
        for &j in &order {
            mask |= 1 << j;
            columns.push(mask);
        }
        let mut weights = vec![0.0f64; 1 << n];
        for _round in 0..100_000 {
            let mut lp = LinearProgram::new(Sense::Max);
            for &c in &columns {
                lp.add_var(if table[c as usize] { f } else { 0.0 }, 0.0, f64::INFINITY);
            }
            for (j, &xj) in x.iter().enumerate() {
                let coeffs = columns
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c >> j & 1 == 1)
                    .map(|(i, _)| (i, 1.0))
                    .collect();
                lp.add_row(coeffs, Relation::Eq, xj);
            }
            lp.add_row((0..columns.len()).map(|i| (i, 1.0)).collect(), Relation::Eq, 1.0);
            let sol = solve_lp(&lp)?;
            if sol.status != LpStatus::Optimal {
                return Err(FrlpError::NumericalFailure(format!(
                    "tight master LP {:?}; x outside the unit cube?",
                    sol.status
                )));
            }
            let pi = &sol.duals[..n];
            let mu = sol.duals[n];
            // pricing by full scan, pattern weights built incrementally
            let mut best = (1e-9 * (1.0 + f), None);
            for m in 1..(1usize << n) {
                let low = m.trailing_zeros() as usize;
                weights[m] = weights[m & (m - 1)] + pi[low];
            }
            for (m, &w) in weights.iter().enumerate() {
                let rc = if table[m] { f } else { 0.0 } - w - mu;
                if rc > best.0 {
                    best = (rc, Some(m as u64));
                }
            }
            match best.1 {
                Some(m) => columns.push(m),
                None => return Ok(sol.objective),
            }
        }
        Err(FrlpError::NumericalFailure("column generation did not converge".into()))
    }
}

impl TightEvaluator {
    /// Maximum of the tight value over the placement polytope: station bounds
    /// from the fixings plus `sum x_j <= budget` when a budget is given.
    ///
    /// One master LP couples every demand's pattern weights through the shared
    /// x; columns are priced per demand by full scan.
    pub fn max_over_placement(&self, placement: &PlacementConstraints, budget: Option<usize>) -> Result<f64> {
        let n = self.n;
        let nq = self.volumes.len();
        let forced = placement.forced_open.iter().fold(0u64, |m, &j| m | 1 << j);
        let mut columns: Vec<Vec<u64>> = (0..nq).map(|_| vec![0, forced]).collect();
        for c in &mut columns {
            c.dedup();
        }
        let mut weights = vec![0.0f64; 1 << n];
        for _round in 0..100_000 {
            let mut lp = LinearProgram::new(Sense::Max);
            let x: Vec<usize> = (0..n)
                .map(|j| {
                    let lo = if placement.forced_open.contains(&j) { 1.0 } else { 0.0 };
                    let hi = if placement.forced_closed.contains(&j) { 0.0 } else { 1.0 };
                    lp.add_var(0.0, lo, hi)
                })
                .collect();
            let mut cols: Vec<Vec<usize>> = Vec::with_capacity(nq);
            for q in 0..nq {
                let f = self.volumes[q];
                cols.push(
                    columns[q]
                        .iter()
                        .map(|&c| lp.add_var(if self.served[q][c as usize] { f } else { 0.0 }, 0.0, f64::INFINITY))
                        .collect(),
                );
            }
            for q in 0..nq {
                for j in 0..n {
                    let mut coeffs: Vec<(usize, f64)> = columns[q]
                        .iter()
                        .zip(&cols[q])
                        .filter(|(&c, _)| c >> j & 1 == 1)
                        .map(|(_, &v)| (v, 1.0))
                        .collect();
                    coeffs.push((x[j], -1.0));
                    lp.add_row(coeffs, Relation::Eq, 0.0);
                }
                lp.add_row(cols[q].iter().map(|&v| (v, 1.0)).collect(), Relation::Eq, 1.0);
            }
            if let Some(b) = budget {
                lp.add_row(x.iter().map(|&v| (v, 1.0)).collect(), Relation::Le, b as f64);
            }
            let sol = solve_lp(&lp)?;
            if sol.status != LpStatus::Optimal {
                return Err(FrlpError::NumericalFailure(format!("tight master LP {:?}", sol.status)));
            }
            let mut added = false;
            for q in 0..nq {
                let f = self.volumes[q];
                let base = q * (n + 1);
                let pi = &sol.duals[base..base + n];
                let mu = sol.duals[base + n];
                for m in 1..(1usize << n) {
                    let low = m.trailing_zeros() as usize;
                    weights[m] = weights[m & (m - 1)] + pi[low];
                }
                let mut best = (1e-9 * (1.0 + f), None);
                for (m, &w) in weights.iter().enumerate() {
                    let rc = if self.served[q][m] { f } else { 0.0 } - w - mu;
                    if rc > best.0 {
                        best = (rc, Some(m as u64));
                    }
                }
                if let Some(m) = best.1 {
                    columns[q].push(m);
                    added = true;
                }
            }
            if !added {
                return Ok(sol.objective);
            }
        }
        Err(FrlpError::NumericalFailure("column generation did not converge".into()))
    }
}

fn mask_of(set: &NodeSet) -> u64 {
    set.iter().fold(0u64, |m, j| m | 1 << j)
}

/// One-shot tight value at `x`.
pub fn eval_v_tight(instance: &Instance, variant: Variant, x: &[f64]) -> Result<f64> {
    TightEvaluator::new(instance, variant)?.eval(x)
}
