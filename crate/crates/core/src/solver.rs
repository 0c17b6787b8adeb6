//! Branch-and-cut over the aggregated model with lazily separated covering cuts.
//!
//! The root relaxation starts without any covering row. Whenever a node LP
//! yields integral stations, each demand claimed as served is checked; if it
//! is not servable, a minimal set of closed nodes that must receive a station
//! is added as a global cut and the node is solved again.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::time::{Duration, Instant};

use crate::error::{FrlpError, Result};
use crate::feasibility::ServiceChecker;
use crate::lp::simplex::{solve_lp, LinearProgram, LpStatus, Relation, Sense};
use crate::network::{Instance, Variant};
use crate::nodeset::NodeSet;

const INT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    MaxCover { budget: usize },
    MinStations { coverage: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Limits {
    pub time: Option<Duration>,
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SolveRequest<'a> {
    pub instance: &'a Instance,
    pub variant: Variant,
    pub objective: Objective,
    pub limits: Limits,
    /// Recorded for reproducibility; the tree search itself is deterministic.
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveStats {
    pub total_time: Duration,
    pub separation_time: Duration,
    pub nodes: usize,
    pub cuts: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub stations: NodeSet,
    pub served: Vec<bool>,
    pub objective: f64,
    pub bound: f64,
    pub optimal: bool,
    pub stats: SolveStats,
    /// Every cut added during the run, as (demand, node set).
    pub cuts: Vec<(usize, NodeSet)>,
}

/// Algorithm-1 separation for an integral candidate.
///
/// For every demand in `claimed` that is not servable with `stations`, the set of
/// closed nodes is shrunk in one ascending pass (dropping a node whenever the
/// demand stays unservable with it opened) and returned as a cut.
pub fn separate(checker: &ServiceChecker, stations: &NodeSet, claimed: &[usize]) -> Vec<(usize, NodeSet)> {
    let mut cuts = Vec::new();
    for &q in claimed {
        if checker.is_served(q, stations) {
            continue;
        }
        let mut closed = stations.complement();
        for j in stations.complement().iter() {
            let mut trial = closed.clone();
            trial.remove(j);
            if !checker.is_served(q, &trial.complement()) {
                closed = trial;
            }
        }
        cuts.push((q, closed));
    }
    cuts
}

/// Served volume under a fixed station set.
pub fn reevaluate(instance: &Instance, stations: &NodeSet, variant: Variant) -> Result<f64> {
    let checker = ServiceChecker::new(instance, variant)?;
    Ok(instance
        .demands
        .iter()
        .enumerate()
        .filter(|(q, _)| checker.is_served(*q, stations))
        .map(|(_, d)| d.volume)
        .sum())
}

struct Node {
    bound: f64,
    seq: usize,
    fixings: Vec<(usize, f64, f64)>,
}

struct Ranked {
    key: f64,
    seq: usize,
    node: Node,
}

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Ranked {}
impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.total_cmp(&other.key).then(other.seq.cmp(&self.seq))
    }
}

/// Solves the request to optimality unless a limit stops the search first.
pub fn solve(request: &SolveRequest) -> Result<Solution> {
    let start = Instant::now();
    let inst = request.instance;
    let n = inst.node_count();
    let nq = inst.demands.len();
    let checker = ServiceChecker::new(inst, request.variant)?;
    let p = &inst.placement;

    let allowed = NodeSet::from_nodes(n, (0..n).filter(|j| !p.forced_closed.contains(j)));
    let servable: Vec<bool> = (0..nq).map(|q| checker.is_served(q, &allowed)).collect();

    let (sense, coverage, budget) = match request.objective {
        Objective::MaxCover { budget } => {
            if budget > n {
                return Err(FrlpError::InvalidArgument(format!(
                    "budget {budget} exceeds the node count {n}"
                )));
            }
            (Sense::Max, None, Some(p.budget.map_or(budget, |b| b.min(budget))))
        }
        Objective::MinStations { coverage } => {
            if !(coverage > 0.0 && coverage <= 1.0) {
                return Err(FrlpError::InvalidArgument(format!("coverage must lie in (0, 1], got {coverage}")));
            }
            (Sense::Min, Some(coverage), p.budget)
        }
    };
    let names = |qs: Vec<usize>| {
        qs.into_iter()
            .map(|q| {
                let d = &inst.demands[q];
                format!("{} ({}->{})", q, inst.network.name(d.origin), inst.network.name(d.destination))
            })
            .collect::<Vec<_>>()
    };
    let all_served = coverage == Some(1.0);
    if all_served {
        let bad: Vec<usize> = (0..nq).filter(|&q| !servable[q]).collect();
        if !bad.is_empty() {
            return Err(FrlpError::Infeasible { demands: names(bad) });
        }
    } else if let Some(c) = coverage {
        let reachable: f64 = (0..nq).filter(|&q| servable[q]).map(|q| inst.demands[q].volume).sum();
        if reachable < c * inst.total_volume() - 1e-9 {
            return Err(FrlpError::Infeasible {
                demands: names((0..nq).filter(|&q| !servable[q]).collect()),
            });
        }
    }

    // base relaxation: stations, served indicators, budget and coverage rows
    let mut lp = LinearProgram::new(sense);
    let x: Vec<usize> = (0..n)
        .map(|j| {
            let lo = if p.forced_open.contains(&j) { 1.0 } else { 0.0 };
            let hi = if p.forced_closed.contains(&j) { 0.0 } else { 1.0 };
            lp.add_var(if sense == Sense::Min { 1.0 } else { 0.0 }, lo, hi)
        })
        .collect();
    let y: Vec<Option<usize>> = (0..nq)
        .map(|q| {
            if all_served {
                None
            } else {
                let cost = if sense == Sense::Max { inst.demands[q].volume } else { 0.0 };
                let hi = if servable[q] { 1.0 } else { 0.0 };
                Some(lp.add_var(cost, 0.0, hi))
            }
        })
        .collect();
    if let Some(b) = budget {
        lp.add_row(x.iter().map(|&v| (v, 1.0)).collect(), Relation::Le, b as f64);
    }
    if let Some(c) = coverage.filter(|&c| c < 1.0) {
        lp.add_row(
            (0..nq).map(|q| (y[q].unwrap(), inst.demands[q].volume)).collect(),
            Relation::Ge,
            c * inst.total_volume(),
        );
    }
    let base_rows = lp.rows.len();

    let mut stats = SolveStats::default();
    let mut cut_pool: Vec<(usize, NodeSet)> = Vec::new();
    let mut cut_seen: HashSet<(usize, NodeSet)> = HashSet::new();
    let better = |a: f64, b: f64| match sense {
        Sense::Max => a > b + 1e-9,
        Sense::Min => a < b - 1e-9,
    };
    // a node whose bound cannot beat the incumbent is pruned
    let prunable = |bound: f64, inc: f64| match sense {
        Sense::Max => bound <= inc + 1e-6,
        // station counts are integral
        Sense::Min => (bound - 1e-6).ceil() >= inc - 1e-9,
    };

    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    if sense == Sense::Max && budget.is_none_or(|b| p.forced_open.len() <= b) {
        let mut v = vec![0.0; lp.num_vars()];
        for &j in &p.forced_open {
            v[x[j]] = 1.0;
        }
        incumbent = Some((0.0, v));
    }

    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    let root_key = if sense == Sense::Max { f64::INFINITY } else { f64::NEG_INFINITY };
    heap.push(Ranked {
        key: if sense == Sense::Max { root_key } else { -root_key },
        seq,
        node: Node {
            bound: root_key,
            seq,
            fixings: Vec::new(),
        },
    });
    seq += 1;
    let mut stopped = false;

    while let Some(Ranked { node, .. }) = heap.pop() {
        if let Some((inc, _)) = &incumbent {
            if prunable(node.bound, *inc) {
                continue;
            }
        }
        let over_time = request.limits.time.is_some_and(|t| start.elapsed() >= t);
        let over_nodes = request.limits.nodes.is_some_and(|k| stats.nodes >= k);
        if over_time || over_nodes {
            heap.push(Ranked {
                key: if sense == Sense::Max { node.bound } else { -node.bound },
                seq: node.seq,
                node,
            });
            stopped = true;
            break;
        }
        stats.nodes += 1;
        let mut node_lp = lp.clone();
        for &(v, lo, hi) in &node.fixings {
            node_lp.lower[v] = lo;
            node_lp.upper[v] = hi;
        }
        loop {
            node_lp.rows.truncate(base_rows);
            for (q, set) in &cut_pool {
                let mut coeffs: Vec<(usize, f64)> = set.iter().map(|j| (x[j], 1.0)).collect();
                match y[*q] {
                    Some(v) => {
                        coeffs.push((v, -1.0));
                        node_lp.add_row(coeffs, Relation::Ge, 0.0);
                    }
                    None => {
                        node_lp.add_row(coeffs, Relation::Ge, 1.0);
                    }
                }
            }
            let sol = solve_lp(&node_lp)?;
            match sol.status {
                LpStatus::Optimal => {}
                LpStatus::Infeasible => break,
                LpStatus::Unbounded => {
                    return Err(FrlpError::NumericalFailure("node relaxation unbounded".into()))
                }
            }
            let bound = sol.objective;
            if let Some((inc, _)) = &incumbent {
                if prunable(bound, *inc) {
                    break;
                }
            }
            let frac = |v: f64| (v - v.round()).abs();
            let branch_var = most_fractional(x.iter().map(|&v| (v, sol.x[v])))
                .or_else(|| most_fractional(y.iter().flatten().map(|&v| (v, sol.x[v]))));
            let x_integral = x.iter().all(|&v| frac(sol.x[v]) <= INT_TOL);
            if x_integral {
                let stations = NodeSet::from_nodes(n, (0..n).filter(|&j| sol.x[x[j]] > 0.5));
                let claimed: Vec<usize> = (0..nq)
                    .filter(|&q| y[q].map_or(true, |v| sol.x[v] > INT_TOL))
                    .collect();
                let t0 = Instant::now();
                let cuts = separate(&checker, &stations, &claimed);
                stats.separation_time += t0.elapsed();
                let mut added = 0;
                for cut in cuts {
                    if cut_seen.insert(cut.clone()) {
                        cut_pool.push(cut);
                        added += 1;
                    }
                }
                stats.cuts += added;
                if added > 0 {
                    continue;
                }
            }
            match branch_var {
                Some(v) => {
                    let val = sol.x[v];
                    for (lo, hi) in [(0.0, val.floor()), (val.ceil(), 1.0)] {
                        let mut fixings = node.fixings.clone();
                        fixings.push((v, lo, hi));
                        heap.push(Ranked {
                            key: if sense == Sense::Max { bound } else { -bound },
                            seq,
                            node: Node { bound, seq, fixings },
                        });
                        seq += 1;
                    }
                }
                _ => {
                    let value = bound.round();
                    let value = if (bound - value).abs() < 1e-6 && sense == Sense::Min { value } else { bound };
                    if incumbent.as_ref().is_none_or(|(inc, _)| better(value, *inc)) {
                        incumbent = Some((value, sol.x.clone()));
                    }
                }
            }
            break;
        }
    }

    stats.total_time = start.elapsed();
    let Some((_, values)) = incumbent else {
        if stopped {
            return Err(FrlpError::NumericalFailure("limit reached before any feasible placement was found".into()));
        }
        return Err(FrlpError::Infeasible { demands: Vec::new() });
    };
    let stations = NodeSet::from_nodes(n, (0..n).filter(|&j| values[x[j]] > 0.5));
    let served: Vec<bool> = (0..nq)
        .map(|q| match y[q] {
            Some(v) => values[v] > 0.5,
            None => true,
        })
        .collect();
    let objective = match sense {
        Sense::Max => (0..nq).filter(|&q| served[q]).map(|q| inst.demands[q].volume).sum(),
        Sense::Min => stations.len() as f64,
    };
    let open_bound = heap.iter().map(|r| r.node.bound);
    let bound = match sense {
        Sense::Max => open_bound.fold(objective, f64::max),
        Sense::Min => open_bound.fold(objective, f64::min),
    };
    Ok(Solution {
        stations,
        served,
        objective,
        bound,
        optimal: !stopped,
        stats,
        cuts: cut_pool,
    })
}

/// Variable with value farthest from integral (ties to the lowest column).
fn most_fractional(values: impl Iterator<Item = (usize, f64)>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (v, val) in values {
        let f = (val - val.round()).abs();
        if f > INT_TOL && best.is_none_or(|(_, bf)| f > bf + 1e-12) {
            best = Some((v, f));
        }
    }
    best.map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Demand, Edge, Network, PlacementConstraints, RouteSpec};

    fn fig7() -> Instance {
        let d = 12.0;
        let e = |u: usize, v: usize, l: f64| Edge {
            u,
            v,
            length: l,
            directed: false,
        };
        Instance {
            network: Network::with_numbered_nodes(
                4,
                vec![e(0, 1, d / 3.0), e(0, 2, d / 4.0), e(1, 2, d / 4.0), e(0, 3, d / 3.0), e(1, 3, d / 3.0)],
            )
            .unwrap(),
            demands: vec![Demand {
                origin: 0,
                destination: 1,
                volume: 1.0,
                routes: RouteSpec::Deviation { alpha: 1.5 },
            }],
            range: d,
            placement: PlacementConstraints::default(),
            variant: Variant::Cyclic,
        }
    }

    fn request(inst: &Instance, variant: Variant, objective: Objective) -> SolveRequest<'_> {
        SolveRequest {
            instance: inst,
            variant,
            objective,
            limits: Limits::default(),
            seed: 0,
        }
    }

    #[test]
    fn fig7_min_stations() {
        let inst = fig7();
        let ms = Objective::MinStations { coverage: 1.0 };
        let cyc = solve(&request(&inst, Variant::Cyclic, ms)).unwrap();
        assert_eq!(cyc.objective, 1.0);
        assert!(cyc.optimal);
        let orig = solve(&request(&inst, Variant::Original, ms)).unwrap();
        assert_eq!(orig.objective, 1.0);
        // any one of nodes 1, 2, 3 serves the demand under the original rules; node 4 does not
        assert_eq!(orig.stations.len(), 1);
        assert!(!orig.stations.contains(3));
    }

    #[test]
    fn separation_examples() {
        let inst = fig7();
        let cyc = ServiceChecker::new(&inst, Variant::Cyclic).unwrap();
        assert!(separate(&cyc, &NodeSet::from_nodes(4, [2]), &[0]).is_empty());
        assert!(separate(&cyc, &NodeSet::from_nodes(4, [2]), &[]).is_empty());

        let orig = ServiceChecker::new(&inst, Variant::Original).unwrap();
        let cuts = separate(&orig, &NodeSet::from_nodes(4, [3]), &[0]);
        assert_eq!(cuts.len(), 1);
        let (q, set) = &cuts[0];
        assert_eq!(*q, 0);
        assert!(!set.contains(3));
        // opening nothing from the cut keeps the demand unserved
        assert!(!orig.is_served(0, &set.complement()));
    }

    #[test]
    fn reevaluate_example3() {
        let inst = fig7();
        let s4 = NodeSet::from_nodes(4, [3]);
        assert_eq!(reevaluate(&inst, &s4, Variant::Original).unwrap(), 0.0);
        assert_eq!(reevaluate(&inst, &s4, Variant::Cyclic).unwrap(), 1.0);
        assert_eq!(reevaluate(&inst, &NodeSet::empty(4), Variant::Cyclic).unwrap(), 0.0);
    }

    #[test]
    fn full_budget_serves_everything() {
        let inst = fig7();
        let s = solve(&request(&inst, Variant::Original, Objective::MaxCover { budget: 4 })).unwrap();
        assert_eq!(s.objective, 1.0);
        assert!(s.stats.separation_time <= s.stats.total_time);
        assert_eq!(s.stats.cuts, s.cuts.len());
    }

    #[test]
    fn unservable_min_stations_is_reported() {
        let mut inst = fig7();
        inst.placement.forced_closed = [0, 1, 2, 3].into_iter().collect();
        let err = solve(&request(&inst, Variant::Original, Objective::MinStations { coverage: 1.0 }));
        assert!(matches!(err, Err(FrlpError::Infeasible { .. })));
    }
}
