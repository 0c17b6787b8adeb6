//! Brute-force reference answers. Servedness here comes only from full route
//! enumeration and the gap predicate, never from the search in `feasibility`.

use crate::covering::CutSetFamily;
use crate::error::{FrlpError, Result};
use crate::network::{Instance, RouteSpec, Variant};
use crate::nodeset::NodeSet;
use crate::routes::{enumerate_routes_with, is_traversable, Route, DEFAULT_ROUTE_CAP};
use crate::solver::Objective;

pub const ORACLE_NODE_CAP: usize = 20;
const MAX_LISTED: usize = 64;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub objective: f64,
    /// Optimal station sets in increasing mask order, at most 64 of them.
    pub optimal_sets: Vec<NodeSet>,
    /// Served flags per demand for each listed set.
    pub served: Vec<Vec<bool>>,
}

enum Truth {
    Routes(Vec<Route>),
    Covering(CutSetFamily),
}

/// Servedness by exhaustive enumeration, reusable across station sets.
pub struct ExhaustiveChecker<'a> {
    instance: &'a Instance,
    truths: Vec<Truth>,
}

impl<'a> ExhaustiveChecker<'a> {
    pub fn new(instance: &'a Instance, variant: Variant) -> Result<Self> {
        let dist = instance.network.distances();
        let truths = instance
            .demands
            .iter()
            .enumerate()
            .map(|(q, d)| match &d.routes {
                RouteSpec::Covering(sets) => Ok(Truth::Covering(CutSetFamily::new(
                    sets.clone(),
                    crate::covering::FamilyOrigin::Aggregated,
                ))),
                _ => enumerate_routes_with(instance, &dist, q, variant, DEFAULT_ROUTE_CAP).map(Truth::Routes),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExhaustiveChecker { instance, truths })
    }

    pub fn served(&self, q: usize, stations: &NodeSet) -> bool {
        match &self.truths[q] {
            Truth::Routes(routes) => routes
                .iter()
                .any(|r| is_traversable(r, stations, self.instance.range)),
            Truth::Covering(fam) => fam.hits_all(stations),
        }
    }
}

pub fn exhaustive_served(instance: &Instance, q: usize, stations: &NodeSet, variant: Variant) -> Result<bool> {
    Ok(ExhaustiveChecker::new(instance, variant)?.served(q, stations))
}

/// Exact optimum by enumerating every admissible station set.
pub fn brute_force_solve(instance: &Instance, variant: Variant, objective: Objective) -> Result<OracleResult> {
    brute_force_solve_many(instance, variant, &[objective])?.remove(0)
}

/// Several objectives over one enumeration of station sets and servedness.
pub fn brute_force_solve_many(
    instance: &Instance,
    variant: Variant,
    objectives: &[Objective],
) -> Result<Vec<Result<OracleResult>>> {
    let n = instance.node_count();
    if n > ORACLE_NODE_CAP {
        return Err(FrlpError::DimensionCap {
            what: "the brute-force oracle",
            nodes: n,
            cap: ORACLE_NODE_CAP,
        });
    }
    let checker = ExhaustiveChecker::new(instance, variant)?;
    let p = &instance.placement;
    let nq = instance.demands.len();
    let mut table: Vec<(NodeSet, Vec<bool>, f64)> = Vec::new();
    for mask in 0..(1u64 << n) {
        let stations = NodeSet::from_mask(n, mask);
        if !p.admits(&stations) {
            continue;
        }
        let served: Vec<bool> = (0..nq).map(|q| checker.served(q, &stations)).collect();
        let volume = instance
            .demands
            .iter()
            .zip(&served)
            .filter(|(_, &s)| s)
            .map(|(d, _)| d.volume)
            .sum();
        table.push((stations, served, volume));
    }
    let total = instance.total_volume();
    Ok(objectives
        .iter()
        .map(|&objective| {
            let mut best: Option<f64> = None;
            let mut sets: Vec<(NodeSet, Vec<bool>)> = Vec::new();
            for (stations, served, volume) in &table {
                let value = match objective {
                    Objective::MaxCover { budget } => {
                        if stations.len() > budget {
                            continue;
                        }
                        *volume
                    }
                    Objective::MinStations { coverage } => {
                        let ok = if coverage >= 1.0 {
                            served.iter().all(|&s| s)
                        } else {
                            *volume >= coverage * total - 1e-9
                        };
                        if !ok {
                            continue;
                        }
                        stations.len() as f64
                    }
                };
                let improves = match (best, objective) {
                    (None, _) => true,
                    (Some(b), Objective::MaxCover { .. }) => value > b + 1e-9,
                    (Some(b), Objective::MinStations { .. }) => value < b - 1e-9,
                };
                if improves {
                    best = Some(value);
                    sets.clear();
                }
                if best.is_some_and(|b| (value - b).abs() <= 1e-9) && sets.len() < MAX_LISTED {
                    sets.push((stations.clone(), served.clone()));
                }
            }
            let objective = best.ok_or(FrlpError::Infeasible { demands: Vec::new() })?;
            let (optimal_sets, served) = sets.into_iter().unzip();
            Ok(OracleResult {
                objective,
                optimal_sets,
                served,
            })
        })
        .collect())
}
