//! Cut-set covering families: one per route (traversable iff every set holds
//! a station) and one aggregated per demand (served iff every set holds a station).

use std::collections::HashSet;

use crate::error::{FrlpError, Result};
use crate::network::{DistanceMatrix, Instance, RouteSpec, Variant, DIST_TOL};
use crate::nodeset::NodeSet;
use crate::routes::{enumerate_routes_with, Route, DEFAULT_ROUTE_CAP};

pub const DEFAULT_AGGREGATION_GUARD: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyOrigin {
    PerRoute,
    Aggregated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutSetFamily {
    pub sets: Vec<NodeSet>,
    pub origin: FamilyOrigin,
    pub minimal: bool,
}

impl CutSetFamily {
    pub fn new(sets: Vec<NodeSet>, origin: FamilyOrigin) -> Self {
        let mut family = CutSetFamily {
            sets,
            origin,
            minimal: false,
        };
        family.sets.sort();
        family.sets.dedup();
        family
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// True iff every member contains a station.
    pub fn hits_all(&self, stations: &NodeSet) -> bool {
        self.sets.iter().all(|s| s.intersects(stations))
    }

    /// `min over members of sum_{j in S} x_j`, or infinity for an empty family.
    pub fn min_weight(&self, x: &[f64]) -> f64 {
        self.sets
            .iter()
            .map(|s| s.weight(x))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn member_lists(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(NodeSet::to_vec).collect()
    }
}

/// Per-arc cut sets of a route; paths are treated as their round trip.
///
/// For the arc ending at position k of the period, the set holds every node
/// visited within distance `range` before reaching position k (looking back
/// at most one full period).
pub fn cut_sets_for_cycle(route: &Route, universe: usize, range: f64) -> Result<CutSetFamily> {
    let (nodes, legs) = route.period();
    let m = nodes.len();
    for i in 0..m {
        if legs[i] > range + DIST_TOL {
            return Err(FrlpError::EdgeTooLong {
                from: nodes[i],
                to: nodes[(i + 1) % m],
                length: legs[i],
                range,
            });
        }
    }
    let mut sets = Vec::with_capacity(m);
    for k in 0..m {
        let mut set = NodeSet::empty(universe);
        let mut back = 0.0;
        for t in 1..=m {
            let i = (k + m - t) % m;
            back += legs[i];
            if back > range + DIST_TOL {
                break;
            }
            set.insert(nodes[i]);
        }
        sets.push(set);
    }
    Ok(CutSetFamily::new(sets, FamilyOrigin::PerRoute))
}

/// Same as [`cut_sets_for_cycle`]; a path is evaluated as `p ++ reverse(p)`.
pub fn cut_sets_for_path(route: &Route, universe: usize, range: f64) -> Result<CutSetFamily> {
    cut_sets_for_cycle(&route.as_cycle(), universe, range)
}

/// Drops every member that strictly contains another member.
pub fn minimalize(family: &CutSetFamily) -> CutSetFamily {
    let mut by_size: Vec<&NodeSet> = family.sets.iter().collect();
    by_size.sort_by_key(|s| s.len());
    let mut kept: Vec<NodeSet> = Vec::new();
    for s in by_size {
        if !kept.iter().any(|k| k.is_subset(s)) {
            kept.push(s.clone());
        }
    }
    kept.sort();
    CutSetFamily {
        sets: kept,
        origin: family.origin,
        minimal: true,
    }
}

/// All unions taking one member from each family, minimalized. Subsumed unions
/// are pruned after every factor, which keeps the minimal members intact.
pub fn aggregate_cut_sets(families: &[CutSetFamily], guard: usize) -> Result<CutSetFamily> {
    aggregate(families, guard, true)
}

/// All distinct unions without any pruning (the literal product family).
pub fn aggregate_cut_sets_full(families: &[CutSetFamily], guard: usize) -> Result<CutSetFamily> {
    aggregate(families, guard, false)
}

fn aggregate(families: &[CutSetFamily], guard: usize, prune: bool) -> Result<CutSetFamily> {
    let (first, rest) = families
        .split_first()
        .ok_or_else(|| FrlpError::InvalidArgument("aggregation needs at least one family".into()))?;
    let mut acc = CutSetFamily::new(first.sets.clone(), FamilyOrigin::Aggregated);
    if prune {
        acc = minimalize(&acc);
    }
    let mut produced = 0usize;
    for fam in rest {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for a in &acc.sets {
            for b in &fam.sets {
                produced += 1;
                if produced > guard {
                    return Err(FrlpError::AggregationOverflow { guard });
                }
                let u = a.union(b);
                if seen.insert(u.clone()) {
                    next.push(u);
                }
            }
        }
        acc = CutSetFamily::new(next, FamilyOrigin::Aggregated);
        if prune {
            acc = minimalize(&acc);
        }
    }
    acc.origin = FamilyOrigin::Aggregated;
    Ok(acc)
}

/// Station vector that hits every member except `member`: closed exactly on `member`.
pub fn minimality_witness(family: &CutSetFamily, member: &NodeSet) -> Result<NodeSet> {
    if !family.sets.contains(member) {
        return Err(FrlpError::WitnessUndefined(format!("{member:?} is not a member")));
    }
    if family.sets.iter().any(|s| s.is_strict_subset(member)) {
        return Err(FrlpError::WitnessUndefined(format!(
            "{member:?} strictly contains another member"
        )));
    }
    Ok(member.complement())
}

/// Routes and covering families of one demand.
#[derive(Debug, Clone)]
pub struct DemandCover {
    pub routes: Vec<Route>,
    /// One family per route; a demand given directly by a covering family has a single entry.
    pub per_route: Vec<CutSetFamily>,
    /// Minimal aggregated family.
    pub aggregated: CutSetFamily,
}

/// Builds the families of demand `q`.
pub fn demand_cover(instance: &Instance, dist: &DistanceMatrix, q: usize, variant: Variant) -> Result<DemandCover> {
    let n = instance.node_count();
    let demand = &instance.demands[q];
    if let RouteSpec::Covering(sets) = &demand.routes {
        let fam = CutSetFamily::new(sets.clone(), FamilyOrigin::PerRoute);
        let aggregated = aggregate_cut_sets(std::slice::from_ref(&fam), DEFAULT_AGGREGATION_GUARD)?;
        return Ok(DemandCover {
            routes: Vec::new(),
            per_route: vec![fam],
            aggregated,
        });
    }
    let routes = enumerate_routes_with(instance, dist, q, variant, DEFAULT_ROUTE_CAP)?;
    if routes.is_empty() {
        return Err(FrlpError::NoRoute { demand: q });
    }
    let per_route = routes
        .iter()
        .map(|r| cut_sets_for_cycle(r, n, instance.range))
        .collect::<Result<Vec<_>>>()?;
    let aggregated = aggregate_cut_sets(&per_route, DEFAULT_AGGREGATION_GUARD)?;
    Ok(DemandCover {
        routes,
        per_route,
        aggregated,
    })
}

/// Families of every demand in order.
pub fn instance_covers(instance: &Instance, variant: Variant) -> Result<Vec<DemandCover>> {
    let dist = instance.network.distances();
    (0..instance.demands.len())
        .map(|q| demand_cover(instance, &dist, q, variant))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Edge, Network};
    use crate::routes::{is_traversable, RouteKind};

    fn fig2() -> Network {
        let e = |u: usize, v: usize| Edge {
            u,
            v,
            length: 5.0,
            directed: false,
        };
        Network::with_numbered_nodes(5, vec![e(0, 1), e(1, 2), e(1, 3), e(2, 3), e(3, 4)]).unwrap()
    }

    fn sets(lists: &[&[usize]]) -> Vec<Vec<usize>> {
        // node names are 1-based in the examples
        lists.iter().map(|l| l.iter().map(|j| j - 1).collect()).collect()
    }

    #[test]
    fn example1_route_families() {
        let net = fig2();
        let r1 = Route::new(&net, RouteKind::Path, vec![0, 1, 3, 4]).unwrap();
        let r2 = Route::new(&net, RouteKind::Path, vec![0, 1, 2, 3, 4]).unwrap();
        let d1 = cut_sets_for_path(&r1, 5, 10.0).unwrap();
        let d2 = cut_sets_for_path(&r2, 5, 10.0).unwrap();
        assert_eq!(d1.member_lists(), sets(&[&[1, 2], &[2, 4], &[4, 5]]));
        assert_eq!(d2.member_lists(), sets(&[&[1, 2], &[2, 3], &[3, 4], &[4, 5]]));
        let h = aggregate_cut_sets(&[d1.clone(), d2.clone()], 1000).unwrap();
        assert_eq!(h.member_lists(), sets(&[&[1, 2], &[2, 3, 4], &[4, 5]]));
        let full = aggregate_cut_sets_full(&[d1, d2], 1000).unwrap();
        assert_eq!(full.len(), 10);
        assert_eq!(minimalize(&full), h);
    }

    #[test]
    fn two_node_line_round_trip() {
        let net = Network::with_numbered_nodes(
            2,
            vec![Edge {
                u: 0,
                v: 1,
                length: 10.0,
                directed: false,
            }],
        )
        .unwrap();
        let cyc = Route::new(&net, RouteKind::Cycle, vec![0, 1, 0]).unwrap();
        let fam = cut_sets_for_cycle(&cyc, 2, 10.0).unwrap();
        assert_eq!(fam.member_lists(), vec![vec![0], vec![1]]);
        for mask in 0..4 {
            let s = NodeSet::from_mask(2, mask);
            assert_eq!(fam.hits_all(&s), is_traversable(&cyc, &s, 10.0));
        }
    }

    #[test]
    fn long_leg_is_rejected() {
        let net = fig2();
        let r = Route::new(&net, RouteKind::Path, vec![0, 1]).unwrap();
        assert!(matches!(
            cut_sets_for_path(&r, 5, 4.0),
            Err(FrlpError::EdgeTooLong { .. })
        ));
    }

    #[test]
    fn trivial_aggregations() {
        let a = CutSetFamily::new(vec![NodeSet::from_nodes(3, [0])], FamilyOrigin::PerRoute);
        let b = CutSetFamily::new(vec![NodeSet::from_nodes(3, [1])], FamilyOrigin::PerRoute);
        let h = aggregate_cut_sets(&[a.clone(), b], 10).unwrap();
        assert_eq!(h.member_lists(), vec![vec![0, 1]]);
        assert_eq!(aggregate_cut_sets(&[a.clone()], 10).unwrap().sets, a.sets);
        assert!(matches!(
            aggregate_cut_sets(&[], 10),
            Err(FrlpError::InvalidArgument(_))
        ));
    }

    #[test]
    fn guard_trips() {
        let fam = CutSetFamily::new(
            (0..4).map(|j| NodeSet::from_nodes(4, [j])).collect(),
            FamilyOrigin::PerRoute,
        );
        let err = aggregate_cut_sets(&[fam.clone(), fam.clone(), fam], 20).unwrap_err();
        assert!(matches!(err, FrlpError::AggregationOverflow { guard: 20 }));
    }

    #[test]
    fn chain_minimalizes_to_bottom() {
        let fam = CutSetFamily::new(
            vec![
                NodeSet::from_nodes(3, [0]),
                NodeSet::from_nodes(3, [0, 1]),
                NodeSet::from_nodes(3, [0, 1, 2]),
            ],
            FamilyOrigin::PerRoute,
        );
        let m = minimalize(&fam);
        assert_eq!(m.member_lists(), vec![vec![0]]);
        assert_eq!(minimalize(&m), m);
    }

    #[test]
    fn witnesses() {
        let fam = minimalize(&CutSetFamily::new(
            sets(&[&[1, 2], &[2, 3, 4], &[4, 5]])
                .into_iter()
                .map(|l| NodeSet::from_nodes(5, l))
                .collect(),
            FamilyOrigin::Aggregated,
        ));
        let w = minimality_witness(&fam, &NodeSet::from_nodes(5, [0, 1])).unwrap();
        assert_eq!(w.indicator(), vec![0.0, 0.0, 1.0, 1.0, 1.0]);

        let d1 = CutSetFamily::new(
            sets(&[&[1, 2], &[2, 4], &[4, 5]])
                .into_iter()
                .map(|l| NodeSet::from_nodes(5, l))
                .collect(),
            FamilyOrigin::PerRoute,
        );
        let member = NodeSet::from_nodes(5, [1, 3]);
        let w = minimality_witness(&d1, &member).unwrap();
        assert!(w.intersects(&NodeSet::from_nodes(5, [0, 1])));
        assert!(w.intersects(&NodeSet::from_nodes(5, [3, 4])));
        assert!(!w.intersects(&member));

        let single = CutSetFamily::new(vec![NodeSet::from_nodes(3, [0])], FamilyOrigin::PerRoute);
        assert_eq!(
            minimality_witness(&single, &NodeSet::from_nodes(3, [0])).unwrap().to_vec(),
            vec![1, 2]
        );

        let chain = CutSetFamily::new(
            vec![NodeSet::from_nodes(3, [0]), NodeSet::from_nodes(3, [0, 1])],
            FamilyOrigin::PerRoute,
        );
        assert!(matches!(
            minimality_witness(&chain, &NodeSet::from_nodes(3, [0, 1])),
            Err(FrlpError::WitnessUndefined(_))
        ));
    }
}
