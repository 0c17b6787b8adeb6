//! Admissible route sets and the ground-truth traversability predicate.

use std::fmt;

use crate::error::{FrlpError, Result};
use crate::network::{DistanceMatrix, Instance, Network, NodeId, RouteSpec, Variant, DIST_TOL};
use crate::nodeset::NodeSet;

pub const DEFAULT_ROUTE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RouteKind {
    /// Origin to destination; driven out and back along the same nodes.
    Path,
    /// Closed walk from the origin through the destination and back.
    Cycle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    pub kind: RouteKind,
    pub visits: Vec<NodeId>,
    /// `legs[i]` is the length of the arc `visits[i] -> visits[i+1]`.
    pub legs: Vec<f64>,
    pub length: f64,
}

impl Route {
    /// Builds a route, looking up every leg in the network.
    pub fn new(network: &Network, kind: RouteKind, visits: Vec<NodeId>) -> Result<Self> {
        if visits.len() < 2 {
            return Err(FrlpError::InvalidArgument("a route needs at least two visits".into()));
        }
        if kind == RouteKind::Cycle && visits.first() != visits.last() {
            return Err(FrlpError::InvalidArgument("a cycle must end where it starts".into()));
        }
        let mut legs = Vec::with_capacity(visits.len() - 1);
        for w in visits.windows(2) {
            let len = network.arc_length(w[0], w[1]).ok_or_else(|| {
                FrlpError::InvalidArgument(format!(
                    "no edge {} -> {}",
                    network.name(w[0]),
                    network.name(w[1])
                ))
            })?;
            legs.push(len);
        }
        let length = legs.iter().sum();
        Ok(Route {
            kind,
            visits,
            legs,
            length,
        })
    }

    /// One period of the repeated journey: node at each position and the leg leaving it.
    /// A path is unfolded into its out-and-back round trip.
    pub fn period(&self) -> (Vec<NodeId>, Vec<f64>) {
        match self.kind {
            RouteKind::Cycle => {
                let m = self.visits.len() - 1;
                (self.visits[..m].to_vec(), self.legs.clone())
            }
            RouteKind::Path => {
                let k = self.visits.len() - 1;
                let mut nodes = self.visits.clone();
                nodes.extend(self.visits[1..k].iter().rev());
                let mut legs = self.legs.clone();
                legs.extend(self.legs.iter().rev());
                (nodes, legs)
            }
        }
    }

    /// The closed walk actually driven: cycles unchanged, paths as `p ++ reverse(p)`.
    pub fn as_cycle(&self) -> Route {
        match self.kind {
            RouteKind::Cycle => self.clone(),
            RouteKind::Path => {
                let (mut nodes, legs) = self.period();
                nodes.push(nodes[0]);
                Route {
                    kind: RouteKind::Cycle,
                    visits: nodes,
                    length: legs.iter().sum(),
                    legs,
                }
            }
        }
    }

    pub fn node_set(&self, universe: usize) -> NodeSet {
        NodeSet::from_nodes(universe, self.visits.iter().copied())
    }

    pub fn display<'a>(&'a self, network: &'a Network) -> impl fmt::Display + 'a {
        DisplayRoute { route: self, network }
    }
}

struct DisplayRoute<'a> {
    route: &'a Route,
    network: &'a Network,
}

impl fmt::Display for DisplayRoute<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.network.format_nodes(&self.route.visits))
    }
}

/// Whether the route can be driven forever with stations at `stations`.
///
/// Every gap between consecutive station visits over one period (wrapping
/// around) must be at most `range`.
pub fn is_traversable(route: &Route, stations: &NodeSet, range: f64) -> bool {
    let (nodes, legs) = route.period();
    let mut first: Option<f64> = None;
    let mut last = 0.0;
    let mut pos = 0.0;
    for (i, &j) in nodes.iter().enumerate() {
        if stations.contains(j) {
            match first {
                None => first = Some(pos),
                Some(_) => {
                    if pos - last > range + DIST_TOL {
                        return false;
                    }
                }
            }
            last = pos;
        }
        pos += legs[i];
    }
    match first {
        None => false,
        Some(f) => pos - last + f <= range + DIST_TOL,
    }
}

/// Length of the shortest admissible route: `dist(o,t)` or `dist(o,t) + dist(t,o)`.
pub fn shortest_route_length(dist: &DistanceMatrix, origin: NodeId, dest: NodeId, variant: Variant) -> f64 {
    match variant {
        Variant::Original => dist.get(origin, dest),
        Variant::Cyclic => dist.get(origin, dest) + dist.get(dest, origin),
    }
}

/// Deviation budget τ of demand `q`.
pub fn route_budget(instance: &Instance, q: usize, variant: Variant) -> Result<f64> {
    route_budget_with(instance, &instance.network.distances(), q, variant)
}

pub fn route_budget_with(instance: &Instance, dist: &DistanceMatrix, q: usize, variant: Variant) -> Result<f64> {
    let demand = demand(instance, q)?;
    let alpha = match demand.routes {
        RouteSpec::Deviation { alpha } => alpha,
        _ => {
            return Err(FrlpError::InvalidArgument(format!(
                "demand {q} has no deviation factor"
            )))
        }
    };
    let base = shortest_route_length(dist, demand.origin, demand.destination, variant);
    if !base.is_finite() {
        return Err(FrlpError::NoRoute { demand: q });
    }
    Ok(alpha * base)
}

fn demand(instance: &Instance, q: usize) -> Result<&crate::network::Demand> {
    instance
        .demands
        .get(q)
        .ok_or_else(|| FrlpError::InvalidArgument(format!("no demand with index {q}")))
}

/// Admissible routes of demand `q` under `variant`, with the default overflow cap.
pub fn enumerate_routes(instance: &Instance, q: usize, variant: Variant) -> Result<Vec<Route>> {
    enumerate_routes_with(instance, &instance.network.distances(), q, variant, DEFAULT_ROUTE_CAP)
}

/// Admissible routes of demand `q`.
///
/// Deviation demands yield every walk (original) or closed walk through the
/// destination (cyclic) of length at most τ. On undirected networks a cycle
/// and its reversal are reported once, keeping the lexicographically smaller
/// visit sequence. Explicit routes are returned as given.
pub fn enumerate_routes_with(
    instance: &Instance,
    dist: &DistanceMatrix,
    q: usize,
    variant: Variant,
    cap: usize,
) -> Result<Vec<Route>> {
    let d = demand(instance, q)?;
    let net = &instance.network;
    match &d.routes {
        RouteSpec::Explicit(list) => {
            let mut out = Vec::with_capacity(list.len());
            for visits in list {
                let kind = if *visits.last().unwrap() == d.destination {
                    RouteKind::Path
                } else {
                    RouteKind::Cycle
                };
                if kind == RouteKind::Cycle && variant == Variant::Original {
                    return Err(FrlpError::InvalidArgument(format!(
                        "demand {q}: explicit cycle {} cannot be used by the original variant",
                        net.format_nodes(visits)
                    )));
                }
                out.push(Route::new(net, kind, visits.clone())?);
            }
            Ok(out)
        }
        RouteSpec::Covering(_) => Err(FrlpError::InvalidArgument(format!(
            "demand {q} is given by a covering family and has no route list"
        ))),
        RouteSpec::Deviation { .. } => {
            let tau = route_budget_with(instance, dist, q, variant)?;
            let mut walker = Walker {
                net,
                dist,
                origin: d.origin,
                dest: d.destination,
                tau,
                variant,
                cap,
                q,
                dedup: variant == Variant::Cyclic && !net.has_directed_edges(),
                stack: vec![d.origin],
                legs: Vec::new(),
                out: Vec::new(),
            };
            walker.walk(0.0, false)?;
            Ok(walker.out)
        }
    }
}

struct Walker<'a> {
    net: &'a Network,
    dist: &'a DistanceMatrix,
    origin: NodeId,
    dest: NodeId,
    tau: f64,
    variant: Variant,
    cap: usize,
    q: usize,
    dedup: bool,
    stack: Vec<NodeId>,
    legs: Vec<f64>,
    out: Vec<Route>,
}

impl Walker<'_> {
    fn walk(&mut self, len: f64, seen_dest: bool) -> Result<()> {
        let cur = *self.stack.last().unwrap();
        if self.stack.len() > 1 {
            match self.variant {
                Variant::Original if cur == self.dest => self.record(RouteKind::Path, len)?,
                Variant::Cyclic if cur == self.origin && seen_dest => self.record(RouteKind::Cycle, len)?,
                _ => {}
            }
        }
        for arc in self.net.arcs_from(cur) {
            let next_len = len + arc.length;
            let next_seen = seen_dest || arc.to == self.dest;
            if next_len + self.remaining(arc.to, next_seen) > self.tau + DIST_TOL {
                continue;
            }
            self.stack.push(arc.to);
            self.legs.push(arc.length);
            self.walk(next_len, next_seen)?;
            self.stack.pop();
            self.legs.pop();
        }
        Ok(())
    }

    fn remaining(&self, at: NodeId, seen_dest: bool) -> f64 {
        match self.variant {
            Variant::Original => self.dist.get(at, self.dest),
            Variant::Cyclic if seen_dest => self.dist.get(at, self.origin),
            Variant::Cyclic => self.dist.get(at, self.dest) + self.dist.get(self.dest, self.origin),
        }
    }

    fn record(&mut self, kind: RouteKind, len: f64) -> Result<()> {
        if self.dedup && self.stack.iter().rev().lt(self.stack.iter()) {
            return Ok(());
        }
        if self.out.len() >= self.cap {
            return Err(FrlpError::EnumerationOverflow {
                demand: self.q,
                cap: self.cap,
            });
        }
        self.out.push(Route {
            kind,
            visits: self.stack.clone(),
            legs: self.legs.clone(),
            length: len,
        });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Demand, Edge, PlacementConstraints};

    const D: f64 = 12.0;

    fn fig7(variant: Variant) -> Instance {
        let e = |u: usize, v: usize, l: f64| Edge {
            u,
            v,
            length: l,
            directed: false,
        };
        let network = Network::with_numbered_nodes(
            4,
            vec![e(0, 1, D / 3.0), e(0, 2, D / 4.0), e(1, 2, D / 4.0), e(0, 3, D / 3.0), e(1, 3, D / 3.0)],
        )
        .unwrap();
        Instance {
            network,
            demands: vec![Demand {
                origin: 0,
                destination: 1,
                volume: 1.0,
                routes: RouteSpec::Deviation { alpha: 1.5 },
            }],
            range: D,
            placement: PlacementConstraints::default(),
            variant,
        }
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn budgets_on_fig7() {
        let inst = fig7(Variant::Cyclic);
        assert!(close(route_budget(&inst, 0, Variant::Cyclic).unwrap(), D));
        assert!(close(route_budget(&inst, 0, Variant::Original).unwrap(), D / 2.0));
    }

    #[test]
    fn line_budget_alpha_one() {
        let net = Network::with_numbered_nodes(
            2,
            vec![Edge {
                u: 0,
                v: 1,
                length: 7.0,
                directed: false,
            }],
        )
        .unwrap();
        let inst = Instance {
            network: net,
            demands: vec![Demand {
                origin: 0,
                destination: 1,
                volume: 1.0,
                routes: RouteSpec::Deviation { alpha: 1.0 },
            }],
            range: 10.0,
            placement: PlacementConstraints::default(),
            variant: Variant::Original,
        };
        assert_eq!(route_budget(&inst, 0, Variant::Original).unwrap(), 7.0);
    }

    #[test]
    fn unreachable_destination_has_no_budget() {
        let mut inst = fig7(Variant::Original);
        inst.network = Network::with_numbered_nodes(2, vec![]).unwrap();
        assert!(matches!(
            route_budget(&inst, 0, Variant::Original),
            Err(FrlpError::NoRoute { demand: 0 })
        ));
    }

    #[test]
    fn table1_paths() {
        let inst = fig7(Variant::Original);
        let routes = enumerate_routes(&inst, 0, Variant::Original).unwrap();
        let got: Vec<(Vec<usize>, f64)> = routes.iter().map(|r| (r.visits.clone(), r.length)).collect();
        assert_eq!(got.len(), 2);
        assert_eq!(got[0].0, vec![0, 1]);
        assert!(close(got[0].1, D / 3.0));
        assert_eq!(got[1].0, vec![0, 2, 1]);
        assert!(close(got[1].1, D / 2.0));
    }

    #[test]
    fn table2_cycles() {
        let inst = fig7(Variant::Cyclic);
        let routes = enumerate_routes(&inst, 0, Variant::Cyclic).unwrap();
        let mut got: Vec<(Vec<usize>, f64)> = routes.iter().map(|r| (r.visits.clone(), r.length)).collect();
        got.sort_by(|a, b| a.0.cmp(&b.0));
        let want = [
            (vec![0, 1, 0], 2.0 * D / 3.0),
            (vec![0, 1, 2, 0], 5.0 * D / 6.0),
            (vec![0, 1, 3, 0], D),
            (vec![0, 2, 1, 2, 0], D),
        ];
        assert_eq!(got.len(), want.len());
        for ((gv, gl), (wv, wl)) in got.iter().zip(want.iter()) {
            assert_eq!(gv, wv);
            assert!(close(*gl, *wl));
        }
    }

    #[test]
    fn explicit_routes_pass_through() {
        let mut inst = fig7(Variant::Original);
        inst.demands[0].routes = RouteSpec::Explicit(vec![vec![0, 3, 1]]);
        let routes = enumerate_routes(&inst, 0, Variant::Original).unwrap();
        assert_eq!(routes.len(), 1);
        assert_eq!(routes[0].visits, vec![0, 3, 1]);
        assert_eq!(routes[0].kind, RouteKind::Path);
    }

    #[test]
    fn overflow_guard_names_demand() {
        let inst = fig7(Variant::Cyclic);
        let err = enumerate_routes_with(&inst, &inst.network.distances(), 0, Variant::Cyclic, 2).unwrap_err();
        assert!(matches!(err, FrlpError::EnumerationOverflow { demand: 0, cap: 2 }));
    }

    #[test]
    fn example3_traversability() {
        let inst = fig7(Variant::Cyclic);
        let net = &inst.network;
        let s4 = NodeSet::from_nodes(4, [3]);
        let cycle = Route::new(net, RouteKind::Cycle, vec![0, 1, 3, 0]).unwrap();
        assert!(is_traversable(&cycle, &s4, D));
        let path = Route::new(net, RouteKind::Path, vec![0, 1]).unwrap();
        assert!(!is_traversable(&path, &s4, D));
        assert!(!is_traversable(&cycle, &NodeSet::empty(4), D));
    }

    #[test]
    fn path_equals_its_round_trip() {
        let inst = fig7(Variant::Original);
        let net = &inst.network;
        let path = Route::new(net, RouteKind::Path, vec![0, 2, 1]).unwrap();
        let cyc = Route::new(net, RouteKind::Cycle, vec![0, 2, 1, 2, 0]).unwrap();
        assert_eq!(path.as_cycle(), cyc);
        for mask in 0..16u64 {
            let s = NodeSet::from_mask(4, mask);
            assert_eq!(is_traversable(&path, &s, D), is_traversable(&cyc, &s, D));
        }
    }

    #[test]
    fn single_station_needs_whole_period_within_range() {
        let inst = fig7(Variant::Cyclic);
        let cyc = Route::new(&inst.network, RouteKind::Cycle, vec![0, 1, 0]).unwrap();
        let s = NodeSet::from_nodes(4, [0]);
        assert!(is_traversable(&cyc, &s, 2.0 * D / 3.0));
        assert!(!is_traversable(&cyc, &s, 2.0 * D / 3.0 - 1e-6));
    }
}
