//! Servedness of a demand under a fixed station set, with a witness route.
//!
//! The cyclic variant runs a best-first labeling search for a closed walk that
//! can be repeated forever. The original variant reduces to a shortest path
//! over the stations, departing half charged and arriving half charged.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use crate::covering::CutSetFamily;
use crate::error::{FrlpError, Result};
use crate::network::{DistanceMatrix, Instance, Network, NodeId, RouteSpec, Variant, DIST_TOL};
use crate::nodeset::NodeSet;
use crate::routes::{is_traversable, route_budget_with, Route, RouteKind};

/// Resource state of a partial walk from the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Label {
    pub delta_charge: bool,
    pub delta_dest: bool,
    pub l_start: f64,
    /// Distance since the last station (equals `l_start` before any station).
    pub l_charge: f64,
    /// Distance from the origin to the first station; infinite before any station.
    pub gamma_end: f64,
    pub node: NodeId,
    pub parent: Option<usize>,
}

impl Label {
    pub fn tuple(&self) -> (u8, u8, f64, f64, f64) {
        (
            self.delta_charge as u8,
            self.delta_dest as u8,
            self.l_start,
            self.l_charge,
            self.gamma_end,
        )
    }

    fn same_state(&self, other: &Label) -> bool {
        self.tuple() == other.tuple()
    }

    /// `self` is at least as good as `other` in every resource.
    fn dominates(&self, other: &Label) -> bool {
        self.delta_dest >= other.delta_dest
            && self.l_start <= other.l_start
            && self.l_charge <= other.l_charge
            && self.gamma_end <= other.gamma_end
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = if self.gamma_end.is_infinite() {
            "inf".to_string()
        } else {
            fmt_num(self.gamma_end)
        };
        write!(
            f,
            "({}, {}, {}, {}, {})",
            self.delta_charge as u8,
            self.delta_dest as u8,
            fmt_num(self.l_start),
            fmt_num(self.l_charge),
            g
        )
    }
}

fn fmt_num(v: f64) -> String {
    if (v - v.round()).abs() < 1e-9 {
        format!("{}", v.round())
    } else {
        format!("{v:.4}")
    }
}

/// Fixed parameters of a label extension.
#[derive(Debug, Clone, Copy)]
pub struct Resources<'a> {
    pub stations: &'a NodeSet,
    pub destination: NodeId,
    pub range: f64,
    pub tau: f64,
}

/// Extends `label` along the arc to `to` of length `length`, or `None` when
/// the walk budget or the battery would be exceeded.
pub fn extend_label(label: &Label, to: NodeId, length: f64, res: &Resources) -> Option<Label> {
    if label.l_start + length > res.tau + DIST_TOL || label.l_charge + length > res.range + DIST_TOL {
        return None;
    }
    let station = res.stations.contains(to);
    let l_start = label.l_start + length;
    Some(Label {
        delta_charge: label.delta_charge || station,
        delta_dest: label.delta_dest || to == res.destination,
        l_start,
        l_charge: if station { 0.0 } else { label.l_charge + length },
        gamma_end: if !label.delta_charge && station {
            l_start
        } else {
            label.gamma_end
        },
        node: to,
        parent: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub dominance: bool,
    pub trace: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            dominance: true,
            trace: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CycleQuery<'a> {
    pub network: &'a Network,
    pub dist: &'a DistanceMatrix,
    pub origin: NodeId,
    pub destination: NodeId,
    pub stations: &'a NodeSet,
    pub range: f64,
    pub tau: f64,
    pub options: SearchOptions,
}

/// One extraction of the labeling search.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub label: Label,
    /// Labels created by extending this one and kept in the frontier.
    pub created: Vec<Label>,
    /// The extracted label closed the cycle into the sink.
    pub sink: bool,
}

#[derive(Debug, Clone)]
pub struct CycleSearch {
    pub witness: Option<Route>,
    pub sink_label: Option<Label>,
    pub trace: Vec<TraceStep>,
    pub labels_created: usize,
}

struct Entry {
    score: f64,
    seq: usize,
    idx: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    // reversed: BinaryHeap is a max-heap, we pop the smallest score, oldest first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .score
            .total_cmp(&self.score)
            .then(other.seq.cmp(&self.seq))
    }
}

/// Searches for a repeatable closed walk from the origin through the
/// destination of length at most τ.
pub fn find_traversable_cycle(query: &CycleQuery) -> CycleSearch {
    let q = query;
    let res = Resources {
        stations: q.stations,
        destination: q.destination,
        range: q.range,
        tau: q.tau,
    };
    let score = |l: &Label| {
        if l.delta_dest {
            q.dist.get(l.node, q.origin)
        } else {
            q.dist.get(l.node, q.destination) + q.dist.get(q.destination, q.origin)
        }
    };

    let mut arena: Vec<Label> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut at_node: HashMap<NodeId, Vec<usize>> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    let mut trace = Vec::new();

    let seed = if q.stations.contains(q.origin) {
        Label {
            delta_charge: true,
            delta_dest: false,
            l_start: 0.0,
            l_charge: 0.0,
            gamma_end: 0.0,
            node: q.origin,
            parent: None,
        }
    } else {
        Label {
            delta_charge: false,
            delta_dest: false,
            l_start: 0.0,
            l_charge: 0.0,
            gamma_end: f64::INFINITY,
            node: q.origin,
            parent: None,
        }
    };
    arena.push(seed);
    alive.push(true);
    at_node.entry(q.origin).or_default().push(0);
    heap.push(Entry {
        score: score(&seed),
        seq,
        idx: 0,
    });
    seq += 1;

    while let Some(Entry { idx, .. }) = heap.pop() {
        if !alive[idx] {
            continue;
        }
        alive[idx] = false;
        let label = arena[idx];
        if label.node == q.origin && label.delta_dest && label.l_charge + label.gamma_end <= q.range + DIST_TOL {
            if q.options.trace {
                trace.push(TraceStep {
                    label,
                    created: Vec::new(),
                    sink: true,
                });
            }
            let mut visits = vec![label.node];
            let mut cur = label.parent;
            while let Some(p) = cur {
                visits.push(arena[p].node);
                cur = arena[p].parent;
            }
            visits.reverse();
            let witness = Route::new(q.network, RouteKind::Cycle, visits).ok();
            return CycleSearch {
                witness,
                sink_label: Some(label),
                trace,
                labels_created: arena.len(),
            };
        }
        let mut created = Vec::new();
        for arc in q.network.arcs_from(label.node) {
            let Some(mut next) = extend_label(&label, arc.to, arc.length, &res) else {
                continue;
            };
            next.parent = Some(idx);
            let bucket = at_node.entry(arc.to).or_default();
            if q.options.dominance {
                if bucket.iter().any(|&m| arena[m].dominates(&next)) {
                    continue;
                }
                for &m in bucket.iter() {
                    if alive[m] && next.dominates(&arena[m]) {
                        alive[m] = false;
                    }
                }
            } else if bucket.iter().any(|&m| arena[m].same_state(&next)) {
                continue;
            }
            let ni = arena.len();
            arena.push(next);
            alive.push(true);
            bucket.push(ni);
            heap.push(Entry {
                score: score(&next),
                seq,
                idx: ni,
            });
            seq += 1;
            if q.options.trace {
                created.push(next);
            }
        }
        if q.options.trace {
            trace.push(TraceStep {
                label,
                created,
                sink: false,
            });
        }
    }
    CycleSearch {
        witness: None,
        sink_label: None,
        trace,
        labels_created: arena.len(),
    }
}

/// Searches for an origin-destination walk of length at most `tau_path` whose
/// round trip is repeatable: the first station within `range/2` of the origin,
/// consecutive stations within `range`, the last within `range/2` of the destination.
pub fn find_traversable_path(
    network: &Network,
    dist: &DistanceMatrix,
    origin: NodeId,
    destination: NodeId,
    stations: &NodeSet,
    range: f64,
    tau_path: f64,
) -> Option<Route> {
    let half = range / 2.0 + DIST_TOL;
    let full = range + DIST_TOL;
    let hubs: Vec<NodeId> = stations.iter().collect();
    let k = hubs.len();
    // Dijkstra over hubs; the source is the origin, the target the destination.
    let mut best = vec![f64::INFINITY; k];
    let mut prev: Vec<Option<usize>> = vec![None; k];
    let mut done = vec![false; k];
    for (i, &s) in hubs.iter().enumerate() {
        let c = dist.get(origin, s);
        if s == origin || c <= half {
            best[i] = if s == origin { 0.0 } else { c };
        }
    }
    let mut end: Option<(f64, usize)> = None;
    loop {
        let mut pick = None;
        for i in 0..k {
            if !done[i] && best[i].is_finite() && pick.is_none_or(|p: usize| best[i] < best[p]) {
                pick = Some(i);
            }
        }
        let Some(i) = pick else { break };
        done[i] = true;
        let s = hubs[i];
        let to_dest = if s == destination { 0.0 } else { dist.get(s, destination) };
        if s == destination || to_dest <= half {
            let total = best[i] + to_dest;
            if end.is_none_or(|(t, _)| total < t) {
                end = Some((total, i));
            }
        }
        for j in 0..k {
            if done[j] {
                continue;
            }
            let c = dist.get(s, hubs[j]);
            if c <= full && best[i] + c < best[j] {
                best[j] = best[i] + c;
                prev[j] = Some(i);
            }
        }
    }
    let (total, last) = end?;
    if total > tau_path + DIST_TOL {
        return None;
    }
    let mut chain = vec![last];
    while let Some(p) = prev[*chain.last().unwrap()] {
        chain.push(p);
    }
    chain.reverse();
    let mut waypoints = vec![origin];
    waypoints.extend(chain.iter().map(|&i| hubs[i]));
    waypoints.push(destination);
    let mut visits = vec![origin];
    for w in waypoints.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let leg = dist.path(w[0], w[1])?;
        visits.extend_from_slice(&leg[1..]);
    }
    Route::new(network, RouteKind::Path, visits).ok()
}

enum Check {
    Deviation { tau: f64 },
    Routes(Vec<Route>),
    Covering(CutSetFamily),
}

/// Reusable servedness checker for every demand of an instance under one variant.
pub struct ServiceChecker<'a> {
    instance: &'a Instance,
    dist: DistanceMatrix,
    variant: Variant,
    checks: Vec<Check>,
    pub options: SearchOptions,
}

impl<'a> ServiceChecker<'a> {
    pub fn new(instance: &'a Instance, variant: Variant) -> Result<Self> {
        let dist = instance.network.distances();
        let mut checks = Vec::with_capacity(instance.demands.len());
        for (q, d) in instance.demands.iter().enumerate() {
            checks.push(match &d.routes {
                RouteSpec::Deviation { .. } => Check::Deviation {
                    tau: route_budget_with(instance, &dist, q, variant)?,
                },
                RouteSpec::Explicit(_) => {
                    Check::Routes(crate::routes::enumerate_routes_with(instance, &dist, q, variant, usize::MAX)?)
                }
                RouteSpec::Covering(sets) => Check::Covering(CutSetFamily::new(
                    sets.clone(),
                    crate::covering::FamilyOrigin::Aggregated,
                )),
            });
        }
        Ok(ServiceChecker {
            instance,
            dist,
            variant,
            checks,
            options: SearchOptions::default(),
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn instance(&self) -> &Instance {
        self.instance
    }

    pub fn distances(&self) -> &DistanceMatrix {
        &self.dist
    }

    /// Deviation budget of demand `q`, if it has one.
    pub fn tau(&self, q: usize) -> Option<f64> {
        match self.checks[q] {
            Check::Deviation { tau } => Some(tau),
            _ => None,
        }
    }

    pub fn is_served(&self, q: usize, stations: &NodeSet) -> bool {
        match &self.checks[q] {
            Check::Covering(fam) => fam.hits_all(stations),
            Check::Routes(routes) => routes
                .iter()
                .any(|r| is_traversable(r, stations, self.instance.range)),
            Check::Deviation { .. } => self.witness(q, stations).is_some(),
        }
    }

    /// A traversable route serving demand `q`. Covering-only demands have no route to show.
    pub fn witness(&self, q: usize, stations: &NodeSet) -> Option<Route> {
        let d = &self.instance.demands[q];
        match &self.checks[q] {
            Check::Covering(_) => None,
            Check::Routes(routes) => routes
                .iter()
                .find(|r| is_traversable(r, stations, self.instance.range))
                .cloned(),
            Check::Deviation { tau } => match self.variant {
                Variant::Cyclic => {
                    find_traversable_cycle(&CycleQuery {
                        network: &self.instance.network,
                        dist: &self.dist,
                        origin: d.origin,
                        destination: d.destination,
                        stations,
                        range: self.instance.range,
                        tau: *tau,
                        options: SearchOptions {
                            trace: false,
                            ..self.options
                        },
                    })
                    .witness
                }
                Variant::Original => find_traversable_path(
                    &self.instance.network,
                    &self.dist,
                    d.origin,
                    d.destination,
                    stations,
                    self.instance.range,
                    *tau,
                ),
            },
        }
    }

    /// Labeling search with the given options; cyclic deviation demands only.
    pub fn cycle_search(&self, q: usize, stations: &NodeSet, options: SearchOptions) -> Result<CycleSearch> {
        let tau = self.tau(q).ok_or_else(|| {
            FrlpError::InvalidArgument(format!("demand {q} has no deviation budget to search"))
        })?;
        let d = &self.instance.demands[q];
        Ok(find_traversable_cycle(&CycleQuery {
            network: &self.instance.network,
            dist: &self.dist,
            origin: d.origin,
            destination: d.destination,
            stations,
            range: self.instance.range,
            tau,
            options,
        }))
    }
}

/// One-shot servedness verdict.
pub fn is_served(instance: &Instance, q: usize, stations: &NodeSet, variant: Variant) -> Result<bool> {
    Ok(ServiceChecker::new(instance, variant)?.is_served(q, stations))
}
