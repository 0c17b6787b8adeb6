//! Graph and instance model, the JSON instance format, validation and
//! shortest-path services.

use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::cmp::Reverse;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FrlpError, Result};
use crate::nodeset::NodeSet;

/// Dense 0-based node index.
pub type NodeId = usize;

/// Absolute tolerance for every distance comparison (range, budgets, gaps).
pub const DIST_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Symmetric routing: the same path is used outbound and inbound.
    Original,
    /// Outbound and inbound paths may differ; a demand needs a repeatable closed walk.
    Cyclic,
}

impl Default for Variant {
    fn default() -> Self {
        Variant::Original
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Original => "original",
            Variant::Cyclic => "cyclic",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = FrlpError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original" => Ok(Variant::Original),
            "cyclic" => Ok(Variant::Cyclic),
            other => Err(FrlpError::InvalidArgument(format!(
                "unknown variant '{other}' (expected original|cyclic)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub length: f64,
    pub directed: bool,
}

/// Outgoing arc in the adjacency structure. Parallel edges collapse to the shortest one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub to: NodeId,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    names: Vec<String>,
    edges: Vec<Edge>,
    out: Vec<Vec<Arc>>,
}

impl Network {
    /// Builds a network over `names.len()` nodes. Edge ids outside the node range are rejected;
    /// other invariants (positive lengths, no self-loops) are reported by [`Instance::validate`].
    pub fn new(names: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let n = names.len();
        for e in &edges {
            for end in [e.u, e.v] {
                if end >= n {
                    return Err(FrlpError::UnknownNode(end.to_string()));
                }
            }
        }
        let mut best: Vec<HashMap<NodeId, f64>> = vec![HashMap::new(); n];
        let mut put = |a: NodeId, b: NodeId, len: f64| {
            let slot = best[a].entry(b).or_insert(len);
            if len < *slot {
                *slot = len;
            }
        };
        for e in &edges {
            put(e.u, e.v, e.length);
            if !e.directed {
                put(e.v, e.u, e.length);
            }
        }
        let out = best
            .into_iter()
            .map(|m| {
                let mut arcs: Vec<Arc> = m.into_iter().map(|(to, length)| Arc { to, length }).collect();
                arcs.sort_by_key(|a| a.to);
                arcs
            })
            .collect();
        Ok(Network { names, edges, out })
    }

    /// Network with nodes named "1".."n".
    pub fn with_numbered_nodes(n: usize, edges: Vec<Edge>) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, node: NodeId) -> &str {
        &self.names[node]
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn arcs_from(&self, node: NodeId) -> &[Arc] {
        &self.out[node]
    }

    pub fn arc_length(&self, from: NodeId, to: NodeId) -> Option<f64> {
        self.out
            .get(from)?
            .iter()
            .find(|a| a.to == to)
            .map(|a| a.length)
    }

    pub fn has_directed_edges(&self) -> bool {
        self.edges.iter().any(|e| e.directed)
    }

    pub fn format_nodes(&self, nodes: &[NodeId]) -> String {
        let parts: Vec<&str> = nodes.iter().map(|&j| self.name(j)).collect();
        format!("({})", parts.join(", "))
    }

    pub fn format_set(&self, set: &NodeSet) -> String {
        let parts: Vec<&str> = set.iter().map(|j| self.name(j)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// All-pairs shortest distances respecting edge directions.
    pub fn distances(&self) -> DistanceMatrix {
        DistanceMatrix::compute(self)
    }
}

/// Shortest distance between two nodes via Dijkstra. `None` means unreachable.
///
/// With `direction_aware = false` every edge is treated as two-way.
pub fn shortest_distance(
    network: &Network,
    from: NodeId,
    to: NodeId,
    direction_aware: bool,
) -> Result<Option<f64>> {
    let n = network.node_count();
    for node in [from, to] {
        if node >= n {
            return Err(FrlpError::UnknownNode(node.to_string()));
        }
    }
    let mut adj: Vec<Vec<Arc>> = (0..n).map(|j| network.arcs_from(j).to_vec()).collect();
    if !direction_aware {
        for e in network.edges().iter().filter(|e| e.directed) {
            adj[e.v].push(Arc {
                to: e.u,
                length: e.length,
            });
        }
    }
    let mut dist = vec![f64::INFINITY; n];
    dist[from] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(Key(0.0, from)));
    while let Some(Reverse(Key(d, j))) = heap.pop() {
        if d > dist[j] {
            continue;
        }
        if j == to {
            return Ok(Some(d));
        }
        for arc in &adj[j] {
            let nd = d + arc.length;
            if nd < dist[arc.to] {
                dist[arc.to] = nd;
                heap.push(Reverse(Key(nd, arc.to)));
            }
        }
    }
    Ok(None)
}

#[derive(PartialEq)]
struct Key(f64, usize);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Direction-aware all-pairs distances with next-hop reconstruction.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<f64>,
    next: Vec<usize>,
}

impl DistanceMatrix {
    pub fn compute(network: &Network) -> Self {
        let n = network.node_count();
        let mut dist = vec![f64::INFINITY; n * n];
        let mut next = vec![usize::MAX; n * n];
        for j in 0..n {
            dist[j * n + j] = 0.0;
            next[j * n + j] = j;
            for arc in network.arcs_from(j) {
                if arc.to != j && arc.length < dist[j * n + arc.to] {
                    dist[j * n + arc.to] = arc.length;
                    next[j * n + arc.to] = arc.to;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                let dik = dist[i * n + k];
                if dik.is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let cand = dik + dist[k * n + j];
                    if cand < dist[i * n + j] {
                        dist[i * n + j] = cand;
                        next[i * n + j] = next[i * n + k];
                    }
                }
            }
        }
        DistanceMatrix { n, dist, next }
    }

    /// Shortest distance, `f64::INFINITY` when unreachable.
    pub fn get(&self, from: NodeId, to: NodeId) -> f64 {
        self.dist[from * self.n + to]
    }

    pub fn reachable(&self, from: NodeId, to: NodeId) -> bool {
        self.get(from, to).is_finite()
    }

    /// Node sequence of a shortest path, endpoints included.
    pub fn path(&self, from: NodeId, to: NodeId) -> Option<Vec<NodeId>> {
        if !self.reachable(from, to) {
            return None;
        }
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            cur = self.next[cur * self.n + to];
            path.push(cur);
        }
        Some(path)
    }
}

/// How a demand's admissible routes are defined.
#[derive(Debug, Clone, PartialEq)]
pub enum RouteSpec {
    /// All walks (or closed walks) within `alpha` times the shortest one.
    Deviation { alpha: f64 },
    /// A fixed list of node sequences.
    Explicit(Vec<Vec<NodeId>>),
    /// Servedness given directly by a covering family: served iff every set holds a station.
    Covering(Vec<NodeSet>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Demand {
    pub origin: NodeId,
    pub destination: NodeId,
    pub volume: f64,
    pub routes: RouteSpec,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlacementConstraints {
    pub budget: Option<usize>,
    pub forced_open: BTreeSet<NodeId>,
    pub forced_closed: BTreeSet<NodeId>,
}

impl PlacementConstraints {
    /// Whether a station set respects the budget and the fixings.
    pub fn admits(&self, stations: &NodeSet) -> bool {
        self.budget.is_none_or(|b| stations.len() <= b)
            && self.forced_open.iter().all(|&j| stations.contains(j))
            && self.forced_closed.iter().all(|&j| !stations.contains(j))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub network: Network,
    pub demands: Vec<Demand>,
    pub range: f64,
    pub placement: PlacementConstraints,
    pub variant: Variant,
}

/// A single broken invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonPositiveRange(f64),
    NonPositiveLength { edge: usize, length: f64 },
    SelfLoop { edge: usize, node: String },
    EdgeLongerThanRange { edge: usize, length: f64, range: f64 },
    SameEndpoints { demand: usize, node: String },
    InvalidAlpha { demand: usize, alpha: f64 },
    InvalidVolume { demand: usize, volume: f64 },
    EmptyRouteSet { demand: usize },
    InvalidRoute { demand: usize, route: usize, reason: String },
    EmptyCutSet { demand: usize },
    UnknownPlacementNode { node: usize },
    ForcedConflict { nodes: Vec<String> },
    ForcedOpenOverBudget { open: usize, budget: usize },
    DirectedEdgeInOriginal { edge: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositiveRange(r) => write!(f, "range must be positive, got {r}"),
            Violation::NonPositiveLength { edge, length } => {
                write!(f, "edges[{edge}]: length must be positive, got {length}")
            }
            Violation::SelfLoop { edge, node } => write!(f, "edges[{edge}]: self-loop at node {node}"),
            Violation::EdgeLongerThanRange { edge, length, range } => {
                write!(f, "edges[{edge}]: length {length} exceeds the range {range}")
            }
            Violation::SameEndpoints { demand, node } => {
                write!(f, "demands[{demand}]: origin equals destination ({node})")
            }
            Violation::InvalidAlpha { demand, alpha } => {
                write!(f, "demands[{demand}]: alpha must be >= 1, got {alpha}")
            }
            Violation::InvalidVolume { demand, volume } => {
                write!(f, "demands[{demand}]: volume must be finite and nonnegative, got {volume}")
            }
            Violation::EmptyRouteSet { demand } => write!(f, "demands[{demand}]: empty route set"),
            Violation::InvalidRoute { demand, route, reason } => {
                write!(f, "demands[{demand}].routes[{route}]: {reason}")
            }
            Violation::EmptyCutSet { demand } => {
                write!(f, "demands[{demand}]: covering family contains an empty set")
            }
            Violation::UnknownPlacementNode { node } => {
                write!(f, "placement: node id {node} does not exist")
            }
            Violation::ForcedConflict { nodes } => {
                write!(f, "placement: nodes forced both open and closed: {}", nodes.join(", "))
            }
            Violation::ForcedOpenOverBudget { open, budget } => {
                write!(f, "placement: {open} forced-open nodes exceed the budget {budget}")
            }
            Violation::DirectedEdgeInOriginal { edge } => {
                write!(f, "edges[{edge}]: directed edge in an original-variant instance")
            }
        }
    }
}

/// Something removed while loading because it cannot affect any feasible solution.
#[derive(Debug, Clone, PartialEq)]
pub enum PruneAction {
    LongEdge { u: String, v: String, length: f64 },
    Route { demand: usize, route: usize },
    Demand { demand: usize, origin: String, destination: String },
}

impl fmt::Display for PruneAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PruneAction::LongEdge { u, v, length } => {
                write!(f, "removed edge {u}-{v} (length {length} exceeds the range)")
            }
            PruneAction::Route { demand, route } => {
                write!(f, "removed demands[{demand}].routes[{route}] (uses a removed edge)")
            }
            PruneAction::Demand {
                demand,
                origin,
                destination,
            } => write!(f, "removed demands[{demand}] {origin}->{destination} (empty route set)"),
        }
    }
}

impl Instance {
    pub fn node_count(&self) -> usize {
        self.network.node_count()
    }

    /// Copy with every deviation demand's factor replaced by `alpha`.
    pub fn with_alpha(&self, alpha: f64) -> Instance {
        let mut out = self.clone();
        for d in &mut out.demands {
            if let RouteSpec::Deviation { alpha: a } = &mut d.routes {
                *a = alpha;
            }
        }
        out
    }

    pub fn total_volume(&self) -> f64 {
        self.demands.iter().map(|d| d.volume).sum()
    }

    /// Every invariant violation; empty iff the instance is well-formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let net = &self.network;
        let n = net.node_count();
        if !(self.range > 0.0 && self.range.is_finite()) {
            out.push(Violation::NonPositiveRange(self.range));
        }
        for (i, e) in net.edges().iter().enumerate() {
            if !(e.length > 0.0 && e.length.is_finite()) {
                out.push(Violation::NonPositiveLength {
                    edge: i,
                    length: e.length,
                });
            }
            if e.u == e.v {
                out.push(Violation::SelfLoop {
                    edge: i,
                    node: net.name(e.u).to_string(),
                });
            }
            if e.length > self.range + DIST_TOL {
                out.push(Violation::EdgeLongerThanRange {
                    edge: i,
                    length: e.length,
                    range: self.range,
                });
            }
            if e.directed && self.variant == Variant::Original {
                out.push(Violation::DirectedEdgeInOriginal { edge: i });
            }
        }
        let dist = net.distances();
        for (q, d) in self.demands.iter().enumerate() {
            if d.origin >= n || d.destination >= n {
                out.push(Violation::EmptyRouteSet { demand: q });
                continue;
            }
            if d.origin == d.destination {
                out.push(Violation::SameEndpoints {
                    demand: q,
                    node: net.name(d.origin).to_string(),
                });
            }
            if !(d.volume >= 0.0 && d.volume.is_finite()) {
                out.push(Violation::InvalidVolume {
                    demand: q,
                    volume: d.volume,
                });
            }
            match &d.routes {
                RouteSpec::Deviation { alpha } => {
                    if !(*alpha >= 1.0) || !alpha.is_finite() {
                        out.push(Violation::InvalidAlpha {
                            demand: q,
                            alpha: *alpha,
                        });
                    }
                    let reachable = match self.variant {
                        Variant::Original => dist.reachable(d.origin, d.destination),
                        Variant::Cyclic => {
                            dist.reachable(d.origin, d.destination)
                                && dist.reachable(d.destination, d.origin)
                        }
                    };
                    if !reachable {
                        out.push(Violation::EmptyRouteSet { demand: q });
                    }
                }
                RouteSpec::Explicit(routes) => {
                    if routes.is_empty() {
                        out.push(Violation::EmptyRouteSet { demand: q });
                    }
                    for (r, visits) in routes.iter().enumerate() {
                        if let Err(reason) = check_route_shape(net, d, visits) {
                            out.push(Violation::InvalidRoute {
                                demand: q,
                                route: r,
                                reason,
                            });
                        }
                    }
                }
                RouteSpec::Covering(sets) => {
                    if sets.iter().any(|s| s.is_empty()) {
                        out.push(Violation::EmptyCutSet { demand: q });
                    }
                }
            }
        }
        let p = &self.placement;
        for &j in p.forced_open.iter().chain(p.forced_closed.iter()) {
            if j >= n {
                out.push(Violation::UnknownPlacementNode { node: j });
            }
        }
        let both: Vec<String> = p
            .forced_open
            .intersection(&p.forced_closed)
            .filter(|&&j| j < n)
            .map(|&j| net.name(j).to_string())
            .collect();
        if !both.is_empty() {
            out.push(Violation::ForcedConflict { nodes: both });
        }
        if let Some(b) = p.budget {
            if p.forced_open.len() > b {
                out.push(Violation::ForcedOpenOverBudget {
                    open: p.forced_open.len(),
                    budget: b,
                });
            }
        }
        out
    }
}

/// Checks endpoints and edge existence of an explicit route. A route ending at the
/// destination is a path; one returning to the origin is a cycle and must visit the destination.
fn check_route_shape(net: &Network, demand: &Demand, visits: &[NodeId]) -> std::result::Result<(), String> {
    if visits.len() < 2 {
        return Err("a route needs at least two visits".into());
    }
    if visits.iter().any(|&j| j >= net.node_count()) {
        return Err("route references an unknown node".into());
    }
    if visits[0] != demand.origin {
        return Err("route does not start at the origin".into());
    }
    let last = *visits.last().unwrap();
    if last != demand.destination {
        if last != demand.origin || !visits.contains(&demand.destination) {
            return Err(
                "route must end at the destination, or return to the origin after visiting it".into(),
            );
        }
    }
    for w in visits.windows(2) {
        if net.arc_length(w[0], w[1]).is_none() {
            return Err(format!(
                "no edge {} -> {}",
                net.name(w[0]),
                net.name(w[1])
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// file format

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum NameRef {
    Text(String),
    Number(i64),
}

impl NameRef {
    fn text(&self) -> String {
        match self {
            NameRef::Text(s) => s.clone(),
            NameRef::Number(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    range: f64,
    #[serde(default)]
    variant: Variant,
    nodes: Vec<NameRef>,
    #[serde(default)]
    edges: Vec<RawEdge>,
    #[serde(default)]
    demands: Vec<RawDemand>,
    #[serde(default)]
    placement: RawPlacement,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    u: NameRef,
    v: NameRef,
    length: f64,
    #[serde(default, skip_serializing_if = "is_false")]
    directed: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDemand {
    origin: NameRef,
    destination: NameRef,
    volume: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    routes: Option<Vec<Vec<NameRef>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cutsets: Option<Vec<Vec<NameRef>>>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlacement {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    open: Vec<NameRef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    closed: Vec<NameRef>,
}

/// Result of [`parse_instance`]: the validated instance plus what was pruned on the way.
#[derive(Debug, Clone)]
pub struct ParsedInstance {
    pub instance: Instance,
    pub pruned: Vec<PruneAction>,
}

/// Parses and validates an instance document.
///
/// Edges longer than the range and demands left without routes are removed
/// (and reported) rather than rejected.
pub fn parse_instance(document: &str) -> Result<ParsedInstance> {
    let raw: RawInstance = serde_json::from_str(document).map_err(|e| FrlpError::Parse {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;

    let names: Vec<String> = raw.nodes.iter().map(NameRef::text).collect();
    let mut index = HashMap::new();
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(FrlpError::Parse {
                location: format!("nodes[{i}]"),
                message: format!("duplicate node name '{name}'"),
            });
        }
    }
    let lookup = |r: &NameRef, at: String| -> Result<NodeId> {
        index.get(&r.text()).copied().ok_or_else(|| FrlpError::Parse {
            location: at,
            message: format!("unknown node '{}'", r.text()),
        })
    };

    let mut pruned = Vec::new();
    let mut edges = Vec::new();
    let mut long_pairs: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    for (i, e) in raw.edges.iter().enumerate() {
        let u = lookup(&e.u, format!("edges[{i}].u"))?;
        let v = lookup(&e.v, format!("edges[{i}].v"))?;
        if e.length > raw.range + DIST_TOL {
            pruned.push(PruneAction::LongEdge {
                u: names[u].clone(),
                v: names[v].clone(),
                length: e.length,
            });
            long_pairs.insert((u, v));
            if !e.directed {
                long_pairs.insert((v, u));
            }
            continue;
        }
        edges.push(Edge {
            u,
            v,
            length: e.length,
            directed: e.directed,
        });
    }
    let network = Network::new(names.clone(), edges)?;

    let mut demands = Vec::new();
    for (q, d) in raw.demands.iter().enumerate() {
        let origin = lookup(&d.origin, format!("demands[{q}].origin"))?;
        let destination = lookup(&d.destination, format!("demands[{q}].destination"))?;
        let given = [d.alpha.is_some(), d.routes.is_some(), d.cutsets.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if given != 1 {
            return Err(FrlpError::Parse {
                location: format!("demands[{q}]"),
                message: "exactly one of 'alpha' or 'routes' must be given".into(),
            });
        }
        let routes = if let Some(alpha) = d.alpha {
            RouteSpec::Deviation { alpha }
        } else if let Some(routes) = &d.routes {
            let mut kept = Vec::new();
            for (r, visits) in routes.iter().enumerate() {
                let ids = visits
                    .iter()
                    .enumerate()
                    .map(|(k, n)| lookup(n, format!("demands[{q}].routes[{r}][{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                let uses_long = ids.windows(2).any(|w| {
                    long_pairs.contains(&(w[0], w[1])) && network.arc_length(w[0], w[1]).is_none()
                });
                if uses_long {
                    pruned.push(PruneAction::Route { demand: q, route: r });
                } else {
                    kept.push(ids);
                }
            }
            RouteSpec::Explicit(kept)
        } else {
            let sets = d.cutsets.as_ref().unwrap();
            let mut family = Vec::new();
            for (s, members) in sets.iter().enumerate() {
                let ids = members
                    .iter()
                    .enumerate()
                    .map(|(k, n)| lookup(n, format!("demands[{q}].cutsets[{s}][{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                family.push(NodeSet::from_nodes(names.len(), ids));
            }
            RouteSpec::Covering(family)
        };
        demands.push(Demand {
            origin,
            destination,
            volume: d.volume,
            routes,
        });
    }

    let mut placement = PlacementConstraints {
        budget: raw.placement.budget,
        ..Default::default()
    };
    for (k, n) in raw.placement.open.iter().enumerate() {
        placement.forced_open.insert(lookup(n, format!("placement.open[{k}]"))?);
    }
    for (k, n) in raw.placement.closed.iter().enumerate() {
        placement.forced_closed.insert(lookup(n, format!("placement.closed[{k}]"))?);
    }

    let mut instance = Instance {
        network,
        demands,
        range: raw.range,
        placement,
        variant: raw.variant,
    };

    // Demands whose route set became (or was) empty are dropped, as long as
    // the emptiness is not caused by a malformed route.
    let violations = instance.validate();
    let droppable: BTreeSet<usize> = violations
        .iter()
        .filter_map(|v| match v {
            Violation::EmptyRouteSet { demand } => Some(*demand),
            _ => None,
        })
        .collect();
    if !droppable.is_empty() {
        let mut kept = Vec::new();
        for (q, d) in instance.demands.drain(..).enumerate() {
            if droppable.contains(&q) && d.origin < names.len() && d.destination < names.len() {
                pruned.push(PruneAction::Demand {
                    demand: q,
                    origin: names[d.origin].clone(),
                    destination: names[d.destination].clone(),
                });
            } else {
                kept.push(d);
            }
        }
        instance.demands = kept;
    }
    for action in &pruned {
        log::warn!("{action}");
    }
    let violations = instance.validate();
    if !violations.is_empty() {
        return Err(FrlpError::Validation(violations));
    }
    Ok(ParsedInstance { instance, pruned })
}

/// Reads and parses an instance file.
pub fn load_instance(path: &std::path::Path) -> Result<ParsedInstance> {
    let text = std::fs::read_to_string(path)?;
    parse_instance(&text)
}

/// Emits the instance in the same JSON format [`parse_instance`] reads.
pub fn serialize_instance(instance: &Instance) -> String {
    let net = &instance.network;
    let name = |j: NodeId| NameRef::Text(net.name(j).to_string());
    let raw = RawInstance {
        range: instance.range,
        variant: instance.variant,
        nodes: net.names().iter().map(|s| NameRef::Text(s.clone())).collect(),
        edges: net
            .edges()
            .iter()
            .map(|e| RawEdge {
                u: name(e.u),
                v: name(e.v),
                length: e.length,
                directed: e.directed,
            })
            .collect(),
        demands: instance
            .demands
            .iter()
            .map(|d| {
                let mut raw = RawDemand {
                    origin: name(d.origin),
                    destination: name(d.destination),
                    volume: d.volume,
                    alpha: None,
                    routes: None,
                    cutsets: None,
                };
                match &d.routes {
                    RouteSpec::Deviation { alpha } => raw.alpha = Some(*alpha),
                    RouteSpec::Explicit(routes) => {
                        raw.routes = Some(
                            routes
                                .iter()
                                .map(|r| r.iter().map(|&j| name(j)).collect())
                                .collect(),
                        )
                    }
                    RouteSpec::Covering(sets) => {
                        raw.cutsets = Some(sets.iter().map(|s| s.iter().map(name).collect()).collect())
                    }
                }
                raw
            })
            .collect(),
        placement: RawPlacement {
            budget: instance.placement.budget,
            open: instance.placement.forced_open.iter().map(|&j| name(j)).collect(),
            closed: instance.placement.forced_closed.iter().map(|&j| name(j)).collect(),
        },
    };
    serde_json::to_string_pretty(&raw).expect("instance serialization cannot fail")
}
