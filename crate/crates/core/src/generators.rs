//! Worked-example instances, the relaxation-gap constructions and random pools.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FrlpError, Result};
use crate::network::{Demand, Edge, Instance, Network, NodeId, PlacementConstraints, RouteSpec, Variant};
use crate::nodeset::NodeSet;

/// Largest `n` for which [`gen_prop5b`] writes out the permutation walk.
pub const PROP5B_EXPLICIT_MAX_N: usize = 4;

fn edge(u: NodeId, v: NodeId, length: f64) -> Edge {
    Edge {
        u,
        v,
        length,
        directed: false,
    }
}

fn single_demand(
    network: Network,
    origin: NodeId,
    destination: NodeId,
    volume: f64,
    routes: RouteSpec,
    range: f64,
    variant: Variant,
) -> Instance {
    Instance {
        network,
        demands: vec![Demand {
            origin,
            destination,
            volume,
            routes,
        }],
        range,
        placement: PlacementConstraints::default(),
        variant,
    }
}

/// Names accepted by [`gen_example`].
pub const EXAMPLE_NAMES: [&str; 3] = ["fig2", "fig7", "fig8"];

/// The small networks of the worked examples.
///
/// * `fig2`: five nodes, every edge d/2 (d = 10), demand 1 -> 5 with the two
///   paths (1,2,4,5) and (1,2,3,4,5).
/// * `fig7`: four nodes (d = 12), demand 1 -> 2 with 50% deviation.
/// * `fig8`: triangle with edges d/3 (d = 3), demand 1 -> 2 with 50% deviation.
pub fn gen_example(name: &str) -> Result<Instance> {
    match name {
        "fig2" => {
            let d = 10.0;
            let net = Network::with_numbered_nodes(
                5,
                vec![
                    edge(0, 1, d / 2.0),
                    edge(1, 2, d / 2.0),
                    edge(1, 3, d / 2.0),
                    edge(2, 3, d / 2.0),
                    edge(3, 4, d / 2.0),
                ],
            )?;
            Ok(single_demand(
                net,
                0,
                4,
                1.0,
                RouteSpec::Explicit(vec![vec![0, 1, 3, 4], vec![0, 1, 2, 3, 4]]),
                d,
                Variant::Original,
            ))
        }
        "fig7" => {
            let d = 12.0;
            let net = Network::with_numbered_nodes(
                4,
                vec![
                    edge(0, 1, d / 3.0),
                    edge(0, 2, d / 4.0),
                    edge(1, 2, d / 4.0),
                    edge(0, 3, d / 3.0),
                    edge(1, 3, d / 3.0),
                ],
            )?;
            Ok(single_demand(net, 0, 1, 1.0, RouteSpec::Deviation { alpha: 1.5 }, d, Variant::Cyclic))
        }
        "fig8" => {
            let d = 3.0;
            let net = Network::with_numbered_nodes(
                3,
                vec![edge(0, 1, d / 3.0), edge(0, 2, d / 3.0), edge(1, 2, d / 3.0)],
            )?;
            Ok(single_demand(net, 0, 1, 1.0, RouteSpec::Deviation { alpha: 1.5 }, d, Variant::Cyclic))
        }
        other => Err(FrlpError::InvalidArgument(format!(
            "unknown example '{other}' (expected one of {})",
            EXAMPLE_NAMES.join(", ")
        ))),
    }
}

/// Disaggregated/aggregated gap instance on 2n nodes.
///
/// Node 1 reaches node n+2 through any of the n middle nodes 2..n+1, then a
/// chain leads to 2n. All edges have length d; route j goes through middle
/// node j+1. The station budget is 2.
pub fn gen_prop5a(n: usize, f1: f64, d: f64) -> Result<Instance> {
    if n == 0 {
        return Err(FrlpError::InvalidArgument("n must be at least 1".into()));
    }
    if n == 1 {
        let net = Network::with_numbered_nodes(2, vec![edge(0, 1, d)])?;
        let mut inst = single_demand(net, 0, 1, f1, RouteSpec::Explicit(vec![vec![0, 1]]), d, Variant::Original);
        inst.placement.budget = Some(2);
        return Ok(inst);
    }
    // 0-based: origin 0, middles 1..=n, hub n+1, chain n+1..=2n-1
    let hub = n + 1;
    let last = 2 * n - 1;
    let mut edges = Vec::new();
    for j in 1..=n {
        edges.push(edge(0, j, d));
        edges.push(edge(j, hub, d));
    }
    for k in hub..last {
        edges.push(edge(k, k + 1, d));
    }
    let net = Network::with_numbered_nodes(2 * n, edges)?;
    let routes = (1..=n)
        .map(|j| {
            let mut r = vec![0, j];
            r.extend(hub..=last);
            r
        })
        .collect();
    let mut inst = single_demand(net, 0, last, f1, RouteSpec::Explicit(routes), d, Variant::Original);
    inst.placement.budget = Some(2);
    Ok(inst)
}

/// Aggregated/tight gap instance on 2n+4 nodes.
///
/// The single route walks 1, 2, then every permutation of the 2n clique nodes
/// 3..2n+2 back to back, then 2n+3, 2n+4. For n above
/// [`PROP5B_EXPLICIT_MAX_N`] the walk is not materialized; the demand carries
/// its aggregated covering family instead: the four end nodes as singletons
/// plus every n-subset of the clique.
pub fn gen_prop5b(n: usize, delta: f64, f1: f64, d: f64) -> Result<Instance> {
    if n < 2 {
        return Err(FrlpError::InvalidArgument("n must be at least 2".into()));
    }
    let nn = (n * n) as f64;
    if !(delta > 0.0 && delta < d / nn) {
        return Err(FrlpError::InvalidArgument(format!(
            "delta must lie in (0, d/n^2) = (0, {}), got {delta}",
            d / nn
        )));
    }
    let total = 2 * n + 4;
    // 0-based ids: 0,1 | clique 2..=2n+1 | 2n+2, 2n+3
    let clique: Vec<NodeId> = (2..2 * n + 2).collect();
    let (a, b) = (2 * n + 2, 2 * n + 3);
    let mut edges = vec![edge(0, 1, d - delta), edge(1, 2, 2.0 * delta), edge(2, a, 2.0 * delta), edge(a, b, d - delta)];
    for (i, &u) in clique.iter().enumerate() {
        for &v in &clique[i + 1..] {
            edges.push(edge(u, v, (d - delta) / n as f64));
        }
    }
    let net = Network::with_numbered_nodes(total, edges)?;
    let routes = if n <= PROP5B_EXPLICIT_MAX_N {
        let mut walk = vec![0, 1];
        for perm in permutation_walk(&clique) {
            walk.extend(perm);
        }
        walk.extend([a, b]);
        RouteSpec::Explicit(vec![walk])
    } else {
        RouteSpec::Covering(prop5b_family(n))
    };
    let mut inst = single_demand(net, 0, b, f1, routes, d, Variant::Original);
    inst.placement.budget = Some(6);
    Ok(inst)
}

/// The closed-form aggregated family of [`gen_prop5b`].
pub fn prop5b_family(n: usize) -> Vec<NodeSet> {
    let total = 2 * n + 4;
    let mut family: Vec<NodeSet> = [0, 1, 2 * n + 2, 2 * n + 3]
        .into_iter()
        .map(|j| NodeSet::from_nodes(total, [j]))
        .collect();
    let clique: Vec<NodeId> = (2..2 * n + 2).collect();
    let mut pick = Vec::with_capacity(n);
    subsets(&clique, n, 0, &mut pick, &mut |s| family.push(NodeSet::from_nodes(total, s.iter().copied())));
    family.sort();
    family
}

fn subsets(items: &[NodeId], k: usize, from: usize, pick: &mut Vec<NodeId>, emit: &mut dyn FnMut(&[NodeId])) {
    if pick.len() == k {
        emit(pick);
        return;
    }
    for i in from..items.len() {
        if items.len() - i < k - pick.len() {
            break;
        }
        pick.push(items[i]);
        subsets(items, k, i + 1, pick, emit);
        pick.pop();
    }
}

/// Every permutation of `items`, ordered so that any `items.len() / 2`
/// consecutive entries of the concatenated walk are distinct. The walk starts
/// and ends on `items[0]`.
///
/// Permutations are grouped by the set of their first half. Inside a group the
/// tail of one permutation and the head of the next are disjoint. Groups follow
/// a revolving-door order, so neighbouring heads share all but one element and
/// the crossing stays clean when the shared elements lead the next group.
///
/// Panics unless `items` has an even length of at least four.
pub fn permutation_walk(items: &[NodeId]) -> Vec<Vec<NodeId>> {
    let m = items.len();
    assert!(m >= 4 && m % 2 == 0, "permutation walk needs an even item count >= 4, got {m}");
    let k = m / 2;
    // index k-1 lies in the first head set and not in the last one
    let relabel = |i: usize| match i {
        0 => items[k - 1],
        i if i == k - 1 => items[0],
        i => items[i],
    };
    let heads: Vec<Vec<NodeId>> = revolving_door(m, k)
        .into_iter()
        .map(|set| {
            let mut h: Vec<NodeId> = set.into_iter().map(relabel).collect();
            h.sort();
            h
        })
        .collect();
    let mut walk = Vec::new();
    for (g, head) in heads.iter().enumerate() {
        let tail: Vec<NodeId> = items.iter().copied().filter(|j| !head.contains(j)).collect();
        let mut group = Vec::new();
        for h in all_orders(head) {
            for t in all_orders(&tail) {
                let mut p = h.clone();
                p.extend(t);
                group.push(p);
            }
        }
        let first = if g == 0 {
            group.iter().position(|p| p[0] == items[0])
        } else {
            let entering = head.iter().find(|j| !heads[g - 1].contains(j)).copied();
            group.iter().position(|p| Some(p[k - 1]) == entering)
        }
        .expect("a group always has an admissible first permutation");
        group.swap(0, first);
        if g + 1 == heads.len() {
            let last = (1..group.len())
                .find(|&i| group[i][m - 1] == items[0])
                .expect("the last group ends on the first item");
            let end = group.len() - 1;
            group.swap(last, end);
        }
        walk.extend(group);
    }
    walk
}

/// k-subsets of 0..n where neighbours differ by exchanging one element.
/// Starts with {0..k-1} and ends with {0..k-2, n-1}.
fn revolving_door(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k == n {
        return vec![(0..n).collect()];
    }
    let mut out = revolving_door(n - 1, k);
    out.extend(revolving_door(n - 1, k - 1).into_iter().rev().map(|mut s| {
        s.push(n - 1);
        s
    }));
    out
}

fn all_orders(items: &[NodeId]) -> Vec<Vec<NodeId>> {
    let mut cur = items.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn next_permutation(v: &mut [NodeId]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Parameters of a random instance.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomConfig {
    pub seed: u64,
    pub nodes: usize,
    /// Probability of each non-tree edge; 1.0 gives the complete graph.
    pub density: f64,
    pub demands: usize,
    /// Deviation factors; each demand draws one.
    pub alphas: Vec<f64>,
    pub range: f64,
    /// Edge lengths as fractions of the range.
    pub length_fractions: Vec<f64>,
    pub variant: Variant,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            seed: 1,
            nodes: 6,
            density: 0.3,
            demands: 3,
            alphas: vec![1.0, 1.2, 1.5],
            range: 12.0,
            length_fractions: vec![1.0 / 4.0, 1.0 / 3.0, 1.0 / 2.0, 2.0 / 3.0, 1.0],
            variant: Variant::Cyclic,
        }
    }
}

/// Connected undirected random instance, deterministic in the seed.
///
/// A random spanning tree guarantees connectivity; every other pair becomes an
/// edge with probability `density`. Demands join distinct random pairs with
/// integer volumes 1..=9.
pub fn gen_random(config: &RandomConfig) -> Result<Instance> {
    let c = config;
    if c.nodes < 2 && c.demands > 0 {
        return Err(FrlpError::InvalidArgument("demands need at least two nodes".into()));
    }
    if c.alphas.is_empty() || c.length_fractions.is_empty() {
        return Err(FrlpError::InvalidArgument("alphas and length fractions must be nonempty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut order: Vec<NodeId> = (0..c.nodes).collect();
    order.shuffle(&mut rng);
    let mut pairs = BTreeSet::new();
    for i in 1..c.nodes {
        let parent = order[rng.gen_range(0..i)];
        let (u, v) = (order[i].min(parent), order[i].max(parent));
        pairs.insert((u, v));
    }
    for u in 0..c.nodes {
        for v in u + 1..c.nodes {
            if !pairs.contains(&(u, v)) && rng.gen::<f64>() < c.density {
                pairs.insert((u, v));
            }
        }
    }
    let edges = pairs
        .into_iter()
        .map(|(u, v)| edge(u, v, c.range * *c.length_fractions.choose(&mut rng).unwrap()))
        .collect();
    let network = Network::with_numbered_nodes(c.nodes, edges)?;
    let demands = (0..c.demands)
        .map(|_| {
            let o = rng.gen_range(0..c.nodes);
            let mut t = rng.gen_range(0..c.nodes - 1);
            if t >= o {
                t += 1;
            }
            Demand {
                origin: o,
                destination: t,
                volume: rng.gen_range(1..=9) as f64,
                routes: RouteSpec::Deviation {
                    alpha: *c.alphas.choose(&mut rng).unwrap(),
                },
            }
        })
        .collect();
    Ok(Instance {
        network,
        demands,
        range: c.range,
        placement: PlacementConstraints::default(),
        variant: c.variant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_shapes() {
        let f7 = gen_example("fig7").unwrap();
        assert_eq!(f7.node_count(), 4);
        let mut lens: Vec<f64> = f7.network.edges().iter().map(|e| e.length / f7.range).collect();
        lens.sort_by(f64::total_cmp);
        assert_eq!(lens, vec![0.25, 0.25, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        let f8 = gen_example("fig8").unwrap();
        assert_eq!(f8.node_count(), 3);
        assert!(f8.network.edges().iter().all(|e| e.length == 1.0));
        let f2 = gen_example("fig2").unwrap();
        assert_eq!((f2.node_count(), f2.network.edges().len()), (5, 5));
        assert!(gen_example("fig99").is_err());
        for name in EXAMPLE_NAMES {
            assert!(gen_example(name).unwrap().validate().is_empty());
        }
    }

    #[test]
    fn prop5a_counts() {
        let i3 = gen_prop5a(3, 1.0, 1.0).unwrap();
        assert_eq!((i3.node_count(), i3.network.edges().len()), (6, 7));
        let RouteSpec::Explicit(r) = &i3.demands[0].routes else { panic!() };
        assert_eq!(r.len(), 3);
        let i1 = gen_prop5a(1, 1.0, 1.0).unwrap();
        assert_eq!(i1.node_count(), 2);
        let i5 = gen_prop5a(5, 1.0, 1.0).unwrap();
        let RouteSpec::Explicit(r) = &i5.demands[0].routes else { panic!() };
        assert_eq!((i5.node_count(), r.len(), i5.placement.budget), (10, 5, Some(2)));
        for inst in [i1, i3, i5] {
            assert!(inst.validate().is_empty());
        }
    }

    #[test]
    fn permutation_walk_windows_are_distinct() {
        for m in [4, 6, 8] {
            let items: Vec<usize> = (10..10 + m).collect();
            let perms = permutation_walk(&items);
            let total: usize = (1..=m).product();
            assert_eq!(perms.len(), total);
            let distinct: BTreeSet<_> = perms.iter().collect();
            assert_eq!(distinct.len(), total);
            let flat: Vec<usize> = perms.concat();
            assert_eq!((flat[0], flat[flat.len() - 1]), (10, 10));
            for w in flat.windows(m / 2) {
                let set: BTreeSet<_> = w.iter().collect();
                assert_eq!(set.len(), m / 2, "{w:?}");
            }
        }
    }

    #[test]
    fn revolving_door_swaps_one_element() {
        let doors = revolving_door(6, 3);
        assert_eq!(doors.len(), 20);
        assert_eq!(doors[0], vec![0, 1, 2]);
        assert_eq!(doors[19], vec![0, 1, 5]);
        for w in doors.windows(2) {
            assert_eq!(w[0].iter().filter(|j| w[1].contains(j)).count(), 2);
        }
    }

    #[test]
    fn prop5b_shapes() {
        let i2 = gen_prop5b(2, 0.1, 1.0, 1.0).unwrap();
        assert_eq!(i2.node_count(), 8);
        assert!(i2.validate().is_empty());
        let i3 = gen_prop5b(3, 0.05, 1.0, 1.0).unwrap();
        let RouteSpec::Explicit(r) = &i3.demands[0].routes else { panic!() };
        assert_eq!(r[0].len(), 720 * 6 + 4);
        let i7 = gen_prop5b(7, 0.01, 1.0, 1.0).unwrap();
        let RouteSpec::Covering(h) = &i7.demands[0].routes else { panic!() };
        assert_eq!(h.len(), 4 + 3432);
        assert!(gen_prop5b(2, 0.3, 1.0, 1.0).is_err());
    }

    #[test]
    fn random_is_deterministic_and_valid() {
        let cfg = RandomConfig::default();
        let a = gen_random(&cfg).unwrap();
        let b = gen_random(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.validate().is_empty());
        let full = gen_random(&RandomConfig {
            density: 1.0,
            nodes: 7,
            ..cfg
        })
        .unwrap();
        assert_eq!(full.network.edges().len(), 21);
    }
}
