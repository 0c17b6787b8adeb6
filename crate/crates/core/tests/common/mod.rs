//! Seeded instance pools shared by the integration tests.
#![allow(dead_code)]

use frlp_core::generators::{gen_random, RandomConfig};
use frlp_core::{Instance, RouteSpec, Variant};

pub const RANGE: f64 = 12.0;

/// Small pool: 4..=8 nodes, edge lengths in {d/3, d/2, d}.
pub fn small_pool(count: u64) -> Vec<Instance> {
    (1..=count)
        .map(|seed| {
            gen_random(&RandomConfig {
                seed,
                nodes: 4 + (seed % 5) as usize,
                density: 0.6,
                demands: 1 + (seed % 3) as usize,
                alphas: vec![1.0, 1.2, 1.5],
                range: RANGE,
                length_fractions: vec![1.0 / 3.0, 1.0 / 2.0, 1.0],
                variant: Variant::Cyclic,
            })
            .expect("pool instance")
        })
        .collect()
}

/// Larger pool: 5..=12 nodes, 1..=6 demands, default length fractions.
pub fn solver_pool(count: u64) -> Vec<Instance> {
    (1..=count)
        .map(|seed| {
            gen_random(&RandomConfig {
                seed: 10_000 + seed,
                nodes: 5 + (seed % 8) as usize,
                density: 0.45,
                demands: 1 + (seed % 6) as usize,
                ..RandomConfig::default()
            })
            .expect("pool instance")
        })
        .collect()
}

/// Replaces each demand's routes by its single shortest path.
pub fn single_path(inst: &Instance) -> Instance {
    let dist = inst.network.distances();
    let mut out = inst.clone();
    for d in &mut out.demands {
        let p = dist.path(d.origin, d.destination).expect("connected");
        d.routes = RouteSpec::Explicit(vec![p]);
    }
    out.variant = Variant::Original;
    out
}
